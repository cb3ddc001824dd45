#include <random>

#include "doctest.h"
#include "hsob/corpus.hpp"
#include "hsob/extension.hpp"
#include "json.hpp"

using namespace hsob;

namespace {

DomainShape square() { return DomainShape::rectangle({0, 0, 0}, {1, 1, 0}, 2, {{-3, -3, 0}, {4, 4, 0}, 2}); }

/// Grid of spacing 1/m over [-pad, 1 + pad]^2 with the square's edges on grid lines.
CloudPtr padded_grid(int m, double pad) {
    const int k = static_cast<int>(std::ceil(pad * m - 1e-9));
    const double h = 1.0 / m;
    return std::make_shared<const MetricCloud>(MetricCloud::grid({-k * h, -k * h, 0}, h, {m + 1 + 2 * k, m + 1 + 2 * k, 1}, 2));
}

ExtensionPlanOptions resolved(const MetricCloud& c) {
    ExtensionPlanOptions o;
    o.min_radius = 0.75 * c.resolution();
    return o;
}

SampledField on_closure(CloudPtr c, const DomainShape& d, const std::function<double(const Point&)>& fn) {
    const auto m = closure_mask(*c, d);
    std::vector<double> v(c->size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (m[i]) v[i] = fn(c->point(i));
    }
    return SampledField(c, v, m);
}

}  // namespace

TEST_CASE("flat boundary gives mirror balls") {
    BoundingBox bb{{-2, -2, 0}, {2, 2, 0}, 2};
    const DomainShape g = DomainShape::graph(-2.0, 2.0, std::vector<double>(9, 0.0), 0.0, bb);
    const ExtensionPlan plan = build_extension_plan(g, 0.1, 1.0);
    int checked = 0;
    for (std::size_t k = 0; k < plan.reflected.size(); ++k) {
        const Ball& b = plan.cover.balls()[k];
        if (std::abs(b.center[0]) > 1.0) continue;
        const ReflectedBall& r = plan.reflected[k];
        const Point mirror{b.center[0], -b.center[1], 0};
        CHECK(r.ball.center[0] == doctest::Approx(mirror[0]).epsilon(1e-12));
        CHECK(r.ball.center[1] == doctest::Approx(mirror[1]).epsilon(1e-12));
        CHECK(r.ball.radius == doctest::Approx(b.radius).epsilon(1e-12));
        CHECK(r.diameter_ratio == doctest::Approx(1.0));
        // With rho = 0.45 d the offset and depth ratios are fixed numbers.
        CHECK(r.offset_ratio == doctest::Approx(1.0 / 0.45));
        CHECK(r.depth_ratio == doctest::Approx(0.55 / 0.9));
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("unit square plan satisfies every band") {
    const DomainShape sq = DomainShape::rectangle({0, 0, 0}, {1, 1, 0}, 2, {{-1, -1, 0}, {2, 2, 0}, 2});
    const ExtensionPlan plan = build_extension_plan(sq, 0.05, 2.0);
    REQUIRE(plan.reflected.size() == plan.cover.balls().size());
    std::size_t bad = 0;
    for (const auto& r : plan.reflected) {
        const bool good = sq.contains(r.ball.center) && sq.distance_to_boundary(r.ball.center) >= r.ball.radius &&
                          plan.band.holds(r.diameter_ratio) && plan.band.holds(r.offset_ratio) && plan.band.holds(r.depth_ratio);
        bad += good ? 0 : 1;
    }
    CHECK(bad == 0);
    CHECK(plan.reflected_overlap >= 1);
    MESSAGE("reflected overlap " << plan.reflected_overlap);

    const auto j = nlohmann::json::parse(plan_json(plan));
    CHECK(j["balls"].size() == plan.reflected.size());
    CHECK(j["eps0"].get<double>() == 0.05);
}

TEST_CASE("thin spike defeats the reflected-ball search") {
    const double w = 1e-3;
    std::vector<Point> v{{0, 0, 0}, {1, 0, 0}, {1, 0.5 - w / 2, 0}, {1.6, 0.5 - w / 2, 0},
                         {1.6, 0.5 + w / 2, 0}, {1, 0.5 + w / 2, 0}, {1, 1, 0}, {0, 1, 0}};
    const DomainShape spike = DomainShape::polygon(v, {{-1, -1, 0}, {3, 2, 0}, 2});
    try {
        build_extension_plan(spike, 0.05, 2.0);
        FAIL("plan construction should fail");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::construction);
        CHECK(std::string(e.what()).find("Whitney ball") != std::string::npos);
    }
    CHECK_THROWS_AS(build_extension_plan(square(), 0.05, 0.5), Error);
}

TEST_CASE("extension of constants, affine and positive functions") {
    const DomainShape sq = square();
    auto c = padded_grid(16, 0.3);
    const double eps0 = 0.25;
    const ExtensionPlan plan = build_extension_plan(sq, eps0, 2.0, resolved(*c));
    const auto inside = closure_mask(*c, sq);

    const Extension ek = extend(on_closure(c, sq, [](const Point&) { return 3.5; }), plan);
    for (std::size_t i = 0; i < c->size(); ++i) {
        const double d = sq.distance_to_boundary(c->point(i));
        if (inside[i] || (d >= plan.cover.floor() && d <= 0.5 * eps0)) CHECK(ek.field.values[i] == doctest::Approx(3.5).epsilon(1e-13));
        if (!inside[i] && d >= eps0) CHECK(ek.field.values[i] == 0.0);
        CHECK(ek.field.values[i] <= 3.5 + 1e-12);
    }

    const Point a{1.5, -2.0, 0};
    auto affine = [&](const Point& x) { return dot(a, x) + 0.25; };
    const SampledField fa = on_closure(c, sq, affine);
    const Extension ea = extend(fa, plan);
    for (std::size_t i = 0; i < c->size(); ++i) {
        const Point& x = c->point(i);
        if (inside[i]) {
            CHECK(ea.field.values[i] == fa.values[i]);
            continue;
        }
        const double d = sq.distance_to_boundary(x);
        if (d > 0.5 * eps0) continue;
        double reach = 0.0;
        for (const auto& [k, h] : plan.cover.weights_at(x)) {
            reach = std::max(reach, dist(plan.reflected[k].ball.center, x) + plan.reflected[k].ball.radius);
        }
        CHECK(std::abs(ea.field.values[i] - affine(x)) <= norm(a) * reach + 1e-12);
    }

    const Extension ed = extend(on_closure(c, sq, [&](const Point& x) { return sq.distance_to_boundary(x); }), plan);
    for (double v : ed.field.values) CHECK(v >= 0.0);
}

TEST_CASE("extension is linear and bounded") {
    const DomainShape sq = square();
    auto c = padded_grid(12, 0.3);
    const ExtensionPlan plan = build_extension_plan(sq, 0.25, 2.0, resolved(*c));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto mask = closure_mask(*c, sq);
    std::vector<double> x(c->size(), 0.0), y(c->size(), 0.0), s(c->size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!mask[i]) continue;
        x[i] = u(rng);
        y[i] = u(rng);
        s[i] = x[i] - 2.0 * y[i];
    }
    const auto fx = extend(SampledField(c, x, mask), plan).field;
    const auto fy = extend(SampledField(c, y, mask), plan).field;
    const auto fs = extend(SampledField(c, s, mask), plan).field;
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(fs.values[i] == doctest::Approx(fx.values[i] - 2.0 * fy.values[i]).epsilon(1e-12));
        CHECK(std::abs(fx.values[i]) <= 1.0);
    }

    // A reflected ball that misses every sample is a resolution failure.
    const ExtensionPlan coarse = build_extension_plan(sq, 0.25, 2.0);
    CHECK_THROWS_AS(extend(SampledField(padded_grid(4, 0.3), std::vector<double>(49, 1.0)), coarse), Error);
}

TEST_CASE("extension quality") {
    const DomainShape sq = square();
    auto c = padded_grid(8, 0.25);
    const ExtensionPlan plan = build_extension_plan(sq, 0.25, 2.0, resolved(*c));

    const SampledField k = on_closure(c, sq, [](const Point&) { return 1.0; });
    const QualityReport rk = extension_quality(k, extend(k, plan), plan);
    CHECK(rk.degenerate);

    auto fn = [](const Point& x) { return x[0] + 0.5 * x[1] * x[1]; };
    const SampledField f = on_closure(c, sq, fn);
    const QualityReport rf = extension_quality(f, extend(f, plan), plan);
    CHECK_FALSE(rf.degenerate);
    CHECK(std::isfinite(rf.ratio));
    CHECK(rf.ratio >= 1.0 - 1e-9);
    CHECK(rf.mean_value_pairs > 0);
    CHECK(std::isfinite(rf.mean_value_constant));

    // Invariant under f -> 3 f + 2.
    std::vector<double> v(f.values);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (f.active(i)) v[i] = 3.0 * v[i] + 2.0;
    }
    const SampledField g(c, v, f.mask);
    const QualityReport rg = extension_quality(g, extend(g, plan), plan);
    CHECK(rg.ratio == doctest::Approx(rf.ratio).epsilon(1e-8));
}
