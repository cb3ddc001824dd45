#include <cstdio>
#include <random>

#include "doctest.h"
#include "hsob/field.hpp"

using namespace hsob;

namespace {

CloudPtr line(int n) { return std::make_shared<const MetricCloud>(MetricCloud::unit_grid(n, 1)); }
CloudPtr square(int n) { return std::make_shared<const MetricCloud>(MetricCloud::unit_grid(n, 2)); }

constexpr double kInf = std::numeric_limits<double>::infinity();

SampledField random_field(CloudPtr c, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(c->size());
    for (double& x : v) x = u(rng);
    return SampledField(c, v);
}

}  // namespace

TEST_CASE("lp quasinorm") {
    auto c = line(5);
    CHECK(lp_quasinorm(SampledField(c, std::vector<double>(5, 0.0)), 0.7) == 0.0);
    auto pair = std::make_shared<const MetricCloud>(
        MetricCloud::irregular({{0, 0, 0}, {1, 0, 0}}, {1.0, 1.0}, 1));
    CHECK(lp_quasinorm(SampledField(pair, {1.0, 2.0}), 1.0) == doctest::Approx(3.0));
    auto unit = std::make_shared<const MetricCloud>(MetricCloud::irregular({{0, 0, 0}, {1, 0, 0}}, {0.5, 0.5}, 1));
    for (double p : {0.5, 1.0, 2.0}) CHECK(lp_quasinorm(SampledField(unit, {1.0, 1.0}), p) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lp_quasinorm(SampledField(unit, {1.0, 1.0}), 0.0), Error);
}

TEST_CASE("Hardy-Littlewood maximal function") {
    auto c = line(33);
    const SampledField konst(c, std::vector<double>(33, -2.5));
    for (double v : hl_maximal(konst, kInf).values) CHECK(v == doctest::Approx(2.5));

    // Indicator of the left half; the best ball at x = 1 is the whole line.
    const SampledField half = SampledField::from_function(c, [](const Point& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
    const auto caps = std::vector<double>(33, kInf);
    const double at_end = hl_maximal(half, kInf).values.back();
    double brute = 0.0;
    for (int a = 0; a < 33; ++a) {
        double s = 0.0;
        for (int b = a; b < 33; ++b) s += half.values[b];
        brute = std::max(brute, s / (33 - a));
    }
    CHECK(at_end == doctest::Approx(brute));
    CHECK(at_end == doctest::Approx(0.5).epsilon(0.05));

    const SampledField rf = random_field(c, 1);
    const auto zero = hl_maximal(rf, 0.0);
    for (std::size_t i = 0; i < rf.size(); ++i) CHECK(zero.values[i] == doctest::Approx(std::abs(rf.values[i])));
}

TEST_CASE("maximal kernels agree with the brute-force reference") {
    for (auto c : {line(40), square(12)}) {
        const SampledField f = random_field(c, 7);
        std::vector<double> caps(f.size());
        for (std::size_t i = 0; i < caps.size(); ++i) caps[i] = 0.05 + 0.3 * (i % 5) / 4.0;
        const auto fast = hl_maximal(f, caps);
        const auto ref = hl_maximal_reference(f, caps);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(fast.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-12));

        const TestFamily fam = TestFamily::dyadic(c->dim(), 2.0 * c->resolution(), 0.5);
        const auto sm = smooth_maximal(f, fam, 0.5);
        const auto smr = smooth_maximal_reference(f, fam, 0.5);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(sm.values[i] == doctest::Approx(smr.values[i]).epsilon(1e-12));

        const TestFamily wide = fam.with_member(TestFamily::cone_member()).with_member(TestFamily::shifted_member(0.3, 0, 1));
        const auto gm = grand_maximal(f, wide, 0.4, GrandMode::pointwise_cap);
        const auto gmr = grand_maximal_reference(f, wide, 0.4, GrandMode::pointwise_cap);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(gm.values.values[i] == doctest::Approx(gmr.values.values[i]).epsilon(1e-12));
        CHECK(gm.lower_bound);
    }
}

TEST_CASE("maximal function properties") {
    auto c = square(10);
    const SampledField f = random_field(c, 2), g = random_field(c, 3);
    std::vector<double> sum(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f.values[i] + g.values[i];
    const auto mf = hl_maximal(f, kInf), mg = hl_maximal(g, kInf), ms = hl_maximal(f.with_values(sum), kInf);
    const auto m_small = hl_maximal(f, 0.2), m_big = hl_maximal(f, 0.4);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(mf.values[i] >= std::abs(f.values[i]) - 1e-15);
        CHECK(ms.values[i] <= mf.values[i] + mg.values[i] + 1e-12);
        CHECK(m_small.values[i] <= m_big.values[i] + 1e-15);
    }
}

TEST_CASE("maximal inequality constant is stable under refinement") {
    for (double q : {1.1, 2.0}) {
        double prev = 0.0;
        for (int n : {32, 64}) {
            auto c = line(n);
            double worst = 0.0;
            for (std::uint64_t s = 0; s < 5; ++s) {
                const SampledField f = random_field(c, 100 + s, 0.0, 1.0);
                worst = std::max(worst, lp_quasinorm(hl_maximal(f, kInf), q) / lp_quasinorm(f, q));
            }
            if (prev > 0.0) CHECK(std::abs(worst / prev - 1.0) < 0.2);
            prev = worst;
        }
    }
}

TEST_CASE("smooth maximal function") {
    auto c = line(65);
    const TestFamily fam = TestFamily::dyadic(1, 4.0 / 64.0, 1.0);
    const SampledField konst(c, std::vector<double>(65, 3.0));
    for (double v : smooth_maximal(konst, fam, 1.0).values) CHECK(v == doctest::Approx(3.0));

    // A unit-mass cell: the convolution at its own location decays like 1/t.
    std::vector<double> dirac(65, 0.0);
    dirac[32] = 64.0;
    const SampledField d(c, dirac);
    std::vector<double> at_center;
    for (double t : fam.scales()) at_center.push_back(smooth_maximal(d, TestFamily::dyadic(1, t, t), t).values[32]);
    // Direct table: 1 / sum_j h bump(|x_j - x_32| / t).
    for (std::size_t k = 0; k < at_center.size(); ++k) {
        const double t = fam.scales()[k];
        double mass = 0.0;
        for (int j = 0; j < 65; ++j) mass += bump(std::abs(j - 32) / 64.0 / t) / 64.0;
        CHECK(at_center[k] == doctest::Approx(1.0 / mass).epsilon(1e-12));
        if (k > 0) CHECK(at_center[k] < at_center[k - 1]);
    }
    // Scales 1/8 -> 1/4 -> 1/2 stay inside the line: the value halves.
    CHECK(at_center[2] / at_center[1] == doctest::Approx(0.5).epsilon(0.05));
    CHECK(at_center[3] / at_center[2] == doctest::Approx(0.5).epsilon(0.05));

    const double t0 = fam.scales().front();
    const auto single = smooth_maximal(d, fam, t0);
    const auto one = smooth_maximal(d, TestFamily::dyadic(1, t0, t0), t0);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(single.values[i] == doctest::Approx(one.values[i]));
    CHECK_THROWS_AS(smooth_maximal(d, fam, t0 / 4.0), Error);
}

TEST_CASE("grand maximal function") {
    auto c = line(33);
    const TestFamily fam = TestFamily::dyadic(1, 2.0 / 32.0, 0.5);
    CHECK(fam.verify_bounds() <= 1.0 + 1e-12);
    const SampledField zero(c, std::vector<double>(33, 0.0));
    for (double v : grand_maximal(zero, fam, 0.5, GrandMode::pointwise_cap).values.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(grand_maximal(zero, fam, 0.0, GrandMode::pointwise_cap), Error);

    const SampledField step = SampledField::from_function(c, [](const Point& x) { return x[0] > 0.5 ? 1.0 : 0.0; });
    const auto small = grand_maximal(step, fam, 0.5, GrandMode::pointwise_cap);
    const auto big = grand_maximal(step, fam.with_member(TestFamily::cone_member()), 0.5, GrandMode::pointwise_cap);
    for (std::size_t i = 0; i < step.size(); ++i) CHECK(big.values.values[i] >= small.values.values[i] - 1e-15);
}

TEST_CASE("finite differences and power composite") {
    auto c = line(11);
    const double h = 0.1;
    const SampledField q = SampledField::from_function(c, [](const Point& x) { return x[0] * x[0]; });
    const auto d = finite_difference_gradient(q);
    for (int i = 1; i < 10; ++i) CHECK(d[0].values[i] == doctest::Approx(2.0 * i * h));

    auto s = square(9);
    const SampledField aff = SampledField::from_function(s, [](const Point& x) { return 2.0 * x[0] - 3.0 * x[1]; });
    const auto ga = finite_difference_gradient(aff);
    for (std::size_t i = 0; i < aff.size(); ++i) {
        CHECK(ga[0].values[i] == doctest::Approx(2.0));
        CHECK(ga[1].values[i] == doctest::Approx(-3.0));
    }
    auto irr = std::make_shared<const MetricCloud>(MetricCloud::irregular({{0, 0, 0}, {0.3, 0, 0}}, {1, 1}, 1));
    CHECK_THROWS_AS(finite_difference_gradient(SampledField(irr, {0.0, 1.0})), Error);

    auto four = line(4);
    const SampledField ind(four, {1.0, 1.0, 0.0, 0.0});
    const auto pm = power_maximal_composite(ind, 0.5);
    const auto p1 = power_maximal_composite(ind, 1.0);
    const auto m1 = hl_maximal(ind, kInf);
    for (std::size_t i = 0; i < 4; ++i) CHECK(p1.values[i] == doctest::Approx(m1.values[i]));
    // Every distinct ball on four points: radius = some pairwise distance.
    for (std::size_t i = 0; i < 4; ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            const double r = dist(ind.point(i), ind.point(j));
            double s = 0.0, m = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                if (dist(ind.point(i), ind.point(k)) <= r * (1.0 + 1e-9)) {
                    s += ind.measure(k) * std::sqrt(ind.values[k]);
                    m += ind.measure(k);
                }
            }
            best = std::max(best, s / m);
        }
        CHECK(pm.values[i] == doctest::Approx(best * best));
    }
    CHECK_THROWS_AS(power_maximal_composite(ind, 0.0), Error);
}

TEST_CASE("field I/O round trips") {
    auto c = square(5);
    const SampledField f = random_field(c, 9);
    const std::string csv = "/tmp/hsob_field_test.csv", bin = "/tmp/hsob_field_test.bin";
    write_field_csv(csv, f);
    write_field_binary(bin, f);
    const SampledField a = read_field_csv(csv), b = read_field_binary(bin);
    REQUIRE(a.size() == f.size());
    REQUIRE(b.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(a.values[i] == f.values[i]);
        CHECK(b.values[i] == f.values[i]);
        CHECK(b.point(i) == f.point(i));
    }
    std::remove(csv.c_str());
    std::remove(bin.c_str());
}
