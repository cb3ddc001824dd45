#include <map>
#include <random>

#include "doctest.h"
#include "hsob/covering.hpp"
#include "hsob/serialize.hpp"
#include "json.hpp"

using namespace hsob;

namespace {

BoundingBox box2(double lo, double hi) { return {{lo, lo, 0.0}, {hi, hi, 0.0}, 2}; }

DomainShape unit_square(double margin = 1.0) {
    return DomainShape::rectangle({0, 0, 0}, {1, 1, 0}, 2, box2(-margin, 1.0 + margin));
}

DomainShape flat_graph() {
    BoundingBox bb{{-2, -2, 0}, {2, 2, 0}, 2};
    return DomainShape::graph(-2.0, 2.0, std::vector<double>(9, 0.0), 0.0, bb);
}

DomainShape l_shape() {
    std::vector<Point> v{{0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 2, 0}};
    return DomainShape::polygon(v, box2(-1.0, 3.0));
}

}  // namespace

TEST_CASE("distance to boundary on simple domains") {
    const DomainShape sq = unit_square();
    CHECK(sq.distance_to_boundary({0.5, 0.5, 0}) == doctest::Approx(0.5));
    CHECK(sq.distance_to_boundary({0.0, 0.3, 0}) == 0.0);
    CHECK(flat_graph().distance_to_boundary({0.1, -0.2, 0}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(sq.distance_to_boundary({5.0, 0.0, 0}), Error);
    CHECK(sq.contains({0.5, 0.5, 0}));
    CHECK_FALSE(sq.contains({0.0, 0.5, 0}));
}

TEST_CASE("distance is 1-Lipschitz and positive exactly inside") {
    const DomainShape l = l_shape();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 3.0);
    for (int k = 0; k < 500; ++k) {
        const Point a{u(rng), u(rng), 0}, b{u(rng), u(rng), 0};
        CHECK(std::abs(l.distance_to_boundary(a) - l.distance_to_boundary(b)) <= dist(a, b) + 1e-12);
        if (l.contains(a)) CHECK(l.distance_to_boundary(a) > 0.0);
    }
}

TEST_CASE("graph domain rejects slopes above the declared constant") {
    BoundingBox bb{{-2, -2, 0}, {2, 2, 0}, 2};
    CHECK_THROWS_AS(DomainShape::graph(-1.0, 1.0, {0.0, 1.0, 0.0}, 0.5, bb), Error);
}

TEST_CASE("greedy subcover: singleton, disjoint pair, random families") {
    const Ball one{{0.5, 0.5, 0}, 0.2};
    CHECK(greedy_disjoint_subcover({one}).size() == 1);
    const std::vector<Ball> two{{{0, 0, 0}, 0.1}, {{1, 0, 0}, 0.1}};
    CHECK(greedy_disjoint_subcover(two).size() == 2);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(0.0, 1.0), rad(0.02, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Ball> balls;
        for (int k = 0; k < 10; ++k) balls.push_back({{pos(rng), pos(rng), 0}, rad(rng)});
        const auto kept = greedy_disjoint_subcover(balls);
        for (std::size_t a = 0; a < kept.size(); ++a) {
            for (std::size_t b = a + 1; b < kept.size(); ++b) CHECK_FALSE(intersects(kept[a], kept[b]));
        }
        for (const Ball& b : balls) {
            bool covered = false;
            for (const Ball& k : kept) covered = covered || dist(b.center, k.center) + b.radius <= 5.0 * k.radius;
            CHECK(covered);
        }
    }
}

TEST_CASE("Whitney balls satisfy the sandwich and the partition bounds") {
    const DomainShape sq = unit_square();
    const double eps0 = 0.05;
    const WhitneyCover wc = whitney_collar_cover(sq, eps0);
    REQUIRE(!wc.balls().empty());
    for (const Ball& b : wc.balls()) {
        const double d = sq.distance_to_boundary(b.center);
        CHECK_FALSE(sq.contains(b.center));
        CHECK(d <= 4.0 * b.radius);
        CHECK(4.0 * b.radius <= 2.0 * d);
    }
    const double h = eps0 / 8.0;
    for (int i = 0; i <= 3.0 / h; ++i) {
        for (int j = 0; j <= 3.0 / h; ++j) {
            const Point x{-1.0 + i * h, -1.0 + j * h, 0};
            const double d = sq.distance_to_boundary(x);
            const double s = wc.partition_sum(x);
            const bool outside = !sq.contains(x) && d > 0.0;
            if (outside && d <= 2.0 * eps0) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            if (!outside || d > 10.0 * eps0) CHECK(s == 0.0);
            CHECK(s <= 1.0 + 1e-12);
        }
    }
    CHECK(wc.cover().overlap_bound <= 64);
}

TEST_CASE("Whitney cover below a flat graph has constant radii along the boundary") {
    const DomainShape g = flat_graph();
    const WhitneyCover wc = whitney_collar_cover(g, 0.1);
    // Balls at the same height carry the same radius.
    std::map<double, double> by_height;
    for (const Ball& b : wc.balls()) {
        auto [it, fresh] = by_height.emplace(b.center[1], b.radius);
        if (!fresh) CHECK(it->second == doctest::Approx(b.radius));
    }
    CHECK(by_height.size() > 1);
}

TEST_CASE("Whitney construction fails when the collar escapes the box") {
    const DomainShape sq = unit_square(0.5);
    CHECK_THROWS_AS(whitney_collar_cover(sq, sq.bbox().diameter()), Error);
}

TEST_CASE("uniform chains") {
    const BoundingBox bb = box2(-2.0, 2.0);
    const DomainShape disk = DomainShape::disk({0, 0, 0}, 1.0, 64, bb);
    const Point x{-0.2, 0.0, 0}, y{0.2, 0.1, 0};
    const ChainOfBalls ch = uniform_chain(disk, x, y, 2.0);
    CHECK(check_chain(disk, ch).ok());
    CHECK(ch.length_constant < 10.0);
    CHECK(uniform_chain(disk, x, x, 2.0).balls.empty());

    const DomainShape l = l_shape();
    const ChainOfBalls lc = uniform_chain(l, {1.7, 0.5, 0}, {0.5, 1.7, 0}, 4.0);
    CHECK(check_chain(l, lc).ok());
    CHECK(lc.path.size() > 2);
    CHECK(std::isfinite(lc.length_constant));
}

TEST_CASE("Lipschitz reflection") {
    const DomainShape g = flat_graph();
    const Point r = lipschitz_reflection(g, {0.3, -0.4, 0});
    CHECK(r[0] == doctest::Approx(0.3));
    CHECK(r[1] == doctest::Approx(0.4));

    BoundingBox bb{{-2, -2, 0}, {2, 3, 0}, 2};
    std::vector<double> s;
    for (int k = 0; k <= 8; ++k) s.push_back(std::abs(-2.0 + 0.5 * k) / 2.0);
    const DomainShape v = DomainShape::graph(-2.0, 2.0, s, 0.5, bb);
    const Point q = lipschitz_reflection(v, {1.0, 0.0, 0});
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(1.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uy(-1.5, 1.5), ut(-0.8, -0.01);
    const double c1 = reflection_constant(v);
    for (int k = 0; k < 200; ++k) {
        const double y = uy(rng);
        const Point p{y, v.height(y) + ut(rng), 0};
        const Point h1 = lipschitz_reflection(v, p);
        CHECK(dist(p, h1) <= c1 * v.distance_to_boundary(p) + 1e-12);
        // Involution: reflect back across the graph.
        const Point back{h1[0], 2.0 * v.height(h1[0]) - h1[1], 0};
        CHECK(back[1] == doctest::Approx(p[1]).epsilon(1e-14));
    }
    // Shear Jacobian with determinant -1 away from the kink.
    const Point p0{0.7, -0.3, 0};
    const double e = 1e-6;
    const Point fx = lipschitz_reflection(v, {p0[0] + e, p0[1], 0}) - lipschitz_reflection(v, {p0[0] - e, p0[1], 0});
    const Point fy = lipschitz_reflection(v, {p0[0], p0[1] + e, 0}) - lipschitz_reflection(v, {p0[0], p0[1] - e, 0});
    const double det = (fx[0] * fy[1] - fx[1] * fy[0]) / (4.0 * e * e);
    CHECK(det == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK_THROWS_AS(lipschitz_reflection(v, {0.0, 0.5, 0}), Error);
}

TEST_CASE("domain, cover and chain documents") {
    const std::vector<std::string> docs{
        R"({"kind": "rectangle", "lo": [0, 0], "hi": [1, 2], "bbox": {"lo": [-1, -1], "hi": [3, 3]}})",
        R"({"kind": "polygon", "vertices": [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]], "bbox": {"lo": [-1, -1], "hi": [3, 3]}})",
        R"({"kind": "graph", "y0": -1, "y1": 1, "samples": [0, 0.5, 0], "lipschitz": 0.5, "bbox": {"lo": [-2, -2], "hi": [2, 2]}})",
        R"({"kind": "complement", "inner": {"kind": "rectangle", "lo": [0], "hi": [1], "bbox": {"lo": [-2], "hi": [3]}}, "bbox": {"lo": [-2], "hi": [3]}})",
    };
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.9, 1.9);
    for (const auto& text : docs) {
        const DomainShape d = domain_from_json(text);
        const DomainShape back = domain_from_json(domain_json(d));
        CHECK(back.kind() == d.kind());
        for (int k = 0; k < 50; ++k) {
            const Point x{u(rng), d.dim() > 1 ? u(rng) : 0.0, 0};
            CHECK(back.distance_to_boundary(x) == d.distance_to_boundary(x));
            CHECK(back.contains(x) == d.contains(x));
        }
    }
    const DomainShape disk = domain_from_json(R"({"kind": "disk", "center": [0, 0], "radius": 1, "sides": 64, "bbox": {"lo": [-2, -2], "hi": [2, 2]}})");
    CHECK(disk.distance_to_boundary({0, 0, 0}) == doctest::Approx(1.0).epsilon(0.01));

    for (const char* bad : {"{", R"({"kind": "blob", "bbox": {"lo": [0], "hi": [1]}})", R"({"kind": "rectangle"})"}) {
        try {
            domain_from_json(bad);
            FAIL("malformed document accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::config);
        }
    }

    const DomainShape sq = DomainShape::rectangle({0, 0, 0}, {1, 1, 0}, 2, box2(-1, 2));
    const WhitneyCover w = whitney_collar_cover(sq, 0.1);
    const auto jc = nlohmann::json::parse(cover_json(w.cover()));
    CHECK(jc["balls"].size() == w.balls().size());
    CHECK(jc["role"] == "whitney");
    const ChainOfBalls ch = uniform_chain(sq, {0.1, 0.1, 0}, {0.9, 0.8, 0}, 2.0);
    const auto jh = nlohmann::json::parse(chain_json(ch));
    CHECK(jh["balls"].size() == ch.balls.size());
    CHECK(jh["length_constant"].get<double>() == ch.length_constant);
}
