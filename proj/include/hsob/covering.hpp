#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hsob/geometry.hpp"

namespace hsob {

enum class CoverRole { whitney, chain, greedy };

const char* to_string(CoverRole role);

struct BallCover {
    std::vector<Ball> balls;
    CoverRole role = CoverRole::greedy;
    /// Max over sample points of the number of inflated balls containing it.
    int overlap_bound = 0;
};

/// Greedy Vitali selection: scan by decreasing radius (ties by input order) and
/// keep every ball disjoint from those already kept. Every input ball meets a
/// kept ball of at least its radius, so it lies in that ball's 3x (hence 5x) dilation.
std::vector<Ball> greedy_disjoint_subcover(const std::vector<Ball>& balls);

/// Bucketed lookup of balls by dyadic radius level.
class BallIndex {
public:
    BallIndex() = default;
    /// `reach` is the largest dilation factor that queries will use.
    BallIndex(const std::vector<Ball>& balls, double reach);

    /// Calls fn(index) for every ball whose `factor`-dilation may contain x
    /// (factor <= reach). Callers still test containment.
    template <class Fn>
    void for_candidates(const Point& x, Fn&& fn) const;

private:
    struct Level {
        double cell = 1.0;
        std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
    };
    std::vector<Level> levels_;
    int dim_ = 3;

    static std::uint64_t key(std::int64_t a, std::int64_t b, std::int64_t c);
};

struct WhitneyOptions {
    /// Distance below which the partition is not required to sum to one. 0 selects eps0 / 64.
    double floor = 0.0;
    /// rho_i = radius_factor * d(y_i, domain); must lie in [1/4, 1/2].
    double radius_factor = 0.45;
    /// Overlap is measured on a grid of this spacing (0 selects eps0 / 8) plus every ball center.
    double overlap_spacing = 0.0;
};

/// Whitney-type cover of the exterior collar of a domain, with a partition of unity.
///
/// Balls B(y_i, rho_i) have y_i outside the closed domain and
/// d(y_i) <= 4 rho_i <= 2 d(y_i). Weights are
///   h_i(x) = tau(d(x)) bump(|x - y_i| / rho_i) / sum_j bump(|x - y_j| / rho_j),
/// where tau is 1 on [floor, 2 eps0], ramps linearly to 0 on [floor/2, floor] and
/// [2 eps0, 3 eps0], and vanishes inside the domain.
class WhitneyCover {
public:
    WhitneyCover(const DomainShape& domain, double eps0, const WhitneyOptions& opts);

    const BallCover& cover() const { return cover_; }
    const std::vector<Ball>& balls() const { return cover_.balls; }
    double eps0() const { return eps0_; }
    double floor() const { return floor_; }
    const DomainShape& domain() const { return domain_; }

    /// Nonzero weights (index, h_i(x)).
    std::vector<std::pair<std::size_t, double>> weights_at(const Point& x) const;
    double partition_sum(const Point& x) const;
    /// Number of balls whose 2x dilation contains x.
    int overlap_at(const Point& x) const;
    double cutoff(double d) const;

    /// Largest rho_i |D h_i| seen by central differences at the given points.
    double gradient_constant(const std::vector<Point>& samples) const;

private:
    DomainShape domain_;
    double eps0_;
    double floor_;
    BallCover cover_;
    BallIndex index_;
};

WhitneyCover whitney_collar_cover(const DomainShape& domain, double eps0, const WhitneyOptions& opts = {});

struct ChainOfBalls {
    std::vector<Ball> balls;
    Point x{}, y{};
    /// sum r_k / |x - y|
    double length_constant = 0.0;
    /// Smallest radius kept at the two ends.
    double truncation_radius = 0.0;
    /// Interior path the centers were placed on.
    std::vector<Point> path;
};

/// Thrown when the walk exhausts its budget; carries the partial chain.
class ChainError : public Error {
public:
    ChainError(const std::string& what, ChainOfBalls partial)
        : Error(ErrorKind::construction, what), partial_(std::move(partial)) {}
    const ChainOfBalls& partial() const { return partial_; }

private:
    ChainOfBalls partial_;
};

struct ChainOptions {
    /// Truncation floor as a fraction of |x - y|.
    double floor_fraction = 0x1p-20;
    std::size_t max_balls = 200000;
};

/// Cigar chain joining x and y inside the domain.
///
/// Centers are placed along an interior path (the segment for convex domains,
/// a visibility-graph shortest path through offset reflex corners for
/// polygons) with radii r(t) = min(min(t, T - t) / c, d(gamma(t)) / 6), so
/// 6B_k lies in the domain. Successive centers are one radius apart.
ChainOfBalls uniform_chain(const DomainShape& domain, const Point& x, const Point& y, double c,
                           const ChainOptions& opts = {});

struct ChainCheck {
    bool inside = true;      // 6 B_k in the domain for all k
    bool linked = true;      // consecutive balls intersect
    bool comparable = true;  // r_k / 2 <= r_{k+1} <= 2 r_k
    std::size_t first_bad = 0;
    bool ok() const { return inside && linked && comparable; }
};

ChainCheck check_chain(const DomainShape& domain, const ChainOfBalls& chain);

// ---------------------------------------------------------------------------

template <class Fn>
void BallIndex::for_candidates(const Point& x, Fn&& fn) const {
    for (const Level& lv : levels_) {
        const std::int64_t c0 = static_cast<std::int64_t>(std::floor(x[0] / lv.cell));
        const std::int64_t c1 = dim_ > 1 ? static_cast<std::int64_t>(std::floor(x[1] / lv.cell)) : 0;
        const std::int64_t c2 = dim_ > 2 ? static_cast<std::int64_t>(std::floor(x[2] / lv.cell)) : 0;
        const int r1 = dim_ > 1 ? 1 : 0;
        const int r2 = dim_ > 2 ? 1 : 0;
        for (int a = -1; a <= 1; ++a) {
            for (int b = -r1; b <= r1; ++b) {
                for (int c = -r2; c <= r2; ++c) {
                    auto it = lv.buckets.find(key(c0 + a, c1 + b, c2 + c));
                    if (it == lv.buckets.end()) continue;
                    for (std::uint32_t idx : it->second) fn(static_cast<std::size_t>(idx));
                }
            }
        }
    }
}

}  // namespace hsob
