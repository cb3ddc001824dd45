#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hsob/field.hpp"
#include "hsob/lp.hpp"

namespace hsob {

// --- Hardy quotients ---------------------------------------------------------

struct HardyQuotient {
    double numerator = 0.0;    // sum w_i (|u_i| / d(x_i))^p over samples inside the domain
    double denominator = 0.0;  // sum w_i g_i^p
    double ratio = 0.0;
    bool infinite = false;     // u != 0 with g = 0
    std::size_t points = 0;
};

/// u must vanish at every sample outside the open domain (precondition error otherwise).
HardyQuotient hardy_quotient_ratio(const SampledField& u, const SampledField& g, const DomainShape& domain,
                                   double p = 1.0);

/// Minimal Hajlasz gradient over global constraints: the simplex for p = 1,
/// the IRLS bound for p < 1.
GradientCandidate lp_minimal_gradient(const SampledField& f, double p = 1.0, const LPOptions& lp = {});

struct ReflectionOptions {
    /// Only samples with d(x) <= collar are checked (0: every sample inside the domain).
    double collar = 0.0;
    /// Enforce u = 0 outside the domain.
    bool require_vanishing = true;
};

struct ReflectionReport {
    std::size_t checked = 0;
    std::size_t skipped = 0;     // H(x) outside the graph range or the cloud's box
    std::size_t violations = 0;  // points with empirical c1 above the geometric one
    double empirical_c1 = 0.0;   // max |u(x) - u(H x)| / (d(x) (g(x) + g(H x)))
    double geometric_c1 = 0.0;   // 2 sqrt(1 + L^2)
    bool infinite = false;       // some point has u(x) != u(H x) with g = 0 at both
    /// max |u(x) - u(H x)| / |u(x)| over points with u(x) != 0.
    double max_difference_ratio = 0.0;
};

/// |u(x) - u(H x)| <= c1 d(x) (g(x) + g(H x)) on a graph domain, with u and g
/// read at the cloud point nearest to H(x).
ReflectionReport reflection_hardy_check(const SampledField& u, const DomainShape& domain, const SampledField& g,
                                        const ReflectionOptions& opts = {});

// --- u = 1 / log(1/x) ----------------------------------------------------------

struct CounterexampleReport {
    double h_min = 0.0;
    double delta = 0.0;      // log-spacing of the grid
    std::size_t cells = 0;
    double u_top = 0.0;      // u(1/e)
    /// sum |u(x_j+1) - u(x_j)| (the exact integral of h over each cell).
    double derivative_l1 = 0.0;
    double derivative_l1_exact = 0.0;  // 1 - 1 / log(1/h_min)
    /// Upper sum of |u(x)| / x: each cell contributes its left-endpoint value times its width.
    double hardy_sum = 0.0;
    double hardy_integral = 0.0;       // log log(1/h_min)
    std::vector<double> x;             // nodes, increasing
    std::vector<double> u;
};

/// Geometric grid x_j = exp(-t_j), t_j from log(1/h_min) down to 1 in steps of
/// at most delta, on which u(x) = 1 / log(1/x) is sampled. h_min in (0, e^-2).
CounterexampleReport counterexample_4_1(double h_min, double delta = 1.0 / 64.0);

// --- Hausdorff content -------------------------------------------------------

struct ContentOptions {
    /// Smallest ladder radius; 0 selects the smallest nearest-neighbour distance.
    double finest = 0.0;
    /// Ladder finest * 2^k, k = 0, 1, ... up to the diameter of E.
    double coarsest = 0.0;
};

struct ContentEstimate {
    double s = 1.0;
    std::size_t points = 0;
    double finest = 0.0;   // resolution: both bounds concern covers with radii >= finest
    double upper = 0.0;    // sum r^s over `cover`
    double lower = 0.0;    // mass distribution bound
    std::vector<Ball> cover;
    std::string cover_kind;  // greedy, single, boxes
};

/// Upper bound: the cheapest of a greedy cover (most isolated uncovered point
/// first, ladder radius minimizing r^s per newly covered point), a single ball
/// about the box center, and dyadic box covers. Lower bound: with unit mass on
/// each point, #E / (2^s sup_{p in E, rho >= 2 finest} #B(p, rho) / rho^s).
ContentEstimate hausdorff_content(const std::vector<Point>& e, double s, const ContentOptions& opts = {});

/// True when every point lies in some closed ball of the cover.
bool verify_cover(const std::vector<Point>& e, const std::vector<Ball>& cover);

/// Concatenated covers: upper a + b, lower max(a, b).
ContentEstimate merge_content(const ContentEstimate& a, const ContentEstimate& b);

std::vector<Point> segment_samples(const Point& a, const Point& b, double spacing);
std::vector<Point> square_boundary_samples(const Point& lo, double side, double spacing);
/// Iterated removal on [0, 1]: each interval splits in `pieces` equal parts and
/// keeps `keep` of them (chosen by the seed); samples are the interval midpoints.
std::vector<Point> cantor_samples(int levels, int pieces = 3, int keep = 2, std::uint64_t seed = 1);
/// One point per line, 1 to 3 comma-separated coordinates; '#' starts a comment.
std::vector<Point> read_points_csv(const std::string& path);

// --- Capacity ----------------------------------------------------------------

struct CapacityOptions {
    /// Pair restriction for both LPs (0: all pairs).
    double max_distance = 0.0;
    LPOptions lp{};
};

struct CapacityEstimate {
    double p = 1.0;
    std::size_t e_points = 0;
    double separation = 0.0;      // d(E, U^c) over the samples
    std::vector<double> witness;  // max(0, 1 - d(x, E) / separation)
    double witness_lipschitz = 0.0;
    double strip_measure = 0.0;   // measure of {0 < witness < 1}
    double upper = 0.0;           // sum w g^p for the minimal gradient of the witness
    double lp_value = 0.0;        // p = 1: joint LP over (phi, g)
    bool lp_certified = false;
    bool upper_is_irls = false;
};

/// E and U are membership flags on the cloud; E must lie in U and U^c must
/// hold a sample (degenerate error otherwise). E empty gives 0.
CapacityEstimate hardy_capacity(const CloudPtr& cloud, const std::vector<std::uint8_t>& in_e,
                                const std::vector<std::uint8_t>& in_u, double p = 1.0,
                                const CapacityOptions& opts = {});

// --- Fatness -----------------------------------------------------------------

struct FatnessOptions {
    /// Grid spacing r / points_per_radius on the cube of half-width 2.5 r about x.
    int points_per_radius = 3;
    /// Capacity pairs within this many spacings (0: all pairs).
    double pair_reach = 2.0;
    /// Content exponent n - q; 0 selects n - p.
    double content_exponent = 0.0;
    LPOptions lp{};
};

struct FatnessSample {
    Point x{};
    double r = 0.0;
    double capacity = 0.0;
    double capacity_ratio = 0.0;  // capacity / r^(n-p)
    double content_upper = 0.0;   // H^s(complement in B(x, r)) / r^s
    double content_lower = 0.0;
};

struct FatnessReport {
    int dim = 2;
    double p = 1.0;
    double s = 1.0;
    double min_capacity_ratio = 0.0;
    double max_capacity_ratio = 0.0;
    double min_content_upper = 0.0;
    double min_content_lower = 0.0;
    bool capacity_upper_bounds = false;  // p < 1: witness values
    std::vector<FatnessSample> samples;
};

/// For each sample x and radius r: the capacity of complement-in-B(x, r)
/// relative to B(x, 2r) and the content ratio, each scaled by r.
FatnessReport fatness_probe(const std::function<bool(const Point&)>& in_complement, int dim, double p,
                            const std::vector<Point>& samples, const std::vector<double>& radii,
                            const FatnessOptions& opts = {});
FatnessReport fatness_probe(const DomainShape& domain, double p, const std::vector<Point>& samples,
                            const std::vector<double>& radii, const FatnessOptions& opts = {});

// --- Pointwise bound from capacity --------------------------------------------

struct PointwiseBoundReport {
    double constant = 0.0;  // max |u(x)| / (r (M(g^q)(x))^(1/q)) over x in B
    bool infinite = false;
    std::size_t points = 0;
    std::size_t worst = 0;
    /// Averages of u over B(worst, 2^-k r), k = 0, 1, ... down to the resolution.
    std::vector<double> chain_averages;
    double chain_sum = 0.0;  // |u(worst) - u_B0| bounded by the telescoped differences
};

/// u must vanish on K (precondition). The maximal function runs over the whole cloud.
PointwiseBoundReport capacity_pointwise_bound_check(const SampledField& u, const std::vector<std::uint8_t>& in_k,
                                                    const Ball& ball, const SampledField& g, double q);

// --- Reports -----------------------------------------------------------------

std::string content_json(const ContentEstimate& c);
std::string capacity_json(const CapacityEstimate& c);
std::string counterexample_json(const CounterexampleReport& r);
std::string fatness_json(const FatnessReport& r);

}  // namespace hsob
