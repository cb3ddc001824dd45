#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsob/field.hpp"

namespace hsob {

enum class RestrictionMode { global, scale, ball };

const char* to_string(RestrictionMode mode);

struct ConstraintParams {
    RestrictionMode mode = RestrictionMode::global;
    /// scale mode: admit pairs with |x_i - x_j| <= max_distance.
    double max_distance = 0.0;
    /// ball mode: admit pairs with |x_i - x_j| <= factor * min(d(x_i), d(x_j)).
    double factor = 0.25;
    const DomainShape* domain = nullptr;
};

struct ConstraintPair {
    std::uint32_t i = 0, j = 0;
    double distance = 0.0;
    /// |f_i - f_j| / |x_i - x_j|
    double quotient = 0.0;
};

/// Pointwise-gradient constraints |f_i - f_j| <= d_ij (g_i + g_j) over the admitted pairs.
struct ConstraintSet {
    std::size_t points = 0;
    RestrictionMode mode = RestrictionMode::global;
    std::vector<ConstraintPair> pairs;
};

/// Admits i < j over active points. Throws ErrorKind::degenerate on duplicate points.
ConstraintSet build_constraints(const SampledField& f, const ConstraintParams& params = {});

/// Sparse triple text format: header line `hsob-constraints 1 <points> <pairs> <mode>`,
/// then one `i j distance quotient` line per pair (17 significant digits).
void write_constraints(const std::string& path, const ConstraintSet& cs);
ConstraintSet read_constraints(const std::string& path);

enum class Provenance { canonical, lp_minimal, vertex_oracle, irls_bound, user };

const char* to_string(Provenance p);

struct GradientCandidate {
    SampledField g;
    double exponent = 1.0;
    Provenance provenance = Provenance::user;
    /// min over pairs of d_ij (g_i + g_j) - |f_i - f_j|; +inf with no pairs.
    double slack = 0.0;
    bool feasible = false;
};

/// Shipped multiplier for g = c M(|Df|): twice the largest ratio
/// c_ij / (M|Df|(x_i) + M|Df|(x_j)) seen over the calibration corpus
/// (12 named functions, 1D grids of 32/64/128 points and 2D grids of 16/32 per axis).
/// Measured maximum 13/12 (step function on the 2D grids); see tools/calibrate.cpp.
inline constexpr double kCanonicalConstant = 2.0 * (13.0 / 12.0);

enum class CanonicalMode {
    global,  // cap infinity
    domain,  // cap d(x, boundary) / 2
};

struct CanonicalOptions {
    CanonicalMode mode = CanonicalMode::global;
    const DomainShape* domain = nullptr;
    double constant = kCanonicalConstant;
    LadderSpec ladder{};
};

/// Unscaled maximal gradient max_j M(|D_j f|) with the mode's cap.
SampledField maximal_gradient(const SampledField& f, const CanonicalOptions& opts = {});

/// g = c * max_j M(|D_j f|); the slack against `constraints` (or the mode's
/// default constraint set when null) is reported.
GradientCandidate canonical_gradient(const SampledField& f, const CanonicalOptions& opts = {},
                                     const ConstraintSet* constraints = nullptr);

/// Largest c_ij / (m_i + m_j) over the pairs, with m the unscaled maximal gradient.
/// Pairs with c_ij > 0 and m_i + m_j = 0 give +inf.
double calibration_ratio(const ConstraintSet& cs, const SampledField& maximal_grad);

struct FeasibilityReport {
    bool feasible = true;
    double slack = 0.0;  // min over pairs, +inf with no pairs
    std::optional<ConstraintPair> worst;
    /// Points removed greedily (most violations first) until no pair is violated.
    std::vector<std::size_t> exceptional;
    double exceptional_fraction = 0.0;
};

FeasibilityReport verify_candidate(const SampledField& f, const SampledField& g, const ConstraintSet& cs,
                                   double tol = 0.0);

struct TelescopingReport {
    bool degenerate = false;
    int k0 = 1;              // 2^(k0 - 1) >= sqrt(n)
    double floor_scale = 0;  // smallest mollification scale used
    std::vector<double> scales;
    std::vector<double> a, b;            // mollified values at x and y
    std::vector<double> a_diff, b_diff;  // |A_k - A_k+1|, |B_k - B_k+1|
    std::vector<double> a_decay, b_decay;
    double head = 0.0;                   // |A_0 - B_0|
    double telescoped = 0.0;             // head + sum of differences + tails to f(x), f(y)
    double local_maximal_x = 0.0, local_maximal_y = 0.0;
    double constant = 0.0;               // |f(x)-f(y)| / (|x-y| (M Df(x) + M Df(y)))
};

/// Mollified averages at scales |x - y| 2^(-k0-k) down to two grid spacings,
/// with the empirical constant of the pointwise two-point bound.
TelescopingReport telescoping_bound_check(const SampledField& f, std::size_t x, std::size_t y,
                                          const LadderSpec& ladder = {});

/// Fields psi_1..psi_n with sum_k Delta_k psi_k = phi in forward differences.
std::vector<SampledField> mean_zero_decompose(const SampledField& phi);

/// sum_k (psi_k(x + h e_k) - psi_k(x)) / h with zero extension.
SampledField forward_divergence(const std::vector<SampledField>& psi);

struct PoincareResult {
    double ratio = 0.0;
    bool infinite = false;
    double best_constant = 0.0;  // minimizing c
    double sobolev_exponent = 0.0;
};

/// [inf_c (mean_B |u - c|^p*)^(1/p*)] / [r (mean_2B g^p)^(1/p)], p* = np/(n-p)
/// (p* = inf when p >= n, giving the half oscillation).
PoincareResult poincare_ratio(const SampledField& u, const SampledField& g, const Ball& ball, double p);

}  // namespace hsob
