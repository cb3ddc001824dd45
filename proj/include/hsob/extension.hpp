#pragma once

#include <string>
#include <vector>

#include "hsob/covering.hpp"
#include "hsob/field.hpp"
#include "hsob/lp.hpp"

namespace hsob {

struct RatioBand {
    double lo = 0.125;
    double hi = 8.0;
    bool holds(double v) const { return v >= lo && v <= hi; }
};

/// Interior ball paired with one Whitney ball.
struct ReflectedBall {
    Ball ball;
    double diameter_ratio = 0.0;  // diam(B_i) / diam(B'_i)
    double offset_ratio = 0.0;    // |y'_i - y_i| / diam(B_i)
    double depth_ratio = 0.0;     // d(B'_i, boundary) / diam(B'_i)
    double step = 0.0;            // march distance past the boundary point
};

struct ExtensionPlanOptions {
    RatioBand band{};
    /// Reflected radii are raised towards this (within the band) so that
    /// every reflected ball catches a sample point; 0 keeps rho_i.
    double min_radius = 0.0;
    /// Candidate steps d * 2^k for k = 0, -1, 1, -2, 2, ... up to |k| = march_steps.
    int march_steps = 10;
    WhitneyOptions whitney{};
};

struct ExtensionPlan {
    WhitneyCover cover;
    std::vector<ReflectedBall> reflected;
    double uniformity = 1.0;
    RatioBand band{};
    /// Largest number of reflected balls sharing a point (measured at their centers).
    int reflected_overlap = 0;

    const DomainShape& domain() const { return cover.domain(); }
    double eps0() const { return cover.eps0(); }
};

/// For each Whitney ball B(y, rho) with nearest boundary point p and inward unit
/// direction u, tries centers y' = p + s v, s = d(y) 2^k in the order k = 0, -1, 1, ...,
/// with v = u first and then u tilted towards each coordinate axis,
/// with radius r' = min(max(rho, min(min_radius, 8 rho)), 0.79 d(y')). A
/// candidate is accepted when y' lies in the domain with d(y') >= s / c and all
/// three ratios fall in the band.
ExtensionPlan build_extension_plan(const DomainShape& domain, double eps0, double uniformity,
                                   const ExtensionPlanOptions& opts = {});

/// Cutoff applied to the extension: 1 for d <= eps0 / 2, 0 for d >= eps0.
double extension_cutoff(double d, double eps0);

/// Sample points of the domain closure.
std::vector<std::uint8_t> closure_mask(const MetricCloud& cloud, const DomainShape& domain);

struct Extension {
    SampledField field;             // F on the whole cloud
    std::vector<double> averages;   // per reflected ball (NaN when unused)
    std::vector<std::uint8_t> used; // ball carries weight at some sample point
};

/// F = f on the domain closure; outside, F(x) = eta(d(x)) sum_i avg_{B'_i} f h_i(x).
/// f must be active on every sample of the closure.
Extension extend(const SampledField& f, const ExtensionPlan& plan);

struct QualityOptions {
    double p = 1.0;
    /// Exponent of the composite maximal function; 0 selects (n/(n+1) + p) / 2.
    double q_tilde = 0.0;
    /// Pairs of the extended field farther apart than this are dropped (0 keeps all),
    /// which makes the numerator a lower bound.
    double max_distance = 0.0;
    /// Constraints for f on the closure; ball restriction admits no pair on coarse grids.
    RestrictionMode restriction = RestrictionMode::global;
    LPOptions lp{};
};

struct QualityReport {
    double numerator = 0.0;    // minimal gradient norm of F on the evaluation set
    double denominator = 0.0;  // minimal gradient norm of f on the closure
    double ratio = 0.0;
    bool degenerate = false;   // denominator 0
    bool numerator_lower_bound = false;
    bool upper_bounds = false; // p < 1: both values are IRLS upper bounds
    std::size_t evaluation_points = 0;
    double mean_value_constant = 0.0;
    std::size_t mean_value_pairs = 0;
    std::size_t mean_value_excluded = 0;
};

/// R(f) compares the extension on the closure plus {d <= eps0 / 2} (global
/// constraints) with f on the closure (constraints per `restriction`). The
/// mean-value constant is the max over neighbouring Whitney balls i, j of
///   |f_{B'_i} - f_{B'_j}| / ((|y'_i - y'_j| + r'_i + r'_j)(inf_{B'_i} g1 + inf_{B'_j} g1)),
/// g1 = (M (g^q))^(1/q) for the canonical gradient g of f.
QualityReport extension_quality(const SampledField& f, const Extension& ext, const ExtensionPlan& plan,
                                const QualityOptions& opts = {});

std::string plan_json(const ExtensionPlan& plan);

}  // namespace hsob
