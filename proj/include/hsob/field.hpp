#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hsob/geometry.hpp"

namespace hsob {

struct GridSpec {
    Point origin{};
    double spacing = 1.0;
    std::array<int, 3> shape{1, 1, 1};
};

/// Sample points of R^n (or of a domain) with positive cell measures.
class MetricCloud {
public:
    /// Uniform grid; point (i, j, k) sits at origin + spacing * (i, j, k) and
    /// carries measure spacing^dim. Index = i + shape[0] * (j + shape[1] * k).
    static MetricCloud grid(const Point& origin, double spacing, std::array<int, 3> shape, int dim);
    /// Grid with `n` points per axis covering [lo, hi]^dim, endpoints included.
    static MetricCloud unit_grid(int n, int dim, double lo = 0.0, double hi = 1.0);
    static MetricCloud irregular(std::vector<Point> points, std::vector<double> measures, int dim);

    int dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    const Point& point(std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }
    double measure(std::size_t i) const { return measures_[i]; }
    const std::vector<double>& measures() const { return measures_; }
    bool is_grid() const { return is_grid_; }
    const GridSpec& grid_spec() const { return grid_; }

    std::array<int, 3> multi_index(std::size_t i) const;
    std::size_t flat_index(int i, int j, int k) const;

    BoundingBox bbox() const;
    double diameter() const;
    /// Grid spacing, or the smallest nearest-neighbour distance otherwise.
    double resolution() const;
    /// Index of the cloud point closest to x.
    std::size_t nearest(const Point& x) const;

    /// Dilation x -> lambda x (measures scale by lambda^dim).
    MetricCloud dilated(double lambda) const;

private:
    int dim_ = 1;
    bool is_grid_ = false;
    GridSpec grid_{};
    std::vector<Point> points_;
    std::vector<double> measures_;
    double resolution_ = -1.0;
};

using CloudPtr = std::shared_ptr<const MetricCloud>;

/// Real values on a cloud. An optional mask marks the active points (for
/// example the samples inside a domain); inactive points carry value 0 and are
/// invisible to averages.
struct SampledField {
    CloudPtr cloud;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    SampledField() = default;
    SampledField(CloudPtr c, std::vector<double> v, std::vector<std::uint8_t> m = {});

    static SampledField from_function(CloudPtr c, const std::function<double(const Point&)>& fn);

    std::size_t size() const { return values.size(); }
    bool active(std::size_t i) const { return mask.empty() || mask[i] != 0; }
    bool has_mask() const { return !mask.empty(); }
    const Point& point(std::size_t i) const { return cloud->point(i); }
    double measure(std::size_t i) const { return cloud->measure(i); }
    /// Same cloud and mask, new values.
    SampledField with_values(std::vector<double> v) const;
};

/// Radius ladder r_k = base * 2^(k / per_octave); base 0 selects the cloud resolution.
struct LadderSpec {
    double base = 0.0;
    int per_octave = 1;
};

/// Radii used by the Hardy-Littlewood maximal operator at one point: 0 (the
/// singleton ball), then the ladder up to min(cap, diameter), then the diameter
/// when the cap allows it. Ladders for smaller caps are prefixes of larger ones.
std::vector<double> radius_ladder(const MetricCloud& cloud, double cap, const LadderSpec& spec = {});

/// (sum_i w_i |f_i|^p)^(1/p) over active points.
double lp_quasinorm(const SampledField& f, double p);

// --- Hardy-Littlewood maximal operator ---------------------------------------

/// (Mf)(x) = max over ladder radii r of the measure-weighted mean of |f| over
/// B(x, r) (closed) intersected with the active points. Grid clouds use
/// row prefix sums; the loop over points runs under OpenMP.
SampledField hl_maximal(const SampledField& f, double cap, const LadderSpec& spec = {});
/// Per-point radius caps (e.g. d(x, boundary) / 2).
SampledField hl_maximal(const SampledField& f, const std::vector<double>& caps, const LadderSpec& spec = {});
/// Serial brute force over all points; the test oracle for hl_maximal.
SampledField hl_maximal_reference(const SampledField& f, const std::vector<double>& caps,
                                  const LadderSpec& spec = {});

/// (M(g^q))^(1/q) with cap infinity.
SampledField power_maximal_composite(const SampledField& g, double q, const LadderSpec& spec = {});

// --- Test functions ----------------------------------------------------------

enum class Profile { bump, cone, shifted_bump };

struct FamilyMember {
    Profile profile = Profile::bump;
    /// For shifted_bump: center offset s along +-axis, support radius 1 - s.
    double shift = 0.0;
    int axis = 0;
    int sign = 1;
    /// Largest amplitude keeping |phi| <= 1 and |D phi| <= 1 on the unit ball.
    double amplitude = 1.0;

    /// a * P(z) at unit scale.
    double eval_unit(const Point& z) const;
};

/// Controlled family of test functions phi_r(z) = r^-n phi(z / r) with
/// |phi_r| <= r^-n and |D phi_r| <= r^-n-1 (the N = 1 class).
class TestFamily {
public:
    /// Scales smallest * 2^k up to largest; members default to the centered bump.
    static TestFamily dyadic(int dim, double smallest, double largest, std::vector<FamilyMember> members = {});

    static FamilyMember bump_member();
    static FamilyMember cone_member();
    static FamilyMember shifted_member(double shift, int axis, int sign);

    int dim() const { return dim_; }
    const std::vector<double>& scales() const { return scales_; }
    const std::vector<FamilyMember>& members() const { return members_; }

    double eval(const FamilyMember& m, double scale, const Point& z) const;

    /// Checks both size bounds at `samples_per_axis`^dim points of the unit
    /// ball for every member (by central differences for the gradient).
    /// Returns the worst ratio |value| / bound seen (must be <= 1).
    double verify_bounds(int samples_per_axis = 41) const;

    TestFamily with_member(const FamilyMember& m) const;
    TestFamily with_scale(double s) const;

private:
    int dim_ = 1;
    std::vector<double> scales_;
    std::vector<FamilyMember> members_;
};

/// sup over family scales t <= rho of |f * psi_t(x)| where psi_t is the
/// centered bump normalized to unit discrete mass over the active points.
SampledField smooth_maximal(const SampledField& f, const TestFamily& family, double rho);
SampledField smooth_maximal_reference(const SampledField& f, const TestFamily& family, double rho);

enum class GrandMode { pointwise_cap, boundary_cap };

struct GrandMaximalResult {
    SampledField values;
    /// Finite families only give a lower bound for the continuum supremum.
    bool lower_bound = true;
};

/// max over family members at scales r' <= r (r = d(x, boundary) / 2 in
/// boundary_cap mode) of |sum_i w_i f_i phi_r'(x_i - x)|.
GrandMaximalResult grand_maximal(const SampledField& f, const TestFamily& family, double r, GrandMode mode,
                                 const DomainShape* domain = nullptr);
GrandMaximalResult grand_maximal_reference(const SampledField& f, const TestFamily& family, double r,
                                           GrandMode mode, const DomainShape* domain = nullptr);

// --- Differences -------------------------------------------------------------

/// Central differences where both neighbours are active, one-sided where only
/// one is, zero otherwise. One field per axis.
std::vector<SampledField> finite_difference_gradient(const SampledField& f);

/// max_j |D_j f| pointwise.
SampledField gradient_magnitude_max(const std::vector<SampledField>& grad);

// --- I/O ---------------------------------------------------------------------

void write_field_csv(const std::string& path, const SampledField& f);
SampledField read_field_csv(const std::string& path);
/// Columnar little-endian cache: magic, dim, count, coordinate columns, measures, values, mask.
void write_field_binary(const std::string& path, const SampledField& f);
SampledField read_field_binary(const std::string& path);

}  // namespace hsob
