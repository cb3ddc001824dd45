#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hsob/field.hpp"

namespace hsob {

namespace {

constexpr double kRadiusSlack = 1e-9;

std::vector<double> ladder_from(double base, int per_octave, double bound, bool whole) {
    std::vector<double> r{0.0};
    for (int k = 0;; ++k) {
        const double rk = base * std::exp2(static_cast<double>(k) / per_octave);
        if (rk > bound) break;
        r.push_back(rk);
    }
    if (whole && bound > r.back()) r.push_back(bound);
    return r;
}

struct LadderContext {
    double base;
    int per_octave;
    double diameter;

    LadderContext(const MetricCloud& c, const LadderSpec& spec)
        : base(spec.base > 0.0 ? spec.base : c.resolution()), per_octave(spec.per_octave), diameter(c.diameter()) {
        require(per_octave >= 1, ErrorKind::parameter, "ladder density must be at least 1 per octave");
    }
    std::vector<double> radii(double cap) const {
        require(cap >= 0.0, ErrorKind::parameter, "radius cap must be nonnegative");
        return ladder_from(base, per_octave, std::min(cap, diameter), cap >= diameter);
    }
};

/// Row prefix sums of w|f| and w over active points along axis 0.
struct RowPrefix {
    int nx = 0;
    std::vector<double> mass, weight;

    explicit RowPrefix(const SampledField& f) {
        const auto& shape = f.cloud->grid_spec().shape;
        nx = shape[0];
        const std::size_t rows = static_cast<std::size_t>(shape[1]) * shape[2];
        mass.assign(rows * (nx + 1), 0.0);
        weight.assign(rows * (nx + 1), 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t idx = r * nx + i;
                const double w = f.active(idx) ? f.measure(idx) : 0.0;
                mass[r * (nx + 1) + i + 1] = mass[r * (nx + 1) + i] + w * std::abs(f.values[idx]);
                weight[r * (nx + 1) + i + 1] = weight[r * (nx + 1) + i] + w;
            }
        }
    }
};

double grid_ball_mean(const MetricCloud& c, const RowPrefix& pre, const std::array<int, 3>& id, double r) {
    const auto& g = c.grid_spec();
    const double R = r / g.spacing * (1.0 + kRadiusSlack);
    const double R2 = R * R;
    const int reach = static_cast<int>(std::floor(R));
    const int rj = c.dim() > 1 ? reach : 0;
    const int rk = c.dim() > 2 ? reach : 0;
    double m = 0.0, w = 0.0;
    for (int dk = -rk; dk <= rk; ++dk) {
        const int k = id[2] + dk;
        if (k < 0 || k >= g.shape[2]) continue;
        for (int dj = -rj; dj <= rj; ++dj) {
            const int j = id[1] + dj;
            if (j < 0 || j >= g.shape[1]) continue;
            const double rem = R2 - static_cast<double>(dj * dj + dk * dk);
            if (rem < 0.0) continue;
            const int half = static_cast<int>(std::floor(std::sqrt(rem)));
            const int lo = std::max(0, id[0] - half);
            const int hi = std::min(g.shape[0] - 1, id[0] + half);
            const std::size_t row = static_cast<std::size_t>(j) + static_cast<std::size_t>(g.shape[1]) * k;
            const std::size_t base = row * (pre.nx + 1);
            m += pre.mass[base + hi + 1] - pre.mass[base + lo];
            w += pre.weight[base + hi + 1] - pre.weight[base + lo];
        }
    }
    return w > 0.0 ? m / w : 0.0;
}

}  // namespace

SampledField hl_maximal(const SampledField& f, double cap, const LadderSpec& spec) {
    return hl_maximal(f, std::vector<double>(f.size(), cap), spec);
}

SampledField hl_maximal(const SampledField& f, const std::vector<double>& caps, const LadderSpec& spec) {
    require(f.cloud && f.size() > 0, ErrorKind::domain, "maximal function of an empty cloud");
    require(caps.size() == f.size(), ErrorKind::parameter, "one radius cap per point required");
    const MetricCloud& c = *f.cloud;
    const LadderContext ladder(c, spec);
    std::vector<double> out(f.size(), 0.0);
    const long n = static_cast<long>(f.size());

    if (c.is_grid()) {
        const RowPrefix pre(f);
#pragma omp parallel for schedule(dynamic, 16)
        for (long i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (!f.active(idx)) continue;
            const auto id = c.multi_index(idx);
            double best = std::abs(f.values[idx]);
            for (double r : ladder.radii(caps[idx])) {
                if (r > 0.0) best = std::max(best, grid_ball_mean(c, pre, id, r));
            }
            out[idx] = best;
        }
    } else {
#pragma omp parallel for schedule(dynamic, 16)
        for (long i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (!f.active(idx)) continue;
            std::vector<std::pair<double, std::size_t>> order;
            order.reserve(f.size());
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (f.active(j)) order.emplace_back(dist(c.point(idx), c.point(j)), j);
            }
            std::sort(order.begin(), order.end());
            double best = std::abs(f.values[idx]);
            double m = 0.0, w = 0.0;
            std::size_t pos = 0;
            for (double r : ladder.radii(caps[idx])) {
                if (r == 0.0) continue;
                const double lim = r * (1.0 + kRadiusSlack);
                while (pos < order.size() && order[pos].first <= lim) {
                    const std::size_t j = order[pos].second;
                    m += c.measure(j) * std::abs(f.values[j]);
                    w += c.measure(j);
                    ++pos;
                }
                if (w > 0.0) best = std::max(best, m / w);
            }
            out[idx] = best;
        }
    }
    return f.with_values(std::move(out));
}

SampledField hl_maximal_reference(const SampledField& f, const std::vector<double>& caps, const LadderSpec& spec) {
    require(f.cloud && f.size() > 0, ErrorKind::domain, "maximal function of an empty cloud");
    require(caps.size() == f.size(), ErrorKind::parameter, "one radius cap per point required");
    const MetricCloud& c = *f.cloud;
    const LadderContext ladder(c, spec);
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f.active(i)) continue;
        double best = 0.0;
        for (double r : ladder.radii(caps[i])) {
            double m = 0.0, w = 0.0;
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (!f.active(j)) continue;
                if (dist(c.point(i), c.point(j)) <= r * (1.0 + kRadiusSlack)) {
                    m += c.measure(j) * std::abs(f.values[j]);
                    w += c.measure(j);
                }
            }
            best = std::max(best, m / w);
        }
        out[i] = best;
    }
    return f.with_values(std::move(out));
}

SampledField power_maximal_composite(const SampledField& g, double q, const LadderSpec& spec) {
    require(q > 0.0, ErrorKind::parameter, "exponent q must be positive");
    std::vector<double> gq(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) gq[i] = std::pow(std::abs(g.values[i]), q);
    SampledField m = hl_maximal(g.with_values(std::move(gq)), std::numeric_limits<double>::infinity(), spec);
    for (double& v : m.values) v = std::pow(v, 1.0 / q);
    return m;
}

// --- Test functions ----------------------------------------------------------

double FamilyMember::eval_unit(const Point& z) const {
    switch (profile) {
        case Profile::bump: return amplitude * bump(norm(z));
        case Profile::cone: return amplitude * std::max(0.0, 1.0 - norm(z));
        case Profile::shifted_bump: {
            Point c{};
            c[axis] = sign * shift;
            return amplitude * bump(dist(z, c) / (1.0 - shift));
        }
    }
    return 0.0;
}

FamilyMember TestFamily::bump_member() {
    FamilyMember m;
    m.profile = Profile::bump;
    m.amplitude = 1.0 / std::max(1.0, kBumpMaxSlope);
    return m;
}

FamilyMember TestFamily::cone_member() {
    FamilyMember m;
    m.profile = Profile::cone;
    m.amplitude = 1.0;
    return m;
}

FamilyMember TestFamily::shifted_member(double shift, int axis, int sign) {
    require(shift > 0.0 && shift < 1.0, ErrorKind::parameter, "shift must lie in (0, 1)");
    FamilyMember m;
    m.profile = Profile::shifted_bump;
    m.shift = shift;
    m.axis = axis;
    m.sign = sign >= 0 ? 1 : -1;
    m.amplitude = 1.0 / std::max(1.0, kBumpMaxSlope / (1.0 - shift));
    return m;
}

TestFamily TestFamily::dyadic(int dim, double smallest, double largest, std::vector<FamilyMember> members) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::parameter, "dimension must be 1..3");
    require(smallest > 0.0 && largest >= smallest, ErrorKind::parameter, "bad scale range");
    TestFamily f;
    f.dim_ = dim;
    for (double s = smallest; s <= largest * (1.0 + 1e-12); s *= 2.0) f.scales_.push_back(s);
    f.members_ = members.empty() ? std::vector<FamilyMember>{bump_member()} : std::move(members);
    for (const auto& m : f.members_) {
        require(m.axis >= 0 && m.axis < dim, ErrorKind::parameter, "member axis out of range");
    }
    return f;
}

TestFamily TestFamily::with_member(const FamilyMember& m) const {
    TestFamily f = *this;
    f.members_.push_back(m);
    return f;
}

TestFamily TestFamily::with_scale(double s) const {
    require(s > 0.0, ErrorKind::parameter, "scale must be positive");
    TestFamily f = *this;
    f.scales_.push_back(s);
    std::sort(f.scales_.begin(), f.scales_.end());
    return f;
}

double TestFamily::eval(const FamilyMember& m, double scale, const Point& z) const {
    return std::pow(scale, -dim_) * m.eval_unit((1.0 / scale) * z);
}

double TestFamily::verify_bounds(int samples_per_axis) const {
    double worst = 0.0;
    const int s2 = dim_ > 1 ? samples_per_axis : 1;
    const int s3 = dim_ > 2 ? samples_per_axis : 1;
    for (const auto& m : members_) {
        for (double r : scales_) {
            const double h = 1e-6 * r;
            for (int a = 0; a < samples_per_axis; ++a) {
                for (int b = 0; b < s2; ++b) {
                    for (int c = 0; c < s3; ++c) {
                        auto coord = [&](int k) { return r * (-1.0 + 2.0 * k / (samples_per_axis - 1)); };
                        Point z{coord(a), dim_ > 1 ? coord(b) : 0.0, dim_ > 2 ? coord(c) : 0.0};
                        if (norm(z) > r) continue;
                        worst = std::max(worst, std::abs(eval(m, r, z)) * std::pow(r, dim_));
                        double g2 = 0.0;
                        for (int ax = 0; ax < dim_; ++ax) {
                            Point zp = z, zm = z;
                            zp[ax] += h;
                            zm[ax] -= h;
                            const double d = (eval(m, r, zp) - eval(m, r, zm)) / (2.0 * h);
                            g2 += d * d;
                        }
                        worst = std::max(worst, std::sqrt(g2) * std::pow(r, dim_ + 1));
                    }
                }
            }
        }
    }
    return worst;
}

// --- Smooth and grand maximal functions -------------------------------------

namespace {

std::vector<double> scales_up_to(const TestFamily& family, double rho) {
    std::vector<double> s;
    for (double t : family.scales()) {
        if (t <= rho * (1.0 + 1e-12)) s.push_back(t);
    }
    return s;
}

/// Calls fn(j) for every point within `radius` of point i (grid stencil or full scan).
template <class Fn>
void for_neighbours(const MetricCloud& c, std::size_t i, double radius, Fn&& fn) {
    if (!c.is_grid()) {
        for (std::size_t j = 0; j < c.size(); ++j) fn(j);
        return;
    }
    const auto& g = c.grid_spec();
    const auto id = c.multi_index(i);
    const int reach = static_cast<int>(std::ceil(radius / g.spacing));
    std::array<int, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
        const int r = a < c.dim() ? reach : 0;
        lo[a] = std::max(0, id[a] - r);
        hi[a] = std::min(g.shape[a] - 1, id[a] + r);
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
        for (int j = lo[1]; j <= hi[1]; ++j) {
            for (int m = lo[0]; m <= hi[0]; ++m) fn(c.flat_index(m, j, k));
        }
    }
}

double mollify(const SampledField& f, std::size_t i, double t, bool full_scan) {
    const MetricCloud& c = *f.cloud;
    double num = 0.0, den = 0.0;
    auto visit = [&](std::size_t j) {
        if (!f.active(j)) return;
        const double b = bump(dist(c.point(i), c.point(j)) / t);
        if (b == 0.0) return;
        num += c.measure(j) * f.values[j] * b;
        den += c.measure(j) * b;
    };
    if (full_scan) {
        for (std::size_t j = 0; j < c.size(); ++j) visit(j);
    } else {
        for_neighbours(c, i, t, visit);
    }
    return den > 0.0 ? num / den : 0.0;
}

double pairing(const SampledField& f, const TestFamily& fam, const FamilyMember& m, std::size_t i, double r,
               bool full_scan) {
    const MetricCloud& c = *f.cloud;
    double s = 0.0;
    auto visit = [&](std::size_t j) {
        if (!f.active(j) || f.values[j] == 0.0) return;
        const Point z = c.point(j) - c.point(i);
        if (norm(z) >= r) return;
        s += c.measure(j) * f.values[j] * fam.eval(m, r, z);
    };
    if (full_scan) {
        for (std::size_t j = 0; j < c.size(); ++j) visit(j);
    } else {
        for_neighbours(c, i, r, visit);
    }
    return s;
}

std::vector<double> grand_caps(const SampledField& f, double r, GrandMode mode, const DomainShape* domain) {
    std::vector<double> caps(f.size(), r);
    if (mode == GrandMode::boundary_cap) {
        require(domain != nullptr, ErrorKind::parameter, "boundary-cap mode needs a domain");
        for (std::size_t i = 0; i < f.size(); ++i) caps[i] = 0.5 * domain->distance_to_boundary(f.point(i));
    } else {
        require(r > 0.0, ErrorKind::parameter, "grand maximal radius must be positive");
    }
    return caps;
}

}  // namespace

SampledField smooth_maximal(const SampledField& f, const TestFamily& family, double rho) {
    const auto scales = scales_up_to(family, rho);
    require(!scales.empty(), ErrorKind::parameter, "no family scale below the cap");
    std::vector<double> out(f.size(), 0.0);
    const long n = static_cast<long>(f.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (!f.active(idx)) continue;
        double best = 0.0;
        for (double t : scales) best = std::max(best, std::abs(mollify(f, idx, t, false)));
        out[idx] = best;
    }
    return f.with_values(std::move(out));
}

SampledField smooth_maximal_reference(const SampledField& f, const TestFamily& family, double rho) {
    const auto scales = scales_up_to(family, rho);
    require(!scales.empty(), ErrorKind::parameter, "no family scale below the cap");
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f.active(i)) continue;
        double best = 0.0;
        for (double t : scales) best = std::max(best, std::abs(mollify(f, i, t, true)));
        out[i] = best;
    }
    return f.with_values(std::move(out));
}

GrandMaximalResult grand_maximal(const SampledField& f, const TestFamily& family, double r, GrandMode mode,
                                 const DomainShape* domain) {
    const auto caps = grand_caps(f, r, mode, domain);
    std::vector<double> out(f.size(), 0.0);
    const long n = static_cast<long>(f.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (!f.active(idx)) continue;
        double best = 0.0;
        for (double s : scales_up_to(family, caps[idx])) {
            for (const auto& m : family.members()) best = std::max(best, std::abs(pairing(f, family, m, idx, s, false)));
        }
        out[idx] = best;
    }
    return {f.with_values(std::move(out)), true};
}

GrandMaximalResult grand_maximal_reference(const SampledField& f, const TestFamily& family, double r,
                                           GrandMode mode, const DomainShape* domain) {
    const auto caps = grand_caps(f, r, mode, domain);
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f.active(i)) continue;
        double best = 0.0;
        for (double s : scales_up_to(family, caps[i])) {
            for (const auto& m : family.members()) best = std::max(best, std::abs(pairing(f, family, m, i, s, true)));
        }
        out[i] = best;
    }
    return {f.with_values(std::move(out)), true};
}

}  // namespace hsob
