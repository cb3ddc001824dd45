#include "hsob/hajlasz.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hsob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double field_scale(const SampledField& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.active(i)) s = std::max(s, std::abs(f.values[i]));
    }
    return s;
}

}  // namespace

const char* to_string(RestrictionMode mode) {
    switch (mode) {
        case RestrictionMode::global: return "global";
        case RestrictionMode::scale: return "scale";
        case RestrictionMode::ball: return "ball";
    }
    return "?";
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::canonical: return "canonical";
        case Provenance::lp_minimal: return "lp-minimal";
        case Provenance::vertex_oracle: return "vertex-oracle";
        case Provenance::irls_bound: return "irls-bound";
        case Provenance::user: return "user";
    }
    return "?";
}

ConstraintSet build_constraints(const SampledField& f, const ConstraintParams& params) {
    const std::size_t n = f.size();
    ConstraintSet cs;
    cs.points = n;
    cs.mode = params.mode;
    std::vector<double> dbound;
    if (params.mode == RestrictionMode::ball) {
        require(params.domain != nullptr, ErrorKind::parameter, "ball-restricted constraints need a domain");
        require(params.factor >= 0.0, ErrorKind::parameter, "ball factor must be nonnegative");
        dbound.resize(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (f.active(i)) dbound[i] = params.factor * params.domain->distance_to_boundary(f.point(i));
        }
    }
    if (params.mode == RestrictionMode::scale) {
        require(params.max_distance >= 0.0, ErrorKind::parameter, "scale bound must be nonnegative");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!f.active(i)) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!f.active(j)) continue;
            const double d = dist(f.point(i), f.point(j));
            if (d == 0.0) fail(ErrorKind::degenerate, "duplicate points " + std::to_string(i) + ", " + std::to_string(j));
            if (params.mode == RestrictionMode::scale && d > params.max_distance) continue;
            if (params.mode == RestrictionMode::ball && d > std::min(dbound[i], dbound[j])) continue;
            cs.pairs.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), d,
                                std::abs(f.values[i] - f.values[j]) / d});
        }
    }
    return cs;
}

void write_constraints(const std::string& path, const ConstraintSet& cs) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    require(fp != nullptr, ErrorKind::io, "cannot write " + path);
    std::fprintf(fp, "hsob-constraints 1 %zu %zu %s\n", cs.points, cs.pairs.size(), to_string(cs.mode));
    for (const auto& p : cs.pairs) std::fprintf(fp, "%" PRIu32 " %" PRIu32 " %.17g %.17g\n", p.i, p.j, p.distance, p.quotient);
    const bool ok = std::fclose(fp) == 0;
    require(ok, ErrorKind::io, "write failed for " + path);
}

ConstraintSet read_constraints(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot read " + path);
    std::string magic, mode;
    int version = 0;
    std::size_t points = 0, count = 0;
    in >> magic >> version >> points >> count >> mode;
    require(in && magic == "hsob-constraints" && version == 1, ErrorKind::io, "bad constraint header in " + path);
    ConstraintSet cs;
    cs.points = points;
    if (mode == "global") cs.mode = RestrictionMode::global;
    else if (mode == "scale") cs.mode = RestrictionMode::scale;
    else if (mode == "ball") cs.mode = RestrictionMode::ball;
    else fail(ErrorKind::io, "unknown restriction mode " + mode);
    cs.pairs.resize(count);
    for (auto& p : cs.pairs) {
        in >> p.i >> p.j >> p.distance >> p.quotient;
        require(static_cast<bool>(in), ErrorKind::io, "truncated constraint file " + path);
        require(p.i < points && p.j < points && p.distance > 0.0, ErrorKind::io, "bad constraint row in " + path);
    }
    return cs;
}

// --- Canonical gradient ------------------------------------------------------

SampledField maximal_gradient(const SampledField& f, const CanonicalOptions& opts) {
    require(f.cloud && f.cloud->is_grid(), ErrorKind::unsupported, "canonical gradient needs a grid field");
    const SampledField mag = gradient_magnitude_max(finite_difference_gradient(f));
    if (opts.mode == CanonicalMode::global) return hl_maximal(mag, kInf, opts.ladder);
    require(opts.domain != nullptr, ErrorKind::parameter, "domain mode needs a domain");
    std::vector<double> caps(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.active(i)) caps[i] = 0.5 * opts.domain->distance_to_boundary(f.point(i));
    }
    return hl_maximal(mag, caps, opts.ladder);
}

GradientCandidate canonical_gradient(const SampledField& f, const CanonicalOptions& opts,
                                     const ConstraintSet* constraints) {
    require(opts.constant >= 0.0, ErrorKind::parameter, "canonical constant must be nonnegative");
    SampledField m = maximal_gradient(f, opts);
    for (double& v : m.values) v *= opts.constant;
    GradientCandidate out;
    out.g = std::move(m);
    out.exponent = 1.0;
    out.provenance = Provenance::canonical;
    ConstraintSet own;
    if (constraints == nullptr) {
        ConstraintParams params;
        if (opts.mode == CanonicalMode::domain) {
            params.mode = RestrictionMode::ball;
            params.domain = opts.domain;
        }
        own = build_constraints(f, params);
        constraints = &own;
    }
    const double tol = 1e-12 * std::max(1.0, field_scale(f));
    const FeasibilityReport rep = verify_candidate(f, out.g, *constraints, tol);
    out.slack = rep.slack;
    out.feasible = rep.feasible;
    return out;
}

double calibration_ratio(const ConstraintSet& cs, const SampledField& maximal_grad) {
    double worst = 0.0;
    for (const auto& p : cs.pairs) {
        if (p.quotient == 0.0) continue;
        const double den = maximal_grad.values[p.i] + maximal_grad.values[p.j];
        if (den <= 0.0) return kInf;
        worst = std::max(worst, p.quotient / den);
    }
    return worst;
}

FeasibilityReport verify_candidate(const SampledField& f, const SampledField& g, const ConstraintSet& cs, double tol) {
    require(f.size() == g.size() && f.size() == cs.points, ErrorKind::precondition, "field, gradient and constraints differ in size");
    FeasibilityReport rep;
    rep.slack = kInf;
    std::vector<double> slack(cs.pairs.size());
    for (std::size_t k = 0; k < cs.pairs.size(); ++k) {
        const auto& p = cs.pairs[k];
        slack[k] = p.distance * (g.values[p.i] + g.values[p.j]) - std::abs(f.values[p.i] - f.values[p.j]);
        if (slack[k] < rep.slack) {
            rep.slack = slack[k];
            rep.worst = p;
        }
    }
    rep.feasible = rep.slack >= -tol;
    if (rep.feasible) return rep;

    std::vector<std::uint8_t> removed(cs.points, 0);
    std::vector<std::size_t> count(cs.points);
    for (;;) {
        std::fill(count.begin(), count.end(), 0);
        bool any = false;
        for (std::size_t k = 0; k < cs.pairs.size(); ++k) {
            const auto& p = cs.pairs[k];
            if (slack[k] >= -tol || removed[p.i] || removed[p.j]) continue;
            ++count[p.i];
            ++count[p.j];
            any = true;
        }
        if (!any) break;
        const auto it = std::max_element(count.begin(), count.end());
        const auto idx = static_cast<std::size_t>(it - count.begin());
        removed[idx] = 1;
        rep.exceptional.push_back(idx);
    }
    std::size_t active = 0;
    for (std::size_t i = 0; i < f.size(); ++i) active += f.active(i) ? 1 : 0;
    rep.exceptional_fraction = active > 0 ? static_cast<double>(rep.exceptional.size()) / static_cast<double>(active) : 0.0;
    return rep;
}

// --- Telescoping -------------------------------------------------------------

namespace {

double mollified_average(const SampledField& f, const Point& x, double t) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!f.active(j)) continue;
        const double b = bump(dist(x, f.point(j)) / t);
        if (b == 0.0) continue;
        num += f.measure(j) * f.values[j] * b;
        den += f.measure(j) * b;
    }
    return den > 0.0 ? num / den : 0.0;
}

std::vector<double> decay(const std::vector<double>& diff) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < diff.size(); ++k) out.push_back(diff[k] > 0.0 ? diff[k + 1] / diff[k] : 0.0);
    return out;
}

}  // namespace

TelescopingReport telescoping_bound_check(const SampledField& f, std::size_t x, std::size_t y, const LadderSpec& ladder) {
    require(f.cloud && f.cloud->is_grid(), ErrorKind::unsupported, "telescoping check needs a grid field");
    require(x < f.size() && y < f.size(), ErrorKind::parameter, "point index out of range");
    const double h = f.cloud->grid_spec().spacing;
    const double r = dist(f.point(x), f.point(y));
    require(r >= 2.0 * h * (1.0 - 1e-12), ErrorKind::parameter, "|x - y| must be at least two grid spacings");

    TelescopingReport rep;
    const int n = f.cloud->dim();
    while (std::ldexp(1.0, rep.k0 - 1) < std::sqrt(static_cast<double>(n))) ++rep.k0;
    for (double s = std::ldexp(r, -rep.k0); s >= 2.0 * h * (1.0 - 1e-12); s *= 0.5) rep.scales.push_back(s);
    if (rep.scales.empty()) rep.scales.push_back(2.0 * h);
    rep.floor_scale = rep.scales.back();

    for (double s : rep.scales) {
        rep.a.push_back(mollified_average(f, f.point(x), s));
        rep.b.push_back(mollified_average(f, f.point(y), s));
    }
    for (std::size_t k = 0; k + 1 < rep.scales.size(); ++k) {
        rep.a_diff.push_back(std::abs(rep.a[k] - rep.a[k + 1]));
        rep.b_diff.push_back(std::abs(rep.b[k] - rep.b[k + 1]));
    }
    rep.a_decay = decay(rep.a_diff);
    rep.b_decay = decay(rep.b_diff);
    rep.head = std::abs(rep.a.front() - rep.b.front());
    rep.telescoped = rep.head + std::abs(rep.a.back() - f.values[x]) + std::abs(rep.b.back() - f.values[y]);
    for (double v : rep.a_diff) rep.telescoped += v;
    for (double v : rep.b_diff) rep.telescoped += v;

    const SampledField mag = gradient_magnitude_max(finite_difference_gradient(f));
    std::vector<double> caps(f.size(), 0.0);
    caps[x] = r;
    caps[y] = r;
    const SampledField m = hl_maximal(mag, caps, ladder);
    rep.local_maximal_x = m.values[x];
    rep.local_maximal_y = m.values[y];
    const double num = std::abs(f.values[x] - f.values[y]);
    const double den = r * (rep.local_maximal_x + rep.local_maximal_y);
    if (den <= 0.0) {
        rep.degenerate = num == 0.0;
        rep.constant = num == 0.0 ? 0.0 : kInf;
    } else {
        rep.constant = num / den;
    }
    return rep;
}

// --- Mean-zero decomposition -------------------------------------------------

namespace {

struct Block {
    std::vector<double> v;
    std::array<int, 3> shape{1, 1, 1};
    int dim = 1;

    std::size_t at(int i, int j, int k) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(shape[0]) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(shape[1]) * static_cast<std::size_t>(k));
    }
};

/// Profile of unit discrete mass on indices 1..N-2.
std::vector<double> unit_profile(int len, double h) {
    std::vector<double> a(static_cast<std::size_t>(len), 0.0);
    const double mid = 0.5 * (len - 1);
    const double half = 0.5 * (len - 1);
    double mass = 0.0;
    for (int t = 1; t + 1 < len; ++t) {
        a[static_cast<std::size_t>(t)] = bump(std::abs(t - mid) / half);
        mass += a[static_cast<std::size_t>(t)] * h;
    }
    for (double& v : a) v /= mass;
    return a;
}

std::vector<Block> decompose_block(const Block& phi, double h) {
    const int n = phi.dim;
    const int len = phi.shape[static_cast<std::size_t>(n - 1)];
    auto index = [&](const std::array<int, 3>& lo, int t) {
        std::array<int, 3> id = lo;
        id[static_cast<std::size_t>(n - 1)] = t;
        return phi.at(id[0], id[1], id[2]);
    };

    Block slice;
    slice.dim = n - 1;
    slice.shape = {1, 1, 1};
    for (int a = 0; a < n - 1; ++a) slice.shape[static_cast<std::size_t>(a)] = phi.shape[static_cast<std::size_t>(a)];
    const std::size_t slice_count = static_cast<std::size_t>(slice.shape[0]) * static_cast<std::size_t>(slice.shape[1]) * static_cast<std::size_t>(slice.shape[2]);
    slice.v.assign(slice_count, 0.0);

    auto slice_id = [&](std::size_t s) {
        std::array<int, 3> id{0, 0, 0};
        id[0] = static_cast<int>(s % static_cast<std::size_t>(slice.shape[0]));
        id[1] = static_cast<int>((s / static_cast<std::size_t>(slice.shape[0])) % static_cast<std::size_t>(slice.shape[1]));
        id[2] = static_cast<int>(s / (static_cast<std::size_t>(slice.shape[0]) * static_cast<std::size_t>(slice.shape[1])));
        return id;
    };

    std::vector<Block> out(static_cast<std::size_t>(n));
    for (auto& b : out) {
        b.dim = n;
        b.shape = phi.shape;
        b.v.assign(phi.v.size(), 0.0);
    }

    if (n == 1) {
        double run = 0.0;
        for (int t = 0; t + 1 < len; ++t) {
            out[0].v[static_cast<std::size_t>(t)] = run;
            run += phi.v[static_cast<std::size_t>(t)] * h;
        }
        // The last partial sum is the mean, zero up to rounding.
        return out;
    }

    for (std::size_t s = 0; s < slice_count; ++s) {
        const auto lo = slice_id(s);
        double sum = 0.0;
        for (int t = 0; t < len; ++t) sum += phi.v[index(lo, t)] * h;
        slice.v[s] = sum;
    }
    const std::vector<Block> lower = decompose_block(slice, h);
    const std::vector<double> a = unit_profile(len, h);

    for (std::size_t s = 0; s < slice_count; ++s) {
        const auto lo = slice_id(s);
        double run = 0.0;
        for (int t = 0; t < len; ++t) {
            const std::size_t idx = index(lo, t);
            if (t + 1 < len) out[static_cast<std::size_t>(n - 1)].v[idx] = run;
            run += (phi.v[idx] - a[static_cast<std::size_t>(t)] * slice.v[s]) * h;
            for (int k = 0; k < n - 1; ++k) {
                out[static_cast<std::size_t>(k)].v[idx] = a[static_cast<std::size_t>(t)] * lower[static_cast<std::size_t>(k)].v[s];
            }
        }
    }
    return out;
}

bool touches_face(const MetricCloud& c, std::size_t i) {
    const auto id = c.multi_index(i);
    for (int a = 0; a < c.dim(); ++a) {
        if (id[static_cast<std::size_t>(a)] == 0 || id[static_cast<std::size_t>(a)] == c.grid_spec().shape[static_cast<std::size_t>(a)] - 1) return true;
    }
    return false;
}

}  // namespace

std::vector<SampledField> mean_zero_decompose(const SampledField& phi) {
    require(phi.cloud && phi.cloud->is_grid(), ErrorKind::unsupported, "decomposition needs a grid field");
    const MetricCloud& c = *phi.cloud;
    const double h = c.grid_spec().spacing;
    double mean = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (!phi.active(i)) continue;
        mean += c.measure(i) * phi.values[i];
        mass += c.measure(i) * std::abs(phi.values[i]);
        if (phi.values[i] != 0.0 && touches_face(c, i)) fail(ErrorKind::precondition, "support touches a face of the grid cube");
    }
    require(std::abs(mean) <= 1e-12 * std::max(1.0, mass), ErrorKind::precondition, "field does not have mean zero");
    for (int a = 0; a < c.dim(); ++a) {
        require(c.grid_spec().shape[static_cast<std::size_t>(a)] >= 3, ErrorKind::precondition, "grid needs three points per axis");
    }

    Block b;
    b.dim = c.dim();
    b.shape = c.grid_spec().shape;
    b.v.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) b.v[i] = phi.active(i) ? phi.values[i] : 0.0;
    std::vector<SampledField> out;
    for (auto& part : decompose_block(b, h)) out.push_back(SampledField(phi.cloud, std::move(part.v)));
    return out;
}

SampledField forward_divergence(const std::vector<SampledField>& psi) {
    require(!psi.empty() && psi[0].cloud && psi[0].cloud->is_grid(), ErrorKind::unsupported, "divergence needs grid fields");
    const MetricCloud& c = *psi[0].cloud;
    const double h = c.grid_spec().spacing;
    const auto& shape = c.grid_spec().shape;
    std::vector<double> out(c.size(), 0.0);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            auto id = c.multi_index(i);
            ++id[k];
            const double next = id[k] < shape[k] ? psi[k].values[c.flat_index(id[0], id[1], id[2])] : 0.0;
            out[i] += (next - psi[k].values[i]) / h;
        }
    }
    return SampledField(psi[0].cloud, std::move(out));
}

// --- Poincare ----------------------------------------------------------------

PoincareResult poincare_ratio(const SampledField& u, const SampledField& g, const Ball& ball, double p) {
    require(p > 0.0 && p <= 1.0, ErrorKind::parameter, "Poincare exponent must lie in (0, 1]");
    require(ball.radius > 0.0, ErrorKind::parameter, "ball radius must be positive");
    require(u.size() == g.size(), ErrorKind::precondition, "u and g differ in size");
    const MetricCloud& c = *u.cloud;
    const int n = c.dim();
    const Ball twice = ball.dilate(2.0);
    const BoundingBox box = c.bbox();
    for (int a = 0; a < n; ++a) {
        const bool inside = twice.center[static_cast<std::size_t>(a)] - twice.radius >= box.lo[static_cast<std::size_t>(a)] - 1e-12 &&
                            twice.center[static_cast<std::size_t>(a)] + twice.radius <= box.hi[static_cast<std::size_t>(a)] + 1e-12;
        require(inside, ErrorKind::precondition, "2B must lie inside the cloud hull");
    }

    std::vector<double> vals, w;
    double gnum = 0.0, gden = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u.active(i)) continue;
        const double d = dist(u.point(i), ball.center);
        if (d <= ball.radius) {
            vals.push_back(u.values[i]);
            w.push_back(u.measure(i));
        }
        if (d <= twice.radius) {
            gnum += u.measure(i) * std::pow(std::abs(g.values[i]), p);
            gden += u.measure(i);
        }
    }
    require(!vals.empty(), ErrorKind::resolution, "ball contains no sample");

    PoincareResult res;
    const double lo = *std::min_element(vals.begin(), vals.end());
    const double hi = *std::max_element(vals.begin(), vals.end());
    double num = 0.0;
    if (p >= static_cast<double>(n)) {
        res.sobolev_exponent = kInf;
        res.best_constant = 0.5 * (lo + hi);
        num = 0.5 * (hi - lo);
    } else {
        const double ps = n * p / (n - p);
        res.sobolev_exponent = ps;
        double wsum = 0.0;
        for (double x : w) wsum += x;
        auto objective = [&](double cst) {
            double s = 0.0;
            for (std::size_t k = 0; k < vals.size(); ++k) s += w[k] * std::pow(std::abs(vals[k] - cst), ps);
            return s / wsum;
        };
        double a = lo, b = hi;
        const double tol = 1e-10 * std::max({std::abs(lo), std::abs(hi), hi - lo, 1e-300});
        while (b - a > tol) {
            const double m1 = a + (b - a) / 3.0;
            const double m2 = b - (b - a) / 3.0;
            if (objective(m1) <= objective(m2)) b = m2;
            else a = m1;
        }
        res.best_constant = 0.5 * (a + b);
        num = std::pow(objective(res.best_constant), 1.0 / ps);
        if (hi == lo) num = 0.0;
    }
    const double den = ball.radius * std::pow(gnum / gden, 1.0 / p);
    if (num == 0.0) {
        res.ratio = 0.0;
    } else if (den <= 0.0) {
        res.infinite = true;
        res.ratio = kInf;
    } else {
        res.ratio = num / den;
    }
    return res;
}

}  // namespace hsob
