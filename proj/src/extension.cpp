#include "hsob/extension.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "hsob/hajlasz.hpp"
#include "json.hpp"

namespace hsob {

namespace {

/// Calls fn(j) for every sample within distance r of c.
template <class Fn>
void for_points_in_ball(const MetricCloud& cloud, const Point& c, double r, Fn&& fn) {
    if (cloud.is_grid()) {
        const GridSpec& g = cloud.grid_spec();
        std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
        for (int a = 0; a < cloud.dim(); ++a) {
            lo[a] = std::max(0, static_cast<int>(std::ceil((c[a] - r - g.origin[a]) / g.spacing - 1e-9)));
            hi[a] = std::min(g.shape[a] - 1, static_cast<int>(std::floor((c[a] + r - g.origin[a]) / g.spacing + 1e-9)));
            if (lo[a] > hi[a]) return;
        }
        for (int k = lo[2]; k <= hi[2]; ++k) {
            for (int j = lo[1]; j <= hi[1]; ++j) {
                for (int i = lo[0]; i <= hi[0]; ++i) {
                    const std::size_t idx = cloud.flat_index(i, j, k);
                    if (dist(cloud.point(idx), c) <= r) fn(idx);
                }
            }
        }
        return;
    }
    for (std::size_t idx = 0; idx < cloud.size(); ++idx) {
        if (dist(cloud.point(idx), c) <= r) fn(idx);
    }
}

std::string describe(std::size_t k, const Ball& b) {
    std::ostringstream os;
    os << "Whitney ball " << k << " at (" << b.center[0] << ", " << b.center[1] << ", " << b.center[2]
       << ") radius " << b.radius;
    return os.str();
}

}  // namespace

ExtensionPlan build_extension_plan(const DomainShape& domain, double eps0, double uniformity,
                                   const ExtensionPlanOptions& opts) {
    require(uniformity >= 1.0, ErrorKind::parameter, "uniformity constant must be at least 1");
    require(opts.band.lo > 0.0 && opts.band.lo <= 1.0 && opts.band.hi >= 1.0, ErrorKind::parameter,
            "ratio band must contain 1");
    ExtensionPlan plan{whitney_collar_cover(domain, eps0, opts.whitney), {}, uniformity, opts.band, 0};
    const auto& balls = plan.cover.balls();
    plan.reflected.resize(balls.size());
    std::vector<char> ok(balls.size(), 0);
    std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t k = 0; k < balls.size(); ++k) {
        if (failed.load(std::memory_order_relaxed)) continue;
        const Ball& b = balls[k];
        const double d = domain.distance_to_boundary(b.center);
        const Point p = domain.nearest_boundary_point(b.center);
        const Point u = (1.0 / d) * (p - b.center);
        // The nearest-point direction first; near corners it runs along an edge,
        // so tilted directions towards each axis follow.
        std::vector<Point> dirs{u};
        for (double t : {0.5, 1.0, 2.0}) {
            for (int a = 0; a < domain.dim(); ++a) {
                for (double sg : {1.0, -1.0}) {
                    Point e{0, 0, 0};
                    e[a] = sg * t;
                    const Point v = u + e;
                    const double nv = norm(v);
                    if (nv > 1e-12 && dot(v, u) > 0.0) dirs.push_back((1.0 / nv) * v);
                }
            }
        }
        const double target = std::max(b.radius, std::min(opts.min_radius, 8.0 * b.radius));
        // The first candidate reaching the target radius wins; otherwise the first in band.
        std::optional<ReflectedBall> fallback;
        for (int t = 0; t <= 2 * opts.march_steps && !ok[k]; ++t) {
            const int e = (t % 2 == 1) ? -(t + 1) / 2 : t / 2;
            const double s = std::ldexp(d, e);
            for (const Point& dir : dirs) {
                const Point y = p + s * dir;
                if (!domain.bbox().contains(y) || !domain.contains(y)) continue;
                const double depth = domain.distance_to_boundary(y);
                if (depth * uniformity < s) continue;
                const double r = std::min(target, 0.79 * depth);
                ReflectedBall rb{{y, r}, b.radius / r, dist(y, b.center) / (2.0 * b.radius), (depth - r) / (2.0 * r), s};
                if (!opts.band.holds(rb.diameter_ratio) || !opts.band.holds(rb.offset_ratio) || !opts.band.holds(rb.depth_ratio)) continue;
                if (r < target) {
                    if (!fallback) fallback = rb;
                    continue;
                }
                plan.reflected[k] = rb;
                ok[k] = 1;
                break;
            }
        }
        if (!ok[k] && fallback) {
            plan.reflected[k] = *fallback;
            ok[k] = 1;
        }
        if (!ok[k]) failed.store(true, std::memory_order_relaxed);
    }
    for (std::size_t k = 0; k < balls.size(); ++k) {
        if (!ok[k]) fail(ErrorKind::construction, "no admissible reflected ball for " + describe(k, balls[k]));
    }

    std::vector<Ball> rb;
    rb.reserve(plan.reflected.size());
    for (const auto& r : plan.reflected) rb.push_back(r.ball);
    const BallIndex index(rb, 1.0);
    int overlap = 0;
#pragma omp parallel for reduction(max : overlap)
    for (std::size_t k = 0; k < rb.size(); ++k) {
        int count = 0;
        index.for_candidates(rb[k].center, [&](std::size_t j) { count += rb[j].contains(rb[k].center) ? 1 : 0; });
        overlap = std::max(overlap, count);
    }
    plan.reflected_overlap = overlap;
    return plan;
}

double extension_cutoff(double d, double eps0) { return std::clamp(2.0 - 2.0 * d / eps0, 0.0, 1.0); }

std::vector<std::uint8_t> closure_mask(const MetricCloud& cloud, const DomainShape& domain) {
    std::vector<std::uint8_t> m(cloud.size(), 0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point& x = cloud.point(i);
        m[i] = domain.bbox().contains(x) && (domain.contains(x) || domain.distance_to_boundary(x) == 0.0) ? 1 : 0;
    }
    return m;
}

Extension extend(const SampledField& f, const ExtensionPlan& plan) {
    const MetricCloud& cloud = *f.cloud;
    const DomainShape& dom = plan.domain();
    const auto inside = closure_mask(cloud, dom);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        require(!inside[i] || f.active(i), ErrorKind::precondition, "f must be given on every sample of the domain closure");
    }

    const std::size_t nb = plan.reflected.size();
    Extension ext;
    ext.used.assign(nb, 0);
    ext.averages.assign(nb, std::numeric_limits<double>::quiet_NaN());

    // Weights at the exterior samples, kept for the second pass.
    std::vector<std::vector<std::pair<std::size_t, double>>> w(cloud.size());
    std::vector<double> eta(cloud.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (inside[i]) continue;
        const Point& x = cloud.point(i);
        if (!dom.bbox().contains(x)) continue;
        eta[i] = extension_cutoff(dom.distance_to_boundary(x), plan.eps0());
        if (eta[i] > 0.0) w[i] = plan.cover.weights_at(x);
    }
    for (const auto& wi : w) {
        for (const auto& [k, h] : wi) ext.used[k] = 1;
    }

    std::vector<char> empty(nb, 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t k = 0; k < nb; ++k) {
        if (!ext.used[k]) continue;
        double s = 0.0, m = 0.0;
        for_points_in_ball(cloud, plan.reflected[k].ball.center, plan.reflected[k].ball.radius, [&](std::size_t j) {
            if (!inside[j]) return;
            s += cloud.measure(j) * f.values[j];
            m += cloud.measure(j);
        });
        if (m > 0.0) {
            ext.averages[k] = s / m;
        } else {
            empty[k] = 1;
        }
    }
    for (std::size_t k = 0; k < nb; ++k) {
        if (empty[k]) fail(ErrorKind::resolution, "reflected ball " + std::to_string(k) + " holds no sample; refine the grid");
    }

    std::vector<double> v(cloud.size(), 0.0);
#pragma omp parallel for
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (inside[i]) {
            v[i] = f.values[i];
            continue;
        }
        double s = 0.0;
        for (const auto& [k, h] : w[i]) s += h * ext.averages[k];
        v[i] = eta[i] * s;
    }
    ext.field = SampledField(f.cloud, std::move(v));
    return ext;
}

namespace {

double minimal_norm(const SampledField& f, const ConstraintSet& cs, double p, const LPOptions& lp) {
    const MinimalGradientLP m = make_min_gradient_lp(f, cs);
    if (p == 1.0) {
        const LPSolution s = solve_min_gradient_p1(m, lp);
        return s.primal_objective;
    }
    const QuasiResult q = min_gradient_quasinorm_p_lt_1(m, p, QuasiMode::irls, lp);
    return std::pow(q.value, 1.0 / p);
}

}  // namespace

QualityReport extension_quality(const SampledField& f, const Extension& ext, const ExtensionPlan& plan,
                                const QualityOptions& opts) {
    require(opts.p > 0.0 && opts.p <= 1.0, ErrorKind::parameter, "quality exponent must lie in (0, 1]");
    require(ext.field.cloud == f.cloud, ErrorKind::precondition, "extension lives on a different cloud");
    const MetricCloud& cloud = *f.cloud;
    const DomainShape& dom = plan.domain();
    const int n = cloud.dim();
    QualityReport rep;
    rep.upper_bounds = opts.p < 1.0;

    const auto inside = closure_mask(cloud, dom);
    std::vector<std::uint8_t> eval(cloud.size(), 0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point& x = cloud.point(i);
        eval[i] = inside[i] || (dom.bbox().contains(x) && dom.distance_to_boundary(x) <= 0.5 * plan.eps0()) ? 1 : 0;
        rep.evaluation_points += eval[i];
    }

    const SampledField fo(f.cloud, f.values, inside);
    ConstraintParams den;
    den.mode = opts.restriction;
    den.domain = &dom;
    rep.denominator = minimal_norm(fo, build_constraints(fo, den), opts.p, opts.lp);

    const SampledField fe(f.cloud, ext.field.values, eval);
    ConstraintParams num;
    if (opts.max_distance > 0.0) {
        num.mode = RestrictionMode::scale;
        num.max_distance = opts.max_distance;
        rep.numerator_lower_bound = true;
    }
    rep.numerator = minimal_norm(fe, build_constraints(fe, num), opts.p, opts.lp);
    // Constant on the samples (up to rounding) means R is 0/0.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (!inside[i]) continue;
        lo = std::min(lo, f.values[i]);
        hi = std::max(hi, f.values[i]);
    }
    rep.degenerate = rep.denominator == 0.0 || hi - lo <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    rep.ratio = rep.degenerate ? std::numeric_limits<double>::quiet_NaN() : rep.numerator / rep.denominator;

    // Mean-value comparison over neighbouring Whitney balls.
    const double q = opts.q_tilde > 0.0 ? opts.q_tilde : 0.5 * (static_cast<double>(n) / (n + 1) + opts.p);
    require(q > static_cast<double>(n) / (n + 1) && q <= opts.p, ErrorKind::parameter, "q_tilde must lie in (n/(n+1), p]");
    const SampledField g = canonical_gradient(fo).g;
    const SampledField g1 = power_maximal_composite(g, q);

    const std::size_t nb = plan.reflected.size();
    std::vector<double> avg(nb, std::numeric_limits<double>::quiet_NaN()), low(nb, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t k = 0; k < nb; ++k) {
        double s = 0.0, m = 0.0;
        for_points_in_ball(cloud, plan.reflected[k].ball.center, plan.reflected[k].ball.radius, [&](std::size_t j) {
            if (!inside[j]) return;
            s += cloud.measure(j) * f.values[j];
            m += cloud.measure(j);
            low[k] = std::min(low[k], g1.values[j]);
        });
        if (m > 0.0) avg[k] = s / m;
    }
    const auto& wb = plan.cover.balls();
    const BallIndex index(wb, 2.0);
    double worst = 0.0;
    std::size_t pairs = 0, excluded = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : worst) reduction(+ : pairs, excluded)
    for (std::size_t i = 0; i < nb; ++i) {
        if (std::isnan(avg[i])) continue;
        index.for_candidates(wb[i].center, [&](std::size_t j) {
            if (j <= i || std::isnan(avg[j])) return;
            if (dist(wb[i].center, wb[j].center) > 2.0 * (wb[i].radius + wb[j].radius)) return;
            const Ball& a = plan.reflected[i].ball;
            const Ball& b = plan.reflected[j].ball;
            const double den = (dist(a.center, b.center) + a.radius + b.radius) * (low[i] + low[j]);
            const double numr = std::abs(avg[i] - avg[j]);
            if (den <= 0.0) {
                if (numr > 0.0) ++excluded;
                return;
            }
            ++pairs;
            worst = std::max(worst, numr / den);
        });
    }
    rep.mean_value_constant = worst;
    rep.mean_value_pairs = pairs;
    rep.mean_value_excluded = excluded;
    return rep;
}

std::string plan_json(const ExtensionPlan& plan) {
    nlohmann::json j;
    j["domain"] = to_string(plan.domain().kind());
    j["eps0"] = plan.eps0();
    j["uniformity"] = plan.uniformity;
    j["band"] = {plan.band.lo, plan.band.hi};
    j["whitney_overlap"] = plan.cover.cover().overlap_bound;
    j["reflected_overlap"] = plan.reflected_overlap;
    auto& arr = j["balls"] = nlohmann::json::array();
    const auto& wb = plan.cover.balls();
    for (std::size_t k = 0; k < wb.size(); ++k) {
        const auto& r = plan.reflected[k];
        arr.push_back({{"center", wb[k].center},
                       {"radius", wb[k].radius},
                       {"reflected_center", r.ball.center},
                       {"reflected_radius", r.ball.radius},
                       {"diameter_ratio", r.diameter_ratio},
                       {"offset_ratio", r.offset_ratio},
                       {"depth_ratio", r.depth_ratio}});
    }
    return j.dump(1);
}

}  // namespace hsob
