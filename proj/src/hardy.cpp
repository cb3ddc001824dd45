#include "hsob/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace hsob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool inside_open(const DomainShape& domain, const Point& x) {
    return domain.bbox().contains(x, 1e-12 * std::max(1.0, domain.bbox().diameter())) && domain.contains(x);
}

double field_scale(const SampledField& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.active(i)) s = std::max(s, std::abs(f.values[i]));
    }
    return s;
}

}  // namespace

// --- Hardy quotients ---------------------------------------------------------

HardyQuotient hardy_quotient_ratio(const SampledField& u, const SampledField& g, const DomainShape& domain, double p) {
    require(p > 0.0, ErrorKind::parameter, "exponent must be positive");
    require(u.size() == g.size(), ErrorKind::precondition, "u and g live on different clouds");
    HardyQuotient q;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u.active(i)) continue;
        const Point& x = u.point(i);
        if (!inside_open(domain, x)) {
            if (u.values[i] != 0.0) fail(ErrorKind::precondition, "u is not supported in the domain");
            continue;
        }
        ++q.points;
        const double d = domain.distance_unchecked(x);
        q.numerator += u.measure(i) * std::pow(std::abs(u.values[i]) / d, p);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.active(i)) q.denominator += g.measure(i) * std::pow(std::max(0.0, g.values[i]), p);
    }
    if (q.denominator > 0.0) {
        q.ratio = q.numerator / q.denominator;
    } else if (q.numerator > 0.0) {
        q.infinite = true;
        q.ratio = kInf;
    }
    return q;
}

GradientCandidate lp_minimal_gradient(const SampledField& f, double p, const LPOptions& lp) {
    require(p > 0.0 && p <= 1.0, ErrorKind::parameter, "exponent must lie in (0, 1]");
    const ConstraintSet cs = build_constraints(f);
    const MinimalGradientLP m = make_min_gradient_lp(f, cs);
    GradientCandidate out;
    out.exponent = p;
    std::vector<double> g;
    if (p == 1.0) {
        const LPSolution s = solve_min_gradient_p1(m, lp);
        require(s.status == LPStatus::optimal, ErrorKind::numerical, "minimal gradient LP did not reach an optimum");
        g.assign(s.primal.begin(), s.primal.begin() + static_cast<std::ptrdiff_t>(f.size()));
        out.provenance = Provenance::lp_minimal;
    } else {
        g = min_gradient_quasinorm_p_lt_1(m, p, QuasiMode::irls, lp).g;
        out.provenance = Provenance::irls_bound;
    }
    for (double& v : g) v = std::max(0.0, v);
    out.g = f.with_values(std::move(g));
    const FeasibilityReport rep = verify_candidate(f, out.g, cs, 1e-9 * std::max(1.0, field_scale(f)));
    out.slack = rep.slack;
    out.feasible = rep.feasible;
    return out;
}

ReflectionReport reflection_hardy_check(const SampledField& u, const DomainShape& domain, const SampledField& g,
                                        const ReflectionOptions& opts) {
    require(domain.kind() == DomainKind::graph, ErrorKind::unsupported, "reflection needs a graph domain");
    require(u.size() == g.size(), ErrorKind::precondition, "u and g live on different clouds");
    const MetricCloud& cloud = *u.cloud;
    const BoundingBox box = cloud.bbox();
    const double slack = 0.5 * cloud.resolution();
    ReflectionReport rep;
    rep.geometric_c1 = reflection_constant(domain);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u.active(i)) continue;
        const Point& x = cloud.point(i);
        if (!domain.contains(x)) {
            if (opts.require_vanishing && u.values[i] != 0.0) {
                fail(ErrorKind::precondition, "u does not vanish outside the domain");
            }
            continue;
        }
        const double d = domain.distance_unchecked(x);
        if (opts.collar > 0.0 && d > opts.collar) continue;
        Point hx;
        try {
            hx = lipschitz_reflection(domain, x);
        } catch (const Error&) {
            ++rep.skipped;
            continue;
        }
        if (!box.contains(hx, slack)) {
            ++rep.skipped;
            continue;
        }
        const std::size_t j = cloud.nearest(hx);
        ++rep.checked;
        const double uj = u.active(j) ? u.values[j] : 0.0;
        const double diff = std::abs(u.values[i] - uj);
        if (u.values[i] != 0.0) rep.max_difference_ratio = std::max(rep.max_difference_ratio, diff / std::abs(u.values[i]));
        if (diff == 0.0) continue;
        const double den = d * (g.values[i] + (g.active(j) ? g.values[j] : 0.0));
        if (den <= 0.0) {
            rep.infinite = true;
            rep.empirical_c1 = kInf;
            ++rep.violations;
            continue;
        }
        const double c = diff / den;
        rep.empirical_c1 = std::max(rep.empirical_c1, c);
        if (c > rep.geometric_c1 * (1.0 + 1e-12)) ++rep.violations;
    }
    return rep;
}

// --- u = 1 / log(1/x) ----------------------------------------------------------

CounterexampleReport counterexample_4_1(double h_min, double delta) {
    require(h_min > 0.0 && h_min < std::exp(-2.0), ErrorKind::parameter, "h_min must lie in (0, e^-2)");
    require(delta > 0.0, ErrorKind::parameter, "grid step must be positive");
    const double top = std::log(1.0 / h_min);
    const auto cells = static_cast<std::size_t>(std::ceil((top - 1.0) / delta - 1e-12));
    const double tau = (top - 1.0) / static_cast<double>(cells);

    CounterexampleReport r;
    r.h_min = h_min;
    r.delta = tau;
    r.cells = cells;
    r.x.resize(cells + 1);
    r.u.resize(cells + 1);
    std::vector<double> t(cells + 1);
    for (std::size_t k = 0; k <= cells; ++k) {
        t[k] = k == cells ? 1.0 : top - static_cast<double>(k) * tau;
        r.x[k] = std::exp(-t[k]);
        r.u[k] = 1.0 / t[k];
    }
    for (std::size_t k = 0; k < cells; ++k) {
        r.derivative_l1 += std::abs(r.u[k + 1] - r.u[k]);
        // (u(x_k) / x_k) (x_k+1 - x_k) with x_k+1 / x_k = e^(t_k - t_k+1)
        r.hardy_sum += r.u[k] * std::expm1(t[k] - t[k + 1]);
    }
    r.u_top = r.u[cells];
    r.derivative_l1_exact = 1.0 - 1.0 / top;
    r.hardy_integral = std::log(top);
    return r;
}

// --- Hausdorff content -------------------------------------------------------

bool verify_cover(const std::vector<Point>& e, const std::vector<Ball>& cover) {
    for (const Point& x : e) {
        bool hit = false;
        for (const Ball& b : cover) {
            if (dist(x, b.center) <= b.radius * (1.0 + 1e-12)) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

ContentEstimate hausdorff_content(const std::vector<Point>& e, double s, const ContentOptions& opts) {
    require(s > 0.0, ErrorKind::parameter, "content exponent must be positive");
    ContentEstimate est;
    est.s = s;
    est.points = e.size();
    if (e.empty()) {
        est.cover_kind = "empty";
        return est;
    }
    const std::size_t n = e.size();
    std::vector<double> nn(n, kInf);
    double diam = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = dist(e[i], e[j]);
            nn[i] = std::min(nn[i], d);
            nn[j] = std::min(nn[j], d);
            diam = std::max(diam, d);
        }
    }
    double finest = opts.finest;
    if (finest <= 0.0) {
        finest = *std::min_element(nn.begin(), nn.end());
        require(std::isfinite(finest), ErrorKind::parameter, "a single point needs an explicit finest radius");
        require(finest > 0.0, ErrorKind::degenerate, "duplicate points in E");
    }
    est.finest = finest;
    const double coarsest = std::max(opts.coarsest > 0.0 ? opts.coarsest : diam, finest);
    std::vector<double> ladder{finest};
    while (ladder.back() < coarsest) ladder.push_back(2.0 * ladder.back());

    // Greedy cover.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nn[a] > nn[b]; });
    std::vector<char> covered(n, 0);
    std::vector<Ball> greedy;
    double greedy_cost = 0.0;
    std::vector<double> dists;
    for (std::size_t c : order) {
        if (covered[c]) continue;
        dists.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (!covered[j]) dists.push_back(dist(e[c], e[j]));
        }
        std::sort(dists.begin(), dists.end());
        double best_rate = kInf, best_r = ladder.back();
        for (double r : ladder) {
            const auto count = static_cast<double>(std::upper_bound(dists.begin(), dists.end(), r) - dists.begin());
            const double rate = std::pow(r, s) / count;
            if (rate < best_rate) {
                best_rate = rate;
                best_r = r;
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (dist(e[c], e[j]) <= best_r) covered[j] = 1;
        }
        greedy.push_back({e[c], best_r});
        greedy_cost += std::pow(best_r, s);
    }
    est.upper = greedy_cost;
    est.cover = std::move(greedy);
    est.cover_kind = "greedy";

    // One ball about the bounding-box center.
    Point lo = e[0], hi = e[0];
    for (const Point& x : e) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], x[a]);
            hi[a] = std::max(hi[a], x[a]);
        }
    }
    const Point mid = 0.5 * (lo + hi);
    double reach = finest;
    for (const Point& x : e) reach = std::max(reach, dist(x, mid));
    if (std::pow(reach, s) < est.upper) {
        est.upper = std::pow(reach, s);
        est.cover = {{mid, reach}};
        est.cover_kind = "single";
    }

    // Dyadic boxes whose half-diagonal is a ladder radius.
    int dim = 1;
    for (int a = 0; a < 3; ++a) {
        if (hi[a] > lo[a]) dim = a + 1;
    }
    for (double r : ladder) {
        const double side = 2.0 * r / std::sqrt(static_cast<double>(dim));
        std::unordered_map<std::uint64_t, Point> boxes;
        for (const Point& x : e) {
            std::uint64_t key = 0;
            Point center{};
            for (int a = 0; a < 3; ++a) {
                const auto k = static_cast<std::int64_t>(std::floor((x[a] - lo[a]) / side));
                key = key * 2097152u + static_cast<std::uint64_t>(k & 0x1FFFFF);
                center[a] = a < dim ? lo[a] + (static_cast<double>(k) + 0.5) * side : x[a];
            }
            boxes.emplace(key, center);
        }
        const double cost = static_cast<double>(boxes.size()) * std::pow(r, s);
        if (cost < est.upper) {
            est.upper = cost;
            est.cover.clear();
            for (const auto& [k, c] : boxes) est.cover.push_back({c, r});
            std::sort(est.cover.begin(), est.cover.end(), [](const Ball& a, const Ball& b) { return a.center < b.center; });
            est.cover_kind = "boxes";
        }
    }

    // Mass distribution: any cover ball B(x, r) meeting p lies in B(p, 2r).
    const double rho0 = 2.0 * finest;
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dists.resize(n);
        for (std::size_t j = 0; j < n; ++j) dists[j] = dist(e[i], e[j]);
        std::sort(dists.begin(), dists.end());
        const auto first = static_cast<std::size_t>(std::upper_bound(dists.begin(), dists.end(), rho0) - dists.begin());
        sup = std::max(sup, static_cast<double>(first) / std::pow(rho0, s));
        for (std::size_t k = first; k < n; ++k) {
            if (k + 1 < n && dists[k + 1] == dists[k]) continue;
            sup = std::max(sup, static_cast<double>(k + 1) / std::pow(dists[k], s));
        }
    }
    est.lower = static_cast<double>(n) / (std::pow(2.0, s) * sup);
    return est;
}

ContentEstimate merge_content(const ContentEstimate& a, const ContentEstimate& b) {
    if (a.points == 0) return b;
    if (b.points == 0) return a;
    require(a.s == b.s, ErrorKind::parameter, "content exponents differ");
    require(a.finest == b.finest, ErrorKind::parameter, "content resolutions differ");
    ContentEstimate m = a;
    m.points = a.points + b.points;
    m.upper = a.upper + b.upper;
    m.lower = std::max(a.lower, b.lower);
    m.cover.insert(m.cover.end(), b.cover.begin(), b.cover.end());
    m.cover_kind = "union";
    return m;
}

std::vector<Point> segment_samples(const Point& a, const Point& b, double spacing) {
    require(spacing > 0.0, ErrorKind::parameter, "spacing must be positive");
    const auto k = static_cast<std::size_t>(std::ceil(dist(a, b) / spacing - 1e-9));
    std::vector<Point> out;
    for (std::size_t i = 0; i <= k; ++i) {
        const double t = k == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(k);
        out.push_back(a + t * (b - a));
    }
    return out;
}

std::vector<Point> square_boundary_samples(const Point& lo, double side, double spacing) {
    const Point c[4] = {lo, lo + Point{side, 0, 0}, lo + Point{side, side, 0}, lo + Point{0, side, 0}};
    std::vector<Point> out;
    for (int k = 0; k < 4; ++k) {
        auto seg = segment_samples(c[k], c[(k + 1) % 4], spacing);
        out.insert(out.end(), seg.begin(), seg.end() - 1);
    }
    return out;
}

std::vector<Point> cantor_samples(int levels, int pieces, int keep, std::uint64_t seed) {
    require(levels >= 0 && pieces >= 2 && keep >= 1 && keep < pieces, ErrorKind::parameter,
            "need levels >= 0 and 1 <= keep < pieces");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
    std::vector<int> idx(static_cast<std::size_t>(pieces));
    for (int l = 0; l < levels; ++l) {
        std::vector<std::pair<double, double>> next;
        for (const auto& [a, b] : iv) {
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            std::sort(idx.begin(), idx.begin() + keep);
            const double w = (b - a) / pieces;
            for (int k = 0; k < keep; ++k) next.emplace_back(a + idx[k] * w, a + (idx[k] + 1) * w);
        }
        iv = std::move(next);
    }
    std::vector<Point> out;
    for (const auto& [a, b] : iv) out.push_back({0.5 * (a + b), 0, 0});
    return out;
}

std::vector<Point> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::io, "cannot read " + path);
    std::vector<Point> out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        Point x{};
        int k = 0;
        double v;
        while (ls >> v) {
            require(k < 3, ErrorKind::io, "more than 3 coordinates in " + path);
            x[k++] = v;
        }
        require(k > 0 && ls.eof(), ErrorKind::io, "malformed point line in " + path);
        out.push_back(x);
    }
    return out;
}

// --- Capacity ----------------------------------------------------------------

CapacityEstimate hardy_capacity(const CloudPtr& cloud, const std::vector<std::uint8_t>& in_e,
                                const std::vector<std::uint8_t>& in_u, double p, const CapacityOptions& opts) {
    require(p > 0.0 && p <= 1.0, ErrorKind::parameter, "capacity exponent must lie in (0, 1]");
    const std::size_t n = cloud->size();
    require(in_e.size() == n && in_u.size() == n, ErrorKind::precondition, "membership flags do not match the cloud");
    CapacityEstimate est;
    est.p = p;
    est.witness.assign(n, 0.0);
    std::vector<std::size_t> e_idx, out_idx;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_e[i]) {
            require(in_u[i] != 0, ErrorKind::precondition, "E must lie inside U");
            e_idx.push_back(i);
        }
        if (!in_u[i]) out_idx.push_back(i);
    }
    est.e_points = e_idx.size();
    if (e_idx.empty()) return est;
    require(!out_idx.empty(), ErrorKind::degenerate, "U^c holds no sample; the separation is undefined");

    double sep = kInf;
    for (std::size_t i : e_idx) {
        for (std::size_t j : out_idx) sep = std::min(sep, dist(cloud->point(i), cloud->point(j)));
    }
    require(sep > 0.0, ErrorKind::degenerate, "E and U^c are not separated");
    est.separation = sep;
    est.witness_lipschitz = 1.0 / sep;
    for (std::size_t i = 0; i < n; ++i) {
        double de = kInf;
        for (std::size_t k : e_idx) de = std::min(de, dist(cloud->point(i), cloud->point(k)));
        est.witness[i] = std::max(0.0, 1.0 - de / sep);
        if (est.witness[i] > 0.0 && est.witness[i] < 1.0) est.strip_measure += cloud->measure(i);
    }

    const SampledField phi(cloud, est.witness);
    ConstraintParams cp;
    if (opts.max_distance > 0.0) {
        cp.mode = RestrictionMode::scale;
        cp.max_distance = opts.max_distance;
    }
    const MinimalGradientLP m = make_min_gradient_lp(phi, build_constraints(phi, cp));
    if (p == 1.0) {
        const LPSolution s = solve_min_gradient_p1(m, opts.lp);
        require(s.status == LPStatus::optimal, ErrorKind::numerical, "witness LP did not reach an optimum");
        est.upper = s.primal_objective;
        CapacityLPOptions co;
        co.max_distance = opts.max_distance;
        co.lp = opts.lp;
        const CapacityLPResult c = solve_capacity_lp(*cloud, in_e, in_u, co);
        require(c.solution.status == LPStatus::optimal, ErrorKind::numerical, "capacity LP did not reach an optimum");
        est.lp_value = c.value;
        est.lp_certified = c.solution.certified;
    } else {
        est.upper = min_gradient_quasinorm_p_lt_1(m, p, QuasiMode::irls, opts.lp).value;
        est.upper_is_irls = true;
    }
    return est;
}

// --- Fatness -----------------------------------------------------------------

FatnessReport fatness_probe(const std::function<bool(const Point&)>& in_complement, int dim, double p,
                            const std::vector<Point>& samples, const std::vector<double>& radii,
                            const FatnessOptions& opts) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::parameter, "dimension must be 1..3");
    require(p > 0.0 && p <= 1.0, ErrorKind::parameter, "capacity exponent must lie in (0, 1]");
    require(opts.points_per_radius >= 1, ErrorKind::parameter, "points_per_radius must be positive");
    FatnessReport rep;
    rep.dim = dim;
    rep.p = p;
    rep.s = opts.content_exponent > 0.0 ? opts.content_exponent : dim - p;
    require(rep.s > 0.0, ErrorKind::parameter, "content exponent must be positive");
    rep.capacity_upper_bounds = p < 1.0;
    for (double r : radii) require(r > 0.0, ErrorKind::parameter, "radii must be positive");

    const std::size_t total = samples.size() * radii.size();
    rep.samples.resize(total);
    const int m = opts.points_per_radius;
    const int half = static_cast<int>(std::ceil(2.5 * m));
    std::vector<std::string> errors(total);

#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < total; ++t) {
        try {
            const Point& x = samples[t / radii.size()];
            const double r = radii[t % radii.size()];
            const double h = r / m;
            std::array<int, 3> shape{1, 1, 1};
            Point origin = x;
            for (int a = 0; a < dim; ++a) {
                shape[a] = 2 * half + 1;
                origin[a] = x[a] - half * h;
            }
            auto cloud = std::make_shared<const MetricCloud>(MetricCloud::grid(origin, h, shape, dim));
            std::vector<std::uint8_t> in_e(cloud->size(), 0), in_u(cloud->size(), 0);
            std::vector<Point> e;
            for (std::size_t i = 0; i < cloud->size(); ++i) {
                const Point& y = cloud->point(i);
                const double d = dist(x, y);
                in_u[i] = d < 2.0 * r * (1.0 - 1e-12) ? 1 : 0;
                if (d <= r * (1.0 + 1e-12) && in_complement(y)) {
                    in_e[i] = 1;
                    e.push_back(y);
                }
            }
            FatnessSample& fs = rep.samples[t];
            fs.x = x;
            fs.r = r;
            CapacityOptions co;
            co.max_distance = opts.pair_reach > 0.0 ? opts.pair_reach * h * (1.0 + 1e-9) : 0.0;
            co.lp = opts.lp;
            if (!e.empty()) {
                if (p == 1.0) {
                    CapacityLPOptions lo;
                    lo.max_distance = co.max_distance;
                    lo.lp = opts.lp;
                    fs.capacity = solve_capacity_lp(*cloud, in_e, in_u, lo).value;
                } else {
                    fs.capacity = hardy_capacity(cloud, in_e, in_u, p, co).upper;
                }
                ContentOptions cop;
                cop.finest = h;
                const ContentEstimate ce = hausdorff_content(e, rep.s, cop);
                fs.content_upper = ce.upper / std::pow(r, rep.s);
                fs.content_lower = ce.lower / std::pow(r, rep.s);
            }
            fs.capacity_ratio = fs.capacity / std::pow(r, dim - p);
        } catch (const std::exception& ex) {
            errors[t] = ex.what();
        }
    }
    for (const auto& msg : errors) require(msg.empty(), ErrorKind::numerical, "fatness probe: " + msg);

    if (!rep.samples.empty()) {
        rep.min_capacity_ratio = rep.min_content_upper = rep.min_content_lower = kInf;
        for (const auto& fs : rep.samples) {
            rep.min_capacity_ratio = std::min(rep.min_capacity_ratio, fs.capacity_ratio);
            rep.max_capacity_ratio = std::max(rep.max_capacity_ratio, fs.capacity_ratio);
            rep.min_content_upper = std::min(rep.min_content_upper, fs.content_upper);
            rep.min_content_lower = std::min(rep.min_content_lower, fs.content_lower);
        }
    }
    return rep;
}

FatnessReport fatness_probe(const DomainShape& domain, double p, const std::vector<Point>& samples,
                            const std::vector<double>& radii, const FatnessOptions& opts) {
    return fatness_probe([&](const Point& y) { return !domain.contains(y); }, domain.dim(), p, samples, radii, opts);
}

// --- Pointwise bound from capacity --------------------------------------------

PointwiseBoundReport capacity_pointwise_bound_check(const SampledField& u, const std::vector<std::uint8_t>& in_k,
                                                    const Ball& ball, const SampledField& g, double q) {
    require(q > 0.0, ErrorKind::parameter, "exponent must be positive");
    require(ball.radius > 0.0, ErrorKind::parameter, "ball radius must be positive");
    require(u.size() == g.size() && in_k.size() == u.size(), ErrorKind::precondition, "inputs live on different clouds");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (in_k[i] && u.active(i) && u.values[i] != 0.0) fail(ErrorKind::precondition, "u does not vanish on K");
    }
    const SampledField mg = power_maximal_composite(g, q);
    PointwiseBoundReport rep;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u.active(i) || !ball.contains(u.point(i))) continue;
        ++rep.points;
        const double a = std::abs(u.values[i]);
        if (a == 0.0) continue;
        const double den = ball.radius * mg.values[i];
        const double c = den > 0.0 ? a / den : kInf;
        if (c > rep.constant) {
            rep.constant = c;
            rep.worst = i;
        }
    }
    rep.infinite = std::isinf(rep.constant);
    if (rep.constant == 0.0) return rep;

    const Point& x = u.point(rep.worst);
    const double floor = u.cloud->resolution();
    for (double r = ball.radius; r >= floor; r *= 0.5) {
        double sum = 0.0, mass = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (!u.active(j) || dist(u.point(j), x) > r) continue;
            sum += u.measure(j) * u.values[j];
            mass += u.measure(j);
        }
        rep.chain_averages.push_back(sum / mass);
    }
    for (std::size_t k = 0; k + 1 < rep.chain_averages.size(); ++k) {
        rep.chain_sum += std::abs(rep.chain_averages[k] - rep.chain_averages[k + 1]);
    }
    if (!rep.chain_averages.empty()) rep.chain_sum += std::abs(rep.chain_averages.back() - u.values[rep.worst]);
    return rep;
}

// --- Reports -----------------------------------------------------------------

namespace {

nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

std::string content_json(const ContentEstimate& c) {
    nlohmann::json j;
    j["s"] = c.s;
    j["points"] = c.points;
    j["finest"] = c.finest;
    j["upper"] = number(c.upper);
    j["lower"] = number(c.lower);
    j["cover_kind"] = c.cover_kind;
    j["cover"] = nlohmann::json::array();
    for (const Ball& b : c.cover) j["cover"].push_back({{"center", b.center}, {"radius", b.radius}});
    return j.dump(2);
}

std::string capacity_json(const CapacityEstimate& c) {
    nlohmann::json j;
    j["p"] = c.p;
    j["e_points"] = c.e_points;
    j["separation"] = number(c.separation);
    j["witness_lipschitz"] = number(c.witness_lipschitz);
    j["strip_measure"] = c.strip_measure;
    j["upper"] = number(c.upper);
    j["upper_is_irls"] = c.upper_is_irls;
    j["lp_value"] = number(c.lp_value);
    j["lp_certified"] = c.lp_certified;
    return j.dump(2);
}

std::string counterexample_json(const CounterexampleReport& r) {
    nlohmann::json j;
    j["h_min"] = r.h_min;
    j["delta"] = r.delta;
    j["cells"] = r.cells;
    j["u_top"] = r.u_top;
    j["derivative_l1"] = r.derivative_l1;
    j["derivative_l1_exact"] = r.derivative_l1_exact;
    j["hardy_sum"] = r.hardy_sum;
    j["hardy_integral"] = r.hardy_integral;
    return j.dump(2);
}

std::string fatness_json(const FatnessReport& r) {
    nlohmann::json j;
    j["dim"] = r.dim;
    j["p"] = r.p;
    j["s"] = r.s;
    j["min_capacity_ratio"] = number(r.min_capacity_ratio);
    j["max_capacity_ratio"] = number(r.max_capacity_ratio);
    j["min_content_upper"] = number(r.min_content_upper);
    j["min_content_lower"] = number(r.min_content_lower);
    j["capacity_upper_bounds"] = r.capacity_upper_bounds;
    j["samples"] = nlohmann::json::array();
    for (const auto& s : r.samples) {
        j["samples"].push_back({{"x", s.x}, {"r", s.r}, {"capacity", s.capacity}, {"capacity_ratio", s.capacity_ratio},
                                {"content_upper", s.content_upper}, {"content_lower", s.content_lower}});
    }
    return j.dump(2);
}

}  // namespace hsob
