#include "hsob/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace hsob {

const char* to_string(CoverRole role) {
    switch (role) {
        case CoverRole::whitney: return "whitney";
        case CoverRole::chain: return "chain";
        case CoverRole::greedy: return "greedy";
    }
    return "?";
}

std::vector<Ball> greedy_disjoint_subcover(const std::vector<Ball>& balls) {
    std::vector<std::size_t> order(balls.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return balls[a].radius > balls[b].radius; });
    std::vector<Ball> kept;
    for (std::size_t i : order) {
        const Ball& b = balls[i];
        const bool disjoint =
            std::none_of(kept.begin(), kept.end(), [&](const Ball& k) { return intersects(k, b); });
        if (disjoint) kept.push_back(b);
    }
    return kept;
}

// --- BallIndex ---------------------------------------------------------------

std::uint64_t BallIndex::key(std::int64_t a, std::int64_t b, std::int64_t c) {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    };
    return mix(mix(mix(0, static_cast<std::uint64_t>(a)), static_cast<std::uint64_t>(b)),
               static_cast<std::uint64_t>(c));
}

BallIndex::BallIndex(const std::vector<Ball>& balls, double reach) {
    if (balls.empty()) return;
    std::map<int, std::size_t> slot;
    dim_ = 3;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        const double r = std::max(balls[i].radius, 1e-300);
        const int lvl = static_cast<int>(std::floor(std::log2(r)));
        auto [it, fresh] = slot.try_emplace(lvl, levels_.size());
        if (fresh) {
            Level L;
            L.cell = 2.0 * reach * std::ldexp(1.0, lvl + 1);
            levels_.push_back(std::move(L));
        }
        Level& L = levels_[it->second];
        const Point& c = balls[i].center;
        L.buckets[key(static_cast<std::int64_t>(std::floor(c[0] / L.cell)),
                      static_cast<std::int64_t>(std::floor(c[1] / L.cell)),
                      static_cast<std::int64_t>(std::floor(c[2] / L.cell)))]
            .push_back(static_cast<std::uint32_t>(i));
    }
}

// --- Whitney collar cover ----------------------------------------------------

namespace {

struct Cube {
    Point lo;
    double side;
};

}  // namespace

WhitneyCover::WhitneyCover(const DomainShape& domain, double eps0, const WhitneyOptions& opts)
    : domain_(domain), eps0_(eps0) {
    require(eps0 > 0.0, ErrorKind::parameter, "collar width eps0 must be positive");
    require(opts.radius_factor >= 0.25 && opts.radius_factor <= 0.5, ErrorKind::parameter,
            "radius factor must lie in [1/4, 1/2]");
    if (!domain.collar_fits(10.0 * eps0)) {
        std::ostringstream os;
        os << "collar A_{10 eps0} with eps0 = " << eps0 << " escapes the bounding box";
        fail(ErrorKind::construction, os.str());
    }
    floor_ = opts.floor > 0.0 ? opts.floor : eps0 / 64.0;
    require(floor_ < eps0, ErrorKind::parameter, "floor must be below eps0");

    const int n = domain.dim();
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const BoundingBox& bb = domain.bbox();
    const double root_side = bb.max_extent();
    const double min_circ = floor_ / 16.0;
    const double reach = 6.0 * eps0;

    cover_.role = CoverRole::whitney;
    std::vector<Cube> stack{{bb.lo, root_side}};
    while (!stack.empty()) {
        const Cube q = stack.back();
        stack.pop_back();
        const double circ = 0.5 * q.side * sqrt_n;
        Point c = q.lo;
        for (int i = 0; i < n; ++i) c[i] += 0.5 * q.side;
        const double d = domain.distance_unchecked(c);
        const bool inside = domain.contains(c) || d == 0.0;
        if (inside && d > circ) continue;   // cube inside the domain
        if (!inside && d - circ > reach) continue;  // cube beyond the collar
        if (!inside && d >= 3.0 * circ) {
            if (d <= reach && bb.contains(c)) cover_.balls.push_back({c, opts.radius_factor * d});
            continue;
        }
        if (0.5 * circ < min_circ) continue;
        const double h = 0.5 * q.side;
        const int children = 1 << n;
        for (int m = 0; m < children; ++m) {
            Cube child{q.lo, h};
            for (int i = 0; i < n; ++i) {
                if (m & (1 << i)) child.lo[i] += h;
            }
            stack.push_back(child);
        }
    }
    if (cover_.balls.empty()) fail(ErrorKind::construction, "Whitney construction produced no balls");
    // Deterministic order: by radius descending, then lexicographic center.
    std::sort(cover_.balls.begin(), cover_.balls.end(), [](const Ball& a, const Ball& b) {
        if (a.radius != b.radius) return a.radius > b.radius;
        return a.center < b.center;
    });
    index_ = BallIndex(cover_.balls, 2.0);

    // Overlap of the 2x dilations, measured at every center plus a regular grid.
    const double spacing = opts.overlap_spacing > 0.0 ? opts.overlap_spacing : eps0 / 8.0;
    int overlap = 0;
    for (const Ball& b : cover_.balls) overlap = std::max(overlap, overlap_at(b.center));
    std::array<long, 3> counts{1, 1, 1};
    for (int i = 0; i < n; ++i) counts[i] = static_cast<long>(std::floor((bb.hi[i] - bb.lo[i]) / spacing)) + 1;
    for (long a = 0; a < counts[0]; ++a) {
        for (long b = 0; b < counts[1]; ++b) {
            for (long k = 0; k < counts[2]; ++k) {
                Point x = bb.lo;
                x[0] += spacing * static_cast<double>(a);
                if (n > 1) x[1] += spacing * static_cast<double>(b);
                if (n > 2) x[2] += spacing * static_cast<double>(k);
                overlap = std::max(overlap, overlap_at(x));
            }
        }
    }
    cover_.overlap_bound = overlap;
}

double WhitneyCover::cutoff(double d) const {
    if (d < 0.5 * floor_) return 0.0;
    if (d < floor_) return 2.0 * d / floor_ - 1.0;
    if (d <= 2.0 * eps0_) return 1.0;
    if (d < 3.0 * eps0_) return (3.0 * eps0_ - d) / eps0_;
    return 0.0;
}

std::vector<std::pair<std::size_t, double>> WhitneyCover::weights_at(const Point& x) const {
    std::vector<std::pair<std::size_t, double>> out;
    if (domain_.contains(x)) return out;
    const double tau = cutoff(domain_.distance_unchecked(x));
    if (tau == 0.0) return out;
    double total = 0.0;
    index_.for_candidates(x, [&](std::size_t i) {
        const Ball& b = cover_.balls[i];
        const double w = bump(dist(x, b.center) / b.radius);
        if (w > 0.0) {
            out.emplace_back(i, w);
            total += w;
        }
    });
    if (total == 0.0) {
        out.clear();
        return out;
    }
    std::sort(out.begin(), out.end());
    for (auto& [i, w] : out) w = tau * w / total;
    return out;
}

double WhitneyCover::partition_sum(const Point& x) const {
    double s = 0.0;
    for (const auto& [i, w] : weights_at(x)) s += w;
    return s;
}

int WhitneyCover::overlap_at(const Point& x) const {
    int count = 0;
    index_.for_candidates(x, [&](std::size_t i) {
        if (cover_.balls[i].dilate(2.0).contains(x)) ++count;
    });
    return count;
}

double WhitneyCover::gradient_constant(const std::vector<Point>& samples) const {
    const int n = domain_.dim();
    double worst = 0.0;
    for (const Point& x : samples) {
        const auto w0 = weights_at(x);
        for (const auto& [i, w] : w0) {
            const double rho = cover_.balls[i].radius;
            const double h = 1e-4 * rho;
            double g2 = 0.0;
            for (int a = 0; a < n; ++a) {
                Point xp = x, xm = x;
                xp[a] += h;
                xm[a] -= h;
                auto at = [&](const Point& z) {
                    for (const auto& [j, v] : weights_at(z)) {
                        if (j == i) return v;
                    }
                    return 0.0;
                };
                const double g = (at(xp) - at(xm)) / (2.0 * h);
                g2 += g * g;
            }
            worst = std::max(worst, std::sqrt(g2) * rho);
        }
    }
    return worst;
}

WhitneyCover whitney_collar_cover(const DomainShape& domain, double eps0, const WhitneyOptions& opts) {
    return WhitneyCover(domain, eps0, opts);
}

// --- Uniform chains ----------------------------------------------------------

namespace {

double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

bool segments_touch(const Point& p, const Point& q, const Point& a, const Point& b) {
    const double d1 = cross2(q - p, a - p);
    const double d2 = cross2(q - p, b - p);
    const double d3 = cross2(b - a, p - a);
    const double d4 = cross2(b - a, q - a);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on = [](const Point& u, const Point& v, const Point& w, double d) {
        return d == 0.0 && std::min(u[0], v[0]) <= w[0] && w[0] <= std::max(u[0], v[0]) &&
               std::min(u[1], v[1]) <= w[1] && w[1] <= std::max(u[1], v[1]);
    };
    return on(p, q, a, d1) || on(p, q, b, d2) || on(a, b, p, d3) || on(a, b, q, d4);
}

bool polygon_visible(const DomainShape& poly, const Point& p, const Point& q) {
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (segments_touch(p, q, v[i], v[(i + 1) % v.size()])) return false;
    }
    return poly.contains(0.5 * (p + q));
}

bool segment_inside_sampled(const DomainShape& domain, const Point& p, const Point& q) {
    constexpr int kSamples = 256;
    for (int k = 0; k <= kSamples; ++k) {
        const double t = static_cast<double>(k) / kSamples;
        if (!domain.contains(p + t * (q - p))) return false;
    }
    return true;
}

std::vector<Point> polygon_path(const DomainShape& poly, const Point& x, const Point& y) {
    if (polygon_visible(poly, x, y)) return {x, y};
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    double min_edge = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) min_edge = std::min(min_edge, dist(v[i], v[(i + 1) % n]));
    std::vector<Point> nodes{x, y};
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[(i + n - 1) % n];
        const Point& b = v[i];
        const Point& c = v[(i + 1) % n];
        if (cross2(b - a, c - b) >= 0.0) continue;  // convex corner (CCW orientation)
        auto inward = [](const Point& e) {
            const double l = norm(e);
            return Point{-e[1] / l, e[0] / l, 0.0};
        };
        Point dir = inward(b - a) + inward(c - b);
        dir = (1.0 / norm(dir)) * dir;
        double delta = 0.1 * std::min(min_edge, dist(x, y));
        for (int tries = 0; tries < 30; ++tries, delta *= 0.5) {
            const Point cand = b + delta * dir;
            if (poly.contains(cand) && poly.distance_unchecked(cand) > 0.3 * delta) {
                nodes.push_back(cand);
                break;
            }
        }
    }
    // Dijkstra over the visibility graph.
    const std::size_t m = nodes.size();
    std::vector<double> best(m, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev(m, m);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    best[0] = 0.0;
    pq.emplace(0.0, 0);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > best[u]) continue;
        if (u == 1) break;
        for (std::size_t w = 0; w < m; ++w) {
            if (w == u) continue;
            const double nd = d + dist(nodes[u], nodes[w]);
            if (nd < best[w] && polygon_visible(poly, nodes[u], nodes[w])) {
                best[w] = nd;
                prev[w] = u;
                pq.emplace(nd, w);
            }
        }
    }
    if (!std::isfinite(best[1])) fail(ErrorKind::construction, "no interior path joins the chain endpoints");
    std::vector<Point> path;
    for (std::size_t u = 1; u != m; u = prev[u]) {
        path.push_back(nodes[u]);
        if (u == 0) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

struct Polyline {
    std::vector<Point> pts;
    std::vector<double> cum;

    explicit Polyline(std::vector<Point> p) : pts(std::move(p)), cum(pts.size(), 0.0) {
        for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + dist(pts[i - 1], pts[i]);
    }
    double length() const { return cum.back(); }
    Point at(double t) const {
        t = std::clamp(t, 0.0, length());
        auto it = std::upper_bound(cum.begin(), cum.end(), t);
        std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cum.begin() - 1, 0));
        if (k + 1 >= pts.size()) return pts.back();
        const double seg = cum[k + 1] - cum[k];
        const double w = seg > 0.0 ? (t - cum[k]) / seg : 0.0;
        return pts[k] + w * (pts[k + 1] - pts[k]);
    }
};

}  // namespace

ChainOfBalls uniform_chain(const DomainShape& domain, const Point& x, const Point& y, double c,
                           const ChainOptions& opts) {
    require(c >= 1.0, ErrorKind::parameter, "uniformity constant must be at least 1");
    ChainOfBalls chain;
    chain.x = x;
    chain.y = y;
    const double span = dist(x, y);
    if (span == 0.0) return chain;
    require(domain.contains(x) && domain.contains(y), ErrorKind::precondition, "chain endpoints must be interior");

    std::vector<Point> path;
    if (domain.kind() == DomainKind::polygon) {
        path = polygon_path(domain, x, y);
    } else {
        if (!segment_inside_sampled(domain, x, y)) {
            fail(ErrorKind::construction, "segment leaves the domain and no path search exists for this kind");
        }
        path = {x, y};
    }
    chain.path = path;
    const Polyline line(path);
    const double total = line.length();
    const double floor = opts.floor_fraction * span;

    auto radius_at = [&](double t) {
        const Point z = line.at(t);
        return std::min(std::min(t, total - t) / c, domain.distance_unchecked(z) / 6.0 * (1.0 - 1e-9));
    };
    const double step_scale = std::min(1.0, 0.45 * c);

    // Walk from the middle toward one end; returns radii/positions in walking order.
    auto walk = [&](double t0, int sign, std::vector<Ball>& out) {
        double t = t0;
        double r = radius_at(t);
        while (true) {
            t += sign * step_scale * r;
            const double tt = std::clamp(t, 0.0, total);
            const double rn = radius_at(tt);
            if (rn < floor || tt <= 0.0 || tt >= total) break;
            out.push_back({line.at(tt), rn});
            r = rn;
            if (out.size() > opts.max_balls) {
                ChainOfBalls partial = chain;
                partial.balls = out;
                throw ChainError("chain walk exhausted its ball budget", std::move(partial));
            }
        }
    };

    const double tm = 0.5 * total;
    const double rm = radius_at(tm);
    if (!(rm > 0.0)) fail(ErrorKind::construction, "path midpoint has no clearance");
    std::vector<Ball> left, right;
    walk(tm, -1, left);
    walk(tm, +1, right);
    chain.balls.assign(left.rbegin(), left.rend());
    chain.balls.push_back({line.at(tm), rm});
    chain.balls.insert(chain.balls.end(), right.begin(), right.end());

    double sum = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (const Ball& b : chain.balls) {
        sum += b.radius;
        smallest = std::min(smallest, b.radius);
    }
    chain.length_constant = sum / span;
    chain.truncation_radius = smallest;
    return chain;
}

ChainCheck check_chain(const DomainShape& domain, const ChainOfBalls& chain) {
    ChainCheck out;
    for (std::size_t k = 0; k < chain.balls.size(); ++k) {
        const Ball& b = chain.balls[k];
        const bool inside = domain.contains(b.center) && 6.0 * b.radius <= domain.distance_unchecked(b.center);
        if (!inside && out.inside) {
            out.inside = false;
            out.first_bad = k;
        }
        if (k + 1 < chain.balls.size()) {
            const Ball& nb = chain.balls[k + 1];
            if (!intersects(b, nb) && out.linked) {
                out.linked = false;
                out.first_bad = k;
            }
            if ((nb.radius < 0.5 * b.radius || nb.radius > 2.0 * b.radius) && out.comparable) {
                out.comparable = false;
                out.first_bad = k;
            }
        }
    }
    return out;
}

}  // namespace hsob
