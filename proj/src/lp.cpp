#include "hsob/lp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include "json.hpp"

namespace hsob {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

LPSolution certify(const PackingLP& lp, const SimplexResult& res, double tol) {
    LPSolution s;
    s.status = res.status;
    s.iterations = res.iterations;
    s.primal.resize(lp.rows);
    for (std::size_t i = 0; i < lp.rows; ++i) s.primal[i] = std::max(0.0, res.pi[i]);
    s.dual.resize(lp.cols());
    for (std::size_t j = 0; j < lp.cols(); ++j) s.dual[j] = std::max(0.0, res.y[j]);

    for (std::size_t i = 0; i < lp.rows; ++i) s.primal_objective += lp.b[i] * s.primal[i];
    for (std::size_t j = 0; j < lp.cols(); ++j) s.dual_objective += lp.c[j] * s.dual[j];

    const double cmax = std::max(max_abs(lp.c), 1e-300);
    const double bmax = std::max(max_abs(lp.b), 1e-300);
    std::vector<double> load(lp.rows, 0.0);
    for (std::size_t j = 0; j < lp.cols(); ++j) {
        double reduced = lp.c[j];
        for (const auto& e : lp.columns[j]) {
            reduced -= e.value * s.primal[e.row];
            load[e.row] += e.value * s.dual[j];
        }
        s.primal_infeasibility = std::max(s.primal_infeasibility, reduced / cmax);
    }
    for (std::size_t i = 0; i < lp.rows; ++i) {
        s.dual_infeasibility = std::max(s.dual_infeasibility, (load[i] - lp.b[i]) / bmax);
    }
    s.gap = s.primal_objective - s.dual_objective;
    s.relative_gap = std::abs(s.gap) / std::max(1.0, std::abs(s.primal_objective));
    s.exact_objective = res.exact_objective;
    s.exact = !res.exact_objective.empty();
    s.certified = s.status == LPStatus::optimal && s.relative_gap <= tol && s.primal_infeasibility <= tol &&
                  s.dual_infeasibility <= tol;
    return s;
}

LPSolution solve_certified(const PackingLP& lp, const LPOptions& opts) {
    const bool small = lp.rows * std::max<std::size_t>(lp.cols(), 1) <= opts.exact_limit;
    if (opts.force_exact) {
        require(small, ErrorKind::size, "instance too large for the rational solver");
        return certify(lp, solve_packing_exact(lp, opts.simplex), opts.tol);
    }
    LPSolution s = certify(lp, solve_packing(lp, opts.simplex), opts.tol);
    if (!s.certified && small) s = certify(lp, solve_packing_exact(lp, opts.simplex), opts.tol);
    return s;
}

PackingLP packing_of(const MinimalGradientLP& lp) {
    PackingLP p;
    p.rows = lp.size();
    p.b = lp.weights;
    for (const auto& pr : lp.pairs) {
        require(pr.i < lp.size() && pr.j < lp.size() && pr.i != pr.j, ErrorKind::precondition, "bad pair index");
        require(pr.c >= 0.0, ErrorKind::precondition, "pair bounds must be nonnegative");
        if (pr.c == 0.0) continue;
        p.columns.push_back({{pr.i, 1.0}, {pr.j, 1.0}});
        p.c.push_back(pr.c);
    }
    for (double w : lp.weights) require(w > 0.0, ErrorKind::precondition, "weights must be positive");
    return p;
}

}  // namespace

MinimalGradientLP make_min_gradient_lp(const SampledField& f, const ConstraintSet& cs) {
    require(cs.points == f.size(), ErrorKind::precondition, "constraint set does not match the field");
    MinimalGradientLP lp;
    lp.weights.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) lp.weights[i] = f.measure(i);
    lp.pairs.reserve(cs.pairs.size());
    for (const auto& p : cs.pairs) lp.pairs.push_back({p.i, p.j, p.quotient});
    return lp;
}

LPSolution solve_min_gradient_p1(const MinimalGradientLP& lp, const LPOptions& opts) {
    const PackingLP p = packing_of(lp);
    LPSolution s = solve_certified(p, opts);
    // Duals are reported per input pair, zero-bound pairs included.
    std::vector<double> dual(lp.pairs.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t j = 0; j < lp.pairs.size(); ++j) {
        if (lp.pairs[j].c > 0.0) dual[j] = s.dual[k++];
    }
    s.dual = std::move(dual);
    return s;
}

// --- Vertex enumeration ------------------------------------------------------

namespace {

constexpr int kMaxVertexDim = 8;

/// Rows G x >= h over at most 8 variables.
struct Halfspaces {
    int n = 0;
    std::vector<std::array<double, kMaxVertexDim>> g;
    std::vector<double> h;
    /// Row t is x[a] + x[b] >= h (b == a for a single variable).
    std::vector<std::array<int, 2>> support;
};

Halfspaces halfspaces_of(const MinimalGradientLP& lp) {
    Halfspaces hs;
    hs.n = static_cast<int>(lp.size());
    // Nonnegativity rows first: the zero set of a subtree is fixed before any pair row is chosen.
    for (int i = 0; i < hs.n; ++i) {
        std::array<double, kMaxVertexDim> row{};
        row[static_cast<std::size_t>(i)] = 1.0;
        hs.g.push_back(row);
        hs.h.push_back(0.0);
        hs.support.push_back({i, i});
    }
    for (const auto& pr : lp.pairs) {
        std::array<double, kMaxVertexDim> row{};
        row[pr.i] = 1.0;
        row[pr.j] = 1.0;
        hs.g.push_back(row);
        hs.h.push_back(pr.c);
        hs.support.push_back({static_cast<int>(pr.i), static_cast<int>(pr.j)});
    }
    return hs;
}

/// Calls fn(x, active) for every basic solution feasible to within a loose tolerance.
/// The chosen rows are kept in reduced echelon form, so coordinates fixed by a
/// partial choice are checked against every row they decide before going deeper.
template <class Fn>
void enumerate_vertices(const Halfspaces& hs, Fn&& fn) {
    const int n = hs.n;
    const int m = static_cast<int>(hs.g.size());
    double scale = 1.0;
    for (double v : hs.h) scale = std::max(scale, std::abs(v));
    const double feas_tol = 1e-7 * scale;

    using Row = std::array<double, kMaxVertexDim + 1>;
    struct Level {
        std::array<Row, kMaxVertexDim> rows;
        std::array<int, kMaxVertexDim> pivot;
    };
    std::vector<Level> levels(static_cast<std::size_t>(n) + 1);
    std::vector<int> active(static_cast<std::size_t>(n));
    std::array<double, kMaxVertexDim> x{};

    // zero_ok[z]: no pair row with c > 0 has both endpoints in z.
    std::vector<char> zero_ok(std::size_t{1} << n, 1);
    for (std::size_t z = 0; z < zero_ok.size(); ++z) {
        for (int t = n; t < m; ++t) {
            const auto [a, b] = hs.support[static_cast<std::size_t>(t)];
            if ((z >> a & 1) && (z >> b & 1) && hs.h[static_cast<std::size_t>(t)] > feas_tol) zero_ok[z] = 0;
        }
    }

    // Rows touching each variable, for the partial check.
    std::vector<std::vector<int>> touching(static_cast<std::size_t>(n));
    for (int t = 0; t < m; ++t) {
        const auto [a, b] = hs.support[static_cast<std::size_t>(t)];
        touching[static_cast<std::size_t>(a)].push_back(t);
        if (b != a) touching[static_cast<std::size_t>(b)].push_back(t);
    }

    std::array<char, kMaxVertexDim> fixed{};
    auto consistent = [&](const Level& lv, int depth) {
        fixed.fill(0);
        for (int k = 0; k < depth; ++k) {
            const Row& r = lv.rows[static_cast<std::size_t>(k)];
            bool single = true;
            for (int c = 0; c < n && single; ++c) single = c == lv.pivot[static_cast<std::size_t>(k)] || r[static_cast<std::size_t>(c)] == 0.0;
            if (!single) continue;
            const int p = lv.pivot[static_cast<std::size_t>(k)];
            fixed[static_cast<std::size_t>(p)] = 1;
            x[static_cast<std::size_t>(p)] = r[static_cast<std::size_t>(n)];
        }
        for (int v = 0; v < n; ++v) {
            if (!fixed[static_cast<std::size_t>(v)]) continue;
            for (int t : touching[static_cast<std::size_t>(v)]) {
                const auto [a, b] = hs.support[static_cast<std::size_t>(t)];
                if (!fixed[static_cast<std::size_t>(a)] || !fixed[static_cast<std::size_t>(b)]) continue;
                const double s = a == b ? x[static_cast<std::size_t>(a)] : x[static_cast<std::size_t>(a)] + x[static_cast<std::size_t>(b)];
                if (s < hs.h[static_cast<std::size_t>(t)] - feas_tol) return false;
            }
        }
        return true;
    };

    auto dfs = [&](auto&& self, int depth, int start, unsigned zeros) -> void {
        if (depth == n) {
            // consistent() has already checked every row at full depth.
            fn(x, active);
            return;
        }
        const Level& cur = levels[static_cast<std::size_t>(depth)];
        Level& next = levels[static_cast<std::size_t>(depth) + 1];
        for (int t = start; t <= m - (n - depth); ++t) {
            if (t >= n && !zero_ok[zeros]) return;
            Row r{};
            for (int c = 0; c < n; ++c) r[static_cast<std::size_t>(c)] = hs.g[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)];
            r[static_cast<std::size_t>(n)] = hs.h[static_cast<std::size_t>(t)];
            for (int k = 0; k < depth; ++k) {
                const double f = r[static_cast<std::size_t>(cur.pivot[static_cast<std::size_t>(k)])];
                if (f == 0.0) continue;
                const Row& e = cur.rows[static_cast<std::size_t>(k)];
                for (int c = 0; c <= n; ++c) r[static_cast<std::size_t>(c)] -= f * e[static_cast<std::size_t>(c)];
            }
            int piv = -1;
            double best = 1e-9;
            for (int c = 0; c < n; ++c) {
                if (std::abs(r[static_cast<std::size_t>(c)]) > best) {
                    best = std::abs(r[static_cast<std::size_t>(c)]);
                    piv = c;
                }
            }
            if (piv < 0) continue;
            const double inv = 1.0 / r[static_cast<std::size_t>(piv)];
            for (int c = 0; c <= n; ++c) r[static_cast<std::size_t>(c)] *= inv;
            r[static_cast<std::size_t>(piv)] = 1.0;
            for (int c = 0; c < n; ++c) {
                if (std::abs(r[static_cast<std::size_t>(c)]) < 1e-15) r[static_cast<std::size_t>(c)] = 0.0;
            }
            for (int k = 0; k < depth; ++k) {
                Row e = cur.rows[static_cast<std::size_t>(k)];
                const double f = e[static_cast<std::size_t>(piv)];
                if (f != 0.0) {
                    for (int c = 0; c <= n; ++c) e[static_cast<std::size_t>(c)] -= f * r[static_cast<std::size_t>(c)];
                    e[static_cast<std::size_t>(piv)] = 0.0;
                    for (int c = 0; c < n; ++c) {
                        if (std::abs(e[static_cast<std::size_t>(c)]) < 1e-15) e[static_cast<std::size_t>(c)] = 0.0;
                    }
                }
                next.rows[static_cast<std::size_t>(k)] = e;
                next.pivot[static_cast<std::size_t>(k)] = cur.pivot[static_cast<std::size_t>(k)];
            }
            next.rows[static_cast<std::size_t>(depth)] = r;
            next.pivot[static_cast<std::size_t>(depth)] = piv;
            if (!consistent(next, depth + 1)) continue;
            active[static_cast<std::size_t>(depth)] = t;
            self(self, depth + 1, t + 1, t < n ? zeros | 1u << t : zeros);
        }
    };
    dfs(dfs, 0, 0, 0u);
}

/// Solves the active rows exactly; returns false when singular or infeasible.
bool exact_vertex(const Halfspaces& hs, const std::vector<int>& active, std::vector<mpq_class>& x) {
    const int n = hs.n;
    std::vector<std::vector<mpq_class>> a(static_cast<std::size_t>(n), std::vector<mpq_class>(static_cast<std::size_t>(n) + 1));
    for (int k = 0; k < n; ++k) {
        const int t = active[static_cast<std::size_t>(k)];
        for (int c = 0; c < n; ++c) a[k][c] = mpq_class(hs.g[static_cast<std::size_t>(t)][static_cast<std::size_t>(c)]);
        a[k][n] = mpq_class(hs.h[static_cast<std::size_t>(t)]);
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i) {
            if (a[i][col] != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) return false;
        std::swap(a[piv], a[col]);
        for (int i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            const mpq_class f = a[i][col] / a[col][col];
            for (int c = col; c <= n; ++c) a[i][c] -= f * a[col][c];
        }
    }
    x.assign(static_cast<std::size_t>(n), mpq_class(0));
    for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    for (std::size_t t = 0; t < hs.g.size(); ++t) {
        mpq_class s(0);
        for (int c = 0; c < n; ++c) {
            if (hs.g[t][static_cast<std::size_t>(c)] != 0.0) s += mpq_class(hs.g[t][static_cast<std::size_t>(c)]) * x[c];
        }
        if (s < mpq_class(hs.h[t])) return false;
    }
    return true;
}

struct Candidate {
    double value;
    std::vector<int> active;
};

/// Vertices within a relative window of the best floating value, best first.
template <class Objective>
std::vector<Candidate> best_candidates(const Halfspaces& hs, Objective&& obj, std::size_t& visited) {
    std::vector<Candidate> cands;
    double best = std::numeric_limits<double>::infinity();
    visited = 0;
    enumerate_vertices(hs, [&](const std::array<double, kMaxVertexDim>& x, const std::vector<int>& active) {
        ++visited;
        const double v = obj(x);
        const double window = 1e-6 * std::max(1.0, std::abs(best));
        if (v > best + window) return;
        if (v < best) best = v;
        cands.push_back({v, active});
    });
    const double window = 1e-6 * std::max(1.0, std::abs(best));
    std::erase_if(cands, [&](const Candidate& c) { return c.value > best + window; });
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    return cands;
}

}  // namespace

ExactValue exact_oracle_min_gradient(const MinimalGradientLP& lp) {
    require(lp.size() <= static_cast<std::size_t>(kMaxVertexDim), ErrorKind::size, "vertex oracle handles at most 8 variables");
    require(lp.size() > 0, ErrorKind::precondition, "empty instance");
    const Halfspaces hs = halfspaces_of(lp);
    const int n = hs.n;
    ExactValue out;
    auto obj = [&](const std::array<double, kMaxVertexDim>& x) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += lp.weights[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        return s;
    };
    const auto cands = best_candidates(hs, obj, out.vertices_checked);
    bool found = false;
    mpq_class best;
    std::vector<mpq_class> x, best_x;
    for (const auto& c : cands) {
        if (!exact_vertex(hs, c.active, x)) continue;
        mpq_class v(0);
        for (int i = 0; i < n; ++i) v += mpq_class(lp.weights[static_cast<std::size_t>(i)]) * x[i];
        if (!found || v < best) {
            best = v;
            best_x = x;
            found = true;
        }
    }
    require(found, ErrorKind::numerical, "vertex oracle found no exactly feasible vertex");
    best.canonicalize();
    out.value = best.get_d();
    out.rational = best.get_str();
    for (const auto& v : best_x) out.vertex.push_back(v.get_d());
    return out;
}

// --- p < 1 -------------------------------------------------------------------

QuasiResult min_gradient_quasinorm_p_lt_1(const MinimalGradientLP& lp, double p, QuasiMode mode, const LPOptions& opts) {
    require(p > 0.0 && p < 1.0, ErrorKind::parameter, "exponent must lie in (0, 1)");
    auto objective = [&](const auto& g) {
        double s = 0.0;
        for (std::size_t i = 0; i < lp.size(); ++i) s += lp.weights[i] * std::pow(std::max(0.0, static_cast<double>(g[i])), p);
        return s;
    };
    QuasiResult out;
    double cmax = 0.0;
    for (const auto& pr : lp.pairs) cmax = std::max(cmax, pr.c);
    if (cmax == 0.0) {
        out.g.assign(lp.size(), 0.0);
        out.upper_bound = mode == QuasiMode::irls;
        return out;
    }

    if (mode == QuasiMode::vertex_oracle) {
        require(lp.size() <= 6, ErrorKind::size, "p < 1 vertex oracle handles at most 6 variables");
        const Halfspaces hs = halfspaces_of(lp);
        std::size_t visited = 0;
        auto fobj = [&](const std::array<double, kMaxVertexDim>& x) { return objective(x); };
        const auto cands = best_candidates(hs, fobj, visited);
        std::vector<mpq_class> x;
        bool found = false;
        for (const auto& c : cands) {
            if (!exact_vertex(hs, c.active, x)) continue;
            std::vector<double> g;
            for (const auto& v : x) g.push_back(v.get_d());
            const double val = objective(g);
            if (!found || val < out.value) {
                out.value = val;
                out.g = g;
                found = true;
            }
        }
        require(found, ErrorKind::numerical, "vertex oracle found no exactly feasible vertex");
        return out;
    }

    // Reweighted p = 1 solves from the p = 1 optimum; every iterate is feasible,
    // so the smallest objective seen bounds the minimum from above.
    out.upper_bound = true;
    const double eps = 1e-6 * cmax;
    MinimalGradientLP w = lp;
    LPSolution s = solve_min_gradient_p1(lp, opts);
    out.g = s.primal;
    out.value = objective(out.g);
    std::vector<double> g = s.primal;
    for (int it = 0; it < 20; ++it) {
        for (std::size_t i = 0; i < lp.size(); ++i) w.weights[i] = p * std::pow(std::max(g[i], eps), p - 1.0) * lp.weights[i];
        s = solve_min_gradient_p1(w, opts);
        g = s.primal;
        ++out.iterations;
        const double v = objective(g);
        if (v < out.value) {
            out.value = v;
            out.g = g;
        }
    }
    return out;
}

// --- Capacity ----------------------------------------------------------------

CapacityLPResult solve_capacity_lp(const MetricCloud& cloud, const std::vector<std::uint8_t>& in_e,
                                   const std::vector<std::uint8_t>& in_u, const CapacityLPOptions& opts) {
    const std::size_t n = cloud.size();
    require(in_e.size() == n && in_u.size() == n, ErrorKind::precondition, "membership flags do not match the cloud");
    bool any_e = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_e[i]) {
            any_e = true;
            require(in_u[i] != 0, ErrorKind::precondition, "E must lie inside U");
        }
    }
    require(any_e, ErrorKind::precondition, "E must be nonempty");

    // Rows: g_i (n), then phi+ and phi- per free point.
    std::vector<std::int64_t> free_index(n, -1);
    std::size_t nfree = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_u[i] && !in_e[i]) free_index[i] = static_cast<std::int64_t>(nfree++);
    }
    auto fixed = [&](std::size_t i) { return in_e[i] ? 1.0 : 0.0; };

    PackingLP p;
    p.rows = n + 2 * nfree;
    p.b.assign(p.rows, 0.0);
    for (std::size_t i = 0; i < n; ++i) p.b[i] = cloud.measure(i);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool fi = free_index[i] >= 0, fj = free_index[j] >= 0;
            if (!fi && !fj && fixed(i) == fixed(j)) continue;
            const double d = dist(cloud.point(i), cloud.point(j));
            require(d > 0.0, ErrorKind::degenerate, "duplicate cloud points");
            if (opts.max_distance > 0.0 && d > opts.max_distance) continue;
            for (int s : {1, -1}) {
                // d g_i + d g_j - s phi_i + s phi_j >= s (fixed_i - fixed_j)
                const double rhs = s * ((fi ? 0.0 : fixed(i)) - (fj ? 0.0 : fixed(j)));
                if (!fi && !fj && rhs <= 0.0) continue;
                std::vector<PackingLP::Entry> col{{static_cast<std::uint32_t>(i), d}, {static_cast<std::uint32_t>(j), d}};
                auto add_phi = [&](std::size_t k, double coef) {
                    const auto f = static_cast<std::size_t>(free_index[k]);
                    col.push_back({static_cast<std::uint32_t>(n + 2 * f), coef});
                    col.push_back({static_cast<std::uint32_t>(n + 2 * f + 1), -coef});
                };
                if (fi) add_phi(i, -s);
                if (fj) add_phi(j, s);
                p.columns.push_back(std::move(col));
                p.c.push_back(rhs);
            }
        }
    }

    CapacityLPResult out;
    out.constraints = p.cols();
    out.solution = solve_certified(p, opts.lp);
    const auto& pi = out.solution.primal;
    out.gradient.assign(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(n));
    out.potential.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (free_index[i] >= 0) {
            const auto f = static_cast<std::size_t>(free_index[i]);
            out.potential[i] = pi[n + 2 * f] - pi[n + 2 * f + 1];
        } else {
            out.potential[i] = fixed(i);
        }
    }
    out.value = out.solution.primal_objective;
    return out;
}

// --- I/O ---------------------------------------------------------------------

void write_lp(const std::string& path, const MinimalGradientLP& lp) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    require(fp != nullptr, ErrorKind::io, "cannot write " + path);
    std::fprintf(fp, "hsob-lp 1 %zu %zu\n", lp.size(), lp.pairs.size());
    for (std::size_t i = 0; i < lp.size(); ++i) std::fprintf(fp, "w %zu %.17g\n", i, lp.weights[i]);
    for (const auto& pr : lp.pairs) std::fprintf(fp, "c %" PRIu32 " %" PRIu32 " %.17g\n", pr.i, pr.j, pr.c);
    const bool ok = std::fclose(fp) == 0;
    require(ok, ErrorKind::io, "write failed for " + path);
}

MinimalGradientLP read_lp(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot read " + path);
    std::string magic;
    int version = 0;
    std::size_t points = 0, pairs = 0;
    in >> magic >> version >> points >> pairs;
    require(in && magic == "hsob-lp" && version == 1, ErrorKind::io, "bad LP header in " + path);
    MinimalGradientLP lp;
    lp.weights.assign(points, 0.0);
    std::string tag;
    for (std::size_t k = 0; k < points; ++k) {
        std::size_t i = 0;
        double w = 0.0;
        in >> tag >> i >> w;
        require(in && tag == "w" && i < points, ErrorKind::io, "bad weight row in " + path);
        lp.weights[i] = w;
    }
    for (std::size_t k = 0; k < pairs; ++k) {
        MinimalGradientLP::Pair pr{};
        in >> tag >> pr.i >> pr.j >> pr.c;
        require(in && tag == "c" && pr.i < points && pr.j < points, ErrorKind::io, "bad pair row in " + path);
        lp.pairs.push_back(pr);
    }
    return lp;
}

std::string solution_json(const LPSolution& s) {
    nlohmann::json j;
    j["status"] = to_string(s.status);
    j["primal"] = s.primal;
    j["dual"] = s.dual;
    j["primal_objective"] = s.primal_objective;
    j["dual_objective"] = s.dual_objective;
    j["gap"] = s.gap;
    j["relative_gap"] = s.relative_gap;
    j["primal_infeasibility"] = s.primal_infeasibility;
    j["dual_infeasibility"] = s.dual_infeasibility;
    j["certified"] = s.certified;
    j["exact"] = s.exact;
    if (s.exact) j["exact_objective"] = s.exact_objective;
    j["iterations"] = s.iterations;
    return j.dump(2);
}

void write_solution_json(const std::string& path, const LPSolution& s) {
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path);
    out << solution_json(s) << '\n';
    require(static_cast<bool>(out), ErrorKind::io, "write failed for " + path);
}

}  // namespace hsob
