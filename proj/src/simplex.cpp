#include <gmpxx.h>

#include <algorithm>
#include <limits>

#include "hsob/lp.hpp"

namespace hsob {

const char* to_string(LPStatus s) {
    switch (s) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::iteration_limit: return "iteration-limit";
        case LPStatus::unbounded: return "unbounded";
    }
    return "?";
}

namespace {

template <class S>
struct Traits;

template <>
struct Traits<double> {
    static double from(double v) { return v; }
    static double to_double(double v) { return v; }
    static bool exact() { return false; }
};

template <>
struct Traits<mpq_class> {
    static mpq_class from(double v) { return mpq_class(v); }
    static double to_double(const mpq_class& v) { return v.get_d(); }
    static bool exact() { return true; }
};

template <class S>
class Simplex {
public:
    Simplex(const PackingLP& lp, const SimplexOptions& opts, double cscale, double bscale)
        : lp_(lp), opts_(opts), m_(lp.rows), n_(lp.cols()) {
        const bool ex = Traits<S>::exact();
        tol_ = ex ? S(0) : S(opts.tol);
        pivot_tol_ = ex ? S(0) : S(opts.tol);
        c_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) c_[j] = Traits<S>::from(lp.c[j]) * Traits<S>::from(cscale);
        b_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) b_[i] = Traits<S>::from(lp.b[i]) * Traits<S>::from(bscale);
        cols_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            for (const auto& e : lp.columns[j]) cols_[j].push_back({e.row, Traits<S>::from(e.value)});
        }
        basis_.resize(m_);
        position_.assign(n_ + m_, npos);
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            position_[n_ + i] = i;
        }
        binv_.assign(m_ * m_, S(0));
        for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = S(1);
        xb_ = b_;
    }

    SimplexResult run() {
        SimplexResult res;
        std::size_t stall = 0;
        bool bland = false;
        std::vector<S> pi(m_), u(m_);
        for (;;) {
            if (res.iterations >= opts_.max_iterations) {
                res.status = LPStatus::iteration_limit;
                break;
            }
            compute_pi(pi);
            const std::size_t q = price(pi, bland);
            if (q == npos) {
                res.status = LPStatus::optimal;
                break;
            }
            column(q, u);
            const std::size_t r = ratio(u);
            if (r == npos) {
                res.status = LPStatus::unbounded;
                break;
            }
            const S theta = xb_[r] / u[r];
            if (theta <= tol_) {
                if (++stall > opts_.stall_limit) bland = true;
            } else {
                stall = 0;
                bland = false;
            }
            if (bland) ++res.bland_pivots;
            pivot(q, r, u, theta);
            ++res.iterations;
            if constexpr (!std::is_same_v<S, mpq_class>) {
                if (res.iterations % opts_.refactor_every == 0) refactor();
            }
        }
        if constexpr (!std::is_same_v<S, mpq_class>) refactor();
        compute_pi(pi);

        res.y.assign(n_, 0.0);
        S obj(0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) {
                res.y[basis_[i]] = Traits<S>::to_double(xb_[i]);
                obj += c_[basis_[i]] * xb_[i];
            }
        }
        res.pi.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) res.pi[i] = Traits<S>::to_double(pi[i]);
        res.objective = Traits<S>::to_double(obj);
        if constexpr (std::is_same_v<S, mpq_class>) {
            obj.canonicalize();
            res.exact_objective = obj.get_str();
        }
        return res;
    }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    struct Cell {
        std::uint32_t row;
        S value;
    };

    const PackingLP& lp_;
    SimplexOptions opts_;
    std::size_t m_, n_;
    S tol_, pivot_tol_;
    std::vector<S> c_, b_;
    std::vector<std::vector<Cell>> cols_;
    std::vector<std::size_t> basis_, position_;
    std::vector<S> binv_;
    std::vector<S> xb_;

    S cost(std::size_t var) const { return var < n_ ? c_[var] : S(0); }

    void compute_pi(std::vector<S>& pi) const {
        std::fill(pi.begin(), pi.end(), S(0));
        for (std::size_t i = 0; i < m_; ++i) {
            const S cb = cost(basis_[i]);
            if (cb == 0) continue;
            const S* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) pi[k] += cb * row[k];
        }
    }

    std::size_t price(const std::vector<S>& pi, bool bland) const {
        std::size_t best = npos;
        S best_d(0);
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (position_[j] != npos) continue;
            S d;
            if (j < n_) {
                d = c_[j];
                for (const auto& e : cols_[j]) d -= pi[e.row] * e.value;
            } else {
                d = -pi[j - n_];
            }
            if (d <= tol_) continue;
            if (bland) return j;
            if (best == npos || d > best_d) {
                best = j;
                best_d = d;
            }
        }
        return best;
    }

    void column(std::size_t q, std::vector<S>& u) const {
        std::fill(u.begin(), u.end(), S(0));
        if (q >= n_) {
            const std::size_t r = q - n_;
            for (std::size_t i = 0; i < m_; ++i) u[i] = binv_[i * m_ + r];
            return;
        }
        for (const auto& e : cols_[q]) {
            for (std::size_t i = 0; i < m_; ++i) u[i] += binv_[i * m_ + e.row] * e.value;
        }
    }

    std::size_t ratio(const std::vector<S>& u) const {
        std::size_t best = npos;
        S best_t(0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (u[i] <= pivot_tol_) continue;
            const S t = xb_[i] / u[i];
            if (best == npos || t < best_t || (t == best_t && basis_[i] < basis_[best])) {
                best = i;
                best_t = t;
            }
        }
        return best;
    }

    void pivot(std::size_t q, std::size_t r, const std::vector<S>& u, const S& theta) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (i != r) xb_[i] -= theta * u[i];
        }
        xb_[r] = theta;
        if constexpr (!std::is_same_v<S, mpq_class>) {
            for (auto& v : xb_) {
                if (v < 0 && v > -1e-12) v = 0;
            }
        }
        S* prow = &binv_[r * m_];
        const S inv = S(1) / u[r];
        for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || u[i] == 0) continue;
            S* row = &binv_[i * m_];
            const S f = u[i];
            for (std::size_t k = 0; k < m_; ++k) {
                if (prow[k] != 0) row[k] -= f * prow[k];
            }
        }
        position_[basis_[r]] = npos;
        basis_[r] = q;
        position_[q] = r;
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination with partial pivoting.
    void refactor() {
        std::vector<double> a(m_ * m_, 0.0), inv(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const std::size_t var = basis_[i];
            if (var >= n_) {
                a[(var - n_) * m_ + i] = 1.0;
            } else {
                for (const auto& e : cols_[var]) a[e.row * m_ + i] = Traits<S>::to_double(e.value);
            }
            inv[i * m_ + i] = 1.0;
        }
        for (std::size_t col = 0; col < m_; ++col) {
            std::size_t piv = col;
            for (std::size_t i = col + 1; i < m_; ++i) {
                if (std::abs(a[i * m_ + col]) > std::abs(a[piv * m_ + col])) piv = i;
            }
            if (std::abs(a[piv * m_ + col]) < 1e-14) return;  // keep the updated inverse
            if (piv != col) {
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(a[piv * m_ + k], a[col * m_ + k]);
                    std::swap(inv[piv * m_ + k], inv[col * m_ + k]);
                }
            }
            const double d = 1.0 / a[col * m_ + col];
            for (std::size_t k = 0; k < m_; ++k) {
                a[col * m_ + k] *= d;
                inv[col * m_ + k] *= d;
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == col) continue;
                const double f = a[i * m_ + col];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    a[i * m_ + k] -= f * a[col * m_ + k];
                    inv[i * m_ + k] -= f * inv[col * m_ + k];
                }
            }
        }
        for (std::size_t i = 0; i < m_ * m_; ++i) binv_[i] = inv[i];
        for (std::size_t i = 0; i < m_; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < m_; ++k) s += inv[i * m_ + k] * Traits<S>::to_double(b_[k]);
            xb_[i] = s < 0.0 && s > -1e-12 ? 0.0 : s;
        }
    }
};

void validate(const PackingLP& lp) {
    require(lp.c.size() == lp.cols() && lp.b.size() == lp.rows, ErrorKind::precondition, "packing LP dimensions disagree");
    for (double v : lp.b) require(v >= 0.0, ErrorKind::precondition, "packing LP needs b >= 0");
    for (const auto& col : lp.columns) {
        for (const auto& e : col) require(e.row < lp.rows, ErrorKind::precondition, "packing LP row out of range");
    }
}

}  // namespace

SimplexResult solve_packing(const PackingLP& lp, const SimplexOptions& opts) {
    validate(lp);
    double cmax = 0.0, bmax = 0.0;
    for (double v : lp.c) cmax = std::max(cmax, std::abs(v));
    for (double v : lp.b) bmax = std::max(bmax, v);
    const double cs = cmax > 0.0 ? 1.0 / cmax : 1.0;
    const double bs = bmax > 0.0 ? 1.0 / bmax : 1.0;
    Simplex<double> sx(lp, opts, cs, bs);
    SimplexResult res = sx.run();
    for (double& v : res.y) v /= bs;
    for (double& v : res.pi) v /= cs;
    res.objective /= cs * bs;
    return res;
}

SimplexResult solve_packing_exact(const PackingLP& lp, const SimplexOptions& opts) {
    validate(lp);
    Simplex<mpq_class> sx(lp, opts, 1.0, 1.0);
    return sx.run();
}

}  // namespace hsob
