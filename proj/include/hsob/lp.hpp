#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsob/field.hpp"
#include "hsob/hajlasz.hpp"

namespace hsob {

/// Packing LP  max c.y  s.t.  A y <= b, y >= 0, with b >= 0 (so y = 0 is a basis).
/// Its row duals pi solve  min b.pi  s.t.  A^T pi >= c, pi >= 0.
struct PackingLP {
    std::size_t rows = 0;
    struct Entry {
        std::uint32_t row;
        double value;
    };
    std::vector<std::vector<Entry>> columns;
    std::vector<double> c;
    std::vector<double> b;

    std::size_t cols() const { return columns.size(); }
};

enum class LPStatus { optimal, iteration_limit, unbounded };

const char* to_string(LPStatus s);

struct SimplexOptions {
    std::size_t max_iterations = 2000000;
    double tol = 1e-9;
    /// Consecutive degenerate pivots before Bland's rule takes over.
    std::size_t stall_limit = 50;
    std::size_t refactor_every = 64;
};

struct SimplexResult {
    LPStatus status = LPStatus::optimal;
    std::vector<double> y;   // packing solution
    std::vector<double> pi;  // row duals
    double objective = 0.0;  // c.y
    std::size_t iterations = 0;
    std::size_t bland_pivots = 0;
    /// Exact objective "p/q" when solved in rationals.
    std::string exact_objective;
};

/// Revised simplex in floating point: dense basis inverse with periodic
/// refactorization, Dantzig pricing with Bland's rule after stalls.
SimplexResult solve_packing(const PackingLP& lp, const SimplexOptions& opts = {});
/// Same pivoting in exact rational arithmetic (inputs converted exactly from double).
SimplexResult solve_packing_exact(const PackingLP& lp, const SimplexOptions& opts = {});

// --- Minimal Hajlasz gradient ------------------------------------------------

/// min sum_i w_i g_i  s.t.  g_i + g_j >= c_ij, g >= 0.
struct MinimalGradientLP {
    std::vector<double> weights;
    struct Pair {
        std::uint32_t i, j;
        double c;
    };
    std::vector<Pair> pairs;

    std::size_t size() const { return weights.size(); }
};

/// Weights are the cloud measures; c_ij the constraint quotients.
MinimalGradientLP make_min_gradient_lp(const SampledField& f, const ConstraintSet& cs);

struct LPSolution {
    LPStatus status = LPStatus::optimal;
    std::vector<double> primal;  // g (and potential, for capacity)
    std::vector<double> dual;    // y per constraint
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;  // primal - dual
    double relative_gap = 0.0;
    /// Largest violation of a primal constraint (scaled by max c) and of a dual row.
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    bool certified = false;
    bool exact = false;
    std::string exact_objective;
    std::size_t iterations = 0;
};

struct LPOptions {
    double tol = 1e-8;
    /// Re-solve in rationals when the floating certificate fails and rows * cols is at most this.
    std::size_t exact_limit = 20000;
    /// Solve in rationals from the start.
    bool force_exact = false;
    SimplexOptions simplex{};
};

LPSolution solve_min_gradient_p1(const MinimalGradientLP& lp, const LPOptions& opts = {});

struct ExactValue {
    double value = 0.0;
    std::string rational;  // "p/q"
    std::vector<double> vertex;
    std::size_t vertices_checked = 0;
};

/// Exact optimum by vertex enumeration over the n-subsets of the pair and
/// nonnegativity constraints (n <= 8). Candidate vertices are found in floating
/// point and re-verified and evaluated in rational arithmetic.
ExactValue exact_oracle_min_gradient(const MinimalGradientLP& lp);

// --- p < 1 -------------------------------------------------------------------

enum class QuasiMode { vertex_oracle, irls };

struct QuasiResult {
    double value = 0.0;  // sum w_i g_i^p
    std::vector<double> g;
    /// irls: an upper bound on the minimum only.
    bool upper_bound = false;
    int iterations = 0;
};

/// min sum w_i g_i^p over the same polyhedron, p in (0, 1).
QuasiResult min_gradient_quasinorm_p_lt_1(const MinimalGradientLP& lp, double p, QuasiMode mode,
                                          const LPOptions& opts = {});

// --- Capacity ----------------------------------------------------------------

struct CapacityLPOptions {
    /// Only pairs with |x_i - x_j| <= max_distance (0: all pairs).
    double max_distance = 0.0;
    LPOptions lp{};
};

struct CapacityLPResult {
    LPSolution solution;
    double value = 0.0;
    std::vector<double> potential;  // phi per cloud point
    std::vector<double> gradient;   // g per cloud point
    std::size_t constraints = 0;
};

/// min sum w_i g_i over (phi, g) with d_ij (g_i + g_j) >= |phi_i - phi_j| on the
/// admitted pairs, phi = 1 on E, phi = 0 outside U, g >= 0.
/// `in_e`, `in_u` are per-point membership flags.
CapacityLPResult solve_capacity_lp(const MetricCloud& cloud, const std::vector<std::uint8_t>& in_e,
                                   const std::vector<std::uint8_t>& in_u, const CapacityLPOptions& opts = {});

// --- I/O ---------------------------------------------------------------------

/// Text format: `hsob-lp 1 <points> <pairs>`, then `w <i> <weight>` per point and
/// `c <i> <j> <c_ij>` per pair, values with 17 significant digits.
void write_lp(const std::string& path, const MinimalGradientLP& lp);
MinimalGradientLP read_lp(const std::string& path);

std::string solution_json(const LPSolution& s);
void write_solution_json(const std::string& path, const LPSolution& s);

}  // namespace hsob
