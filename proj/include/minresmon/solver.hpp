#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minresmon/operators.hpp"
#include "minresmon/partition.hpp"
#include "minresmon/preconditioner.hpp"
#include "minresmon/types.hpp"

namespace minresmon {

struct SolverOptions {
    /// Stop when |eta_j| / |eta_0| drops below this.
    double rel_tol = 1e-6;
    int max_iter = 1000;
    /// Absolute per-block tolerances; when set, the solve also stops at the
    /// first iteration where |eta_{j,b}| <= per_block_tol[b] for every block.
    /// Requires monitor = true.
    std::optional<std::vector<double>> per_block_tol;
    /// Track per-block residual norms progressively. Off gives the plain
    /// preconditioned MINRES baseline; the iterates and eta sequence are
    /// bitwise identical either way.
    bool monitor = true;
    /// Keep a copy of every iterate x^{(j)} for a-posteriori verification.
    bool store_iterates = false;
    /// Lanczos breakdown threshold, relative to gamma_1.
    double breakdown_tol = 1e-14;
};

enum class StopReason { Running, Converged, PerBlockConverged, MaxIter, Breakdown };

std::string to_string(StopReason reason);

struct HistoryRow {
    int iter = 0;
    double eta = 0.0;       // |eta_j|
    double eta_rel = 0.0;   // |eta_j| / |eta_0|
    std::vector<double> eta_block;  // |eta_{j,b}|, empty when monitoring is off
    std::vector<double> mu;         // squared residual norm fractions
};

/// Per-iteration record of total and per-block preconditioned residual norms.
/// Always holds one row per completed iteration plus the j = 0 row.
struct ConvergenceHistory {
    std::vector<std::string> labels;
    std::vector<HistoryRow> rows;
    StopReason reason = StopReason::Running;
    double eta0 = 0.0;

    int iterations() const { return rows.empty() ? 0 : static_cast<int>(rows.size()) - 1; }
};

/// Mutable state of a running solve: the work vector slots plus the scalar
/// recurrence. Slot names reflect the role at a loop boundary; within step()
/// the freed v_prev slot temporarily carries the new preconditioned vector.
/// Holds pointers into the operator, preconditioner and partition passed to
/// init_state; the caller keeps those alive.
struct SolverState {
    const SaddleOperator* op = nullptr;
    const BlockDiagPreconditioner* pre = nullptr;
    const BlockPartition* part = nullptr;
    SolverOptions opts;

    int iter = 0;  // completed iterations j

    // work vectors
    Vector v_prev, v_cur;     // v_{j-1}, v_j
    Vector z_cur;             // z_j
    Vector w_prev, w_cur;     // w_{j-1}, w_j
    Vector m_cur;             // m_j (monitoring only)
    Vector x;                 // x^{(j)}
    Vector scratch;           // transient: K z_j, then unnormalized v_{j+1}

    // scalar recurrence
    double gamma1 = 0.0;      // ||r^{(0)}||_{P^{-1}}
    double gamma = 0.0;       // gamma_j
    double c_old = 1.0, c = 1.0;   // c_{j-1}, c_j
    double s_old = 0.0, s = 0.0;   // s_{j-1}, s_j
    double eta = 0.0;         // signed eta_j
    double eta0 = 0.0;

    // per-block monitoring state
    std::vector<double> psi, theta, mu, eta_block;

    StopReason reason = StopReason::Running;
    bool terminated = false;

    std::vector<HistoryRow> rows;
    std::vector<Vector> iterates;     // filled when opts.store_iterates
    int work_vectors_allocated = 0;   // full-length allocations made by the solver
};

struct SolveResult {
    Vector x;
    ConvergenceHistory history;
    std::vector<Vector> iterates;       // empty unless store_iterates was set
    int work_vectors_allocated = 0;
};

/// Givens rotation taking (a, b) to (r, 0): r = sqrt(a^2 + b^2), c = a/r,
/// s = b/r. Throws BreakdownError when both inputs are zero.
struct GivensRotation {
    double c = 1.0, s = 0.0, r = 0.0;
};
GivensRotation givens(double a, double b);

/// Progressive update of a squared residual norm fraction,
///   mu' = s^2 mu - 2 s c theta + c^2 psi,
/// clamped into [0, 1] to absorb roundoff.
double update_block_fraction(double mu, double theta, double psi, double c, double s);

/// Sets up the initial Lanczos vector, monitoring fractions and recurrence
/// scalars for f - K x0. A zero initial residual yields an already-terminated
/// state with reason Converged.
SolverState init_state(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                       const BlockPartition& part, const Vector& f, const Vector& x0,
                       const SolverOptions& opts = {});

/// Executes exactly one loop body: Lanczos expansion, preconditioning,
/// QR/Givens update, monitoring scalars, solution update and the residual
/// norm recursions. Near-zero gamma_{j+1} finalizes the pending solution
/// update and terminates (Converged when the relative tolerance is met,
/// Breakdown otherwise).
void step(SolverState& state);

/// Emits the history rows for j = 0..J with the termination reason.
/// The state must be terminated.
ConvergenceHistory finalize_history(const SolverState& state);

/// Runs init_state + step until a stopping criterion fires: relative total
/// residual, per-block tolerances (when set), iteration cap, or breakdown.
SolveResult solve(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                  const BlockPartition& part, const Vector& f, const Vector& x0,
                  const SolverOptions& opts = {});

} // namespace minresmon
