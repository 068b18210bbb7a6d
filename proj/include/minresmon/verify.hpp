#pragma once

#include <vector>

#include "minresmon/solver.hpp"

namespace minresmon {

/// Preconditioned residual norms evaluated explicitly from an iterate:
/// total = ||f - K x||_{P^{-1}} and per_block[b] = ||(f - K x)_b||_{P_b^{-1}}.
struct ExplicitNorms {
    double total = 0.0;
    std::vector<double> per_block;
};

/// Forms r = f - K x, z = P^{-1} r blockwise, and returns sqrt(<z, r>) with
/// the per-block counterparts. Depends only on (K, P, part, f, x), never on
/// solver-internal recurrence state.
ExplicitNorms explicit_block_norms(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                                   const BlockPartition& part, const Vector& f, const Vector& x);

struct OracleRow {
    int iter = 0;
    std::vector<double> progressive;      // |eta_{j,b}| from the solver
    std::vector<double> explicit_norms;   // ||r_b^{(j)}||_{P_b^{-1}} recomputed
    double max_abs_dev = 0.0;
    double max_rel_dev = 0.0;             // max_abs_dev / eta_0
};

/// Rowwise comparison of progressively monitored block norms against the
/// a-posteriori recomputation. Deviations are measured relative to eta_0;
/// pass means the largest one stays below the tolerance.
struct OracleReport {
    std::vector<OracleRow> rows;
    double eta0 = 0.0;
    double tol = 0.0;
    double max_rel_deviation = 0.0;
    int worst_iter = -1;
    bool pass = false;
};

/// Compares a monitored history against oracle rows (one per history row).
/// Throws InputError on a row-count mismatch.
OracleReport compare_histories(const ConvergenceHistory& progressive,
                               const std::vector<ExplicitNorms>& oracle, double tol);

/// Full a-posteriori check over a solve that stored its iterates: recomputes
/// the explicit block norms at every x^{(j)} and compares. Default tolerance
/// is 1e-8 (relative to eta_0).
OracleReport verify_solve(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                          const BlockPartition& part, const Vector& f, const SolveResult& result,
                          double tol = 1e-8);

} // namespace minresmon
