#include "minresmon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace minresmon {

namespace {

void validate_options(const SolverOptions& opts, int block_count)
{
    if (!(opts.rel_tol > 0.0))
        throw InputError("rel_tol must be positive");
    if (opts.max_iter < 1)
        throw InputError("max_iter must be at least 1");
    if (!(opts.breakdown_tol >= 0.0))
        throw InputError("breakdown_tol must be nonnegative");
    if (opts.per_block_tol) {
        if (static_cast<int>(opts.per_block_tol->size()) != block_count)
            throw InputError("per_block_tol needs one entry per partition block (" +
                             std::to_string(block_count) + ")");
        for (double t : *opts.per_block_tol)
            if (!(t >= 0.0))
                throw InputError("per_block_tol entries must be nonnegative");
        if (!opts.monitor)
            throw InputError("per-block tolerances require monitoring");
    }
}

void push_row(SolverState& st)
{
    HistoryRow row;
    row.iter = st.iter;
    row.eta = std::abs(st.eta);
    row.eta_rel = st.eta0 > 0.0 ? row.eta / st.eta0 : 0.0;
    if (st.opts.monitor) {
        row.eta_block = st.eta_block;
        row.mu = st.mu;
    }
    st.rows.push_back(std::move(row));
    if (st.opts.store_iterates)
        st.iterates.push_back(st.x);
}

} // namespace

std::string to_string(StopReason reason)
{
    switch (reason) {
        case StopReason::Running: return "running";
        case StopReason::Converged: return "converged";
        case StopReason::PerBlockConverged: return "per-block-converged";
        case StopReason::MaxIter: return "max-iter";
        case StopReason::Breakdown: return "breakdown";
    }
    return "unknown";
}

GivensRotation givens(double a, double b)
{
    if (a == 0.0 && b == 0.0)
        throw BreakdownError("degenerate Givens rotation: both inputs are zero");
    GivensRotation g;
    g.r = std::sqrt(a * a + b * b);
    g.c = a / g.r;
    g.s = b / g.r;
    return g;
}

double update_block_fraction(double mu, double theta, double psi, double c, double s)
{
    const double updated = s * s * mu - 2.0 * s * c * theta + c * c * psi;
    return std::clamp(updated, 0.0, 1.0);
}

SolverState init_state(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                       const BlockPartition& part, const Vector& f, const Vector& x0,
                       const SolverOptions& opts)
{
    const int n = op.dim();
    if (part.dim() != n)
        throw InputError("partition dimension " + std::to_string(part.dim()) +
                         " does not match operator dimension " + std::to_string(n));
    if (pre.dim() != n)
        throw InputError("preconditioner dimension does not match operator");
    if (f.size() != n)
        throw InputError("right-hand side dimension " + std::to_string(f.size()) +
                         " does not match operator dimension " + std::to_string(n));
    if (x0.size() != n)
        throw InputError("initial guess dimension does not match operator");
    validate_options(opts, part.block_count());
    require_finite(f, "f");
    require_finite(x0, "x0");

    SolverState st;
    st.op = &op;
    st.pre = &pre;
    st.part = &part;
    st.opts = opts;

    auto alloc = [&st, n]() {
        ++st.work_vectors_allocated;
        return Vector(n);
    };

    const int k = part.block_count();

    // slot allocation happens up front so the storage audit is exact
    st.x = alloc();
    st.x = x0;
    st.scratch = alloc();
    st.v_cur = alloc();
    st.z_cur = alloc();
    st.v_prev = alloc();
    st.v_prev.setZero();
    st.w_prev = alloc();
    st.w_prev.setZero();
    st.w_cur = alloc();
    st.w_cur.setZero();
    if (opts.monitor)
        st.m_cur = alloc();

    // v_1 = f - K x0
    if (x0.isZero(0.0)) {
        st.v_cur = f;
    } else {
        op.apply_into(st.x, st.scratch);
        st.v_cur = f - st.scratch;
    }

    if (st.v_cur.isZero(0.0)) {
        // x0 already solves the system
        st.gamma1 = st.gamma = 0.0;
        st.eta = st.eta0 = 0.0;
        st.psi.assign(static_cast<std::size_t>(k), 0.0);
        st.theta.assign(static_cast<std::size_t>(k), 0.0);
        st.mu.assign(static_cast<std::size_t>(k), 0.0);
        st.eta_block.assign(static_cast<std::size_t>(k), 0.0);
        st.terminated = true;
        st.reason = StopReason::Converged;
        push_row(st);
        return st;
    }

    pre.apply_inverse_into(part, st.v_cur, st.z_cur);
    const double zv = st.z_cur.dot(st.v_cur);
    if (!(zv > 0.0))
        throw PreconditionerError("<z_1, v_1> = " + std::to_string(zv) +
                                  " is not positive; preconditioner is not SPD");
    st.gamma1 = st.gamma = std::sqrt(zv);
    st.v_cur /= st.gamma1;
    st.z_cur /= st.gamma1;

    st.eta = st.eta0 = st.gamma1;
    st.c_old = st.c = 1.0;
    st.s_old = st.s = 0.0;

    st.theta.assign(static_cast<std::size_t>(k), 0.0);
    if (opts.monitor) {
        part.partitioned_inner(st.z_cur, st.v_cur, st.psi);
        st.mu.resize(static_cast<std::size_t>(k));
        st.eta_block.resize(static_cast<std::size_t>(k));
        for (int b = 0; b < k; ++b) {
            const auto bi = static_cast<std::size_t>(b);
            st.mu[bi] = std::clamp(st.psi[bi], 0.0, 1.0);
            st.eta_block[bi] = st.gamma1 * std::sqrt(st.mu[bi]);
        }
        st.m_cur = st.v_cur;
    }

    push_row(st);
    return st;
}

void step(SolverState& st)
{
    if (st.terminated)
        throw InputError("step called on a terminated solver state");

    const BlockPartition& part = *st.part;
    const int k = part.block_count();

    // Lanczos expansion: scratch becomes the unnormalized v_{j+1}
    st.op->apply_into(st.z_cur, st.scratch);
    const double delta = st.scratch.dot(st.z_cur);
    st.scratch -= delta * st.v_cur;
    st.scratch -= st.gamma * st.v_prev;

    // v_prev slot is free now; reuse it for z_{j+1}
    Vector& z_next = st.v_prev;
    st.pre->apply_inverse_into(part, st.scratch, z_next);
    const double zv = z_next.dot(st.scratch);
    if (zv < 0.0)
        throw PreconditionerError("<z_{j+1}, v_{j+1}> = " + std::to_string(zv) +
                                  " is negative; preconditioner is not SPD");
    const double gamma_next = std::sqrt(zv);

    if (gamma_next <= st.opts.breakdown_tol * st.gamma1) {
        // Lucky breakdown: the Krylov space is exhausted. Finalize the pending
        // solution update with the last Givens rotation, skip the expansion.
        const double alpha0 = st.c * delta - st.c_old * st.s * st.gamma;
        const double alpha1 = std::sqrt(alpha0 * alpha0 + gamma_next * gamma_next);
        if (alpha1 == 0.0)
            throw BreakdownError("stagnation: zero subdiagonal and zero pivot at iteration " +
                                 std::to_string(st.iter + 1));
        const double alpha2 = st.s * delta + st.c_old * st.c * st.gamma;
        const double alpha3 = st.s_old * st.gamma;
        const double c_next = alpha0 / alpha1;
        const double s_next = gamma_next / alpha1;

        st.w_prev = (st.z_cur - alpha3 * st.w_prev - alpha2 * st.w_cur) / alpha1;
        std::swap(st.w_prev, st.w_cur);
        st.x += c_next * st.eta * st.w_cur;
        st.eta = -s_next * st.eta;
        ++st.iter;
        if (st.opts.monitor) {
            // mu carries over; eta_block follows the (essentially zero) eta
            for (int b = 0; b < k; ++b)
                st.eta_block[static_cast<std::size_t>(b)] =
                    std::abs(st.eta) * std::sqrt(st.mu[static_cast<std::size_t>(b)]);
        }
        st.terminated = true;
        st.reason = std::abs(st.eta) <= st.opts.rel_tol * st.eta0 ? StopReason::Converged
                                                                  : StopReason::Breakdown;
        push_row(st);
        return;
    }

    st.scratch /= gamma_next;
    z_next /= gamma_next;

    // QR update and Givens rotation
    const double alpha0 = st.c * delta - st.c_old * st.s * st.gamma;
    const GivensRotation rot = givens(alpha0, gamma_next);
    const double alpha1 = rot.r;
    const double alpha2 = st.s * delta + st.c_old * st.c * st.gamma;
    const double alpha3 = st.s_old * st.gamma;
    const double c_next = rot.c;
    const double s_next = rot.s;

    if (st.opts.monitor) {
        part.partitioned_inner(st.m_cur, z_next, st.theta);
        part.partitioned_inner(z_next, st.scratch, st.psi);
        st.m_cur = -s_next * st.m_cur + c_next * st.scratch;
    }

    st.w_prev = (st.z_cur - alpha3 * st.w_prev - alpha2 * st.w_cur) / alpha1;
    std::swap(st.w_prev, st.w_cur);
    st.x += c_next * st.eta * st.w_cur;

    if (st.opts.monitor) {
        for (int b = 0; b < k; ++b) {
            auto& mu_b = st.mu[static_cast<std::size_t>(b)];
            mu_b = update_block_fraction(mu_b, st.theta[static_cast<std::size_t>(b)],
                                         st.psi[static_cast<std::size_t>(b)], c_next, s_next);
        }
    }

    st.eta = -s_next * st.eta;
    if (st.opts.monitor) {
        for (int b = 0; b < k; ++b)
            st.eta_block[static_cast<std::size_t>(b)] =
                std::abs(st.eta) * std::sqrt(st.mu[static_cast<std::size_t>(b)]);
    }

    // rotate slots: z_next lives in the old v_prev slot
    std::swap(st.z_cur, st.v_prev);   // z_cur = z_{j+1}
    std::swap(st.v_prev, st.v_cur);   // v_prev = v_j
    std::swap(st.v_cur, st.scratch);  // v_cur = v_{j+1}

    st.gamma = gamma_next;
    st.c_old = st.c;
    st.c = c_next;
    st.s_old = st.s;
    st.s = s_next;

    ++st.iter;
    push_row(st);
}

ConvergenceHistory finalize_history(const SolverState& st)
{
    if (!st.terminated)
        throw InputError("finalize_history called on a running solver state");
    ConvergenceHistory h;
    h.labels = st.part->labels();
    h.rows = st.rows;
    h.reason = st.reason;
    h.eta0 = st.eta0;
    return h;
}

SolveResult solve(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                  const BlockPartition& part, const Vector& f, const Vector& x0,
                  const SolverOptions& opts)
{
    SolverState st = init_state(op, pre, part, f, x0, opts);

    const auto per_block_met = [&st]() {
        if (!st.opts.per_block_tol)
            return false;
        for (std::size_t b = 0; b < st.eta_block.size(); ++b)
            if (st.eta_block[b] > (*st.opts.per_block_tol)[b])
                return false;
        return true;
    };

    while (!st.terminated) {
        if (std::abs(st.eta) <= st.opts.rel_tol * st.eta0) {
            st.reason = StopReason::Converged;
            st.terminated = true;
        } else if (per_block_met()) {
            st.reason = StopReason::PerBlockConverged;
            st.terminated = true;
        } else if (st.iter >= st.opts.max_iter) {
            st.reason = StopReason::MaxIter;
            st.terminated = true;
        } else {
            step(st);
        }
    }

    SolveResult result;
    result.x = std::move(st.x);
    result.history = finalize_history(st);
    result.iterates = std::move(st.iterates);
    result.work_vectors_allocated = st.work_vectors_allocated;
    return result;
}

} // namespace minresmon
