#include "minresmon/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minresmon/errors.hpp"

namespace minresmon {

ExplicitNorms explicit_block_norms(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                                   const BlockPartition& part, const Vector& f, const Vector& x) {
    if (f.size() != op.dim() || x.size() != op.dim())
        throw InputError("explicit_block_norms: vector size does not match operator");

    Vector r(op.dim());
    op.apply_into(x, r);
    r = f - r;

    Vector z(op.dim());
    pre.apply_inverse_into(part, r, z);

    ExplicitNorms out;
    out.per_block.resize(static_cast<std::size_t>(part.block_count()));
    double total_sq = 0.0;
    for (int b = 0; b < part.block_count(); ++b) {
        double acc = 0.0;
        const IndexBlock& blk = part.block(b);
        if (blk.contiguous) {
            acc = z.segment(blk.begin, blk.size()).dot(r.segment(blk.begin, blk.size()));
        } else {
            for (int idx : blk.indices) acc += z[idx] * r[idx];
        }
        acc = std::max(acc, 0.0);
        out.per_block[static_cast<std::size_t>(b)] = std::sqrt(acc);
        total_sq += acc;
    }
    out.total = std::sqrt(total_sq);
    return out;
}

OracleReport compare_histories(const ConvergenceHistory& progressive,
                               const std::vector<ExplicitNorms>& oracle, double tol) {
    if (progressive.rows.size() != oracle.size())
        throw InputError("compare_histories: row count mismatch (" +
                         std::to_string(progressive.rows.size()) + " progressive vs " +
                         std::to_string(oracle.size()) + " oracle)");

    OracleReport report;
    report.eta0 = progressive.eta0;
    report.tol = tol;
    const double scale = progressive.eta0 > 0.0 ? progressive.eta0 : 1.0;

    for (std::size_t i = 0; i < oracle.size(); ++i) {
        const HistoryRow& row = progressive.rows[i];
        if (row.eta_block.size() != oracle[i].per_block.size())
            throw InputError("compare_histories: block count mismatch at iteration " +
                             std::to_string(row.iter));

        OracleRow orow;
        orow.iter = row.iter;
        orow.progressive = row.eta_block;
        orow.explicit_norms = oracle[i].per_block;
        for (std::size_t b = 0; b < row.eta_block.size(); ++b) {
            const double dev = std::abs(row.eta_block[b] - oracle[i].per_block[b]);
            orow.max_abs_dev = std::max(orow.max_abs_dev, dev);
        }
        orow.max_rel_dev = orow.max_abs_dev / scale;
        if (orow.max_rel_dev > report.max_rel_deviation) {
            report.max_rel_deviation = orow.max_rel_dev;
            report.worst_iter = orow.iter;
        }
        report.rows.push_back(std::move(orow));
    }
    report.pass = report.max_rel_deviation <= tol;
    return report;
}

OracleReport verify_solve(const SaddleOperator& op, const BlockDiagPreconditioner& pre,
                          const BlockPartition& part, const Vector& f, const SolveResult& result,
                          double tol) {
    if (result.iterates.size() != result.history.rows.size())
        throw InputError("verify_solve: result does not carry one stored iterate per history row "
                         "(run with store_iterates=true)");

    std::vector<ExplicitNorms> oracle;
    oracle.reserve(result.iterates.size());
    for (const Vector& x : result.iterates)
        oracle.push_back(explicit_block_norms(op, pre, part, f, x));
    return compare_histories(result.history, oracle, tol);
}

} // namespace minresmon
