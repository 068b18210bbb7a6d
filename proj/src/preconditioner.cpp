#include "minresmon/preconditioner.hpp"

namespace minresmon {

namespace {

bool is_diagonal(const SparseMat& m)
{
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMat::InnerIterator it(m, k); it; ++it)
            if (it.row() != it.col() && it.value() != 0.0)
                return false;
    return true;
}

} // namespace

BlockDiagPreconditioner BlockDiagPreconditioner::from_blocks(const BlockPartition& part,
                                                             std::vector<SparseMat> mats)
{
    if (static_cast<int>(mats.size()) != part.block_count())
        throw InputError("preconditioner needs " + std::to_string(part.block_count()) +
                         " blocks, got " + std::to_string(mats.size()));

    BlockDiagPreconditioner pre;
    pre.n_ = part.dim();
    for (int b = 0; b < part.block_count(); ++b) {
        auto block = std::make_shared<Block>();
        block->label = part.block(b).label;
        block->size = part.block(b).size();
        block->matrix = std::move(mats[static_cast<std::size_t>(b)]);
        block->matrix.makeCompressed();
        if (block->matrix.rows() != block->size || block->matrix.cols() != block->size)
            throw InputError("preconditioner block '" + block->label + "' must be " +
                             std::to_string(block->size) + " x " + std::to_string(block->size) +
                             ", got " + std::to_string(block->matrix.rows()) + " x " +
                             std::to_string(block->matrix.cols()));
        if (is_diagonal(block->matrix)) {
            block->diagonal = true;
            Vector d = block->matrix.diagonal();
            for (int i = 0; i < d.size(); ++i) {
                if (!(d[i] > 0.0))
                    throw PreconditionerError("diagonal preconditioner block has non-positive "
                                              "entry " + std::to_string(d[i]) + " at position " +
                                              std::to_string(i), block->label);
            }
            block->diag_inverse = d.cwiseInverse();
        } else {
            block->factor = std::make_shared<Eigen::SimplicialLLT<SparseMat>>();
            block->factor->compute(block->matrix);
            if (block->factor->info() != Eigen::Success)
                throw PreconditionerError("Cholesky factorization failed; block is singular or "
                                          "not positive definite", block->label);
        }
        pre.blocks_.push_back(std::move(block));
    }
    return pre;
}

BlockDiagPreconditioner BlockDiagPreconditioner::identity(const BlockPartition& part)
{
    std::vector<SparseMat> mats;
    for (int b = 0; b < part.block_count(); ++b) {
        const int s = part.block(b).size();
        SparseMat eye(s, s);
        eye.setIdentity();
        mats.push_back(std::move(eye));
    }
    return from_blocks(part, std::move(mats));
}

void BlockDiagPreconditioner::apply_inverse_into(const BlockPartition& part, const Vector& v,
                                                 Vector& z) const
{
    if (part.block_count() != block_count())
        throw InputError("partition block count does not match preconditioner");
    if (v.size() != n_)
        throw InputError("preconditioner apply: vector dimension mismatch");
    z.resize(n_);
    for (int b = 0; b < block_count(); ++b) {
        const Block& blk = *blocks_[static_cast<std::size_t>(b)];
        const IndexBlock& ib = part.block(b);
        if (ib.size() != blk.size)
            throw InputError("partition block '" + ib.label + "' size does not match "
                             "preconditioner block '" + blk.label + "'");
        if (ib.contiguous) {
            if (blk.diagonal)
                z.segment(ib.begin, blk.size) =
                    blk.diag_inverse.cwiseProduct(v.segment(ib.begin, blk.size));
            else
                z.segment(ib.begin, blk.size) = blk.factor->solve(v.segment(ib.begin, blk.size));
        } else {
            Vector vb = part.gather(v, b);
            Vector zb = blk.diagonal ? Vector(blk.diag_inverse.cwiseProduct(vb))
                                     : Vector(blk.factor->solve(vb));
            part.scatter(zb, b, z);
        }
    }
}

Vector BlockDiagPreconditioner::apply_inverse(const BlockPartition& part, const Vector& v) const
{
    Vector z(n_);
    apply_inverse_into(part, v, z);
    return z;
}

Vector apply_preconditioner_inverse(const BlockDiagPreconditioner& pre, const BlockPartition& part,
                                    const Vector& v)
{
    return pre.apply_inverse(part, v);
}

} // namespace minresmon
