#include "minresmon/operators.hpp"

#include <algorithm>
#include <vector>

namespace minresmon {

SaddleOperator SaddleOperator::from_blocks(SparseMat A, SparseMat B, std::optional<SparseMat> C)
{
    if (A.rows() != A.cols())
        throw InputError("block A must be square");
    const int m = static_cast<int>(A.rows());
    const int p = static_cast<int>(B.rows());
    if (B.cols() != m)
        throw InputError("block B must have " + std::to_string(m) + " columns, has " +
                         std::to_string(B.cols()));
    SaddleOperator op;
    op.n_ = m + p;
    Blocks blocks;
    blocks.A = std::move(A);
    blocks.B = std::move(B);
    if (C.has_value()) {
        if (C->rows() != p || C->cols() != p)
            throw InputError("block C must be " + std::to_string(p) + " x " + std::to_string(p));
        blocks.C = std::move(*C);
        blocks.has_c = true;
    } else {
        blocks.C = SparseMat(p, p);
    }
    blocks.A.makeCompressed();
    blocks.B.makeCompressed();
    blocks.C.makeCompressed();
    op.blocks_ = std::move(blocks);
    return op;
}

SaddleOperator SaddleOperator::from_matrix(SparseMat K)
{
    if (K.rows() != K.cols())
        throw InputError("operator matrix must be square");
    SaddleOperator op;
    op.n_ = static_cast<int>(K.rows());
    K.makeCompressed();
    op.matrix_ = std::move(K);
    return op;
}

SaddleOperator SaddleOperator::from_apply(int n, ApplyFn apply)
{
    if (n <= 0)
        throw InputError("operator dimension must be positive");
    if (!apply)
        throw InputError("operator apply callback must be set");
    SaddleOperator op;
    op.n_ = n;
    op.apply_ = std::move(apply);
    return op;
}

void SaddleOperator::apply_into(const Vector& v, Vector& out) const
{
    if (v.size() != n_)
        throw InputError("operator apply: vector dimension " + std::to_string(v.size()) +
                         " does not match operator dimension " + std::to_string(n_));
    out.resize(n_);
    if (blocks_) {
        const int m = static_cast<int>(blocks_->A.rows());
        const int p = static_cast<int>(blocks_->B.rows());
        out.head(m) = blocks_->A * v.head(m) + blocks_->B.transpose() * v.tail(p);
        out.tail(p) = blocks_->B * v.head(m);
        if (blocks_->has_c)
            out.tail(p) -= blocks_->C * v.tail(p);
    } else if (matrix_) {
        out = *matrix_ * v;
    } else {
        apply_(v, out);
        if (out.size() != n_)
            throw InputError("operator apply callback produced wrong dimension");
    }
}

Vector SaddleOperator::apply(const Vector& v) const
{
    Vector out(n_);
    apply_into(v, out);
    return out;
}

const SparseMat& SaddleOperator::block_a() const
{
    if (!blocks_)
        throw InputError("operator has no explicit blocks");
    return blocks_->A;
}

const SparseMat& SaddleOperator::block_b() const
{
    if (!blocks_)
        throw InputError("operator has no explicit blocks");
    return blocks_->B;
}

const SparseMat& SaddleOperator::block_c() const
{
    if (!blocks_)
        throw InputError("operator has no explicit blocks");
    return blocks_->C;
}

SparseMat SaddleOperator::assemble() const
{
    if (matrix_)
        return *matrix_;
    if (!blocks_)
        throw InputError("cannot assemble an opaque operator");
    const int m = static_cast<int>(blocks_->A.rows());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(blocks_->A.nonZeros() + 2 * blocks_->B.nonZeros() +
                                           blocks_->C.nonZeros()));
    for (int k = 0; k < blocks_->A.outerSize(); ++k)
        for (SparseMat::InnerIterator it(blocks_->A, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < blocks_->B.outerSize(); ++k)
        for (SparseMat::InnerIterator it(blocks_->B, k); it; ++it) {
            trips.emplace_back(m + static_cast<int>(it.row()), static_cast<int>(it.col()),
                               it.value());
            trips.emplace_back(static_cast<int>(it.col()), m + static_cast<int>(it.row()),
                               it.value());
        }
    for (int k = 0; k < blocks_->C.outerSize(); ++k)
        for (SparseMat::InnerIterator it(blocks_->C, k); it; ++it)
            trips.emplace_back(m + static_cast<int>(it.row()), m + static_cast<int>(it.col()),
                               -it.value());
    SparseMat K(n_, n_);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();
    return K;
}

double sampled_symmetry_defect(const SaddleOperator& op, Rng& rng, int samples)
{
    const int n = op.dim();
    Vector x(n), y(n), kx(n), ky(n);
    double norm_est = 0.0;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        op.apply_into(x, kx);
        op.apply_into(y, ky);
        norm_est = std::max({norm_est, kx.norm() / x.norm(), ky.norm() / y.norm()});
        const double defect = std::abs(kx.dot(y) - x.dot(ky));
        worst = std::max(worst, defect / (x.norm() * y.norm()));
    }
    return norm_est > 0.0 ? worst / norm_est : worst;
}

} // namespace minresmon
