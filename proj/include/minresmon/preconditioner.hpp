#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "minresmon/partition.hpp"
#include "minresmon/types.hpp"

namespace minresmon {

/// Block-diagonal SPD preconditioner. Each partition block b gets its own
/// solve operator realizing z_b = P_b^{-1} r_b. Blocks are factored once at
/// construction: diagonal matrices take a reciprocal fast path, everything
/// else goes through a sparse Cholesky factorization. Construction fails
/// with PreconditionerError (naming the block) if a block is not SPD.
class BlockDiagPreconditioner {
  public:
    /// One matrix per partition block, in partition order.
    static BlockDiagPreconditioner from_blocks(const BlockPartition& part,
                                               std::vector<SparseMat> blocks);

    /// Identity blocks (the unpreconditioned case).
    static BlockDiagPreconditioner identity(const BlockPartition& part);

    int dim() const { return n_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int block_size(int b) const { return blocks_[static_cast<std::size_t>(b)]->size; }
    const std::string& block_label(int b) const { return blocks_[static_cast<std::size_t>(b)]->label; }
    bool block_is_diagonal(int b) const { return blocks_[static_cast<std::size_t>(b)]->diagonal; }
    const SparseMat& block_matrix(int b) const { return blocks_[static_cast<std::size_t>(b)]->matrix; }

    /// z with z_b = P_b^{-1} v_b for every block of part. The partition must
    /// have matching block count and sizes.
    void apply_inverse_into(const BlockPartition& part, const Vector& v, Vector& z) const;
    Vector apply_inverse(const BlockPartition& part, const Vector& v) const;

  private:
    struct Block {
        std::string label;
        int size = 0;
        SparseMat matrix;
        bool diagonal = false;
        Vector diag_inverse;
        std::shared_ptr<Eigen::SimplicialLLT<SparseMat>> factor;
    };

    int n_ = 0;
    std::vector<std::shared_ptr<const Block>> blocks_;
};

/// Convenience free function mirroring the block solve contract.
Vector apply_preconditioner_inverse(const BlockDiagPreconditioner& pre, const BlockPartition& part,
                                    const Vector& v);

} // namespace minresmon
