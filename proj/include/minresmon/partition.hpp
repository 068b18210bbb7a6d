#pragma once

#include <string>
#include <utility>
#include <vector>

#include "minresmon/types.hpp"

namespace minresmon {

/// One labelled index set of a partition. Indices are stored sorted; a
/// contiguous run [begin, end) drops the index array and is iterated directly.
struct IndexBlock {
    std::string label;
    bool contiguous = false;
    int begin = 0;
    int end = 0;                // half-open, only valid when contiguous
    std::vector<int> indices;   // sorted, only used when !contiguous

    int size() const { return contiguous ? end - begin : static_cast<int>(indices.size()); }

    int index(int k) const { return contiguous ? begin + k : indices[static_cast<std::size_t>(k)]; }
};

/// Ordered disjoint index sets covering {0,...,n-1}. Defines the subvector
/// boundaries used for per-block inner products, gathers and scatters.
/// Immutable after construction.
class BlockPartition {
  public:
    /// Validates disjointness and coverage; throws InputError naming the
    /// offending index on overlap or gap. Index sets are sorted on intake and
    /// may be arbitrary (non-contiguous).
    BlockPartition(int n, std::vector<std::pair<std::string, std::vector<int>>> blocks);

    /// Convenience builder for consecutive blocks of the given sizes.
    static BlockPartition contiguous(const std::vector<std::pair<std::string, int>>& sizes);

    int dim() const { return n_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const IndexBlock& block(int b) const { return blocks_[static_cast<std::size_t>(b)]; }
    std::vector<std::string> labels() const;

    /// Copies block b of x into a dense vector of the block's size.
    Vector gather(const Vector& x, int b) const;

    /// Writes xb into block b of x.
    void scatter(const Vector& xb, int b, Vector& x) const;

    /// Per-block inner products <x_b, y_b>; their sum equals <x, y>.
    std::vector<double> partitioned_inner(const Vector& x, const Vector& y) const;
    void partitioned_inner(const Vector& x, const Vector& y, std::vector<double>& out) const;

  private:
    int n_ = 0;
    std::vector<IndexBlock> blocks_;
};

} // namespace minresmon
