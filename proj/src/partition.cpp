#include "minresmon/partition.hpp"

#include <algorithm>

namespace minresmon {

BlockPartition::BlockPartition(int n, std::vector<std::pair<std::string, std::vector<int>>> blocks)
: n_(n)
{
    if (n <= 0)
        throw InputError("partition dimension must be positive");
    if (blocks.empty())
        throw InputError("partition needs at least one block");

    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    int block_id = 0;
    for (auto& [label, idx] : blocks) {
        if (idx.empty())
            throw InputError("partition block '" + label + "' is empty");
        std::sort(idx.begin(), idx.end());
        for (int i : idx) {
            if (i < 0 || i >= n)
                throw InputError("partition block '" + label + "' index " + std::to_string(i) +
                                 " outside [0," + std::to_string(n) + ")");
            if (owner[static_cast<std::size_t>(i)] >= 0)
                throw InputError("partition overlap at index " + std::to_string(i) +
                                 ": claimed by blocks '" +
                                 blocks[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])].first +
                                 "' and '" + label + "'");
            owner[static_cast<std::size_t>(i)] = block_id;
        }
        // duplicates inside one block surface as self-overlap above

        IndexBlock ib;
        ib.label = label;
        ib.contiguous = idx.back() - idx.front() + 1 == static_cast<int>(idx.size());
        if (ib.contiguous) {
            ib.begin = idx.front();
            ib.end = idx.back() + 1;
        } else {
            ib.indices = std::move(idx);
        }
        blocks_.push_back(std::move(ib));
        ++block_id;
    }

    for (int i = 0; i < n; ++i)
        if (owner[static_cast<std::size_t>(i)] < 0)
            throw InputError("partition gap: index " + std::to_string(i) +
                             " not covered by any block");
}

BlockPartition BlockPartition::contiguous(const std::vector<std::pair<std::string, int>>& sizes)
{
    std::vector<std::pair<std::string, std::vector<int>>> blocks;
    int offset = 0;
    for (const auto& [label, size] : sizes) {
        if (size <= 0)
            throw InputError("block '" + label + "' size must be positive");
        std::vector<int> idx(static_cast<std::size_t>(size));
        for (int k = 0; k < size; ++k)
            idx[static_cast<std::size_t>(k)] = offset + k;
        blocks.emplace_back(label, std::move(idx));
        offset += size;
    }
    return BlockPartition(offset, std::move(blocks));
}

std::vector<std::string> BlockPartition::labels() const
{
    std::vector<std::string> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_)
        out.push_back(b.label);
    return out;
}

Vector BlockPartition::gather(const Vector& x, int b) const
{
    if (x.size() != n_)
        throw InputError("gather: vector dimension " + std::to_string(x.size()) +
                         " does not match partition dimension " + std::to_string(n_));
    const IndexBlock& ib = blocks_[static_cast<std::size_t>(b)];
    if (ib.contiguous)
        return x.segment(ib.begin, ib.size());
    Vector out(ib.size());
    for (int k = 0; k < ib.size(); ++k)
        out[k] = x[ib.indices[static_cast<std::size_t>(k)]];
    return out;
}

void BlockPartition::scatter(const Vector& xb, int b, Vector& x) const
{
    const IndexBlock& ib = blocks_[static_cast<std::size_t>(b)];
    if (xb.size() != ib.size())
        throw InputError("scatter: block vector size mismatch for block '" + ib.label + "'");
    if (x.size() != n_)
        throw InputError("scatter: target dimension does not match partition");
    if (ib.contiguous) {
        x.segment(ib.begin, ib.size()) = xb;
        return;
    }
    for (int k = 0; k < ib.size(); ++k)
        x[ib.indices[static_cast<std::size_t>(k)]] = xb[k];
}

std::vector<double> BlockPartition::partitioned_inner(const Vector& x, const Vector& y) const
{
    std::vector<double> out;
    partitioned_inner(x, y, out);
    return out;
}

void BlockPartition::partitioned_inner(const Vector& x, const Vector& y,
                                       std::vector<double>& out) const
{
    if (x.size() != n_ || y.size() != n_)
        throw InputError("partitioned_inner: vector dimensions do not match partition");
    out.resize(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const IndexBlock& ib = blocks_[b];
        if (ib.contiguous) {
            out[b] = x.segment(ib.begin, ib.size()).dot(y.segment(ib.begin, ib.size()));
        } else {
            double acc = 0.0;
            for (int i : ib.indices)
                acc += x[i] * y[i];
            out[b] = acc;
        }
    }
}

} // namespace minresmon
