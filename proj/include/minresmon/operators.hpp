#pragma once

#include <functional>
#include <optional>

#include "minresmon/rng.hpp"
#include "minresmon/types.hpp"

namespace minresmon {

/// Symmetric linear operator K. Three interchangeable representations:
///  - explicit saddle blocks A (m x m, symmetric), B (p x m), C (p x p,
///    symmetric), acting as [[A, B^T], [B, -C]]
///  - a single sparse symmetric matrix (arbitrary component ordering)
///  - an opaque apply callback
class SaddleOperator {
  public:
    using ApplyFn = std::function<void(const Vector&, Vector&)>;

    /// [[A, B^T], [B, -C]]; pass no C for a zero (2,2) block.
    static SaddleOperator from_blocks(SparseMat A, SparseMat B,
                                      std::optional<SparseMat> C = std::nullopt);
    static SaddleOperator from_matrix(SparseMat K);
    static SaddleOperator from_apply(int n, ApplyFn apply);

    int dim() const { return n_; }

    void apply_into(const Vector& v, Vector& out) const;
    Vector apply(const Vector& v) const;

    bool has_blocks() const { return blocks_.has_value(); }
    const SparseMat& block_a() const;
    const SparseMat& block_b() const;
    /// Zero matrix of the right size when no C block was supplied.
    const SparseMat& block_c() const;

    /// Materializes the full matrix; throws InputError for opaque operators.
    SparseMat assemble() const;

  private:
    SaddleOperator() = default;

    struct Blocks {
        SparseMat A, B, C;
        bool has_c = false;
    };

    int n_ = 0;
    std::optional<Blocks> blocks_;
    std::optional<SparseMat> matrix_;
    ApplyFn apply_;
};

/// Largest sampled symmetry defect |<Kx,y> - <x,Ky>| / (|x| |y| |K|_est)
/// over the given number of random pairs. Exactly symmetric operators give
/// values at roundoff level.
double sampled_symmetry_defect(const SaddleOperator& op, Rng& rng, int samples = 10);

} // namespace minresmon
