#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "minresmon/operators.hpp"
#include "minresmon/partition.hpp"
#include "minresmon/preconditioner.hpp"
#include "minresmon/types.hpp"

namespace minresmon {

struct ProblemMeta {
    std::string generator;
    std::map<std::string, std::int64_t> params;  // includes "seed" for seeded generators
};

/// A generated test system: explicit-block operator, right-hand side,
/// partition, and the named preconditioners that go with it ("P1" is always
/// identity blocks, "P2" the problem-specific recipe).
struct GeneratedProblem {
    SaddleOperator K;
    Vector f;
    BlockPartition part;
    std::map<std::string, BlockDiagPreconditioner> preconditioners;
    ProblemMeta meta;
};

/// Weighted least-norm system: minimize u^T H u subject to B u = b, posed as
///   [[H, B^T], [B, 0]] (u, p) = (0, b)
/// with B an m x n standard-normal matrix, b standard normal, and
/// H = diag(uniform(0,1)). Partition {u: first n, p: last m};
/// P2 = blkdiag(H, I). Requires 1 <= m < n.
GeneratedProblem gen_least_norm(int n = 100, int m = 30, std::uint64_t seed = 42);

/// Weighted least-squares system in augmented form:
///   [[H, B^T], [B, 0]] (u, p) = (b, 0)
/// with fresh draws for B, b (length n) and H. Same partition and
/// preconditioners as gen_least_norm.
GeneratedProblem gen_least_squares(int n = 100, int m = 30, std::uint64_t seed = 42);

/// Stokes channel flow on a 2D staggered (MAC) grid over (0,10) x (0,1),
/// viscosity 1e-3: parabolic inflow u = y(1-y) at x = 0, no-slip walls,
/// do-nothing outflow. Unknowns are interior/outflow face velocities and all
/// cell pressures; finite-volume scaling makes K = [[A, B^T], [B, 0]] exactly
/// symmetric with A SPD. P2 = blkdiag(A, (hx*hy/mu) * I). Requires
/// nx, ny >= 3.
GeneratedProblem gen_stokes_mac(int nx, int ny);

} // namespace minresmon
