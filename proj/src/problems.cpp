#include "minresmon/problems.hpp"

#include <vector>

#include "minresmon/errors.hpp"
#include "minresmon/rng.hpp"

namespace minresmon {

namespace {

struct RandomSaddle {
    SparseMat H;   // n x n diagonal, uniform(0,1) entries
    SparseMat B;   // m x n standard normal
    Vector b;
};

// Draw order is fixed: B row by row, then b, then the diagonal of H.
RandomSaddle draw_random_saddle(int n, int m, std::uint64_t seed, int b_len)
{
    Rng rng(seed);

    std::vector<Eigen::Triplet<double>> tb;
    tb.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            tb.emplace_back(i, j, rng.normal());

    Vector b(b_len);
    for (int i = 0; i < b_len; ++i)
        b[i] = rng.normal();

    std::vector<Eigen::Triplet<double>> th;
    th.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        th.emplace_back(i, i, rng.uniform());

    RandomSaddle out;
    out.H.resize(n, n);
    out.H.setFromTriplets(th.begin(), th.end());
    out.B.resize(m, n);
    out.B.setFromTriplets(tb.begin(), tb.end());
    out.b = std::move(b);
    return out;
}

GeneratedProblem assemble_random(int n, int m, std::uint64_t seed, bool rhs_in_u_block,
                                 const std::string& name)
{
    if (n < 1)
        throw InputError(name + ": n must be at least 1");
    if (m < 1)
        throw InputError(name + ": m must be at least 1");
    if (m >= n)
        throw InputError(name + ": requires m < n (full row rank), got m = " + std::to_string(m) +
                         ", n = " + std::to_string(n));

    RandomSaddle rs = draw_random_saddle(n, m, seed, rhs_in_u_block ? n : m);

    Vector f = Vector::Zero(n + m);
    if (rhs_in_u_block)
        f.head(n) = rs.b;
    else
        f.tail(m) = rs.b;

    BlockPartition part = BlockPartition::contiguous({{"u", n}, {"p", m}});

    SparseMat eye_m(m, m);
    eye_m.setIdentity();

    std::map<std::string, BlockDiagPreconditioner> pres;
    pres.emplace("P1", BlockDiagPreconditioner::identity(part));
    pres.emplace("P2", BlockDiagPreconditioner::from_blocks(part, {rs.H, eye_m}));

    ProblemMeta meta;
    meta.generator = name;
    meta.params = {{"n", n}, {"m", m}, {"seed", static_cast<std::int64_t>(seed)}};

    return GeneratedProblem{SaddleOperator::from_blocks(std::move(rs.H), std::move(rs.B)),
                            std::move(f), std::move(part), std::move(pres), std::move(meta)};
}

} // namespace

GeneratedProblem gen_least_norm(int n, int m, std::uint64_t seed)
{
    return assemble_random(n, m, seed, false, "least-norm");
}

GeneratedProblem gen_least_squares(int n, int m, std::uint64_t seed)
{
    return assemble_random(n, m, seed, true, "least-squares");
}

GeneratedProblem gen_stokes_mac(int nx, int ny)
{
    if (nx < 3 || ny < 3)
        throw InputError("stokes-mac: grid must be at least 3 x 3, got " + std::to_string(nx) +
                         " x " + std::to_string(ny));

    const double lx = 10.0, ly = 1.0;
    const double hx = lx / nx, hy = ly / ny;
    const double mu = 1e-3;

    // u at vertical faces (i = 1..nx unknown, i = 0 inflow Dirichlet),
    // v at horizontal faces (j = 1..ny-1 unknown, walls eliminated),
    // p at cell centers. The outflow keeps u unknowns with a zero-gradient
    // ghost and a zero pressure ghost, which pins the pressure level.
    const int n_ux = nx * ny;
    const int n_vy = nx * (ny - 1);
    const int n_u = n_ux + n_vy;
    const int n_p = nx * ny;

    auto uid = [nx](int i, int j) { return j * nx + (i - 1); };
    auto vid = [nx, n_ux](int i, int j) { return n_ux + (j - 1) * nx + i; };
    auto pid = [nx](int i, int j) { return j * nx + i; };
    auto u_in = [hy, ly](int j) {
        const double y = (j + 0.5) * hy;
        return y * (ly - y);
    };

    const double cx = mu * hy / hx;  // momentum rows are scaled by the cell volume
    const double cy = mu * hx / hy;

    std::vector<Eigen::Triplet<double>> ta, tb;
    Vector f = Vector::Zero(n_u + n_p);

    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i <= nx; ++i) {
            const int row = uid(i, j);
            double diag = 2.0 * cx + 2.0 * cy;
            if (i >= 2)
                ta.emplace_back(row, uid(i - 1, j), -cx);
            else
                f[row] += cx * u_in(j);
            if (i <= nx - 1)
                ta.emplace_back(row, uid(i + 1, j), -cx);
            else
                diag -= cx;                       // zero-gradient outflow ghost
            if (j >= 1)
                ta.emplace_back(row, uid(i, j - 1), -cy);
            else
                diag += cy;                       // wall ghost reflection
            if (j <= ny - 2)
                ta.emplace_back(row, uid(i, j + 1), -cy);
            else
                diag += cy;
            ta.emplace_back(row, row, diag);
        }
    }

    for (int j = 1; j <= ny - 1; ++j) {
        for (int i = 0; i <= nx - 1; ++i) {
            const int row = vid(i, j);
            double diag = 2.0 * cx + 2.0 * cy;
            if (i >= 1)
                ta.emplace_back(row, vid(i - 1, j), -cx);
            else
                diag += cx;                       // inflow ghost reflection (v = 0)
            if (i <= nx - 2)
                ta.emplace_back(row, vid(i + 1, j), -cx);
            else
                diag -= cx;                       // zero-gradient outflow ghost
            if (j >= 2)
                ta.emplace_back(row, vid(i, j - 1), -cy);
            if (j <= ny - 2)
                ta.emplace_back(row, vid(i, j + 1), -cy);
            ta.emplace_back(row, row, diag);
        }
    }

    // continuity rows, scaled by -hx*hy so that the (2,1) block is exactly
    // the transpose of the pressure-gradient block in the momentum rows
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = pid(i, j);
            tb.emplace_back(row, uid(i + 1, j), -hy);
            if (i >= 1)
                tb.emplace_back(row, uid(i, j), hy);
            else
                f[n_u + row] = -hy * u_in(j);
            if (j <= ny - 2)
                tb.emplace_back(row, vid(i, j + 1), -hx);
            if (j >= 1)
                tb.emplace_back(row, vid(i, j), hx);
        }
    }

    SparseMat A(n_u, n_u);
    A.setFromTriplets(ta.begin(), ta.end());
    SparseMat B(n_p, n_u);
    B.setFromTriplets(tb.begin(), tb.end());

    BlockPartition part = BlockPartition::contiguous({{"u", n_u}, {"p", n_p}});

    std::vector<Eigen::Triplet<double>> tp;
    tp.reserve(static_cast<std::size_t>(n_p));
    for (int i = 0; i < n_p; ++i)
        tp.emplace_back(i, i, hx * hy / mu);
    SparseMat Pp(n_p, n_p);
    Pp.setFromTriplets(tp.begin(), tp.end());

    std::map<std::string, BlockDiagPreconditioner> pres;
    pres.emplace("P1", BlockDiagPreconditioner::identity(part));
    pres.emplace("P2", BlockDiagPreconditioner::from_blocks(part, {A, Pp}));

    ProblemMeta meta;
    meta.generator = "stokes-mac";
    meta.params = {{"nx", nx}, {"ny", ny}};

    return GeneratedProblem{SaddleOperator::from_blocks(std::move(A), std::move(B)), std::move(f),
                            std::move(part), std::move(pres), std::move(meta)};
}

} // namespace minresmon
