#include <doctest.h>

#include <cmath>

#include "minresmon/problems.hpp"
#include "minresmon/solver.hpp"
#include "minresmon/verify.hpp"
#include "test_helpers.hpp"

using namespace minresmon;
using testhelp::MatrixXd;

namespace {

double average_mu_p(const ConvergenceHistory& h)
{
    double acc = 0.0;
    for (const auto& row : h.rows)
        acc += row.mu.back();
    return acc / static_cast<double>(h.rows.size());
}

} // namespace

TEST_CASE("least-norm structure and determinism")
{
    const GeneratedProblem prob = gen_least_norm();
    CHECK(prob.K.dim() == 130);
    CHECK(prob.f.head(100).isZero(0.0));
    CHECK(prob.part.block(0).label == "u");
    CHECK(prob.part.block(0).size() == 100);
    CHECK(prob.part.block(1).label == "p");
    CHECK(prob.part.block(1).size() == 30);
    CHECK(prob.meta.generator == "least-norm");
    CHECK(prob.meta.params.at("seed") == 42);
    CHECK(prob.preconditioners.count("P1") == 1);
    CHECK(prob.preconditioners.count("P2") == 1);

    const GeneratedProblem again = gen_least_norm();
    CHECK((testhelp::dense(prob.K.assemble()) - testhelp::dense(again.K.assemble())).norm() ==
          0.0);
    CHECK(prob.f == again.f);

    const GeneratedProblem other = gen_least_norm(100, 30, 43);
    CHECK(prob.f != other.f);
}

TEST_CASE("least-norm small instance has a zero lower-right block")
{
    const GeneratedProblem prob = gen_least_norm(3, 1, 5);
    CHECK(prob.K.dim() == 4);
    const MatrixXd K = testhelp::dense(prob.K.assemble());
    CHECK(K(3, 3) == 0.0);
    CHECK((K - K.transpose()).norm() == 0.0);
    // H on the diagonal of the (1,1) block, uniform in (0,1)
    for (int i = 0; i < 3; ++i) {
        CHECK(K(i, i) > 0.0);
        CHECK(K(i, i) < 1.0);
    }
}

TEST_CASE("generator input validation")
{
    CHECK_THROWS_AS(gen_least_norm(10, 10, 1), InputError);
    CHECK_THROWS_AS(gen_least_norm(10, 11, 1), InputError);
    CHECK_THROWS_AS(gen_least_norm(0, 0, 1), InputError);
    CHECK_THROWS_AS(gen_least_squares(5, 5, 1), InputError);
    CHECK_THROWS_AS(gen_stokes_mac(2, 8), InputError);
    CHECK_THROWS_AS(gen_stokes_mac(8, 2), InputError);
}

TEST_CASE("least-norm solution solves the constrained problem")
{
    const GeneratedProblem prob = gen_least_norm();
    const MatrixXd K = testhelp::dense(prob.K.assemble());
    const Vector direct = testhelp::direct_solve(K, prob.f);
    const Vector u = direct.head(100);
    const Vector p = direct.tail(30);

    const MatrixXd H = K.topLeftCorner(100, 100);
    const MatrixXd B = K.bottomLeftCorner(30, 100);
    const Vector b = prob.f.tail(30);

    CHECK((B * u - b).norm() <= 1e-6 * b.norm());

    // closed-form weighted least-norm solution as an independent oracle
    const MatrixXd Hinv = H.inverse();
    const MatrixXd S = B * Hinv * B.transpose();
    const Vector u_closed = Hinv * B.transpose() * S.partialPivLu().solve(b);
    CHECK((u - u_closed).norm() <= 1e-8 * u_closed.norm());

    // the solver reproduces the direct solution
    SolverOptions opts;
    opts.rel_tol = 1e-10;
    const SolveResult result = solve(prob.K, prob.preconditioners.at("P2"), prob.part, prob.f,
                                     Vector::Zero(130), opts);
    CHECK((result.x.head(100) - u).norm() <= 1e-6 * u.norm());
}

TEST_CASE("least-squares rhs layout and scalar normal equations")
{
    const GeneratedProblem big = gen_least_squares();
    CHECK(big.f.tail(30).isZero(0.0));
    CHECK(big.meta.generator == "least-squares");

    const GeneratedProblem prob = gen_least_squares(2, 1, 12);
    const MatrixXd K = testhelp::dense(prob.K.assemble());
    const MatrixXd H = K.topLeftCorner(2, 2);
    const MatrixXd B = K.bottomLeftCorner(1, 2);
    const Vector b = prob.f.head(2);

    const Vector direct = testhelp::direct_solve(K, prob.f);
    const double p = direct[2];

    // p solves the univariate normal equations B H^{-1} (B^T p - b) = 0
    const MatrixXd Hinv = H.inverse();
    const double p_closed = (B * Hinv * b)(0) / (B * Hinv * B.transpose())(0);
    CHECK(p == doctest::Approx(p_closed).epsilon(1e-12));
    CHECK((B * Hinv * (B.transpose() * p - b)).norm() <= 1e-12 * b.norm());
}

TEST_CASE("least-squares iterate reproduces the residual identity at convergence")
{
    const GeneratedProblem prob = gen_least_squares();
    SolverOptions opts;
    opts.rel_tol = 1e-10;
    const SolveResult result = solve(prob.K, prob.preconditioners.at("P2"), prob.part, prob.f,
                                     Vector::Zero(130), opts);
    CHECK(result.history.reason == StopReason::Converged);

    const MatrixXd K = testhelp::dense(prob.K.assemble());
    const MatrixXd H = K.topLeftCorner(100, 100);
    const MatrixXd B = K.bottomLeftCorner(30, 100);
    const Vector b = prob.f.head(100);
    const Vector u = result.x.head(100);
    const Vector p = result.x.tail(30);

    // first block row: u is the H^{-1}-weighted least-squares residual
    const Vector u_expected = H.inverse() * (b - B.transpose() * p);
    CHECK((u - u_expected).norm() <= 1e-6 * u_expected.norm());
}

TEST_CASE("generated operators and preconditioners pass the samplers")
{
    Rng rng(99);
    for (const GeneratedProblem& prob :
         {gen_least_norm(40, 10, 3), gen_least_squares(40, 10, 3), gen_stokes_mac(6, 4)}) {
        CHECK(sampled_symmetry_defect(prob.K, rng) <= 1e-12);
        for (const auto& [name, pre] : prob.preconditioners) {
            for (int trial = 0; trial < 100; ++trial) {
                const Vector v = testhelp::random_vector(rng, prob.K.dim());
                CHECK(pre.apply_inverse(prob.part, v).dot(v) > 0.0);
            }
        }
    }
}

TEST_CASE("preconditioning shifts the residual fraction toward the feasibility block")
{
    const GeneratedProblem prob = gen_least_squares();
    const SolveResult p1 = solve(prob.K, prob.preconditioners.at("P1"), prob.part, prob.f,
                                 Vector::Zero(130));
    const SolveResult p2 = solve(prob.K, prob.preconditioners.at("P2"), prob.part, prob.f,
                                 Vector::Zero(130));
    CHECK(average_mu_p(p2.history) > average_mu_p(p1.history));
}

TEST_CASE("stokes-mac structure")
{
    const GeneratedProblem prob = gen_stokes_mac(8, 4);
    const int n_u = 8 * 4 + 8 * 3;
    const int n_p = 8 * 4;
    CHECK(prob.K.dim() == n_u + n_p);
    CHECK(prob.part.block(0).label == "u");
    CHECK(prob.part.block(0).size() == n_u);
    CHECK(prob.part.block(1).size() == n_p);
    CHECK(prob.K.block_c().nonZeros() == 0);
    CHECK(prob.meta.params.at("nx") == 8);

    const MatrixXd K = testhelp::dense(prob.K.assemble());
    CHECK((K - K.transpose()).norm() == 0.0);

    // A block is SPD
    const MatrixXd A = K.topLeftCorner(n_u, n_u);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(A);
    CHECK(es.eigenvalues().minCoeff() > 0.0);

    // determinism
    const GeneratedProblem again = gen_stokes_mac(8, 4);
    CHECK((testhelp::dense(again.K.assemble()) - K).norm() == 0.0);
    CHECK(again.f == prob.f);
}

TEST_CASE("stokes-mac discrete solution balances inflow and outflow exactly")
{
    const GeneratedProblem prob = gen_stokes_mac(10, 5);
    const int nx = 10, ny = 5;
    const double hy = 1.0 / ny;

    Eigen::SparseLU<SparseMat> lu(prob.K.assemble());
    REQUIRE(lu.info() == Eigen::Success);
    const Vector x = lu.solve(prob.f);

    // summing all continuity rows telescopes to outflow flux minus inflow flux
    double outflow = 0.0, inflow = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double y = (j + 0.5) * hy;
        inflow += hy * y * (1.0 - y);
        outflow += hy * x[j * nx + (nx - 1)];  // u at face i = nx
    }
    CHECK(outflow == doctest::Approx(inflow).epsilon(1e-10));
}

TEST_CASE("stokes-mac converges with the natural preconditioner")
{
    const GeneratedProblem prob = gen_stokes_mac(8, 4);
    const SolveResult result = solve(prob.K, prob.preconditioners.at("P2"), prob.part, prob.f,
                                     Vector::Zero(prob.K.dim()));
    CHECK(result.history.reason == StopReason::Converged);
    CHECK(result.history.iterations() < 200);
    // the mass-conservation residual lags: mu_p dominates on average
    CHECK(average_mu_p(result.history) > 0.5);
}
