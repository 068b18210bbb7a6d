#include <doctest.h>

#include "minresmon/io.hpp"
#include "minresmon/problems.hpp"
#include "minresmon/solver.hpp"
#include "test_helpers.hpp"

using namespace minresmon;
using testhelp::TempDir;
using testhelp::write_text;

TEST_CASE("matrix market reads a hand-written symmetric file")
{
    TempDir dir("mm_sym");
    write_text(dir.file("k.mtx"),
               "%%MatrixMarket matrix coordinate real symmetric\n"
               "% the tiny saddle example\n"
               "2 2 2\n"
               "1 1 2.0\n"
               "2 1 1.0\n");
    const SparseMat K = read_matrix_market(dir.file("k.mtx"));
    CHECK(K.rows() == 2);
    CHECK(K.coeff(0, 0) == 2.0);
    CHECK(K.coeff(0, 1) == 1.0);
    CHECK(K.coeff(1, 0) == 1.0);
    CHECK(K.coeff(1, 1) == 0.0);
}

TEST_CASE("matrix market accepts an empty coordinate list")
{
    TempDir dir("mm_empty");
    write_text(dir.file("z.mtx"), "%%MatrixMarket matrix coordinate real general\n3 2 0\n");
    const SparseMat Z = read_matrix_market(dir.file("z.mtx"));
    CHECK(Z.rows() == 3);
    CHECK(Z.cols() == 2);
    CHECK(Z.nonZeros() == 0);
}

TEST_CASE("matrix market round trip is bitwise exact")
{
    TempDir dir("mm_round");
    const GeneratedProblem prob = gen_least_norm(40, 12, 21);
    const SparseMat K = prob.K.assemble();
    write_matrix_market(K, dir.file("k.mtx"));
    const SparseMat back = read_matrix_market(dir.file("k.mtx"));
    REQUIRE(back.rows() == K.rows());
    REQUIRE(back.cols() == K.cols());
    CHECK((testhelp::dense(back) - testhelp::dense(K)).norm() == 0.0);

    // writing twice gives identical bytes
    write_matrix_market(K, dir.file("k2.mtx"));
    CHECK(testhelp::read_text(dir.file("k.mtx")) == testhelp::read_text(dir.file("k2.mtx")));
}

TEST_CASE("vector round trip preserves zeros and values")
{
    TempDir dir("vec_round");
    Vector v(5);
    v << 0.0, -1.5, 0.0, 3.25e-17, 2.0;
    write_vector_market(v, dir.file("v.mtx"));
    const Vector back = read_vector_market(dir.file("v.mtx"));
    CHECK(back == v);

    write_text(dir.file("wide.mtx"), "%%MatrixMarket matrix coordinate real general\n2 2 0\n");
    CHECK_THROWS_WITH_AS(read_vector_market(dir.file("wide.mtx")),
                         doctest::Contains("column vector"), InputError);
}

TEST_CASE("matrix market parse errors carry line numbers")
{
    TempDir dir("mm_err");

    write_text(dir.file("banner.mtx"), "%%NotMatrixMarket matrix coordinate real general\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(dir.file("banner.mtx")),
                         doctest::Contains("(line 1)"), ParseError);

    write_text(dir.file("size.mtx"),
               "%%MatrixMarket matrix coordinate real general\nnot a size line\n");
    try {
        read_matrix_market(dir.file("size.mtx"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number() == 2);
    }

    write_text(dir.file("entry.mtx"),
               "%%MatrixMarket matrix coordinate real general\n"
               "2 2 2\n"
               "1 1 1.0\n"
               "2 oops 1.0\n");
    try {
        read_matrix_market(dir.file("entry.mtx"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number() == 4);
        CHECK(std::string(e.what()).find("malformed entry") != std::string::npos);
    }

    write_text(dir.file("range.mtx"),
               "%%MatrixMarket matrix coordinate real general\n1 1 1\n2 1 5.0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(dir.file("range.mtx")),
                         doctest::Contains("outside"), ParseError);

    write_text(dir.file("short.mtx"),
               "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(dir.file("short.mtx")),
                         doctest::Contains("file ends"), ParseError);

    CHECK_THROWS_AS(read_matrix_market(dir.file("missing.mtx")), InputError);
}

TEST_CASE("matrix market rejects unsupported variants")
{
    TempDir dir("mm_unsup");
    write_text(dir.file("int.mtx"), "%%MatrixMarket matrix coordinate integer general\n1 1 0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(dir.file("int.mtx")),
                         doctest::Contains("unsupported field 'integer'"), ParseError);

    write_text(dir.file("arr.mtx"), "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(dir.file("arr.mtx")),
                         doctest::Contains("unsupported format 'array'"), ParseError);

    write_text(dir.file("herm.mtx"),
               "%%MatrixMarket matrix coordinate real hermitian\n1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market(dir.file("herm.mtx")), ParseError);
}

TEST_CASE("partition file round trips and validates")
{
    TempDir dir("part");

    write_text(dir.file("p1.txt"), "u 0:100\np 100:130\n");
    const BlockPartition p1 = read_partition(dir.file("p1.txt"));
    CHECK(p1.block_count() == 2);
    CHECK(p1.block(0).size() == 100);
    CHECK(p1.block(1).size() == 30);
    CHECK(p1.dim() == 130);

    write_text(dir.file("p2.txt"), "a 0,2\nb 1\n");
    const BlockPartition p2 = read_partition(dir.file("p2.txt"));
    CHECK(p2.block_count() == 2);
    CHECK_FALSE(p2.block(0).contiguous);
    CHECK(p2.block(0).indices == std::vector<int>{0, 2});

    write_text(dir.file("overlap.txt"), "u 0:5\np 4:8\n");
    CHECK_THROWS_WITH_AS(read_partition(dir.file("overlap.txt")),
                         doctest::Contains("overlap at index 4"), InputError);

    write_text(dir.file("gap.txt"), "u 0:3\np 4:6\n");
    CHECK_THROWS_WITH_AS(read_partition(dir.file("gap.txt")), doctest::Contains("index 3"),
                         InputError);

    write_text(dir.file("bad.txt"), "u 0:3\np x\n");
    try {
        read_partition(dir.file("bad.txt"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number() == 2);
    }

    write_text(dir.file("dup.txt"), "u 0:3\nu 3:6\n");
    CHECK_THROWS_WITH_AS(read_partition(dir.file("dup.txt")), doctest::Contains("duplicate"),
                         ParseError);

    write_text(dir.file("rev.txt"), "u 5:5\n");
    CHECK_THROWS_AS(read_partition(dir.file("rev.txt")), ParseError);

    write_text(dir.file("empty.txt"), "# nothing here\n");
    CHECK_THROWS_AS(read_partition(dir.file("empty.txt")), ParseError);

    // mixed specs with spaces, comments, ranges plus singletons
    write_text(dir.file("mixed.txt"), "# blocks\nodd 1, 3 ,5:8\neven 0,2,4,8:10\n");
    const BlockPartition mixed = read_partition(dir.file("mixed.txt"));
    CHECK(mixed.dim() == 10);
    CHECK(mixed.block(0).indices == std::vector<int>{1, 3, 5, 6, 7});

    // writer round trip, both contiguous and scattered
    write_partition(p1, dir.file("rt1.txt"));
    const BlockPartition rt1 = read_partition(dir.file("rt1.txt"));
    CHECK(rt1.block(0).begin == 0);
    CHECK(rt1.block(0).end == 100);
    write_partition(mixed, dir.file("rt2.txt"));
    const BlockPartition rt2 = read_partition(dir.file("rt2.txt"));
    CHECK(rt2.block(0).indices == mixed.block(0).indices);
    CHECK(rt2.block(1).indices == mixed.block(1).indices);
}

TEST_CASE("convergence csv format and round trip")
{
    TempDir dir("csv");
    const GeneratedProblem prob = gen_least_norm(40, 12, 31);
    const SolveResult result = solve(prob.K, prob.preconditioners.at("P2"), prob.part, prob.f,
                                     Vector::Zero(52));
    write_convergence_csv(result.history, dir.file("h.csv"));

    const std::string text = testhelp::read_text(dir.file("h.csv"));
    CHECK(text.rfind("iter,eta,eta_rel,eta_u,eta_p,mu_u,mu_p\n", 0) == 0);

    const ConvergenceHistory back = read_convergence_csv(dir.file("h.csv"));
    REQUIRE(back.rows.size() == result.history.rows.size());
    CHECK(back.labels == result.history.labels);
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].iter == result.history.rows[i].iter);
        CHECK(back.rows[i].eta == result.history.rows[i].eta);
        CHECK(back.rows[i].eta_rel == result.history.rows[i].eta_rel);
        CHECK(back.rows[i].eta_block == result.history.rows[i].eta_block);
        CHECK(back.rows[i].mu == result.history.rows[i].mu);
    }

    // byte determinism
    write_convergence_csv(result.history, dir.file("h2.csv"));
    CHECK(testhelp::read_text(dir.file("h2.csv")) == text);

    // row count: one per iteration plus j = 0
    CHECK(static_cast<int>(back.rows.size()) == result.history.iterations() + 1);
}

TEST_CASE("csv of an unmonitored run has no block columns")
{
    TempDir dir("csv_plain");
    const GeneratedProblem prob = gen_least_norm(20, 6, 2);
    SolverOptions opts;
    opts.monitor = false;
    const SolveResult result = solve(prob.K, prob.preconditioners.at("P1"), prob.part, prob.f,
                                     Vector::Zero(26), opts);
    write_convergence_csv(result.history, dir.file("h.csv"));
    const std::string text = testhelp::read_text(dir.file("h.csv"));
    CHECK(text.rfind("iter,eta,eta_rel\n", 0) == 0);
}

TEST_CASE("reloaded csv verifies against freshly computed oracle rows")
{
    TempDir dir("csv_verify");
    const GeneratedProblem prob = gen_least_norm();
    SolverOptions opts;
    opts.store_iterates = true;
    const SolveResult result = solve(prob.K, prob.preconditioners.at("P2"), prob.part, prob.f,
                                     Vector::Zero(130), opts);
    write_convergence_csv(result.history, dir.file("h.csv"));
    const ConvergenceHistory reloaded = read_convergence_csv(dir.file("h.csv"));

    std::vector<ExplicitNorms> oracle;
    for (const Vector& x : result.iterates)
        oracle.push_back(
            explicit_block_norms(prob.K, prob.preconditioners.at("P2"), prob.part, prob.f, x));
    const OracleReport report = compare_histories(reloaded, oracle, 1e-8);
    CHECK(report.pass);
}

TEST_CASE("csv parse errors carry line numbers")
{
    TempDir dir("csv_err");
    write_text(dir.file("h.csv"), "iter,eta,eta_rel\n0,bad,1\n");
    try {
        read_convergence_csv(dir.file("h.csv"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number() == 2);
    }

    write_text(dir.file("head.csv"), "time,eta\n");
    CHECK_THROWS_AS(read_convergence_csv(dir.file("head.csv")), ParseError);
}
