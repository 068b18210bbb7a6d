#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minresmon/io.hpp"
#include "minresmon/problems.hpp"
#include "minresmon/solver.hpp"
#include "minresmon/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitMaxIter = 2;
constexpr int kExitBreakdown = 3;
constexpr int kExitInput = 4;
constexpr int kExitVerifyFailed = 5;

struct SolveArgs {
    std::string matrix, rhs, partition, out;
    std::vector<std::string> precond;
    double tol = 1e-6;
    int maxit = 1000;
    std::vector<double> block_tol;
    bool no_monitor = false;
    bool verify = false;
};

struct GenArgs {
    std::string generator, out;
    int n = 100, m = 30;
    int nx = 16, ny = 8;
    std::uint64_t seed = 42;
};

struct VerifyArgs {
    std::string run_dir;
};

int exit_code_for(minresmon::StopReason reason)
{
    switch (reason) {
        case minresmon::StopReason::Converged:
        case minresmon::StopReason::PerBlockConverged: return kExitConverged;
        case minresmon::StopReason::MaxIter: return kExitMaxIter;
        default: return kExitBreakdown;
    }
}

minresmon::BlockDiagPreconditioner load_preconditioner(const minresmon::BlockPartition& part,
                                                       const std::vector<std::string>& files)
{
    if (files.empty())
        return minresmon::BlockDiagPreconditioner::identity(part);
    if (static_cast<int>(files.size()) != part.block_count())
        throw minresmon::InputError("--precond needs one file per partition block (" +
                                    std::to_string(part.block_count()) + "), got " +
                                    std::to_string(files.size()));
    std::vector<minresmon::SparseMat> blocks;
    blocks.reserve(files.size());
    for (const auto& file : files)
        blocks.push_back(minresmon::read_matrix_market(file));
    return minresmon::BlockDiagPreconditioner::from_blocks(part, std::move(blocks));
}

void print_partition_summary(const minresmon::BlockPartition& part)
{
    std::cout << part.dim() << " unknowns, " << part.block_count() << " blocks (";
    for (int b = 0; b < part.block_count(); ++b) {
        if (b) std::cout << ", ";
        std::cout << part.block(b).label << ": " << part.block(b).size();
    }
    std::cout << ")\n";
}

int run_solve(const SolveArgs& args)
{
    const minresmon::SparseMat K = minresmon::read_matrix_market(args.matrix);
    if (K.rows() != K.cols())
        throw minresmon::InputError("system matrix must be square, got " +
                                    std::to_string(K.rows()) + " x " + std::to_string(K.cols()));
    const minresmon::Vector f = minresmon::read_vector_market(args.rhs);
    const minresmon::BlockPartition part = minresmon::read_partition(args.partition);
    if (part.dim() != K.rows())
        throw minresmon::InputError("partition covers " + std::to_string(part.dim()) +
                                    " indices but the matrix dimension is " +
                                    std::to_string(K.rows()));
    if (f.size() != K.rows())
        throw minresmon::InputError("right-hand side length " + std::to_string(f.size()) +
                                    " does not match the matrix dimension " +
                                    std::to_string(K.rows()));
    const minresmon::BlockDiagPreconditioner pre = load_preconditioner(part, args.precond);

    minresmon::SolverOptions opts;
    opts.rel_tol = args.tol;
    opts.max_iter = args.maxit;
    opts.monitor = !args.no_monitor;
    opts.store_iterates = args.verify;
    if (!args.block_tol.empty())
        opts.per_block_tol = args.block_tol;

    const minresmon::SaddleOperator op = minresmon::SaddleOperator::from_matrix(K);
    const minresmon::Vector x0 = minresmon::Vector::Zero(K.rows());
    const minresmon::SolveResult result = minresmon::solve(op, pre, part, f, x0, opts);

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);
    minresmon::write_convergence_csv(result.history, out_dir / "convergence.csv");
    minresmon::write_vector_market(result.x, out_dir / "x.mtx");

    json run;
    run["version"] = 1;
    run["inputs"] = {{"matrix", fs::absolute(args.matrix).string()},
                     {"rhs", fs::absolute(args.rhs).string()},
                     {"partition", fs::absolute(args.partition).string()}};
    json precond = json::array();
    for (const auto& file : args.precond)
        precond.push_back(fs::absolute(file).string());
    run["inputs"]["precond"] = precond;
    run["options"] = {{"tol", args.tol},
                      {"maxit", args.maxit},
                      {"monitor", !args.no_monitor}};
    if (!args.block_tol.empty())
        run["options"]["block_tol"] = args.block_tol;
    run["result"] = {{"reason", minresmon::to_string(result.history.reason)},
                     {"iterations", result.history.iterations()},
                     {"eta0", result.history.eta0},
                     {"eta_rel_final", result.history.rows.back().eta_rel}};
    std::ofstream run_file(out_dir / "run.json");
    run_file << run.dump(2) << "\n";
    if (!run_file)
        throw minresmon::InputError("failed writing '" + (out_dir / "run.json").string() + "'");

    print_partition_summary(part);
    std::cout << "reason: " << minresmon::to_string(result.history.reason) << " after "
              << result.history.iterations() << " iterations\n";
    char line[160];
    std::snprintf(line, sizeof(line), "eta0: %.6g, final eta_rel: %.6g\n",
                  result.history.eta0, result.history.rows.back().eta_rel);
    std::cout << line;
    std::cout << "wrote " << (out_dir / "convergence.csv").string() << ", "
              << (out_dir / "x.mtx").string() << ", " << (out_dir / "run.json").string() << "\n";

    int code = exit_code_for(result.history.reason);
    if (args.verify) {
        if (args.no_monitor)
            throw minresmon::InputError("--verify needs monitoring (drop --no-monitor)");
        const minresmon::OracleReport report =
            minresmon::verify_solve(op, pre, part, f, result);
        minresmon::write_oracle_report_csv(report, part.labels(), out_dir / "verify_report.csv");
        std::snprintf(line, sizeof(line),
                      "oracle: max relative deviation %.3g at iteration %d (tol %.3g): %s\n",
                      report.max_rel_deviation, report.worst_iter, report.tol,
                      report.pass ? "pass" : "FAIL");
        std::cout << line;
        if (!report.pass)
            code = kExitVerifyFailed;
    }
    return code;
}

int run_gen(const GenArgs& args)
{
    minresmon::GeneratedProblem problem = [&] {
        if (args.generator == "least-norm")
            return minresmon::gen_least_norm(args.n, args.m, args.seed);
        if (args.generator == "least-squares")
            return minresmon::gen_least_squares(args.n, args.m, args.seed);
        if (args.generator == "stokes-mac")
            return minresmon::gen_stokes_mac(args.nx, args.ny);
        throw minresmon::InputError("unknown generator '" + args.generator +
                                    "' (least-norm, least-squares, stokes-mac)");
    }();

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);

    minresmon::write_matrix_market(problem.K.assemble(), out_dir / "K.mtx");
    minresmon::write_vector_market(problem.f, out_dir / "rhs.mtx");
    minresmon::write_partition(problem.part, out_dir / "partition.txt");

    json meta;
    meta["generator"] = problem.meta.generator;
    for (const auto& [key, value] : problem.meta.params)
        meta["params"][key] = value;
    meta["files"] = {{"matrix", "K.mtx"}, {"rhs", "rhs.mtx"}, {"partition", "partition.txt"}};
    for (const auto& [name, pre] : problem.preconditioners) {
        json files = json::array();
        for (int b = 0; b < pre.block_count(); ++b) {
            const std::string file = name + "_" + pre.block_label(b) + ".mtx";
            minresmon::write_matrix_market(pre.block_matrix(b), out_dir / file);
            files.push_back(file);
        }
        meta["files"]["preconditioners"][name] = files;
    }
    std::ofstream meta_file(out_dir / "problem.json");
    meta_file << meta.dump(2) << "\n";
    if (!meta_file)
        throw minresmon::InputError("failed writing '" + (out_dir / "problem.json").string() + "'");

    std::cout << problem.meta.generator << ": ";
    print_partition_summary(problem.part);
    std::cout << "wrote " << out_dir.string() << "/{K.mtx, rhs.mtx, partition.txt, P*_*.mtx, "
                 "problem.json}\n";
    return kExitConverged;
}

int run_verify(const VerifyArgs& args)
{
    const fs::path run_dir(args.run_dir);
    std::ifstream run_file(run_dir / "run.json");
    if (!run_file)
        throw minresmon::InputError("cannot open '" + (run_dir / "run.json").string() + "'");
    json run;
    try {
        run = json::parse(run_file);
    } catch (const json::parse_error& e) {
        throw minresmon::ParseError("invalid run.json: " + std::string(e.what()));
    }

    SolveArgs replay;
    try {
        replay.matrix = run.at("inputs").at("matrix").get<std::string>();
        replay.rhs = run.at("inputs").at("rhs").get<std::string>();
        replay.partition = run.at("inputs").at("partition").get<std::string>();
        for (const auto& file : run.at("inputs").at("precond"))
            replay.precond.push_back(file.get<std::string>());
        replay.tol = run.at("options").at("tol").get<double>();
        replay.maxit = run.at("options").at("maxit").get<int>();
        if (!run.at("options").at("monitor").get<bool>())
            throw minresmon::InputError("run was not monitored; nothing to verify");
        if (run["options"].contains("block_tol"))
            for (const auto& t : run["options"]["block_tol"])
                replay.block_tol.push_back(t.get<double>());
    } catch (const json::exception& e) {
        throw minresmon::InputError("run.json is missing fields: " + std::string(e.what()));
    }

    const minresmon::SparseMat K = minresmon::read_matrix_market(replay.matrix);
    const minresmon::Vector f = minresmon::read_vector_market(replay.rhs);
    const minresmon::BlockPartition part = minresmon::read_partition(replay.partition);
    const minresmon::BlockDiagPreconditioner pre = load_preconditioner(part, replay.precond);

    minresmon::SolverOptions opts;
    opts.rel_tol = replay.tol;
    opts.max_iter = replay.maxit;
    opts.monitor = true;
    opts.store_iterates = true;
    if (!replay.block_tol.empty())
        opts.per_block_tol = replay.block_tol;

    const minresmon::SaddleOperator op = minresmon::SaddleOperator::from_matrix(K);
    const minresmon::Vector x0 = minresmon::Vector::Zero(K.rows());
    const minresmon::SolveResult result = minresmon::solve(op, pre, part, f, x0, opts);

    // the stored history must match the deterministic replay exactly
    const minresmon::ConvergenceHistory stored =
        minresmon::read_convergence_csv(run_dir / "convergence.csv");
    if (stored.rows.size() != result.history.rows.size()) {
        std::cerr << "verify: stored history has " << stored.rows.size() << " rows, replay has "
                  << result.history.rows.size() << "\n";
        return kExitVerifyFailed;
    }
    for (std::size_t i = 0; i < stored.rows.size(); ++i) {
        const auto& a = stored.rows[i];
        const auto& b = result.history.rows[i];
        bool same = a.iter == b.iter && a.eta == b.eta && a.eta_rel == b.eta_rel &&
                    a.eta_block == b.eta_block && a.mu == b.mu;
        if (!same) {
            std::cerr << "verify: stored row " << i << " differs from the replay\n";
            return kExitVerifyFailed;
        }
    }

    const minresmon::OracleReport report = minresmon::verify_solve(op, pre, part, f, result);
    minresmon::write_oracle_report_csv(report, part.labels(), run_dir / "verify_report.csv");

    char line[160];
    std::snprintf(line, sizeof(line),
                  "oracle: max relative deviation %.3g at iteration %d (tol %.3g): %s\n",
                  report.max_rel_deviation, report.worst_iter, report.tol,
                  report.pass ? "pass" : "FAIL");
    std::cout << line;
    std::cout << "wrote " << (run_dir / "verify_report.csv").string() << "\n";
    return report.pass ? kExitConverged : kExitVerifyFailed;
}

} // namespace

int cli_main(int argc, char** argv)
{
    CLI::App app{"Preconditioned MINRES for saddle-point systems with per-block residual "
                 "monitoring"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Run a monitored solve on files");
    solve_cmd->add_option("--matrix", solve_args.matrix, "System matrix (Matrix Market)")
        ->required();
    solve_cmd->add_option("--rhs", solve_args.rhs, "Right-hand side (Matrix Market, n x 1)")
        ->required();
    solve_cmd->add_option("--partition", solve_args.partition, "Block partition file")->required();
    solve_cmd->add_option("--precond", solve_args.precond,
                          "Preconditioner block files, one per partition block (default identity)")
        ->delimiter(',');
    solve_cmd->add_option("--tol", solve_args.tol, "Relative residual tolerance");
    solve_cmd->add_option("--maxit", solve_args.maxit, "Iteration cap");
    solve_cmd->add_option("--block-tol", solve_args.block_tol,
                          "Absolute per-block tolerances, one per block")
        ->delimiter(',');
    solve_cmd->add_flag("--no-monitor", solve_args.no_monitor, "Disable per-block monitoring");
    solve_cmd->add_flag("--verify", solve_args.verify, "Run the a-posteriori oracle after solving");
    solve_cmd->add_option("--out", solve_args.out, "Output directory")->required();

    GenArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a test problem");
    gen_cmd->add_option("generator", gen_args.generator,
                        "least-norm | least-squares | stokes-mac")
        ->required();
    gen_cmd->add_option("--n", gen_args.n, "Primal dimension (random generators)");
    gen_cmd->add_option("--m", gen_args.m, "Constraint count (random generators)");
    gen_cmd->add_option("--nx", gen_args.nx, "Cells along the channel (stokes-mac)");
    gen_cmd->add_option("--ny", gen_args.ny, "Cells across the channel (stokes-mac)");
    gen_cmd->add_option("--seed", gen_args.seed, "RNG seed (random generators)");
    gen_cmd->add_option("--out", gen_args.out, "Output directory")->required();

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Replay a solve and run the oracle");
    verify_cmd->add_option("--run-dir", verify_args.run_dir, "Directory written by solve")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (solve_cmd->parsed())
            return run_solve(solve_args);
        if (gen_cmd->parsed())
            return run_gen(gen_args);
        return run_verify(verify_args);
    } catch (const minresmon::PreconditionerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBreakdown;
    } catch (const minresmon::BreakdownError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBreakdown;
    } catch (const minresmon::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int main(int argc, char** argv)
{
    return cli_main(argc, argv);
}
