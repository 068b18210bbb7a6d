#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minresmon/errors.hpp"
#include "minresmon/problems.hpp"
#include "minresmon/solver.hpp"
#include "minresmon/verify.hpp"

namespace py = pybind11;
using namespace minresmon;

namespace {

/// Solve output plus the block labels it was produced under.
struct PyResult {
    SolveResult result;
    std::vector<std::string> labels;
};

py::array_t<double> scalar_column(const ConvergenceHistory& h, double HistoryRow::* field)
{
    py::array_t<double> out(static_cast<py::ssize_t>(h.rows.size()));
    auto a = out.mutable_unchecked<1>();
    for (std::size_t j = 0; j < h.rows.size(); ++j)
        a(static_cast<py::ssize_t>(j)) = h.rows[j].*field;
    return out;
}

py::array_t<double> block_history(const ConvergenceHistory& h,
                                  std::vector<double> HistoryRow::* field)
{
    const py::ssize_t rows = static_cast<py::ssize_t>(h.rows.size());
    const py::ssize_t k =
        rows ? static_cast<py::ssize_t>((h.rows.front().*field).size()) : 0;
    py::array_t<double> out({rows, k});
    auto a = out.mutable_unchecked<2>();
    for (py::ssize_t j = 0; j < rows; ++j) {
        const auto& src = h.rows[static_cast<std::size_t>(j)].*field;
        for (py::ssize_t b = 0; b < k; ++b)
            a(j, b) = src[static_cast<std::size_t>(b)];
    }
    return out;
}

SolverOptions make_options(double tol, int maxit, bool monitor,
                           const std::optional<std::vector<double>>& block_tol,
                           bool store_iterates)
{
    SolverOptions opts;
    opts.rel_tol = tol;
    opts.max_iter = maxit;
    opts.monitor = monitor;
    opts.per_block_tol = block_tol;
    opts.store_iterates = store_iterates;
    return opts;
}

BlockDiagPreconditioner make_preconditioner(const BlockPartition& part,
                                            std::optional<std::vector<SparseMat>> blocks)
{
    if (!blocks)
        return BlockDiagPreconditioner::identity(part);
    return BlockDiagPreconditioner::from_blocks(part, std::move(*blocks));
}

py::dict report_dict(const OracleReport& rep)
{
    py::dict d;
    d["pass"] = rep.pass;
    d["max_rel_deviation"] = rep.max_rel_deviation;
    d["worst_iter"] = rep.worst_iter;
    d["eta0"] = rep.eta0;
    d["tol"] = rep.tol;
    return d;
}

PyResult solve_generic(const SparseMat& K, const Vector& f,
                       const std::vector<std::pair<std::string, int>>& blocks,
                       std::optional<std::vector<SparseMat>> precond, double tol, int maxit,
                       bool monitor, std::optional<std::vector<double>> block_tol,
                       bool store_iterates)
{
    const auto op = SaddleOperator::from_matrix(K);
    const auto part = BlockPartition::contiguous(blocks);
    const auto pre = make_preconditioner(part, std::move(precond));
    const auto opts = make_options(tol, maxit, monitor, block_tol, store_iterates);
    return {solve(op, pre, part, f, Vector::Zero(part.dim()), opts), part.labels()};
}

PyResult solve_generated(const GeneratedProblem& prob, const std::string& precond, double tol,
                         int maxit, bool monitor, std::optional<std::vector<double>> block_tol,
                         bool store_iterates)
{
    const auto it = prob.preconditioners.find(precond);
    if (it == prob.preconditioners.end())
        throw InputError("unknown preconditioner '" + precond + "'");
    const auto opts = make_options(tol, maxit, monitor, block_tol, store_iterates);
    return {solve(prob.K, it->second, prob.part, prob.f, Vector::Zero(prob.part.dim()), opts),
            prob.part.labels()};
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Preconditioned MINRES with progressive per-block residual monitoring";
    m.attr("__version__") = "0.1.0";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<PreconditionerError>(m, "PreconditionerError", PyExc_RuntimeError);
    py::register_exception<BreakdownError>(m, "BreakdownError", PyExc_RuntimeError);

    py::class_<GeneratedProblem>(m, "Problem")
        .def_property_readonly("f", [](const GeneratedProblem& p) { return p.f; })
        .def_property_readonly("matrix", [](const GeneratedProblem& p) { return p.K.assemble(); })
        .def_property_readonly("labels", [](const GeneratedProblem& p) { return p.part.labels(); })
        .def_property_readonly("block_sizes",
                               [](const GeneratedProblem& p) {
                                   std::vector<int> sizes;
                                   for (int b = 0; b < p.part.block_count(); ++b)
                                       sizes.push_back(p.part.block(b).size());
                                   return sizes;
                               })
        .def_property_readonly("dim", [](const GeneratedProblem& p) { return p.part.dim(); })
        .def_property_readonly("generator",
                               [](const GeneratedProblem& p) { return p.meta.generator; })
        .def_property_readonly("params", [](const GeneratedProblem& p) { return p.meta.params; })
        .def_property_readonly("preconditioner_names",
                               [](const GeneratedProblem& p) {
                                   std::vector<std::string> names;
                                   for (const auto& [name, pre] : p.preconditioners)
                                       names.push_back(name);
                                   return names;
                               })
        .def("__repr__", [](const GeneratedProblem& p) {
            return "<minresmon.Problem " + p.meta.generator + ", dim " +
                   std::to_string(p.part.dim()) + ">";
        });

    py::class_<PyResult>(m, "Result")
        .def_property_readonly("x", [](const PyResult& r) { return r.result.x; })
        .def_property_readonly(
            "reason", [](const PyResult& r) { return to_string(r.result.history.reason); })
        .def_property_readonly(
            "iterations", [](const PyResult& r) { return r.result.history.iterations(); })
        .def_property_readonly("eta0", [](const PyResult& r) { return r.result.history.eta0; })
        .def_property_readonly(
            "eta", [](const PyResult& r) { return scalar_column(r.result.history, &HistoryRow::eta); })
        .def_property_readonly("eta_rel",
                               [](const PyResult& r) {
                                   return scalar_column(r.result.history, &HistoryRow::eta_rel);
                               })
        .def_property_readonly("eta_block",
                               [](const PyResult& r) {
                                   return block_history(r.result.history, &HistoryRow::eta_block);
                               })
        .def_property_readonly(
            "mu", [](const PyResult& r) { return block_history(r.result.history, &HistoryRow::mu); })
        .def_property_readonly("labels", [](const PyResult& r) { return r.labels; })
        .def_property_readonly(
            "work_vectors_allocated",
            [](const PyResult& r) { return r.result.work_vectors_allocated; })
        .def("__repr__", [](const PyResult& r) {
            return "<minresmon.Result " + to_string(r.result.history.reason) + " after " +
                   std::to_string(r.result.history.iterations()) + " iterations>";
        });

    m.def("gen_least_norm", &gen_least_norm, py::arg("n") = 100, py::arg("m") = 30,
          py::arg("seed") = 42,
          "Weighted least-norm saddle system [[H, B^T], [B, 0]] (u, p) = (0, b).");
    m.def("gen_least_squares", &gen_least_squares, py::arg("n") = 100, py::arg("m") = 30,
          py::arg("seed") = 42,
          "Weighted least-squares saddle system [[H, B^T], [B, 0]] (u, p) = (b, 0).");
    m.def("gen_stokes_mac", &gen_stokes_mac, py::arg("nx"), py::arg("ny"),
          "Stokes channel flow on an nx-by-ny staggered grid.");

    m.def("solve", &solve_generic, py::arg("matrix"), py::arg("rhs"), py::arg("blocks"),
          py::arg("precond") = py::none(), py::arg("tol") = 1e-6, py::arg("maxit") = 1000,
          py::arg("monitor") = true, py::arg("block_tol") = py::none(),
          py::arg("store_iterates") = false,
          "Run monitored MINRES on a symmetric scipy matrix. blocks is a list of\n"
          "(label, size) pairs covering the unknowns in order; precond is an optional\n"
          "list of SPD matrices, one per block (identity when omitted).");

    m.def("solve_problem", &solve_generated, py::arg("problem"), py::arg("precond") = "P2",
          py::arg("tol") = 1e-6, py::arg("maxit") = 1000, py::arg("monitor") = true,
          py::arg("block_tol") = py::none(), py::arg("store_iterates") = false,
          "Run monitored MINRES on a generated problem with one of its named\n"
          "preconditioners.");

    m.def(
        "explicit_norms",
        [](const SparseMat& K, const Vector& f, const Vector& x,
           const std::vector<std::pair<std::string, int>>& blocks,
           std::optional<std::vector<SparseMat>> precond) {
            const auto op = SaddleOperator::from_matrix(K);
            const auto part = BlockPartition::contiguous(blocks);
            const auto pre = make_preconditioner(part, std::move(precond));
            const auto norms = explicit_block_norms(op, pre, part, f, x);
            return py::make_tuple(norms.total, norms.per_block);
        },
        py::arg("matrix"), py::arg("rhs"), py::arg("x"), py::arg("blocks"),
        py::arg("precond") = py::none(),
        "Explicit preconditioned residual norms (total, per-block) at an iterate.");

    m.def(
        "verify",
        [](const SparseMat& K, const Vector& f,
           const std::vector<std::pair<std::string, int>>& blocks,
           std::optional<std::vector<SparseMat>> precond, const PyResult& result, double tol) {
            const auto op = SaddleOperator::from_matrix(K);
            const auto part = BlockPartition::contiguous(blocks);
            const auto pre = make_preconditioner(part, std::move(precond));
            return report_dict(verify_solve(op, pre, part, f, result.result, tol));
        },
        py::arg("matrix"), py::arg("rhs"), py::arg("blocks"), py::arg("precond"),
        py::arg("result"), py::arg("tol") = 1e-8,
        "Recompute block norms at every stored iterate and compare with the\n"
        "progressive history. The solve must have used store_iterates=True.");

    m.def(
        "verify_problem",
        [](const GeneratedProblem& prob, const std::string& precond, const PyResult& result,
           double tol) {
            const auto it = prob.preconditioners.find(precond);
            if (it == prob.preconditioners.end())
                throw InputError("unknown preconditioner '" + precond + "'");
            return report_dict(
                verify_solve(prob.K, it->second, prob.part, prob.f, result.result, tol));
        },
        py::arg("problem"), py::arg("precond"), py::arg("result"), py::arg("tol") = 1e-8,
        "verify() against a generated problem and one of its named preconditioners.");
}
