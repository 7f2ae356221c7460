#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polyapprox/basis.hpp"
#include "polyapprox/errors.hpp"
#include "polyapprox/harness.hpp"
#include "polyapprox/metrics.hpp"
#include "polyapprox/multi_index.hpp"
#include "polyapprox/oracles.hpp"
#include "polyapprox/sampling.hpp"
#include "polyapprox/sr_lasso.hpp"
#include "polyapprox/test_functions.hpp"

namespace py = pybind11;
namespace pa = polyapprox;

namespace {

pa::IndexSet to_set(const std::vector<std::vector<std::uint32_t>>& dense) {
    std::vector<pa::MultiIndex> members;
    members.reserve(dense.size());
    for (const auto& d : dense) members.push_back(pa::MultiIndex::from_dense(d));
    return pa::IndexSet(std::move(members));
}

std::vector<std::vector<std::uint32_t>> to_dense(const pa::IndexSet& s, std::uint32_t d) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& nu : s) out.push_back(nu.dense(d));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Polynomial approximation core (least squares, compressed sensing, oracles)";

    py::register_exception<pa::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<pa::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def(
        "hyperbolic_cross",
        [](std::uint32_t n, std::uint32_t d) { return to_dense(pa::hyperbolic_cross_anchored(n, d), d); },
        py::arg("n"), py::arg("d"), "Anchored hyperbolic cross of order n in dimensions 1..d, canonical order.");

    m.def(
        "reduced_margin",
        [](const std::vector<std::vector<std::uint32_t>>& s, std::uint32_t d) {
            return to_dense(pa::reduced_margin(to_set(s), d), d);
        },
        py::arg("indices"), py::arg("d"));

    m.def(
        "is_lower", [](const std::vector<std::vector<std::uint32_t>>& s) { return pa::is_lower(to_set(s)); },
        py::arg("indices"));

    m.def(
        "kappa",
        [](const std::string& family, const std::vector<std::vector<std::uint32_t>>& s) {
            return pa::kappa(pa::parse_family(family), to_set(s));
        },
        py::arg("family"), py::arg("indices"));

    m.def(
        "kappa_max_lower",
        [](const std::string& family, std::size_t d, std::size_t n) {
            return pa::kappa_max_lower(pa::parse_family(family), d, n);
        },
        py::arg("family"), py::arg("d"), py::arg("n"));

    m.def(
        "evaluate_basis",
        [](const std::string& family, const std::vector<std::vector<std::uint32_t>>& s, const pa::RowMatrix& points) {
            const pa::IndexSet set = to_set(s);
            return pa::evaluate_basis(pa::parse_family(family), set.members(), points);
        },
        py::arg("family"), py::arg("indices"), py::arg("points"),
        "Orthonormal tensor basis values, one row per point, columns in canonical order of the indices.");

    m.def(
        "draw_grid",
        [](std::size_t d, std::size_t k, const std::string& family, std::uint64_t seed) {
            return pa::draw_grid(d, k, pa::parse_family(family), seed).points;
        },
        py::arg("d"), py::arg("k"), py::arg("family") = "legendre", py::arg("seed") = 1);

    m.def(
        "near_optimal_probabilities",
        [](const pa::RowMatrix& points, const std::string& family, const std::vector<std::vector<std::uint32_t>>& s) {
            pa::Grid g{points, pa::parse_family(family), 0};
            const auto dist = pa::near_optimal_distribution(g, pa::parse_family(family), to_set(s));
            return std::make_pair(pa::Vector(dist.probabilities), pa::Vector(dist.weights));
        },
        py::arg("points"), py::arg("family"), py::arg("indices"),
        "Near-optimal sampling probabilities and weights over a grid.");

    m.def(
        "evaluate_target",
        [](const std::string& id, const pa::RowMatrix& points) {
            const auto t = pa::make_target(id, static_cast<std::size_t>(points.cols()));
            pa::Vector out(points.rows());
            for (Eigen::Index i = 0; i < points.rows(); ++i)
                out[i] = t(std::span<const double>(points.row(i).data(), static_cast<std::size_t>(points.cols())));
            return out;
        },
        py::arg("id"), py::arg("points"));

    m.def("target_ids", &pa::target_ids);

    m.def(
        "relative_error",
        [](const std::vector<double>& approx, const std::vector<double>& target, const std::string& norm) {
            return pa::relative_error(approx, target, pa::parse_norm(norm));
        },
        py::arg("approx"), py::arg("target"), py::arg("norm") = "l2");

    m.def(
        "sr_lasso",
        [](const pa::Matrix& a, const pa::Vector& f, const pa::Vector& u, std::optional<std::size_t> max_restarts) {
            pa::SrLassoConfig c = pa::SrLassoConfig::from_table(a);
            if (max_restarts) c.max_restarts = *max_restarts;
            const pa::CsResult r = pa::restarted(a, f, u, c);
            py::dict info;
            info["restarts_used"] = r.restarts_used;
            info["converged"] = r.converged;
            info["objective_trace"] = r.objective_trace;
            info["config"] = pa::to_json(c).dump();
            return std::make_pair(pa::Vector(r.coefficients.values), info);
        },
        py::arg("a"), py::arg("f"), py::arg("u"), py::arg("max_restarts") = py::none(),
        "Restarted primal-dual solve of the weighted square-root LASSO with the default parameter table.");

    m.def(
        "best_n_term_product",
        [](const std::vector<std::vector<double>>& per_dim, std::size_t n) {
            const auto b = pa::best_n_term_product(per_dim, n);
            return std::make_pair(to_dense(b.set, static_cast<std::uint32_t>(per_dim.size())), b.error);
        },
        py::arg("per_dim"), py::arg("n"));

    m.def(
        "univariate_coeffs",
        [](const std::function<double(double)>& g, const std::string& family, std::size_t max_degree) {
            const auto ex = pa::univariate_coeffs(g, pa::parse_family(family), max_degree);
            return std::make_tuple(ex.coefficients, ex.tail_estimate, ex.converged);
        },
        py::arg("g"), py::arg("family"), py::arg("max_degree"));

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            const auto cfg = pa::ExperimentConfig::from_json(nlohmann::json::parse(config_json));
            pa::ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = pa::run_experiment(cfg);
            }
            return pa::to_json(r).dump();
        },
        py::arg("config_json"), "Runs an experiment from a JSON config; returns the JSON result document.");
}
