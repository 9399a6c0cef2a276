#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csde/baselines.hpp"
#include "csde/dictionary.hpp"
#include "csde/metrics.hpp"
#include "csde/simgen.hpp"
#include "csde/solver.hpp"
#include "csde/theory.hpp"
#include "csde/tuning.hpp"
#include "csde/version.hpp"
#include "csde/weights.hpp"

namespace py = pybind11;
using namespace csde;

namespace {

Dictionary make_gaussian_dictionary(const std::vector<double>& mu,
                                    const std::vector<double>& sigma) {
    if (mu.size() != sigma.size())
        throw std::invalid_argument("mu and sigma must have the same length");
    std::vector<BaseDensity> atoms;
    atoms.reserve(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j)
        atoms.push_back(BaseDensity::gaussian(mu[j], sigma[j]));
    return Dictionary(std::move(atoms));
}

Dictionary make_poisson_dictionary(const std::vector<double>& lambda) {
    std::vector<BaseDensity> atoms;
    atoms.reserve(lambda.size());
    for (const double l : lambda) atoms.push_back(BaseDensity::poisson(l));
    return Dictionary(std::move(atoms));
}

} // namespace

PYBIND11_MODULE(_csde, m) {
    m.doc() = "Sparse mixture-density estimation from contaminated samples";
    m.attr("__version__") = kVersion;

    py::class_<Dictionary>(m, "Dictionary")
        .def_property_readonly("size", &Dictionary::size)
        .def_property_readonly("l2_norms",
                               [](const Dictionary& d) { return d.l2_norms; })
        .def_property_readonly("sup_norms",
                               [](const Dictionary& d) { return d.sup_norms; })
        .def_property_readonly("normalized",
                               [](const Dictionary& d) { return d.normalized; });

    m.def("gaussian_dictionary", &make_gaussian_dictionary, py::arg("mu"), py::arg("sigma"));
    m.def("poisson_dictionary", &make_poisson_dictionary, py::arg("lambda_"));
    m.def("normalize", [](const Dictionary& d) {
        NormalizeResult nr = normalize(d);
        return py::make_tuple(std::move(nr.dict), nr.scales);
    });
    m.def("gram_matrix", [](const Dictionary& d) { return gram(d).entries; });
    m.def("min_gram_eigenvalue",
          [](const Dictionary& d) { return min_eigenvalue(gram(d)); });
    m.def("empirical_moments", &empirical_moments, py::arg("dict"), py::arg("sample"));

    py::class_<WeightSpec>(m, "WeightSpec")
        .def_readonly("n", &WeightSpec::n)
        .def_readonly("W", &WeightSpec::W)
        .def_readonly("delta", &WeightSpec::delta)
        .def_readonly("c", &WeightSpec::c)
        .def_readonly("B", &WeightSpec::B)
        .def_readonly("v_value", &WeightSpec::v_value)
        .def_readonly("omega", &WeightSpec::omega)
        .def_readonly("omega_tilde", &WeightSpec::omega_tilde);

    m.def("concentration_weights", &csde_weights, py::arg("dict"), py::arg("n"),
          py::arg("delta"), py::arg("c") = 0.0, py::arg("B") = 1.0);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("beta_hat", &FitResult::beta_hat)
        .def_readonly("support", &FitResult::support)
        .def_readonly("objective", &FitResult::objective)
        .def_readonly("kkt_residuals", &FitResult::kkt_residuals)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("converged", &FitResult::converged);

    m.def(
        "fit",
        [](const std::string& variant, const std::vector<double>& sample,
           const Dictionary& dict, double lambda1, double lambda2) {
            return fit_variant(variant_from_string(variant), sample, dict, lambda1, lambda2);
        },
        py::arg("variant"), py::arg("sample"), py::arg("dict"), py::arg("lambda1"),
        py::arg("lambda2") = 0.0);
    m.def(
        "fit_weighted",
        [](const std::vector<double>& sample, const Dictionary& dict,
           const Eigen::VectorXd& omega, double c, bool nonneg) {
            Problem p;
            p.beta_tilde = empirical_moments(dict, sample);
            p.gram = gram(dict).entries;
            p.omega = omega;
            p.c = c;
            p.nonneg = nonneg;
            return fit(p);
        },
        py::arg("sample"), py::arg("dict"), py::arg("omega"), py::arg("c") = 0.0,
        py::arg("nonneg") = true);
    m.def("fit_orthogonal", &fit_orthogonal, py::arg("beta_tilde"), py::arg("omega"),
          py::arg("c") = 0.0, py::arg("nonneg") = true);

    m.def(
        "em_fit",
        [](const std::vector<double>& sample, const Dictionary& dict, double xi,
           int max_iter) {
            EmConfig cfg;
            cfg.xi = xi;
            cfg.max_iter = max_iter;
            return em_fit(sample, dict, cfg);
        },
        py::arg("sample"), py::arg("dict"), py::arg("xi") = 1e-4,
        py::arg("max_iter") = 10000);

    m.def("l1_error", &l1_error, py::arg("beta_hat"), py::arg("beta_star"));
    m.def("tv_error", &tv_error, py::arg("dict"), py::arg("beta_a"), py::arg("beta_b"),
          py::arg("grid_points") = 20001);

    py::class_<TuneResult>(m, "TuneResult")
        .def_readonly("lambda1", &TuneResult::lambda1)
        .def_readonly("lambda2", &TuneResult::lambda2)
        .def_readonly("score", &TuneResult::score)
        .def_readonly("converged", &TuneResult::converged);

    m.def(
        "tune",
        [](const std::vector<double>& sample, const Dictionary& dict,
           const std::string& variant, std::pair<double, double> lambda1_range,
           std::pair<double, double> lambda2_range, double xi, std::uint64_t seed) {
            TuneConfig tc;
            tc.lambda1_range = lambda1_range;
            tc.lambda2_range = lambda2_range;
            tc.xi = xi;
            tc.seed = seed;
            return tune(tc, sample, dict, variant_from_string(variant));
        },
        py::arg("sample"), py::arg("dict"), py::arg("variant") = "csde",
        py::arg("lambda1_range") = std::make_pair(0.0, 0.5),
        py::arg("lambda2_range") = std::make_pair(0.0, 0.1), py::arg("xi") = 0.001,
        py::arg("seed") = 0);

    m.def(
        "diagnostics",
        [](const Dictionary& dict, const Eigen::VectorXd& beta,
           const Eigen::VectorXd& beta_star, int n, double delta, double c, double B,
           double gamma) {
            const GramMatrix g = gram(dict);
            const WeightSpec w = csde_weights(dict, n, delta, c, B);
            const Eigen::VectorXd d = beta - beta_star;
            const double approx = std::max(0.0, d.dot(g.entries * d));
            const OracleDiagnostics diag =
                oracle_diagnostics(dict, g, beta, beta_star, w, approx, gamma);
            py::dict out;
            out["H"] = diag.H;
            out["F"] = diag.F;
            out["rho_star"] = diag.rho_star;
            out["W_beta"] = diag.W_beta;
            out["lambda_W"] = diag.lambda_W;
            out["G"] = diag.G;
            out["G_star"] = diag.G_star;
            out["alpha_opt1"] = diag.alpha_opt1;
            out["alpha_opt2"] = diag.alpha_opt2;
            out["gamma_condition_lhs"] = diag.gamma_condition_lhs;
            out["condition_a"] = diag.condition_a;
            out["condition_b"] = diag.condition_b;
            out["bound_t1"] = diag.bound_t1;
            out["bound_t2"] = diag.bound_t2;
            out["bound_c1"] = diag.bound_c1;
            out["bound_c2"] = diag.bound_c2;
            out["approx_error"] = approx;
            return out;
        },
        py::arg("dict"), py::arg("beta"), py::arg("beta_star"), py::arg("n") = 100,
        py::arg("delta") = 0.1, py::arg("c") = 0.0, py::arg("B") = 1.0,
        py::arg("gamma") = 0.5);

    m.def("support_recovery_probability", &theorem3_probability, py::arg("W"),
          py::arg("delta"), py::arg("eps_star"));
}
