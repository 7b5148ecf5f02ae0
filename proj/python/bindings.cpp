#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "typent/closedform.hpp"
#include "typent/continuum.hpp"
#include "typent/core.hpp"
#include "typent/coulomb.hpp"
#include "typent/errors.hpp"
#include "typent/fixedpurity.hpp"
#include "typent/orthopoly.hpp"
#include "typent/sampler.hpp"

namespace py = pybind11;
using namespace typent;

namespace {

std::vector<double> values_of(const Spectrum& s) { return {s.values().begin(), s.values().end()}; }

py::dict quantifiers_dict(const std::vector<double>& values, int k_max) {
    const auto q = compute_quantifiers(Spectrum(values), k_max);
    py::dict d;
    d["purity"] = q.purity;
    d["renyi_traces"] = q.renyi_traces;
    d["von_neumann_entropy"] = q.von_neumann_entropy;
    d["schmidt_number"] = q.schmidt_number;
    d["elementary_invariants"] = q.elementary_invariants;
    d["determinant"] = q.determinant;
    return d;
}

continuum::ContinuumDensity density_of(const std::string& kind, std::optional<double> beta) {
    if (kind == "semicircle") {
        if (!beta) throw DomainError("semicircle law needs beta");
        return continuum::semicircle(*beta);
    }
    if (kind == "marchenko_pastur" || kind == "mp") return continuum::marchenko_pastur();
    throw DomainError("unknown density kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Typical and ensemble spectra of reduced density matrices";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<FeasibilityError>(m, "FeasibilityError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<MagnitudeError>(m, "MagnitudeError", PyExc_OverflowError);
    py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_RuntimeError);

    m.def("purity", [](const std::vector<double>& v) { return purity(Spectrum(v)); });
    m.def("von_neumann_entropy",
          [](const std::vector<double>& v) { return von_neumann_entropy(Spectrum(v)); });
    m.def("quantifiers", &quantifiers_dict, py::arg("spectrum"), py::arg("k_max") = 5);

    auto op = m.def_submodule("orthopoly");
    op.def("laguerre_zeros",
           [](int degree, double order, double scale) {
               return orthopoly::laguerre_zeros({degree, order, scale});
           },
           py::arg("degree"), py::arg("order"), py::arg("scale") = 1.0);
    op.def("hermite_zeros",
           [](int degree, double shift, double scale) {
               return orthopoly::hermite_zeros({degree, shift, scale});
           },
           py::arg("degree"), py::arg("shift") = 0.0, py::arg("scale") = 1.0);
    op.def("laguerre_value", &orthopoly::laguerre_value);
    op.def("hermite_value", &orthopoly::hermite_value);

    auto cf = m.def_submodule("closedform");
    cf.def("typical_spectrum", [](int n, int mm) {
        return values_of(closedform::typical_spectrum(BipartitionDims(n, mm)));
    });
    cf.def("typical_purity", [](int n, int mm) {
        return closedform::typical_quantities(BipartitionDims(n, mm), 1).purity;
    });
    cf.def("typical_invariant", [](int n, int mm, int k) {
        return closedform::typical_invariant(BipartitionDims(n, mm), k);
    });
    cf.def("mean_moments", [](int n, int mm) {
        const auto e = closedform::mean_moments(BipartitionDims(n, mm));
        py::dict d;
        d["mean_lambda"] = e.mean_lambda;
        d["sigma_rms"] = e.sigma_rms;
        d["mean_purity"] = e.mean_purity;
        d["mean_entropy"] = e.mean_entropy;
        d["log_normalization"] = e.normalization_log;
        return d;
    });
    cf.def("det_moment", [](int n, int mm, int k) {
        return closedform::det_moment(BipartitionDims(n, mm), k);
    });
    cf.def("asymptotic_traces", &closedform::asymptotic_traces);
    cf.def("formula_table_csv", [](int n, int mm) {
        return closedform::formula_table_csv(closedform::formula_table(BipartitionDims(n, mm)));
    });

    auto cg = m.def_submodule("coulomb");
    cg.def("multiplier_xi", [](int n, int mm) { return coulomb::multiplier_xi(BipartitionDims(n, mm)); });
    cg.def("trace_inverse", [](int n, int mm) { return coulomb::trace_inverse(BipartitionDims(n, mm)); });
    cg.def("solve_saddle_numeric",
           [](int n, int mm, std::optional<double> purity_target) {
               const auto s = coulomb::solve_saddle_numeric(BipartitionDims(n, mm), purity_target);
               py::dict d;
               d["spectrum"] = values_of(s.spectrum);
               d["xi"] = s.xi;
               d["eta"] = s.eta;
               d["max_force_residual"] = s.max_force_residual;
               d["hessian_definite"] = s.hessian_definite;
               d["iterations"] = s.iterations;
               return d;
           },
           py::arg("n"), py::arg("m"), py::arg("purity_target") = std::nullopt);

    auto fp = m.def_submodule("fixedpurity");
    fp.def("eta_from_purity", &fixedpurity::eta_from_purity);
    fp.def("purity_from_eta", &fixedpurity::purity_from_eta);
    fp.def("solve",
           [](int n, std::optional<double> purity, std::optional<double> eta) {
               if (purity.has_value() == eta.has_value())
                   throw DomainError("give exactly one of purity or eta");
               const auto p = purity ? fixedpurity::IsopurityProblem::from_purity(n, *purity)
                                     : fixedpurity::IsopurityProblem::from_eta(n, *eta);
               const auto s = fixedpurity::solve_isopurity(p);
               py::dict d;
               d["eigenvalues"] = s.eigenvalues;
               d["feasible"] = s.feasible;
               d["min_eigenvalue"] = s.min_eigenvalue;
               d["purity"] = s.purity;
               d["eta"] = p.eta();
               d["beta"] = p.beta();
               d["xi"] = p.xi();
               return d;
           },
           py::arg("n"), py::kw_only(), py::arg("purity") = std::nullopt,
           py::arg("eta") = std::nullopt);
    fp.def("critical_threshold", [](int n) {
        const auto t = fixedpurity::critical_threshold(n);
        py::dict d;
        d["beta_plus"] = t.beta_plus;
        d["purity_critical"] = t.purity_critical;
        d["eta_plus"] = t.eta_plus;
        d["beta_plus_finite"] = t.beta_plus_finite;
        d["purity_at_eta_plus"] = t.purity_at_eta_plus;
        return d;
    });

    auto sp = m.def_submodule("sampler");
    sp.def("estimate",
           [](int n, int mm, std::int64_t samples, std::uint64_t seed, const std::string& functional,
              int threads) {
               sampler::SamplerConfig config{BipartitionDims(n, mm), samples, seed, 256, threads};
               const auto e = sampler::estimate(config, sampler::Functional::parse(functional));
               return py::make_tuple(e.mean, e.std_error);
           },
           py::arg("n"), py::arg("m"), py::arg("samples"), py::arg("seed") = 0,
           py::arg("functional") = "purity", py::arg("threads") = 0);
    sp.def("rescaled_eigenvalues",
           [](int n, int mm, std::int64_t samples, std::uint64_t seed) {
               return sampler::rescaled_eigenvalues({BipartitionDims(n, mm), samples, seed});
           },
           py::arg("n"), py::arg("m"), py::arg("samples"), py::arg("seed") = 0);

    auto ct = m.def_submodule("continuum");
    ct.def("density",
           [](const std::string& kind, double lambda, std::optional<double> beta) {
               return continuum::density_value(density_of(kind, beta), lambda);
           },
           py::arg("kind"), py::arg("lam"), py::arg("beta") = std::nullopt);
    ct.def("support",
           [](const std::string& kind, std::optional<double> beta) {
               const auto d = density_of(kind, beta);
               return py::make_tuple(d.lambda_minus, d.lambda_plus);
           },
           py::arg("kind"), py::arg("beta") = std::nullopt);
    ct.def("moments",
           [](const std::string& kind, std::optional<double> beta) {
               const auto mo = continuum::moments(density_of(kind, beta));
               return py::make_tuple(mo.mass, mo.mean, mo.second_moment);
           },
           py::arg("kind"), py::arg("beta") = std::nullopt);
    ct.def("finite_n_convergence", [](const std::vector<int>& ns, double beta) {
        std::vector<std::pair<int, double>> out;
        for (const auto& r : continuum::finite_n_convergence(ns, beta)) out.emplace_back(r.n, r.ks_distance);
        return out;
    });
}
