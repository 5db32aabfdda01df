#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include <sstream>

#include "muprod/biorth_check.hpp"
#include "muprod/biorthogonal.hpp"
#include "muprod/clt.hpp"
#include "muprod/contour.hpp"
#include "muprod/hard_edge.hpp"
#include "muprod/identities.hpp"
#include "muprod/kernel.hpp"
#include "muprod/sampler.hpp"

namespace py = pybind11;
using namespace muprod;

PYBIND11_MODULE(_core, m) {
  m.doc() = "singular-value statistics of products of two mu-coupled Gaussian matrices";

  py::class_<CouplingParameters>(m, "CouplingParameters")
      .def_readonly("mu", &CouplingParameters::mu)
      .def_readonly("N", &CouplingParameters::n_small)
      .def_readonly("M", &CouplingParameters::m_large)
      .def_readonly("nu", &CouplingParameters::nu)
      .def_readonly("alpha", &CouplingParameters::alpha)
      .def_readonly("delta", &CouplingParameters::delta)
      .def("__repr__", [](const CouplingParameters& p) {
        std::ostringstream os;
        os << "CouplingParameters(mu=" << p.mu << ", N=" << p.n_small << ", M=" << p.m_large
           << ")";
        return os.str();
      });

  m.def("make_parameters", &make_parameters, py::arg("mu"), py::arg("N"), py::arg("M"));

  py::class_<BiorthogonalSystem>(m, "BiorthogonalSystem")
      .def(py::init<const CouplingParameters&, int>(), py::arg("params"), py::arg("max_n") = 40)
      .def_property_readonly("max_n", &BiorthogonalSystem::max_n)
      .def("eval_P", &BiorthogonalSystem::eval_P, py::arg("n"), py::arg("x"))
      .def("eval_Q", &BiorthogonalSystem::eval_Q, py::arg("n"), py::arg("y"));

  m.def(
      "kernel",
      [](double x, double y, const BiorthogonalSystem& sys, const std::string& method) {
        return kernel(x, y, sys, kernel_method_from_string(method)).value;
      },
      py::arg("x"), py::arg("y"), py::arg("sys"), py::arg("method") = "direct");
  m.def("jpdf", [](const std::vector<double>& pts, const CouplingParameters& p) {
    return jpdf(pts, p);
  });
  m.def("laguerre_type_kernel", &laguerre_type_kernel);
  m.def("moment_matrix_entry", &moment_matrix_entry);
  m.def(
      "recurrence_a",
      [](int n, const CouplingParameters& p) {
        auto a = recurrence_a(n, p);
        return std::vector<double>(a.begin(), a.end());
      },
      "five coefficients, index order a_{-2,n}..a_{2,n}");
  m.def("biorthogonality_matrix", &biorthogonality_matrix, py::arg("params"), py::arg("nmax"),
        py::arg("prec_bits") = 256);

  m.def("eval_P_contour", &eval_P_contour);
  m.def("meijer_f", &meijer_f, py::arg("x"), py::arg("nu"));
  m.def(
      "meijer_g", [](double y, int nu) { return meijer_g(y, nu); }, py::arg("y"), py::arg("nu"));
  m.def(
      "limiting_kernel",
      [](double x, double y, int nu) {
        HardEdgeContext ctx;
        ctx.nu = nu;
        return limiting_kernel(x, y, ctx);
      },
      py::arg("x"), py::arg("y"), py::arg("nu"));
  m.def("rescaled_finite_kernel", &rescaled_finite_kernel);

  m.def(
      "sample_batch",
      [](const CouplingParameters& p, int count, std::uint64_t seed, bool rescaled) {
        auto b = sample_batch(p, count, seed, rescaled);
        return py::make_tuple(b.spectra, b.failed_trials);
      },
      py::arg("params"), py::arg("count"), py::arg("seed"), py::arg("rescaled") = false);
  m.def("squared_singular_values", [](const std::vector<std::vector<std::complex<double>>>& rows) {
    int n = static_cast<int>(rows.size());
    ComplexMatrix y(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw std::invalid_argument("squared_singular_values: matrix must be square");
      for (int j = 0; j < n; ++j) y(i, j) = rows[i][j];
    }
    return squared_singular_values(y);
  });

  m.def(
      "limiting_recurrence_alphas",
      [](double mu) {
        auto a = limiting_recurrence_alphas(mu);
        return std::vector<double>(a.begin(), a.end());
      },
      "(alpha_2, alpha_1, alpha_0, alpha_{-1}, alpha_{-2})");
  m.def("fourier_coefficients", &fourier_coefficients, py::arg("f"), py::arg("mu"));
  m.def("limiting_variance", &limiting_variance, py::arg("f"), py::arg("mu"));
  m.def(
      "clt_experiment",
      [](const CouplingParameters& p, const std::vector<double>& f, int trials,
         std::uint64_t seed) {
        auto r = clt_experiment(p, f, trials, seed);
        py::dict d;
        d["mu"] = r.mu;
        d["N"] = r.n_small;
        d["M"] = r.m_large;
        d["f_coefficients"] = r.f_coefficients;
        d["trials"] = r.trials;
        d["sample_variance"] = r.sample_variance;
        d["analytic_variance"] = r.analytic_variance;
        d["ratio"] = r.ratio;
        d["skewness"] = r.skewness;
        d["kurtosis"] = r.excess_kurtosis;
        d["seed"] = r.seed;
        return d;
      },
      py::arg("params"), py::arg("f"), py::arg("trials"), py::arg("seed"));

  m.def("check_summa", &identities::check_summa);
  m.def("check_prop61", &identities::check_prop61);
  m.def("run_identity_checks", [] {
    py::list out;
    for (const auto& v : identities::run_all_identity_checks()) {
      py::dict d;
      d["family"] = v.family;
      d["grid_size"] = v.grid_size;
      d["passes"] = v.passes;
      d["failures"] = v.failures;
      d["skips"] = v.skips;
      out.append(d);
    }
    return out;
  });
}
