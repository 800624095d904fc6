#include "gpcsg/analysis.hpp"
#include "gpcsg/basis.hpp"
#include "gpcsg/config.hpp"
#include "gpcsg/galerkin.hpp"
#include "gpcsg/integrate.hpp"
#include "gpcsg/kinetics.hpp"
#include "gpcsg/measure.hpp"
#include "gpcsg/studies.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace gpcsg;

namespace {

Measure make_measure(const std::string& kind, double lower, double upper) {
  return build_measure(measure_kind_from_string(kind), lower, upper);
}

py::dict study_to_dict(const StudyResult& result) {
  py::dict tables;
  for (const auto& [name, table] : result.tables) tables[py::str(name)] = table.to_csv();
  py::dict out;
  out["tables"] = tables;
  out["report"] = result.report;
  out["exit_code"] = result.exit_code;
  return out;
}

RunConfig study_config(const std::optional<std::string>& json,
                       const std::vector<std::string>& overrides) {
  return json ? parse_config(*json, overrides) : default_config(overrides);
}

}  // namespace

PYBIND11_MODULE(_gpcsg, m) {
  m.doc() = "Stochastic Galerkin solver for the mRNA/microRNA kinetic model";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_ArithmeticError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double>(), py::arg("a") = 1.0, py::arg("b") = 1.0,
           py::arg("c") = 1.0)
      .def_readonly("a", &ModelParams::a)
      .def_readonly("b", &ModelParams::b)
      .def_readonly("c", &ModelParams::c);

  m.def(
      "quadrature",
      [](const std::string& kind, double lower, double upper, int n) {
        const QuadratureRule q = build_quadrature(make_measure(kind, lower, upper), n);
        return py::make_tuple(q.nodes, q.weights);
      },
      py::arg("kind"), py::arg("lower"), py::arg("upper"), py::arg("n"),
      "Gaussian nodes and weights for a uniform or chebyshev measure.");

  m.def(
      "basis_values",
      [](const std::string& kind, double lower, double upper, int K, const std::vector<double>& z) {
        const Measure measure = make_measure(kind, lower, upper);
        const BasisFamily basis =
            build_basis(measure, build_quadrature(measure, default_quadrature_order(K)), K);
        Eigen::MatrixXd out(z.size(), K + 1);
        for (std::size_t r = 0; r < z.size(); ++r) out.row(r) = basis.eval_all(z[r]).transpose();
        return out;
      },
      py::arg("kind"), py::arg("lower"), py::arg("upper"), py::arg("K"), py::arg("z"),
      "Orthonormal basis values, one row per point.");

  m.def(
      "steady_state",
      [](const ModelParams& p, double s) {
        const SteadyState ss = steady_state(p, s);
        return py::make_tuple(ss.r, ss.rho, ss.m);
      },
      py::arg("params"), py::arg("source_value"), "(r_inf, rho_inf, m_inf) for a source value.");

  m.def(
      "triple_tensor",
      [](const std::string& kind, double lower, double upper, int K) {
        const Measure measure = make_measure(kind, lower, upper);
        const QuadratureRule q = build_quadrature(measure, default_quadrature_order(K));
        const TripleTensor t = assemble_triple(build_basis(measure, q, K), q);
        py::array_t<double> out({K + 1, K + 1, K + 1});
        auto v = out.mutable_unchecked<3>();
        for (int l = 0; l <= K; ++l)
          for (int i = 0; i <= K; ++i)
            for (int j = 0; j <= K; ++j) v(l, i, j) = t(l, i, j);
        return out;
      },
      py::arg("kind"), py::arg("lower"), py::arg("upper"), py::arg("K"),
      "Dense array T[l, i, j].");

  m.def(
      "upsilon",
      [](const ModelParams& p, double k, double d, const std::string& kind, double lower,
         double upper, int K) {
        const Measure measure = make_measure(kind, lower, upper);
        const QuadratureRule q = build_quadrature(measure, default_quadrature_order(K));
        return assemble_upsilon(build_basis(measure, q, K), q, p,
                                SourceTerm::affine(k, d, measure.support()));
      },
      py::arg("params"), py::arg("k"), py::arg("d"), py::arg("kind") = "uniform",
      py::arg("lower") = -0.5, py::arg("upper") = 0.5, py::arg("K") = 8);

  m.def(
      "cv_pair",
      [](const ModelParams& p, double k, double d, int nodes) {
        const Measure measure = make_measure("uniform", -0.5, 0.5);
        const QuadratureRule q = build_quadrature(measure, nodes);
        const SourceTerm s = SourceTerm::affine(k, d, measure.support());
        return py::make_tuple(cv_linear(p, s, q), cv_nonlinear(p, s, q));
      },
      py::arg("params"), py::arg("k"), py::arg("d"), py::arg("nodes") = 64,
      "(CV_L, CV_NL) for S = k z + d, z uniform on [-1/2, 1/2].");

  m.def(
      "integrate_galerkin",
      [](const ModelParams& p, double k, double d, int K, const std::vector<double>& rho0,
         const std::vector<double>& m0, double dt, double t_end) {
        const Measure measure = make_measure("uniform", -0.5, 0.5);
        const QuadratureRule q = build_quadrature(measure, default_quadrature_order(K));
        const BasisFamily basis = build_basis(measure, q, K);
        const GalerkinTensors tensors =
            assemble_tensors(basis, q, p, SourceTerm::affine(k, d, measure.support()));
        auto poly = [](std::vector<double> c) {
          return [c](double z) {
            double v = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
            return v;
          };
        };
        GalerkinState g0{project(poly(rho0), basis, q), project(poly(m0), basis, q), 0.0};
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.t_end = t_end;
        cfg.record_every = 1;
        const Trajectory tr = solve_galerkin(tensors, p, g0, cfg);
        Eigen::MatrixXd states(tr.samples(), 2 * (K + 1));
        for (std::size_t s = 0; s < tr.samples(); ++s) states.row(s) = tr.states[s].transpose();
        return py::make_tuple(tr.times, states);
      },
      py::arg("params"), py::arg("k"), py::arg("d"), py::arg("K"), py::arg("rho0"),
      py::arg("m0"), py::arg("dt") = 1e-3, py::arg("t_end") = 1.0,
      "Galerkin trajectory: (times, rows of [rho_hat; m_hat]).");

  const std::pair<const char*, StudyResult (*)(const RunConfig&)> studies[] = {
      {"run_decay", run_decay},       {"run_converge", run_converge},
      {"run_cv_sweep", run_cv_sweep}, {"run_check", run_check},
      {"run_tensors", run_tensors},
  };
  for (const auto& [name, fn] : studies) {
    m.def(
        name,
        [fn = fn](const std::optional<std::string>& config_json,
                  const std::vector<std::string>& overrides) {
          const RunConfig cfg = study_config(config_json, overrides);
          StudyResult result;
          {
            py::gil_scoped_release release;
            result = fn(cfg);
          }
          return study_to_dict(result);
        },
        py::arg("config_json") = py::none(), py::arg("overrides") = std::vector<std::string>{},
        "Runs the study; returns {'tables': {file: csv}, 'report': [...], 'exit_code': int}.");
  }
}
