#include "gpcsg/integrate.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace gpcsg;

namespace {

IntegratorConfig config(double dt, double t_end, int record_every = 1) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = record_every;
  return c;
}

Eigen::VectorXd scalar_endpoint(double dt) {
  const ModelParams p(1, 1, 1);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  Eigen::VectorXd x0(2);
  x0 << 0.4, -0.3;
  const Trajectory tr = integrate(
      [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        const StateZ d = perturb_rhs({x[0], x[1]}, r, p);
        dx.resize(2);
        dx << d.rho, d.m;
      },
      x0, config(dt, 1.0, 1000000));
  return tr.states.back();
}

}  // namespace

TEST_CASE("RK4 on the linear test equation") {
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  const Trajectory tr = integrate([](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; },
                                  x0, config(0.01, 1.0, 10));
  CHECK(std::abs(tr.states.back()[0] - std::exp(-1.0)) < 1e-9);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.samples() == 11);
}

TEST_CASE("Euler is first order") {
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  auto err = [&](double dt) {
    IntegratorConfig c = config(dt, 1.0, 1000);
    c.scheme = Scheme::Euler;
    return std::abs(integrate([](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = -x; }, x0, c)
                        .states.back()[0] - std::exp(-1.0));
  };
  CHECK(err(0.01) / err(0.005) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("last step is shortened to land on t_end") {
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  const Trajectory tr = integrate([](double, const Eigen::VectorXd&, Eigen::VectorXd& dx) { dx.setOnes(1); },
                                  x0, config(0.3, 1.0, 100));
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.states.back()[0] == doctest::Approx(2.0));
}

TEST_CASE("RK4 Richardson ratio on the nonlinear scalar perturbation system") {
  const Eigen::VectorXd ref = scalar_endpoint(1e-4);
  const double ratio = (scalar_endpoint(0.05) - ref).norm() / (scalar_endpoint(0.025) - ref).norm();
  CHECK(ratio >= 14.0);
  CHECK(ratio <= 18.0);
}

TEST_CASE("NaN aborts with step and time") {
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  try {
    integrate([](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) { dx = x.cwiseProduct(x) * 1e3; },
              x0, config(0.1, 10.0));
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.time() > 0.0);
  }
}

TEST_CASE("invalid configs") {
  CHECK_THROWS(config(0.0, 1.0).validate());
  CHECK_THROWS(config(0.1, 0.01).validate());
  CHECK_THROWS(config(0.1, 1.0, 0).validate());
  CHECK_THROWS(scheme_from_string("leapfrog"));
}

TEST_CASE("zero state stays zero under the Galerkin system") {
  const Measure m = build_measure(MeasureKind::Uniform, -0.5, 0.5);
  const QuadratureRule q = build_quadrature(m, default_quadrature_order(4));
  const ModelParams p(1, 1, 1);
  const GalerkinTensors t = assemble_tensors(build_basis(m, q, 4), q, p, SourceTerm::affine(0.5, 1, m.support()));
  const Trajectory tr = solve_galerkin(t, p, GalerkinState::zero(4), config(0.01, 1.0, 10));
  for (const auto& s : tr.states) CHECK(s.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant source: nodes agree and Galerkin matches the scalar ODE") {
  const Measure m = build_measure(MeasureKind::Uniform, -0.5, 0.5);
  const ModelParams p(1, 2, 1.5);
  const SourceTerm src = SourceTerm::affine(0, 1.2, m.support());
  const QuadratureRule oq = build_quadrature(m, 9);
  const IntegratorConfig c = config(1e-3, 1.0, 100);
  const Trajectory col = solve_collocation(p, src, oq, [](double) { return 0.2; },
                                           [](double) { return -0.1; }, c, 3);
  const Eigen::VectorXd last = col.states.back();
  for (int i = 1; i < 9; ++i) {
    CHECK(std::abs(last[i] - last[0]) < 1e-14);
    CHECK(std::abs(last[9 + i] - last[9]) < 1e-14);
  }

  const double r = steady_state_r(p, 1.2);
  const auto [rho, mm] = oracle::rk4_2d(
      [&](double x, double y) {
        const StateZ d = perturb_rhs({x, y}, r, p);
        return std::pair{d.rho, d.m};
      },
      0.2, -0.1, 1e-3, 1000);
  for (int K : {0, 3}) {
    const QuadratureRule q = build_quadrature(m, default_quadrature_order(K));
    const BasisFamily b = build_basis(m, q, K);
    GalerkinState g0 = GalerkinState::zero(K);
    g0.rho_hat[0] = 0.2;
    g0.m_hat[0] = -0.1;
    const Trajectory gal = solve_galerkin(assemble_tensors(b, q, p, src), p, g0, c);
    const Eigen::VectorXd s = gal.states.back();
    CHECK(std::abs(s[0] - rho) < 1e-10);
    CHECK(std::abs(s[K + 1] - mm) < 1e-10);
    for (int i = 1; i <= K; ++i) {
      CHECK(std::abs(s[i]) < 1e-13);
      CHECK(std::abs(s[K + 1 + i]) < 1e-13);
    }
    CHECK(std::abs(s[0] - last[0]) < 1e-10);
  }
}

TEST_CASE("pointwise energy decreases under the smallness thresholds") {
  const Measure m = build_measure(MeasureKind::Uniform, -0.5, 0.5);
  const ModelParams p(1, 2, 1);
  const SourceTerm src = SourceTerm::affine(2.0 / 3.0, 1, m.support());
  const QuadratureRule q = build_quadrature(m, 16);
  // |rho0| <= b/(2c) = 1, |m0| <= a/(2c) = 1/2 pointwise
  const Trajectory col = solve_collocation(p, src, q, [](double z) { return 0.9 * (1 - z); },
                                           [](double z) { return -0.45 + 0.2 * z; }, config(1e-2, 5.0), 1);
  const auto n = col.half();
  for (Eigen::Index node = 0; node < n; ++node) {
    double prev = INFINITY;
    for (std::size_t s = 0; s < col.samples(); ++s) {
      const double rho = col.states[s][node], mm = col.states[s][n + node];
      const double e = p.a * rho * rho + p.b * mm * mm;
      CHECK(e <= prev * (1 + 1e-12));
      prev = e;
    }
  }
}

TEST_CASE("collocation is independent of the thread count") {
  const Measure m = build_measure(MeasureKind::Uniform, -0.5, 0.5);
  const ModelParams p(1, 1, 1);
  const SourceTerm src = SourceTerm::affine(2.0 / 3.0, 1, m.support());
  const QuadratureRule q = build_quadrature(m, 33);
  auto run = [&](int threads) {
    return solve_collocation(p, src, q, [](double z) { return 0.1 * z; }, [](double z) { return 0.05 - z * z; },
                             config(1e-2, 1.0, 5), threads);
  };
  const Trajectory a = run(1), b = run(8);
  REQUIRE(a.samples() == b.samples());
  for (std::size_t s = 0; s < a.samples(); ++s) CHECK((a.states[s].array() == b.states[s].array()).all());
}

TEST_CASE("trajectory csv header") {
  Trajectory tr;
  tr.times = {0.0};
  tr.states = {Eigen::VectorXd::Zero(4)};
  std::ostringstream os;
  tr.write_csv(os);
  CHECK(os.str().rfind("t,rho_0,rho_1,m_0,m_1\r\n", 0) == 0);
}
