#include "gpcsg/analysis.hpp"
#include "gpcsg/galerkin.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace gpcsg;

namespace {
const Interval kI{-0.5, 0.5};
Measure uniform() { return build_measure(MeasureKind::Uniform, -0.5, 0.5); }
Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(v.size());
  int i = 0;
  for (double d : v) x[i++] = d;
  return x;
}
}  // namespace

TEST_CASE("l2 norm by Parseval") {
  CHECK(l2_pi_norm_sq(vec({1, 0, 0})) == 1.0);
  CHECK(l2_pi_norm_sq(Eigen::VectorXd()) == 0.0);
  const Measure m = uniform();
  const QuadratureRule q = build_quadrature(m, 10);
  const Eigen::VectorXd z = project([](double x) { return x; }, build_basis(m, q, 4), q);
  CHECK(l2_pi_norm_sq(z) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("H^n norms") {
  const QuadratureRule q = build_quadrature(uniform(), 12);
  for (int n = 0; n <= 4; ++n) CHECK(hn_pi_norm_sq(polynomial_function({1.7}), n, q) == doctest::Approx(1.7 * 1.7));
  CHECK(hn_pi_norm_sq(polynomial_function({0, 1}), 1, q) == doctest::Approx(13.0 / 12.0).epsilon(1e-14));
  // n = 0 is the L2 norm of the expansion
  const Measure m = uniform();
  const BasisFamily b = build_basis(m, q, 5);
  const Eigen::VectorXd c = vec({0.3, -0.2, 0.5, 0.1, 0.0, -0.05});
  CHECK(hn_pi_norm_sq(expansion_function(b, c), 0, q) == doctest::Approx(l2_pi_norm_sq(c)).epsilon(1e-12));
  // derivative of the expansion against the oracle polynomials
  const double want = oracle::uniform_mean(
      [&](double z) {
        double v = 0, dv = 0;
        const double h = 1e-5;
        for (int i = 0; i <= 5; ++i) {
          v += c[i] * oracle::legendre_on(i, z, -0.5, 0.5);
          dv += c[i] * (oracle::legendre_on(i, z + h, -0.5, 0.5) - oracle::legendre_on(i, z - h, -0.5, 0.5)) / (2 * h);
        }
        return v * v + dv * dv;
      },
      -0.5, 0.5);
  CHECK(hn_pi_norm_sq(expansion_function(b, c), 1, q) == doctest::Approx(want).epsilon(1e-8));

  DifferentiableFunction limited{1, [](double z, int) { return z; }};
  CHECK_THROWS_AS(hn_pi_norm_sq(limited, 2, q), std::invalid_argument);
}

TEST_CASE("weighted energies") {
  CHECK(weighted_energy(vec({0, 0}), vec({0, 0}), {1, 1}, 2, 3) == 0.0);
  CHECK(weighted_energy(vec({1, 2}), vec({3, 1}), {1, 1}, 2, 3) == doctest::Approx(2 * 5 + 3 * 10));
  CHECK(weighted_energy(vec({1, 1}), vec({0, 0}), mu_weights(1, 2), 1.5, 1) == doctest::Approx(17 * 1.5));
  CHECK_THROWS_AS(weighted_energy(vec({1, 1}), vec({0, 0}), {1}, 1, 1), std::invalid_argument);
  const auto w = omega_star_weights(2, 2.0, 3.0);
  CHECK(w[0] == doctest::Approx(9.0));
  CHECK(w[1] == doctest::Approx(3.0 * 4.0 / 2.0));
  CHECK(w[2] == doctest::Approx(9.0 / (4.0 * 2.0)));
}

TEST_CASE("steady state derivatives for an affine source") {
  const ModelParams p(1, 1, 1);
  const double k = 2.0 / 3.0;
  const SourceTerm s = SourceTerm::affine(k, 1, kI);
  for (double z : {-0.5, 0.0, 0.3}) {
    const double D = 1 + 4 * s(z);
    const auto d = steady_state_derivatives(p, s, z, 3);
    CHECK(d[0] == doctest::Approx((std::sqrt(D) - 1) / 2));
    CHECK(d[1] == doctest::Approx(k / std::sqrt(D)));
    CHECK(d[2] == doctest::Approx(-2 * k * k * std::pow(D, -1.5)));
    CHECK(d[3] == doctest::Approx(12 * k * k * k * std::pow(D, -2.5)));
  }
}

TEST_CASE("property: derivatives of r_inf for random sources against finite differences") {
  auto g = oracle::rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelParams p(oracle::uniform(g, 0.5, 3), oracle::uniform(g, 0.5, 3), oracle::uniform(g, 0.5, 3));
    const std::vector<double> c{oracle::uniform(g, 1, 2), oracle::uniform(g, -1, 1), oracle::uniform(g, -1, 1)};
    const SourceTerm s = SourceTerm::polynomial(c, kI);
    const double z = oracle::uniform(g, -0.4, 0.4), h = 1e-5;
    auto r = [&](double x) { return oracle::steady_r(p.a, p.b, p.c, oracle::poly(c, x)); };
    const auto d = steady_state_derivatives(p, s, z, 2);
    CHECK(d[1] == doctest::Approx((r(z + h) - r(z - h)) / (2 * h)).epsilon(1e-7).scale(1.0));
    CHECK(d[2] == doctest::Approx((r(z + h) - 2 * r(z) + r(z - h)) / (h * h)).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("kappa") {
  const ModelParams p(1, 1, 1);
  const Measure m = uniform();
  const KappaReport constant = estimate_kappa(SourceTerm::affine(0, 1, kI), p, m, 6);
  const double r0 = (std::sqrt(5.0) - 1) / 2;
  CHECK(constant.kappa == doctest::Approx(r0).epsilon(1e-14));
  CHECK(constant.r == doctest::Approx(r0));
  CHECK_FALSE(constant.degenerate);

  const SourceTerm affine = SourceTerm::affine(2.0 / 3.0, 1, kI);
  const KappaReport coarse = estimate_kappa(affine, p, m, 6, 2001);
  const KappaReport fine = estimate_kappa(affine, p, m, 6, 8001);
  CHECK(std::abs(coarse.kappa - fine.kappa) < 1e-6);
  for (int i = 0; i <= 6; ++i) CHECK(coarse.margins[i] >= 0.0);
  CHECK(coarse.r == doctest::Approx(oracle::steady_r(1, 1, 1, 2.0 / 3.0)));
  CHECK(coarse.R == doctest::Approx(oracle::steady_r(1, 1, 1, 4.0 / 3.0)));

  const KappaReport zero = estimate_kappa(SourceTerm::affine(0, 0, kI), p, m, 4);
  CHECK(zero.degenerate);
  CHECK(zero.kappa == 0.0);
  CHECK(std::isinf(theorem_constants(zero, 0.5, p, kI).L));
}

TEST_CASE("decay and stability constants for a constant source") {
  const ModelParams p(1, 2, 0.5);
  const KappaReport k = estimate_kappa(SourceTerm::affine(0, 1, kI), p, uniform(), 6);
  const TheoremConstants tc = theorem_constants(k, 0.5, p, kI);
  const double A = 1.6449340668482264;
  CHECK(tc.A == doctest::Approx(A).epsilon(1e-15));
  CHECK(tc.kappa == doctest::Approx(k.r));
  CHECK(tc.L == doctest::Approx(std::sqrt(16 * A + 1)));
  CHECK(tc.nu == doctest::Approx(k.r * std::sqrt(16 * A + 1)));
  CHECK(tc.q == 2.5);
  CHECK(tc.C0_sens == doctest::Approx(1 / (800 * A * 0.25)));
  CHECK(tc.C0_hat == doctest::Approx(1 / (std::pow(2, 11) * 0.25 * A)));
  CHECK(tc.C0_hat_spec == doctest::Approx(tc.C0_hat / 3));
  CHECK(tc.C_S == 2.0);
  CHECK(tc.I0 == doctest::Approx(32 * 0.25 * k.R * k.R + 1));
}

TEST_CASE("stability condition on r_inf") {
  const double A = kBaselSum, q = 2.5;
  const auto pass = check_stability_condition(vec({0.6, 0, 0, 0}), q);
  CHECK(pass.pass);
  CHECK(pass.lhs == 0.0);
  CHECK(pass.rhs == doctest::Approx(0.36 / (std::pow(2, 8) * A)));

  // single first-mode coefficient placed at a chosen multiple of the threshold
  const double r0 = 0.8, rhs = r0 * r0 / (std::pow(2.0, 2 * q + 3) * A);
  auto at = [&](double multiple) {
    return check_stability_condition(vec({r0, std::sqrt(multiple * rhs) / std::pow(2.0, q)}), q);
  };
  CHECK(at(0.5).pass);
  CHECK(at(0.5).lhs == doctest::Approx(0.5 * rhs));
  CHECK_FALSE(at(2.0).pass);
  CHECK(at(2.0).margin < 0);
  CHECK_THROWS_AS(check_stability_condition(vec({0.0, 0.1}), q), std::invalid_argument);
}

TEST_CASE("decay rate fits") {
  std::vector<double> t, e;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(i * 0.05);
    e.push_back(std::exp(-3 * t.back()));
  }
  const DecayFit fit = fit_decay_rate(t, e, 0.5, 4.5);
  CHECK(std::abs(fit.rate - 3.0) < 1e-10);
  CHECK(fit.r_squared == doctest::Approx(1.0));
  e[50] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, e, 0.5, 4.5), std::domain_error);
  CHECK_THROWS_AS(fit_decay_rate(t, e, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("linear scalar decay rate") {
  const ModelParams p(1, 1, 1);
  const double r = 0.618;
  Eigen::VectorXd x0(2);
  x0 << 0.5, 0.0;
  IntegratorConfig c;
  c.dt = 1e-3;
  c.t_end = 3.0;
  const Trajectory tr = integrate(
      [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
        dx.resize(2);
        dx << -(p.a + p.a * p.c * r) * x[0], 0.0;
      },
      x0, c);
  const DecayFit fit = fit_decay_rate(tr, [](const Eigen::VectorXd& x) { return x[0] * x[0]; }, 0.5, 2.5);
  CHECK(fit.rate == doctest::Approx(2 * (1 + r)).epsilon(1e-3));
}

TEST_CASE("coefficient of variation") {
  const ModelParams p(1, 1, 1);
  const QuadratureRule q = build_quadrature(uniform(), 64);
  CHECK(cv_linear(p, SourceTerm::affine(2, 1, kI), q) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(cv_linear(p, SourceTerm::affine(0, 1, kI), q) == 0.0);
  CHECK(cv_nonlinear(p, SourceTerm::affine(0, 1, kI), q) == 0.0);

  const SourceTerm s = SourceTerm::affine(2.0 / 3.0, 1, kI);
  auto rho = [&](double z) { return oracle::steady_r(1, 1, 1, s(z)); };
  const double mean = oracle::uniform_mean(rho, -0.5, 0.5);
  const double second = oracle::uniform_mean([&](double z) { return rho(z) * rho(z); }, -0.5, 0.5);
  const double want = std::sqrt(second - mean * mean) / mean;
  CHECK(cv_nonlinear(p, s, q) == doctest::Approx(want).epsilon(1e-10));
  CHECK(cv_linear(p, s, q) - cv_nonlinear(p, s, q) > 0.0);

  CHECK(cv(2.0, 4.0 - 1e-15) == 0.0);
  CHECK(cv(2.0, 5.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(cv(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(cv(1.0, 0.9), std::domain_error);
  CHECK_THROWS_AS(cv_linear(p, SourceTerm::affine(0, 0, kI), q), std::domain_error);
}
