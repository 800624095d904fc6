// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "gpcsg/analysis.hpp"
#include "gpcsg/galerkin.hpp"
#include "gpcsg/integrate.hpp"
#include "gpcsg/studies.hpp"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace gpcsg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::set<int> failed;

template <typename F>
void criterion(int id, const std::string& name, double limit_s, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream timing;
  timing.precision(3);
  timing << secs << " s (limit " << limit_s << " s)";
  out.require(secs < limit_s, "runtime " + timing.str());
  if (!out.pass) failed.insert(id);
  std::cout << (out.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << " : " << timing.str();
  if (!out.detail.empty()) std::cout << " : " << out.detail;
  std::cout << std::endl;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Measure uniform() { return build_measure(MeasureKind::Uniform, -0.5, 0.5); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// usage: gpcsg_acceptance <path to gpcsg> [--expect-fail N]...
// Exits 0 when the failing criteria are exactly the expected ones.
int main(int argc, char** argv) {
  std::string cli;
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      cli = arg;
    }
  }

  criterion(1, "orthonormality and triple tensor (uniform, K=16, 64 nodes)", 1.0, [](Outcome& o) {
    const Measure m = uniform();
    const QuadratureRule q = build_quadrature(m, 64);
    const int K = 16;
    const BasisFamily b = build_basis(m, q, K);
    const double gram = (gram_matrix(b, q) - Eigen::MatrixXd::Identity(K + 1, K + 1)).cwiseAbs().maxCoeff();
    o.require(gram <= 1e-10, "gram deviation " + sci(gram));
    const TripleTensor t = assemble_triple(b, q);
    double sym = 0, s0 = 0, tri = 0;
    for (int l = 0; l <= K; ++l)
      for (int i = 0; i <= K; ++i)
        for (int j = 0; j <= K; ++j) {
          const double v = t(l, i, j);
          for (double w : {t(l, j, i), t(i, l, j), t(i, j, l), t(j, l, i), t(j, i, l)}) sym = std::max(sym, std::abs(v - w));
          if (l == 0) s0 = std::max(s0, std::abs(v - (i == j ? 1.0 : 0.0)));
          if (j < std::abs(l - i) || j > std::min(K, l + i)) tri = std::max(tri, std::abs(v));
        }
    o.require(sym <= 1e-12, "symmetry " + sci(sym));
    o.require(s0 <= 1e-12, "S[0] deviation " + sci(s0));
    o.require(tri < 1e-12, "triangle violation " + sci(tri));
  });

  criterion(2, "Upsilon spectrum inside [min r_inf, max r_inf] for 20 random configurations", 5.0, [](Outcome& o) {
    auto g = oracle::rng(2024);
    const Measure m = uniform();
    const QuadratureRule q = build_quadrature(m, default_quadrature_order(8));
    const BasisFamily b = build_basis(m, q, 8);
    for (int trial = 0; trial < 20; ++trial) {
      const ModelParams p(oracle::uniform(g, 0.2, 5), oracle::uniform(g, 0.2, 5), oracle::uniform(g, 0.2, 5));
      const double d = oracle::uniform(g, 0.05, 5), k = oracle::uniform(g, 0, 2 * d);
      const SourceTerm s = SourceTerm::affine(k, d, m.support());
      // S is affine and r_inf monotone in S, so the extremes sit at the endpoints
      const double lo = oracle::steady_r(p.a, p.b, p.c, s(-0.5)), hi = oracle::steady_r(p.a, p.b, p.c, s(0.5));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(assemble_upsilon(b, q, p, s), Eigen::EigenvaluesOnly);
      const double emin = eig.eigenvalues().minCoeff(), emax = eig.eigenvalues().maxCoeff();
      o.require(emin >= lo - 1e-8 && emax <= hi + 1e-8,
                "trial " + std::to_string(trial) + " spectrum [" + sci(emin) + ", " + sci(emax) + "] vs [" + sci(lo) +
                    ", " + sci(hi) + "]");
    }
  });

  criterion(3, "Galerkin equals collocation for constant S; K=0 reduction per RHS call", 5.0, [](Outcome& o) {
    const Measure m = uniform();
    const ModelParams p(1.0, 1.5, 2.0);
    const SourceTerm s = SourceTerm::affine(0, 0.8, m.support());
    IntegratorConfig c;
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.record_every = 1000;
    const QuadratureRule one = build_quadrature(m, 1);
    const Trajectory col = solve_collocation(p, s, one, [](double) { return 0.3; }, [](double) { return -0.2; }, c);
    const double rho_c = col.states.back()[0], m_c = col.states.back()[1];
    double worst = 0;
    for (int K : {0, 1, 4, 8}) {
      const QuadratureRule q = build_quadrature(m, default_quadrature_order(K));
      const BasisFamily b = build_basis(m, q, K);
      GalerkinState g0 = GalerkinState::zero(K);
      g0.rho_hat[0] = 0.3;
      g0.m_hat[0] = -0.2;
      const Eigen::VectorXd x = solve_galerkin(assemble_tensors(b, q, p, s), p, g0, c).states.back();
      worst = std::max({worst, std::abs(x[0] - rho_c), std::abs(x[K + 1] - m_c)});
      for (int i = 1; i <= K; ++i) worst = std::max({worst, std::abs(x[i]), std::abs(x[K + 1 + i])});
    }
    o.require(worst <= 1e-10, "max deviation " + sci(worst));

    auto g = oracle::rng(3);
    const QuadratureRule q0 = build_quadrature(m, default_quadrature_order(0));
    const BasisFamily b0 = build_basis(m, q0, 0);
    double rhs_dev = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const ModelParams pp(oracle::uniform(g, 0.2, 4), oracle::uniform(g, 0.2, 4), oracle::uniform(g, 0.2, 4));
      const SourceTerm ss = SourceTerm::affine(0, oracle::uniform(g, 0, 4), m.support());
      const GalerkinTensors t = assemble_tensors(b0, q0, pp, ss);
      GalerkinState x = GalerkinState::zero(0);
      x.rho_hat[0] = oracle::uniform(g, -1, 1);
      x.m_hat[0] = oracle::uniform(g, -1, 1);
      const GalerkinState d = galerkin_rhs(x, t, pp);
      const StateZ want = perturb_rhs({x.rho_hat[0], x.m_hat[0]}, t.upsilon(0, 0), pp);
      rhs_dev = std::max({rhs_dev, std::abs(d.rho_hat[0] - want.rho), std::abs(d.m_hat[0] - want.m)});
    }
    o.require(rhs_dev <= 1e-13, "K=0 rhs deviation " + sci(rhs_dev));
  });

  criterion(4, "spectral accuracy against 64-node collocation, K in {2,4,6,8,10}", 30.0, [](Outcome& o) {
    const StudyResult r = run_converge(default_config(
        {"time.t_end=1", "time.dt=0.0001", "time.record_every=1000", "converge.K_list=[2,4,6,8,10]",
         "converge.oracle_nodes=64", "initial.rho0=[0.05, 0.1, -0.1]", "initial.m0=[0.05, -0.05, 0.05]"}));
    const Table& t = r.table("converge.csv");
    std::string errs;
    bool floor_reached = false;
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      const double e = t.number(i, "err_rho_L2pi");
      errs += (errs.empty() ? "" : ", ") + sci(e);
      if (i == 0 || floor_reached) {
        floor_reached = floor_reached || e <= 1e-8;
        continue;
      }
      const double prev = t.number(i - 1, "err_rho_L2pi");
      if (prev <= 1e-8) {
        floor_reached = true;
        continue;
      }
      o.require(e < prev, "not decreasing at K=" + t.rows()[i][0]);
      o.require(e <= 0.5 * prev, "ratio " + sci(e / prev) + " at K=" + t.rows()[i][0]);
    }
    o.require(floor_reached || t.number(t.row_count() - 1, "err_rho_L2pi") <= 1e-8, "floor not reached");
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("errors ") + errs;
  });

  criterion(5, "decay bounds at 50% of the thresholds; fitted rate of a|rho_hat|^2 >= 0.99 a", 10.0, [](Outcome& o) {
    double worst_rate = INFINITY;
    for (const char* scale : {"l2_decay", "stability"}) {
      for (const char* params : {"model.b=1", "model.b=2"}) {
        const RunConfig cfg = default_config({std::string("initial.scale=") + scale, "initial.fraction=0.5", params,
                                              "time.t_end=10"});
        const StudyResult r = run_decay(cfg);
        const Table& d = r.table("decay.csv");
        for (std::size_t i = 0; i < d.row_count(); ++i) {
          if (std::string(scale) == "l2_decay") {
            o.require(d.number(i, "norm_rho_sq") <= 1.05 * d.number(i, "bound_rho") &&
                          d.number(i, "norm_m_sq") <= 1.05 * d.number(i, "bound_m"),
                      std::string("L2 bound broken at t=") + d.rows()[i][0]);
          } else {
            o.require(d.number(i, "galerkin_rho_mu_sq") <= 1.05 * d.number(i, "stab_bound_rho") &&
                          d.number(i, "galerkin_m_mu_sq") <= 1.05 * d.number(i, "stab_bound_m"),
                      std::string("stability bound broken at t=") + d.rows()[i][0]);
          }
        }
        const Table& rates = r.table("decay_rates.csv");
        const double rate = rates.number(0, "rate") / cfg.model.a;
        worst_rate = std::min(worst_rate, rate);
        o.require(rate >= 0.99, std::string(scale) + " " + params + " rate/a " + sci(rate));
        o.require(r.exit_code == kExitOk, std::string(scale) + " exit code " + std::to_string(r.exit_code));
      }
    }
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("smallest rate/a ") + sci(worst_rate);
  });

  {
    // Outside the gated parameters: with b > 2a(1 + c r_inf) the m-part of the
    // L2 bound is exceeded. Reported, not counted.
    const StudyResult r = run_decay(default_config({"initial.scale=l2_decay", "model.a=0.5", "model.b=2"}));
    const Table& d = r.table("decay.csv");
    double worst = 0;
    for (std::size_t i = 0; i < d.row_count(); ++i) worst = std::max(worst, d.number(i, "norm_m_sq") / d.number(i, "bound_m"));
    std::cout << "NOTE [5] a=0.5, b=2, c=1 at 50% of the L2 thresholds: max |m|^2 / bound_m = " << sci(worst)
              << " (exit code " << r.exit_code << ")" << std::endl;
  }

  criterion(6, "CV_L - CV_NL >= 0 on the source and rate grids; trends in k (d=1) and d (k=2/3)", 5.0, [](Outcome& o) {
    const RunConfig cfg = default_config();
    const StudyResult r = run_cv_sweep(cfg);
    const Table& t = r.table("cv_sweep.csv");
    double min_diff = INFINITY;
    std::vector<std::pair<double, double>> d1;
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      min_diff = std::min(min_diff, t.number(i, "diff"));
      if (t.rows()[i][0] == "source_grid" && t.number(i, "d") == 1.0) d1.push_back({t.number(i, "k"), t.number(i, "diff")});
    }
    o.require(t.row_count() == 35 + 12, "unexpected row count " + std::to_string(t.row_count()));
    o.require(min_diff >= -1e-12, "min diff " + sci(min_diff));
    for (std::size_t i = 1; i < d1.size(); ++i) {
      o.require(d1[i].second >= d1[i - 1].second - 1e-12,
                "d=1: diff drops from " + sci(d1[i - 1].second) + " at k=" + sci(d1[i - 1].first) + " to " +
                    sci(d1[i].second) + " at k=" + sci(d1[i].first));
    }
    const QuadratureRule q = build_quadrature(uniform(), 64);
    double prev = INFINITY;
    for (double d : cfg.cv_sweep.d_grid) {
      const SourceTerm s = SourceTerm::affine(2.0 / 3.0, d, uniform().support());
      const double diff = cv_linear(cfg.model, s, q) - cv_nonlinear(cfg.model, s, q);
      o.require(diff <= prev + 1e-12, "k=2/3: diff increases at d=" + sci(d));
      o.require(diff >= -1e-12, "k=2/3: negative diff at d=" + sci(d));
      prev = diff;
    }
  });

  criterion(7, "RK4 Richardson ratio on the scalar perturbation system in [14, 18]", 2.0, [](Outcome& o) {
    const ModelParams p(1, 1, 1);
    const double r = steady_state_r(p, 1.0);
    auto endpoint = [&](double dt) {
      IntegratorConfig c;
      c.dt = dt;
      c.t_end = 1.0;
      c.record_every = 1 << 30;
      Eigen::VectorXd x0(2);
      x0 << 0.4, -0.3;
      return integrate(
                 [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
                   const StateZ d = perturb_rhs({x[0], x[1]}, r, p);
                   dx.resize(2);
                   dx << d.rho, d.m;
                 },
                 x0, c)
          .states.back();
    };
    const Eigen::VectorXd ref = endpoint(1e-4);
    const double ratio = (endpoint(0.05) - ref).norm() / (endpoint(0.025) - ref).norm();
    o.require(ratio >= 14 && ratio <= 18, "ratio " + sci(ratio));
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("ratio ") + sci(ratio);
  });

  criterion(8, "condition checkers: constant r_inf closed forms and the stability condition boundary", 5.0, [](Outcome& o) {
    for (double d : {0.3, 1.0, 4.0}) {
      for (const char* params : {"model.a=1", "model.a=3"}) {
        const RunConfig cfg = default_config({"source.k=0", "source.d=" + std::to_string(d), params});
        const StudyResult r = run_check(cfg);
        const std::string tag = "d=" + sci(d) + " " + params;
        o.require(r.exit_code == kExitOk, tag + " exit " + std::to_string(r.exit_code));
        const Table& c = r.table("conditions.csv");
        for (std::size_t i = 0; i < c.row_count(); ++i) {
          o.require(c.rows()[i][c.column("pass")] == "true", tag + " " + c.rows()[i][0] + " fails");
          if (c.rows()[i][0] == "stability_rinf") o.require(c.number(i, "lhs") <= 1e-24, tag + " lhs " + sci(c.number(i, "lhs")));
        }
        const Table& k = r.table("constants.csv");
        const double r0 = steady_state_r(cfg.model, d);
        o.require(std::abs(k.number(1, "value") - r0) <= 1e-14 && k.rows()[1][0] == "kappa", tag + " kappa != r0");
        o.require(std::abs(k.number(4, "value") - std::sqrt(16 * kBaselSum + 1)) <= 1e-12 && k.rows()[4][0] == "L",
                  tag + " L != sqrt(16A+1)");
      }
    }
    const double q = 2.5, r0 = 0.7, rhs = r0 * r0 / (std::pow(2.0, 2 * q + 3) * kBaselSum);
    for (auto [mult, expect] : {std::pair{0.5, true}, std::pair{2.0, false}}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(4);
      c[0] = r0;
      c[1] = std::sqrt(mult * rhs) / std::pow(2.0, q);
      const ConditionCheck chk = check_stability_condition(c, q);
      o.require(chk.pass == expect, "boundary x" + sci(mult) + " gave " + (chk.pass ? "pass" : "fail"));
    }
  });

  criterion(9, "CLI determinism: every subcommand, threads 1 (twice) and 8, identical CSV bytes", 60.0, [&](Outcome& o) {
    if (cli.empty()) {
      o.require(false, "CLI path not given");
      return;
    }
    const fs::path root = fs::temp_directory_path() / ("gpcsg_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    for (const char* cmd : {"decay", "converge", "cv-sweep", "check", "tensors"}) {
      std::map<std::string, std::string> first;
      for (const char* run : {"t1a", "t1b", "t8"}) {
        const fs::path dir = root / cmd / run;
        const std::string threads = std::string(run) == "t8" ? "8" : "1";
        const std::string line = "\"" + cli + "\" " + cmd + " --out \"" + dir.string() + "\" --threads " + threads + " > \"" +
                                 (root / (std::string(cmd) + run + ".log")).string() + "\" 2>&1";
        fs::create_directories(root);
        const int status = std::system(line.c_str());
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        if (code != 0 && code != 1 && code != 2) {
          o.require(false, std::string(cmd) + " crashed");
          continue;
        }
        for (const auto& entry : fs::directory_iterator(dir)) {
          const std::string name = entry.path().filename().string();
          const std::string bytes = slurp(entry.path());
          if (!first.count(name)) {
            first[name] = bytes;
          } else if (first[name] != bytes) {
            o.require(false, std::string(cmd) + "/" + name + " differs in run " + run);
          }
        }
      }
      o.require(!first.empty(), std::string(cmd) + " wrote no CSV");
    }
    fs::remove_all(root);
  });

  std::cout << (failed.empty() ? "ALL CRITERIA PASS" : std::to_string(failed.size()) + " CRITERIA FAIL") << std::endl;
  if (!expected.empty()) {
    std::cout << "expected failures:";
    for (int id : expected) std::cout << ' ' << id;
    std::cout << (failed == expected ? " (matches)" : " (MISMATCH)") << std::endl;
  }
  return failed == expected ? 0 : 1;
}
