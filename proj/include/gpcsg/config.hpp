#pragma once

#include "gpcsg/integrate.hpp"
#include "gpcsg/kinetics.hpp"
#include "gpcsg/measure.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpcsg {

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// How the initial perturbation polynomials are rescaled before a run.
enum class InitialScaling {
  None,         // use the coefficients as given
  L2Decay,      // ||.||^2_pi at `fraction` of b^2/(4c^2), a^2/(4c^2)
  Sensitivity,  // ||.||^2_{H^n_pi} at `fraction` of b^2 C0, a^2 C0
  Stability,    // mu-weighted Galerkin norms at `fraction` of b^2 C0_hat, a^2 C0_hat
};

std::string_view to_string(InitialScaling scaling);

struct RunConfig {
  ModelParams model{1.0, 1.0, 1.0};

  struct Source {
    SourceTerm::Kind kind = SourceTerm::Kind::Affine;
    double k = 2.0 / 3.0;
    double d = 1.0;
    std::vector<double> coeffs;  // polynomial sources, coeffs[j] multiplies z^j
  } source;

  struct MeasureSection {
    MeasureKind kind = MeasureKind::Uniform;
    double lower = -0.5;
    double upper = 0.5;
  } measure;

  struct GalerkinSection {
    int K = 8;
    int quad_nodes = 0;  // 0: 2K + 10
  } galerkin;

  IntegratorConfig time;

  struct Initial {
    std::vector<double> rho0{0.05, 0.05};
    std::vector<double> m0{0.05, -0.05};
    InitialScaling scale = InitialScaling::None;
    double fraction = 0.5;
  } initial;

  struct Decay {
    int norm_order = 0;
    double fit_t1 = -1.0;  // negative: 0.2 t_end
    double fit_t2 = -1.0;  // negative: 0.8 t_end
    int oracle_nodes = 64;
  } decay;

  struct Converge {
    std::vector<int> K_list{2, 4, 6, 8, 10};
    int oracle_nodes = 64;
    double floor = 1e-8;
    double max_ratio = 0.5;
  } converge;

  struct CvSweep {
    std::vector<double> k_grid{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    std::vector<double> d_grid{1.0 / 3.0, 0.5, 1.0, 2.0, 5.0};
    std::vector<double> abc_grid{0.5, 1.0, 2.0, 4.0};
    double rate_k = 2.0 / 3.0;
    double rate_d = 1.0;
    int quad_nodes = 64;
    bool skip_negative_sources = true;
  } cv_sweep;

  struct Check {
    int max_order = 6;
    int grid_size = 2001;
  } check;

  int threads = 1;

  Measure build_measure() const;
  SourceTerm build_source() const;
  int galerkin_quad_nodes() const;

  /// Cross-field validation; throws ConfigError naming the key.
  void validate() const;
};

/// Parses the JSON config text, applies `key.path=value` overrides, and
/// validates. Unknown keys are errors.
RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides = {});

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Defaults plus overrides, for runs without a config file.
RunConfig default_config(const std::vector<std::string>& overrides = {});

}  // namespace gpcsg
