#include "gpcsg/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace gpcsg {

using nlohmann::json;

namespace {

// Reads keys of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& root, std::string path) : path_(std::move(path)) {
    if (root.is_null()) return;
    if (!root.is_object()) throw ConfigError(path_, "must be an object");
    node_ = &root;
  }

  /// Rejects keys that were never read.
  void done() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.count(key)) throw ConfigError(qualify(key), "unknown key");
    }
  }

  const json* child(const std::string& key) {
    seen_.insert(key);
    if (!node_) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  Section sub(const std::string& key) {
    const json* c = child(key);
    static const json null_json;
    return Section(c ? *c : null_json, qualify(key));
  }

  void read(const std::string& key, double& out) {
    if (const json* v = child(key)) {
      if (!v->is_number()) throw ConfigError(qualify(key), "must be a number");
      out = v->get<double>();
    }
  }

  void read(const std::string& key, int& out) {
    if (const json* v = child(key)) {
      if (!v->is_number_integer()) throw ConfigError(qualify(key), "must be an integer");
      out = v->get<int>();
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = child(key)) {
      if (!v->is_boolean()) throw ConfigError(qualify(key), "must be true or false");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = child(key)) {
      if (!v->is_string()) throw ConfigError(qualify(key), "must be a string");
      out = v->get<std::string>();
    }
  }

  template <typename T>
  void read(const std::string& key, std::vector<T>& out) {
    if (const json* v = child(key)) {
      if (!v->is_array()) throw ConfigError(qualify(key), "must be an array");
      std::vector<T> values;
      for (const auto& item : *v) {
        if constexpr (std::is_integral_v<T>) {
          if (!item.is_number_integer()) throw ConfigError(qualify(key), "entries must be integers");
        } else {
          if (!item.is_number()) throw ConfigError(qualify(key), "entries must be numbers");
        }
        values.push_back(item.get<T>());
      }
      out = std::move(values);
    }
  }

  std::string qualify(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string path_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like section.key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError(path, "empty key in override");
    if (!node->is_object()) throw ConfigError(path, "override descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

InitialScaling scaling_from_string(const std::string& name) {
  if (name == "none") return InitialScaling::None;
  if (name == "l2_decay") return InitialScaling::L2Decay;
  if (name == "sensitivity") return InitialScaling::Sensitivity;
  if (name == "stability") return InitialScaling::Stability;
  throw ConfigError("initial.scale", "unknown scaling '" + name + "'");
}

RunConfig from_json(const json& root) {
  RunConfig cfg;
  Section top(root, "");

  {
    Section s = top.sub("model");
    s.read("a", cfg.model.a);
    s.read("b", cfg.model.b);
    s.read("c", cfg.model.c);
    s.done();
  }
  {
    Section s = top.sub("source");
    std::string kind = "affine";
    s.read("kind", kind);
    if (kind == "affine") {
      cfg.source.kind = SourceTerm::Kind::Affine;
    } else if (kind == "polynomial") {
      cfg.source.kind = SourceTerm::Kind::Polynomial;
    } else {
      throw ConfigError("source.kind", "unknown source kind '" + kind + "'");
    }
    s.read("k", cfg.source.k);
    s.read("d", cfg.source.d);
    s.read("coeffs", cfg.source.coeffs);
    s.done();
  }
  {
    Section s = top.sub("measure");
    std::string kind = "uniform";
    s.read("kind", kind);
    if (kind == "custom") throw ConfigError("measure.kind", "custom measures are library-only");
    try {
      cfg.measure.kind = measure_kind_from_string(kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("measure.kind", e.what());
    }
    s.read("lower", cfg.measure.lower);
    s.read("upper", cfg.measure.upper);
    s.done();
  }
  {
    Section s = top.sub("galerkin");
    s.read("K", cfg.galerkin.K);
    s.read("quad_nodes", cfg.galerkin.quad_nodes);
    s.done();
  }
  {
    Section s = top.sub("time");
    std::string scheme = "rk4";
    s.read("scheme", scheme);
    try {
      cfg.time.scheme = scheme_from_string(scheme);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("time.scheme", e.what());
    }
    s.read("dt", cfg.time.dt);
    s.read("t_end", cfg.time.t_end);
    s.read("record_every", cfg.time.record_every);
    s.done();
  }
  {
    Section s = top.sub("initial");
    s.read("rho0", cfg.initial.rho0);
    s.read("m0", cfg.initial.m0);
    std::string scale = "none";
    s.read("scale", scale);
    cfg.initial.scale = scaling_from_string(scale);
    s.read("fraction", cfg.initial.fraction);
    s.done();
  }
  {
    Section s = top.sub("decay");
    s.read("norm_order", cfg.decay.norm_order);
    std::vector<double> window;
    s.read("fit_window", window);
    if (!window.empty()) {
      if (window.size() != 2) throw ConfigError("decay.fit_window", "needs [t1, t2]");
      cfg.decay.fit_t1 = window[0];
      cfg.decay.fit_t2 = window[1];
    }
    s.read("oracle_nodes", cfg.decay.oracle_nodes);
    s.done();
  }
  {
    Section s = top.sub("converge");
    s.read("K_list", cfg.converge.K_list);
    s.read("oracle_nodes", cfg.converge.oracle_nodes);
    s.read("floor", cfg.converge.floor);
    s.read("max_ratio", cfg.converge.max_ratio);
    s.done();
  }
  {
    Section s = top.sub("cv_sweep");
    s.read("k_grid", cfg.cv_sweep.k_grid);
    s.read("d_grid", cfg.cv_sweep.d_grid);
    s.read("abc_grid", cfg.cv_sweep.abc_grid);
    s.read("rate_k", cfg.cv_sweep.rate_k);
    s.read("rate_d", cfg.cv_sweep.rate_d);
    s.read("quad_nodes", cfg.cv_sweep.quad_nodes);
    s.read("skip_negative_sources", cfg.cv_sweep.skip_negative_sources);
    s.done();
  }
  {
    Section s = top.sub("check");
    s.read("max_order", cfg.check.max_order);
    s.read("grid_size", cfg.check.grid_size);
    s.done();
  }
  top.read("threads", cfg.threads);
  top.done();
  return cfg;
}

}  // namespace

ConfigError::ConfigError(const std::string& key, const std::string& what)
    : std::runtime_error("config: " + key + ": " + what), key_(key) {}

std::string_view to_string(InitialScaling scaling) {
  switch (scaling) {
    case InitialScaling::None:
      return "none";
    case InitialScaling::L2Decay:
      return "l2_decay";
    case InitialScaling::Sensitivity:
      return "sensitivity";
    case InitialScaling::Stability:
      return "stability";
  }
  return "none";
}

Measure RunConfig::build_measure() const {
  try {
    return gpcsg::build_measure(measure.kind, measure.lower, measure.upper);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("measure", e.what());
  }
}

SourceTerm RunConfig::build_source() const {
  const Interval support{measure.lower, measure.upper};
  try {
    if (source.kind == SourceTerm::Kind::Affine) return SourceTerm::affine(source.k, source.d, support);
    if (source.coeffs.empty()) throw ConfigError("source.coeffs", "polynomial source needs coeffs");
    return SourceTerm::polynomial(source.coeffs, support);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("source", e.what());
  }
}

int RunConfig::galerkin_quad_nodes() const {
  return galerkin.quad_nodes > 0 ? galerkin.quad_nodes : 2 * galerkin.K + 10;
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(key, "must be positive");
  };
  positive(model.a, "model.a");
  positive(model.b, "model.b");
  positive(model.c, "model.c");
  if (!(measure.lower < measure.upper)) throw ConfigError("measure", "need lower < upper");
  build_source();
  if (galerkin.K < 0) throw ConfigError("galerkin.K", "must be nonnegative");
  if (galerkin.quad_nodes < 0) throw ConfigError("galerkin.quad_nodes", "must be nonnegative");
  if (galerkin_quad_nodes() < (3 * galerkin.K + 2) / 2) {
    throw ConfigError("galerkin.quad_nodes", "too few nodes to integrate degree 3K exactly");
  }
  if (!(time.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  if (!(time.t_end >= time.dt)) throw ConfigError("time.t_end", "must be >= time.dt");
  if (time.record_every < 1) throw ConfigError("time.record_every", "must be >= 1");
  if (!(initial.fraction > 0.0)) throw ConfigError("initial.fraction", "must be positive");
  if (decay.norm_order < 0) throw ConfigError("decay.norm_order", "must be nonnegative");
  if (decay.oracle_nodes < 1) throw ConfigError("decay.oracle_nodes", "must be >= 1");
  if (decay.fit_t1 >= 0.0 && decay.fit_t2 >= 0.0 && !(decay.fit_t2 > decay.fit_t1)) {
    throw ConfigError("decay.fit_window", "needs t2 > t1");
  }
  if (converge.K_list.empty()) throw ConfigError("converge.K_list", "must not be empty");
  for (std::size_t i = 0; i < converge.K_list.size(); ++i) {
    if (converge.K_list[i] < 0) throw ConfigError("converge.K_list", "entries must be >= 0");
    if (i > 0 && converge.K_list[i] <= converge.K_list[i - 1]) {
      throw ConfigError("converge.K_list", "must be strictly ascending");
    }
  }
  if (converge.oracle_nodes < 1) throw ConfigError("converge.oracle_nodes", "must be >= 1");
  if (!(converge.floor > 0.0)) throw ConfigError("converge.floor", "must be positive");
  if (cv_sweep.quad_nodes < 2) throw ConfigError("cv_sweep.quad_nodes", "must be >= 2");
  for (double d : cv_sweep.d_grid) {
    if (!(d > 0.0)) throw ConfigError("cv_sweep.d_grid", "source means must be positive");
  }
  for (double v : cv_sweep.abc_grid) {
    if (!(v > 0.0)) throw ConfigError("cv_sweep.abc_grid", "rates must be positive");
  }
  if (check.max_order < 0) throw ConfigError("check.max_order", "must be nonnegative");
  if (check.grid_size < 1000) throw ConfigError("check.grid_size", "must be >= 1000");
  if (threads < 1) throw ConfigError("threads", "must be >= 1");
}

RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides) {
  json root = json::parse(json_text.begin(), json_text.end(), nullptr, false, true);
  if (root.is_discarded()) throw ConfigError("<file>", "not valid JSON");
  if (root.is_null()) root = json::object();
  for (const auto& o : overrides) apply_override(root, o);
  RunConfig cfg = from_json(root);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides);
}

RunConfig default_config(const std::vector<std::string>& overrides) {
  return parse_config("{}", overrides);
}

}  // namespace gpcsg
