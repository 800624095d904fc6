#include "gpcsg/config.hpp"
#include "gpcsg/integrate.hpp"
#include "gpcsg/studies.hpp"
#include "gpcsg/svg.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gPC stochastic Galerkin studies for the mRNA/microRNA kinetic model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool svg = false;
  int threads = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON config file (defaults used if omitted)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--svg", svg, "also write SVG line charts");
  app.add_option("--threads", threads, "worker threads (overrides config)")->check(CLI::PositiveNumber);
  app.add_option("--set", overrides, "override a config key, e.g. --set galerkin.K=12");

  using Runner = gpcsg::StudyResult (*)(const gpcsg::RunConfig&);
  const std::map<std::string, std::pair<Runner, const char*>> commands{
      {"decay", {gpcsg::run_decay, "decay bounds and fitted rates"}},
      {"converge", {gpcsg::run_converge, "Galerkin error against collocation over K"}},
      {"cv-sweep", {gpcsg::run_cv_sweep, "coefficient of variation sweeps"}},
      {"check", {gpcsg::run_check, "regularity, growth and stability conditions"}},
      {"tensors", {gpcsg::run_tensors, "triple tensor, Upsilon and its spectrum"}},
  };
  for (const auto& [name, entry] : commands) {
    app.add_subcommand(name, entry.second)->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) overrides.push_back("threads=" + std::to_string(threads));
    const gpcsg::RunConfig cfg = config_path.empty() ? gpcsg::default_config(overrides)
                                                     : gpcsg::load_config(config_path, overrides);
    const std::string name = app.get_subcommands().front()->get_name();
    const gpcsg::StudyResult result = commands.at(name).first(cfg);

    fs::create_directories(out_dir);
    for (const auto& [file, table] : result.tables) {
      write_file(fs::path(out_dir) / file, table.to_csv());
      std::cout << "wrote " << (fs::path(out_dir) / file).string() << '\n';
    }
    if (svg) {
      for (const auto& chart : result.charts) {
        write_file(fs::path(out_dir) / chart.file,
                   gpcsg::render_svg(result.table(chart.table), chart));
        std::cout << "wrote " << (fs::path(out_dir) / chart.file).string() << '\n';
      }
    }
    for (const auto& line : result.report) std::cout << line << '\n';
    return result.exit_code;
  } catch (const gpcsg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return gpcsg::kExitFailure;
  } catch (const gpcsg::IntegrationError& e) {
    std::cerr << "integration aborted: " << e.what() << '\n';
    return gpcsg::kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gpcsg::kExitFailure;
  }
}
