#pragma once

#include "gpcsg/config.hpp"
#include "gpcsg/table.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gpcsg {

/// Line-chart request against one of a study's tables.
struct ChartSpec {
  std::string file;          // output name, e.g. "decay.svg"
  std::string table;         // table name within the study
  std::string title;
  std::string x;
  std::vector<std::string> ys;
  bool log_y = false;
  std::string group_by;      // optional: one series per distinct value
  std::string filter_column; // optional: keep rows where column == filter_value
  std::string filter_value;
};

/// Exit codes shared by the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitWarning = 2 };

struct StudyResult {
  std::vector<std::pair<std::string, Table>> tables;  // file name -> table, in write order
  std::vector<std::string> report;                    // human-readable lines
  std::vector<ChartSpec> charts;
  int exit_code = kExitOk;

  const Table& table(const std::string& name) const;
};

/// Galerkin and collocation side by side: L2 norms against the decay
/// bounds, mu-weighted Galerkin norms against the stability bound, and
/// fitted decay rates.
StudyResult run_decay(const RunConfig& config);

/// Galerkin error against the collocation oracle for every K in the list.
StudyResult run_converge(const RunConfig& config);

/// CV of the linear and nonlinear steady states over the source and rate grids.
StudyResult run_cv_sweep(const RunConfig& config);

/// Regularity, basis growth and stability conditions plus decay and stability constants.
StudyResult run_check(const RunConfig& config);

/// Triple tensor and Upsilon dumps with the Upsilon spectrum.
StudyResult run_tensors(const RunConfig& config);

}  // namespace gpcsg
