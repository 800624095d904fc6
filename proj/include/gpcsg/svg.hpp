#pragma once

#include "gpcsg/studies.hpp"
#include "gpcsg/table.hpp"

#include <string>

namespace gpcsg {

/// Minimal line chart as a standalone SVG document. Non-finite points and,
/// on a log axis, nonpositive points are dropped.
std::string render_svg(const Table& table, const ChartSpec& spec);

}  // namespace gpcsg
