#pragma once

// Static SVG renderings of the emitted data. Thin layer: every figure is a
// direct mapping of values already written to CSV.

#include <iosfwd>
#include <map>
#include <vector>

#include "wecsat/mismatch.hpp"

namespace wecsat {

/// Gamma disk with the flagged cells shaded (voltage ratio > 1 in one tint,
/// current ratio > 1 in another) and both optimal contours drawn.
void write_smith_svg(std::ostream& out, const SmithGrid& grid);

/// Voltage and current ratios against power ratio, one pair of polylines per alpha.
void write_pareto_svg(std::ostream& out, const std::map<double, std::vector<ParetoPoint>>& fronts);

/// Saturation factors against 1 / i_script.
void write_fsat_svg(std::ostream& out, const std::vector<double>& inv_i_script,
                    const std::map<int, std::vector<double>>& curves);

}  // namespace wecsat
