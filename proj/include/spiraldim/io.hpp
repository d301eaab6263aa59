#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spiraldim/dimension.hpp"
#include "spiraldim/neighborhood.hpp"
#include "spiraldim/orbits.hpp"
#include "spiraldim/overlaps.hpp"

namespace spiraldim {

// 17 significant digits, round-trippable.
std::string fmt17(double v);

// A table written either as CSV (with a "# config_hash=" first line) or as
// a JSON object of column arrays.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // preformatted cells

  std::string to_csv(const std::string& config_hash) const;
  std::string to_json(const std::string& config_hash) const;
};

Table orbit_table(const std::vector<PolarPoint>& pts);
Table orbit_table_xy(const std::vector<Vec2>& pts);
Table ladder_table(const std::vector<EpsAreaSample>& ladder);
Table box_count_table(const std::vector<BoxCountSample>& counts);
Table overlap_table(const OverlapAnalysis& a);

void write_file(const std::string& path, const std::string& contents);

// Log-log plot of a ladder with the fitted line and an optional guide of
// the predicted slope 2 - d through the ladder's centre.
std::string ladder_svg(const DimensionEstimate& est,
                       std::optional<double> predicted_dim,
                       const std::string& config_hash = "");

}  // namespace spiraldim
