#include "spiraldim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "spiraldim/errors.hpp"

namespace spiraldim {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Table::to_csv(const std::string& config_hash) const {
  std::string out = "# config_hash=" + config_hash + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

std::string Table::to_json(const std::string& config_hash) const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["columns"] = columns;
  auto rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    auto r = nlohmann::json::array();
    for (const auto& cell : row) {
      // numbers stay numbers, labels stay strings
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size()) r.push_back(v);
      else r.push_back(cell);
    }
    rows_json.push_back(std::move(r));
  }
  j["rows"] = std::move(rows_json);
  return j.dump(1) + "\n";
}

Table orbit_table(const std::vector<PolarPoint>& pts) {
  Table t{{"k", "r", "phi", "x", "y"}, {}};
  t.rows.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    t.rows.push_back({std::to_string(k), fmt17(p.r), fmt17(p.unreduced()),
                      fmt17(p.x()), fmt17(p.y())});
  }
  return t;
}

Table orbit_table_xy(const std::vector<Vec2>& pts) {
  Table t{{"k", "r", "phi", "x", "y"}, {}};
  t.rows.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    t.rows.push_back({std::to_string(k), fmt17(std::hypot(p.x, p.y)),
                      fmt17(std::atan2(p.y, p.x)), fmt17(p.x), fmt17(p.y)});
  }
  return t;
}

Table ladder_table(const std::vector<EpsAreaSample>& ladder) {
  Table t{{"eps", "area", "stderr", "method", "n_active"}, {}};
  for (const auto& s : ladder)
    t.rows.push_back({fmt17(s.eps), fmt17(s.area), fmt17(s.std_error),
                      to_string(s.method), std::to_string(s.n_active)});
  return t;
}

Table box_count_table(const std::vector<BoxCountSample>& counts) {
  Table t{{"delta", "count"}, {}};
  for (const auto& c : counts) t.rows.push_back({fmt17(c.delta), std::to_string(c.count)});
  return t;
}

Table overlap_table(const OverlapAnalysis& a) {
  Table t{{"k", "y", "z", "w"}, {}};
  t.rows.reserve(a.y.size());
  for (std::size_t k = 0; k < a.y.size(); ++k)
    t.rows.push_back({std::to_string(k), fmt17(a.y[k]), fmt17(a.z[k]), fmt17(a.w[k])});
  return t;
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << contents;
  if (!f) throw ConfigError("write failed for '" + path + "'");
}

std::string ladder_svg(const DimensionEstimate& est,
                       std::optional<double> predicted_dim,
                       const std::string& config_hash) {
  const double W = 640, H = 480, M = 60;
  std::vector<double> lx, ly;
  for (const auto& s : est.ladder) {
    lx.push_back(std::log10(s.eps));
    ly.push_back(std::log10(s.area));
  }
  if (lx.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"><!-- config_hash=" + config_hash + " --></svg>\n";
  double x0 = *std::min_element(lx.begin(), lx.end());
  double x1 = *std::max_element(lx.begin(), lx.end());
  double y0 = *std::min_element(ly.begin(), ly.end());
  double y1 = *std::max_element(ly.begin(), ly.end());
  const double px = 0.05 * (x1 - x0 + 1e-9), py = 0.05 * (y1 - y0 + 1e-9);
  x0 -= px; x1 += px; y0 -= py; y1 += py;
  auto sx = [&](double v) { return M + (v - x0) / (x1 - x0) * (W - 2 * M); };
  auto sy = [&](double v) { return H - M - (v - y0) / (y1 - y0) * (H - 2 * M); };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return std::string(b);
  };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n";
  s += "<!-- config_hash=" + config_hash + " -->\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<line x1=\"" + num(M) + "\" y1=\"" + num(H - M) + "\" x2=\"" + num(W - M) +
       "\" y2=\"" + num(H - M) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(M) + "\" y1=\"" + num(M) + "\" x2=\"" + num(M) +
       "\" y2=\"" + num(H - M) + "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(W / 2) + "\" y=\"" + num(H - 15) +
       "\" text-anchor=\"middle\" font-size=\"14\">log10 eps</text>\n";
  s += "<text x=\"15\" y=\"" + num(H / 2) +
       "\" font-size=\"14\" transform=\"rotate(-90 15 " + num(H / 2) +
       ")\" text-anchor=\"middle\">log10 |A_eps|</text>\n";
  for (std::size_t i = 0; i < lx.size(); ++i)
    s += "<circle cx=\"" + num(sx(lx[i])) + "\" cy=\"" + num(sy(ly[i])) +
         "\" r=\"4\" fill=\"steelblue\"/>\n";

  // fitted line through the centroid with slope 2 - dim
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
  mx /= double(lx.size());
  my /= double(ly.size());
  auto line = [&](double slope, const char* colour, const char* dash) {
    const double a = lx.front(), b = lx.back();
    return "<line x1=\"" + num(sx(a)) + "\" y1=\"" + num(sy(my + slope * (a - mx))) +
           "\" x2=\"" + num(sx(b)) + "\" y2=\"" + num(sy(my + slope * (b - mx))) +
           "\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" + dash + "/>\n";
  };
  s += line(2.0 - est.dim_raw, "firebrick", "");
  if (predicted_dim) s += line(2.0 - *predicted_dim, "gray", " stroke-dasharray=\"6 4\"");
  s += "<text x=\"" + num(M + 10) + "\" y=\"" + num(M - 20) +
       "\" font-size=\"13\">fitted dim " + num(est.dim) +
       (predicted_dim ? ", predicted " + num(*predicted_dim) : std::string()) +
       "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace spiraldim
