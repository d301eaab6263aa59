#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spiraldim/center_manifold.hpp"
#include "spiraldim/classification.hpp"
#include "spiraldim/config.hpp"
#include "spiraldim/dimension.hpp"
#include "spiraldim/neighborhood.hpp"
#include "spiraldim/normal_forms.hpp"
#include "spiraldim/orbits.hpp"
#include "spiraldim/overlaps.hpp"

namespace spiraldim {

enum class SystemKind { Polar, Hopf, Cartesian };
enum class OutputFormat { Csv, Json };

struct OrbitSettings {
  double r0 = 0.5;
  double phi0 = 0.0;
  std::int64_t max_iter = 2000000;
  double r_floor = 1e-3;
  double escape = kDefaultEscape;
};

struct EstimatorSettings {
  AreaOptions area;
  bool seed_given = false;
  double eps_min = 2e-3;
  double eps_max = 5e-2;
  int rungs = 12;
  bool box_count = false;
  bool plot = true;
};

struct HopfSettings {
  double T = 1.0;
  int steps = kDefaultFlowSteps;
  double ceiling = kDefaultBlowupCeiling;
  bool continuous = false;  // sample the trajectory instead of iterating
  double r_end = 0.03;
  std::int64_t n = 2000;
  double max_angle_step = kDefaultMaxAngleStep;
};

struct CartesianSettings {
  double x1 = 0.4;
  std::optional<double> y1;  // hyperbolic direction start
  double x_floor = 1e-5;
  double y_floor = 1e-12;
  double basin = 1.0;
  std::int64_t max_iter = 2000000;
  double fd_step = kDefaultFdStep;
  std::optional<double> c_override;
  double tol = kDefaultNondegTol;
};

struct OverlapSettings {
  std::int64_t window = 0;  // 0: last quarter
  std::optional<std::int64_t> q0;
  std::vector<double> eps;  // m1(eps) report points
};

struct SweepSettings {
  std::string param = "mu";
  std::vector<double> values;
};

struct RunConfig {
  Config raw;
  std::string hash;
  SystemKind kind = SystemKind::Polar;
  std::optional<PolarNormalForm> map;
  std::optional<ContinuousHopfSystem> hopf;
  std::optional<PlanarMapSystem> cartesian;
  OrbitSettings orbit;
  EstimatorSettings estimator;
  HopfSettings hopf_settings;
  CartesianSettings cart;
  OverlapSettings overlap;
  SweepSettings sweep;
  Tolerances tol;
  std::int64_t q_max = kDefaultQMax;
  double rational_tol = kDefaultRationalTol;
  int threads = 1;
  OutputFormat format = OutputFormat::Csv;
  std::string out_dir = ".";
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<OutputFormat> format;
  std::optional<std::string> out_dir;
};

// Builds and validates the typed run configuration. Throws ConfigError.
RunConfig make_run_config(Config cfg, const CliOverrides& o = {});
RunConfig load_run_config(const std::string& path, const CliOverrides& o = {});

// The measured set for the configured system, with the orbit it came from.
struct MeasuredSet {
  PlanarSet set;
  std::optional<DiscreteSpiral> spiral;
  std::optional<ContinuousSpiralSample> continuous;
  std::optional<CmOrbitResult> cm;
};
MeasuredSet build_measured_set(const RunConfig& rc);

struct BoxdimResult {
  DimensionEstimate estimate;
  std::optional<DimensionEstimate> box;
  std::optional<TheoreticalDimension> predicted;
};

struct OverlapResult {
  OverlapAnalysis analysis;
  RegimeReport regime;
  std::optional<OverlapExponents> exponents;
};

// Each command writes its files into rc.out_dir and returns the list of
// paths written.
std::vector<std::string> cmd_simulate(const RunConfig& rc);
std::vector<std::string> cmd_boxdim(const RunConfig& rc, BoxdimResult* out = nullptr);
std::vector<std::string> cmd_overlap(const RunConfig& rc, OverlapResult* out = nullptr);
std::vector<std::string> cmd_classify(const RunConfig& rc,
                                      ClassificationReport* out = nullptr);
std::vector<std::string> cmd_centermanifold(const RunConfig& rc);
std::vector<std::string> cmd_hopfmap(const RunConfig& rc);
std::vector<std::string> cmd_sweep(const RunConfig& rc);

// Writes classification.json with verdict Refused (the CLI exits 4 after).
std::string write_refusal(const RunConfig& rc, const std::string& why);

}  // namespace spiraldim
