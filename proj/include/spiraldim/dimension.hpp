#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spiraldim/neighborhood.hpp"
#include "spiraldim/rational.hpp"

namespace spiraldim {

struct DimensionEstimate {
  double dim = 0.0;  // clamped to [0, 2]
  double dim_raw = 0.0;  // 2 - slope before clamping
  double dim_stderr = 0.0;
  double dim_lower = 0.0;  // small-eps half of the ladder
  double dim_upper = 0.0;  // large-eps half
  std::optional<double> content_lower;
  std::optional<double> content_upper;
  double r2 = 1.0;
  bool poor_fit = false;  // r2 < 0.99
  std::vector<EpsAreaSample> ladder;
  std::vector<BoxCountSample> counts;
};

inline constexpr double kPoorFitR2 = 0.99;

// Weighted fit of log |A_eps| against log eps; dim = 2 - slope. Weights are
// (area / std_error)^2, i.e. inverse variance of log area, when every rung
// carries a positive std_error; uniform otherwise.
DimensionEstimate fit_box_dimension(std::span<const EpsAreaSample> ladder);

// dim = slope of log N against log(1/delta), ordinary least squares.
DimensionEstimate fit_box_dimension_from_counts(
    std::span<const BoxCountSample> counts);

enum class ScenarioKind {
  Hyperbolic,
  SaddleNodeCM,
  PitchforkOrPDCM,
  NSRational,
  NSIrrational,
  ContinuousHopfSpiral,
  Chenciner,
};
const char* to_string(ScenarioKind k);

struct Scenario {
  ScenarioKind kind = ScenarioKind::Hyperbolic;
  int order = 0;  // k for PitchforkOrPDCM / ContinuousHopfSpiral, alpha for NS
  std::string str() const;  // "NSRational(3)"
};

struct TheoreticalDimension {
  Scenario scenario;
  Fraction value;
  std::optional<std::pair<Fraction, Fraction>> bounds;
};

TheoreticalDimension theoretical_dimension(const Scenario& s);

struct FiniteStability {
  double max_dim = 0.0;  // max over the parts
  double union_dim = 0.0;
  bool pass = false;
};

// parts: estimates of disjoint subsets; whole: estimate of their union.
FiniteStability finite_stability_check(std::span<const DimensionEstimate> parts,
                                       const DimensionEstimate& whole,
                                       double tol);

}  // namespace spiraldim
