#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spiraldim/center_manifold.hpp"
#include "spiraldim/dimension.hpp"
#include "spiraldim/normal_forms.hpp"
#include "spiraldim/overlaps.hpp"

namespace spiraldim {

enum class RotationKind { Rational, Irrational };

struct RotationAnalysis {
  double theta0 = 0.0;
  double beta = 0.0;  // theta0 / 2pi
  RotationKind kind = RotationKind::Irrational;
  std::int64_t p = 0, q = 0;  // valid when Rational
  std::int64_t q_max = kDefaultQMax;
  double tol = kDefaultRationalTol;
  bool nonresonant = true;
  bool exact = false;  // decided from an exact multiple of pi
};

RotationAnalysis rotation_rationality(double theta0,
                                      std::int64_t q_max = kDefaultQMax,
                                      double tol = kDefaultRationalTol);
// Exact path when the map carries theta0 as a multiple of pi.
RotationAnalysis rotation_rationality(const PolarNormalForm& m,
                                      std::int64_t q_max = kDefaultQMax,
                                      double tol = kDefaultRationalTol);

// True iff min over n = 1..4 of |exp(i n theta0) - 1| > tol.
bool nonresonance_check(double theta0, double tol = kDefaultRationalTol);

struct Tolerances {
  double ns_rational = 0.10;
  double ns_irrational = 0.12;
  double chenciner = 0.15;
  double center_manifold = 0.08;
  double hyperbolic = 0.15;
  double hopf_spiral = 0.12;
  double envelope = 0.12;
  double for_scenario(const Scenario& s) const;
};

enum class Verdict { Pass, Fail, Inconclusive, Refused, NotEvaluated };
const char* to_string(Verdict v);

struct ClassificationReport {
  TheoreticalDimension predicted;
  std::optional<double> estimate;
  Verdict verdict = Verdict::NotEvaluated;
  double tolerance = 0.0;
  std::optional<bool> within_envelope;
  std::optional<RotationAnalysis> rotation;
  std::optional<Regime> regime;
  std::string explanation;
};

// Polar normal form. Throws RefusedError for resonant angles or a
// degenerate radial part.
ClassificationReport classify(const PolarNormalForm& m,
                              const std::optional<DimensionEstimate>& est = {},
                              const std::optional<Regime>& regime = {},
                              const Tolerances& tol = {});
// Unit-time map of a Hopf flow: behaves as a normal form with theta0 = omega
// and alpha = 2k+1.
ClassificationReport classify(const ContinuousHopfSystem& sys,
                              const std::optional<DimensionEstimate>& est = {},
                              const std::optional<Regime>& regime = {},
                              const Tolerances& tol = {});
// Sampled trajectory of the flow itself (not its unit-time map).
ClassificationReport classify_continuous_spiral(
    const ContinuousHopfSystem& sys,
    const std::optional<DimensionEstimate>& est = {}, const Tolerances& tol = {});
// Cartesian system with one multiplier on the unit circle.
ClassificationReport classify(const CenterManifoldReport& r,
                              const std::optional<DimensionEstimate>& est = {},
                              const Tolerances& tol = {});
// Orbit near a hyperbolic fixed point.
ClassificationReport classify_hyperbolic(
    const std::optional<DimensionEstimate>& est = {}, const Tolerances& tol = {});

}  // namespace spiraldim
