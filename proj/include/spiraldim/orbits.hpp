#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "spiraldim/normal_forms.hpp"

namespace spiraldim {

enum class StopReason { MaxIterations, RadiusFloor, Escape };
const char* to_string(StopReason s);

inline constexpr double kDefaultEscape = 1e3;

struct DiscreteSpiral {
  std::vector<PolarPoint> points;
  // Exactly one of these describes the generator.
  std::optional<PolarNormalForm> map;
  std::optional<FlowMap> flow;
  double r0 = 0.0;
  double phi0 = 0.0;
  StopReason stop_reason = StopReason::MaxIterations;
  // iterate number of points[0]; nonzero after dropping a prefix
  std::int64_t first_index = 0;

  std::size_t size() const { return points.size(); }
};

// Iterates from (r0, phi0) until r < r_floor (that point is kept), max_iter
// steps were taken, or r leaves [0, escape]. Non-finite values stop with
// Escape; the offending point is not stored.
DiscreteSpiral generate_spiral(const PolarNormalForm& m, double r0, double phi0,
                               std::int64_t max_iter, double r_floor,
                               double escape = kDefaultEscape);
DiscreteSpiral generate_spiral(const FlowMap& f, double r0, double phi0,
                               std::int64_t max_iter, double r_floor,
                               double escape = kDefaultEscape);

struct ContinuousSpiralSample {
  std::vector<PolarPoint> points;
  ContinuousHopfSystem system;
  double phi_start = 0.0;
  double phi_end = 0.0;
};

inline constexpr double kDefaultMaxAngleStep = std::numbers::pi / 64.0;

// Closed-form angle along the trajectory through (r_ref, 0):
//   Phi(r) = -omega/(2k a) r^-2k + (b/a) ln r, shifted so Phi(r_ref) = 0.
// Requires mu = 0.
double spiral_angle(const ContinuousHopfSystem& sys, double r, double r_ref);

// n radii geometrically spaced from r_start down to r_end with closed-form
// angles, then extra points inserted wherever the angular gap exceeds
// max_angle_step. Pass max_angle_step = infinity to skip densification.
ContinuousSpiralSample sample_continuous_spiral(
    const ContinuousHopfSystem& sys, double r_start, double r_end,
    std::int64_t n, double max_angle_step = kDefaultMaxAngleStep);

struct DecayFit {
  double gamma = 0.0;   // r_k ~ k^-gamma
  double gamma_stderr = 0.0;
  double r2_loglog = 0.0;
  double r2_semilog = 0.0;
  bool power_law = false;  // false when decay looks exponential or noisy
  std::size_t n = 0;
};

inline constexpr std::int64_t kDefaultDecayKMin = 100;

// Fit of log r_k against log k over k >= k_min.
DecayFit radial_decay_exponent(const DiscreteSpiral& s,
                               std::int64_t k_min = kDefaultDecayKMin);

}  // namespace spiraldim
