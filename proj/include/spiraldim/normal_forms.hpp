#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "spiraldim/rational.hpp"

namespace spiraldim {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A point in polar form. The angle is kept as a reduced part in [0, 2pi) plus
// an integer turn count; the unreduced angle is phi + 2pi*turns. Keeping the
// reduced part small avoids the precision loss of a single large accumulating
// double on long orbits (several 10^5 turns).
struct PolarPoint {
  double r = 0.0;
  double phi = 0.0;
  std::int64_t turns = 0;

  static PolarPoint from_unreduced(double r, double phi);
  double unreduced() const { return phi + kTwoPi * double(turns); }
  double reduced() const { return phi; }
  double x() const;
  double y() const;

  // Adds an angle increment, renormalising phi into [0, 2pi).
  PolarPoint rotated(double dphi) const;
};

struct TailTerm {
  double coefficient = 0.0;
  int exponent = 0;
};

struct NormalFormParams {
  double a = -1.0;
  int alpha = 3;
  double b = 0.0;
  double theta0 = 0.0;
  double d = 0.0;
  double c = 0.0;
  double mu = 0.0;
  std::vector<TailTerm> radial_tail;
  std::vector<TailTerm> angular_tail;
  // Set when theta0 was given as an exact rational multiple of pi.
  std::optional<Fraction> theta0_over_pi;
};

// r -> r + d mu r + a r^alpha + tail
// phi -> phi + theta0 + c mu + b r^(alpha-1) + tail
class PolarNormalForm {
 public:
  explicit PolarNormalForm(NormalFormParams p);

  const NormalFormParams& params() const { return p_; }
  double a() const { return p_.a; }
  int alpha() const { return p_.alpha; }
  double b() const { return p_.b; }
  double theta0() const { return p_.theta0; }

  double radial(double r) const;
  double angle_increment(double r) const;

 private:
  NormalFormParams p_;
};

// Integer power by repeated squaring (exact for small exponents).
double ipow(double x, int n);

PolarPoint eval(const PolarNormalForm& m, const PolarPoint& p);
PolarPoint iterate_k(const PolarNormalForm& m, PolarPoint p, std::int64_t k);

struct LeadingCoefficients {
  double radial = 0.0;       // k a
  double angle_shift = 0.0;  // k theta0
  double angular = 0.0;      // k b
};
LeadingCoefficients leading_iterate_coefficients(const PolarNormalForm& m,
                                                 std::int64_t k);

// Leading-order inverse: every coefficient of the perturbation negated.
PolarNormalForm inverse_leading(const PolarNormalForm& m);

struct HopfParams {
  double a = -1.0;
  double b = 0.0;
  double omega = 1.0;
  int k = 1;
  double d = 0.0;
  double c = 0.0;
  double mu = 0.0;
};

// rdot = d mu r + a r^(2k+1),  phidot = omega + c mu + b r^(2k)
class ContinuousHopfSystem {
 public:
  explicit ContinuousHopfSystem(HopfParams p);
  const HopfParams& params() const { return p_; }

  double rdot(double r) const;
  double phidot(double r) const;
  // Only defined for k = 1.
  double third_lyapunov_coefficient() const;

 private:
  HopfParams p_;
};

// Time-T flow map of a Hopf system by fixed-step RK4.
class FlowMap {
 public:
  FlowMap(ContinuousHopfSystem sys, double T, int steps, double ceiling);

  PolarPoint operator()(const PolarPoint& p) const;
  // (r(T), accumulated angle over [0, T]) starting from radius r.
  std::pair<double, double> advance(double r) const;
  const ContinuousHopfSystem& system() const { return sys_; }
  double period() const { return T_; }
  int steps() const { return steps_; }

 private:
  ContinuousHopfSystem sys_;
  double T_;
  int steps_;
  double ceiling_;
};

inline constexpr int kDefaultFlowSteps = 256;
inline constexpr double kDefaultBlowupCeiling = 1e3;

FlowMap unit_time_map(const ContinuousHopfSystem& sys, double T = 1.0,
                      int steps = kDefaultFlowSteps,
                      double ceiling = kDefaultBlowupCeiling);

// Exact solution of rdot = a r^(2k+1).
double flow_radial_closed_form(double a, int k, double r0, double t);

struct FlowCoefficients {
  double a = 0.0;
  double b = 0.0;
  double omega = 0.0;
};

// Recovers (a, b, omega) of the expansion r + a r^(2k+1), phi + omega + b r^2k
// of a flow map by regressing over n radii log-spaced in [r_lo, r_hi].
FlowCoefficients fit_flow_coefficients(const FlowMap& f, double r_lo,
                                       double r_hi, int n = 40);

}  // namespace spiraldim
