#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "spiraldim/dimension.hpp"
#include "spiraldim/neighborhood.hpp"

namespace spiraldim {

struct Monomial {
  int i = 0;  // power of x
  int j = 0;  // power of y
  double c = 0.0;
};

struct Polynomial2 {
  std::vector<Monomial> terms;
  double operator()(double x, double y) const;
};

// Cubic (or lower) polynomial in one variable, c[k] multiplies x^k.
struct Polynomial1 {
  std::vector<double> c;
  double operator()(double x) const;
  double derivative_at_zero(int k) const;  // k! c_k
  int degree() const { return int(c.size()) - 1; }
};

// x -> lambda1 x + f(x, y), y -> lambda2 y + g(x, y) with f, g the
// nonlinear parts.
struct PlanarMapSystem {
  double lambda1 = 1.0;
  double lambda2 = 0.5;
  Polynomial2 f, g;

  Vec2 operator()(Vec2 p) const;
};

using PlanarMap = std::function<Vec2(Vec2)>;

inline constexpr double kDefaultFdStep = 1e-4;
inline constexpr double kDefaultNondegTol = 1e-6;

struct CenterManifoldReport {
  double lambda1 = 1.0;
  double lambda2 = 0.5;
  double sigma = 0.0;  // f_xx
  double delta = 0.0;  // f_xxx
  double a_coef = 0.0;  // g_xx
  double b_coef = 0.0;  // f_xy
  double c_used = 0.0;  // denominator constant, lambda2 unless overridden
  bool c_overridden = false;
  double omega_cm = 0.0;  // manifold y = omega/2 x^2
  double cubic_coef = 0.0;
  std::optional<int> nondegeneracy_order;
  std::optional<Fraction> predicted_dim;
};

// Derivatives at the origin by central differences with Richardson
// extrapolation. omega = a / (lambda1^2 - lambda2) from the invariance
// equation at second order.
CenterManifoldReport cm_coefficients(const PlanarMapSystem& sys,
                                     double fd_step = kDefaultFdStep,
                                     std::optional<double> c_override = {},
                                     double tol = kDefaultNondegTol);

// x -> lambda1 x + sigma/2 x^2 + cubic_coef x^3
Polynomial1 restriction_map(const CenterManifoldReport& r, double lambda1);

// Least k >= 2 with |k-th derivative| > tol; nullopt when undetermined.
std::optional<int> nondegeneracy_order(const Polynomial1& map1d,
                                       double tol = kDefaultNondegTol);

struct CmOrbitParams {
  double fd_step = kDefaultFdStep;
  std::optional<double> c_override;
  double tol = kDefaultNondegTol;
  double x_floor = 1e-5;
  std::int64_t max_iter = 2000000;
  double basin = 1.0;
  double eps_min = 1e-5;
  double eps_max = 1e-3;
  int rungs = 12;
  AreaOptions area{AreaMethod::GridRaster, kDefaultMcSamples, 0,
                   kDefaultRasterSubdiv};
  int threads = 1;
};

struct CmOrbitResult {
  CenterManifoldReport report;
  std::vector<double> x;  // restricted 1-D orbit
  std::vector<Vec2> lifted;  // (x, omega/2 x^2)
  DimensionEstimate estimate;
  std::optional<Fraction> predicted;
};

// Iterates the restriction from x1 until |x| < x_floor; throws DomainError
// when the orbit leaves the basin.
std::vector<double> cm_orbit(const Polynomial1& g, double x1, double x_floor,
                             std::int64_t max_iter, double basin);

CmOrbitResult cm_orbit_and_dimension(const PlanarMapSystem& sys, double x1,
                                     const CmOrbitParams& p = {});

// Orbit along the hyperbolic direction y -> lambda2 y + g(0, y) on the y axis.
CmOrbitResult hyperbolic_orbit_and_dimension(const PlanarMapSystem& sys,
                                             double y1, const CmOrbitParams& p);

enum class FixedPointKind { Hyperbolic, Nonhyperbolic, Saddle };
const char* to_string(FixedPointKind k);

struct MultiplierReport {
  std::complex<double> lambda1, lambda2;  // |lambda1| >= |lambda2|
  int n0 = 0, n_minus = 0, n_plus = 0;
  FixedPointKind kind = FixedPointKind::Hyperbolic;
};

MultiplierReport multipliers(const PlanarMap& F, Vec2 fixed_point,
                             double tol = kDefaultNondegTol,
                             double fd_step = 1e-5);

}  // namespace spiraldim
