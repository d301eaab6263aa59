#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spiraldim/normal_forms.hpp"
#include "spiraldim/orbits.hpp"

namespace spiraldim {

enum class Regime { RationalLike, IrrationalLike, Mixed };
const char* to_string(Regime r);

inline constexpr std::int64_t kDefaultQMax = 10000;
inline constexpr double kDefaultRationalTol = 1e-9;

// Least q0 with q0*|theta0| >= 2pi; if theta0/(2pi) is (within tol) a
// fraction p/q with q <= q_max, q itself.
std::int64_t q0_of(double theta0, std::int64_t q_max = kDefaultQMax,
                   double tol = kDefaultRationalTol);
// Uses the exact multiple of pi when the map carries one.
std::int64_t q0_of(const PolarNormalForm& m);

struct OverlapAnalysis {
  std::int64_t q0 = 0;
  // y_k = d(A_k, A_{k+1}), z_k = d(A_k, A_{k+q0}), w_k = d(A_{k+1}, A_{k+q0})
  std::vector<double> y, z, w;
  std::optional<std::int64_t> m1_eps, m2_eps;
  std::optional<Regime> regime;
  std::optional<std::int64_t> K0;
};

// Distance between two polar points from the law of cosines in the stable
// form (r1-r2)^2 + 4 r1 r2 sin^2(dphi/2).
double polar_distance(const PolarPoint& p, const PolarPoint& q);

OverlapAnalysis overlap_sequences(const DiscreteSpiral& s, std::int64_t q0);

// Least k with seq[k] < 2 eps.
std::optional<std::int64_t> first_overlap_index(std::span<const double> seq,
                                                double eps);

struct RegimeReport {
  Regime regime = Regime::Mixed;
  std::optional<std::int64_t> K0;
};

// window = 0 selects the last quarter of the data.
RegimeReport ordering_regime(const OverlapAnalysis& a, std::int64_t window = 0);

struct PowerFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double coefficient = 0.0;  // seq ~ coefficient * k^slope
};

struct OverlapExponents {
  PowerFit y, z, w;
};

// Log-log fits of the sequences against k over the second half of the data.
OverlapExponents overlap_exponents(const OverlapAnalysis& a);

// Leading constant of z_k ~ C k^(-3/2) for alpha = 3 in the rational case:
// C = q0 sqrt(a^2+b^2) (2|a|)^(-3/2).
double predicted_z_coefficient(const PolarNormalForm& m, std::int64_t q0);

// Leading-order q-th functional root: a, b, theta0 (and the mu terms and
// tails) divided by q.
PolarNormalForm root_map(const PolarNormalForm& m, std::int64_t q);

}  // namespace spiraldim
