#include "spiraldim/overlaps.hpp"

#include <cmath>

#include "spiraldim/errors.hpp"
#include "spiraldim/fit.hpp"
#include "spiraldim/rational.hpp"

namespace spiraldim {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::RationalLike: return "RationalLike";
    case Regime::IrrationalLike: return "IrrationalLike";
    case Regime::Mixed: return "Mixed";
  }
  return "?";
}

std::int64_t q0_of(double theta0, std::int64_t q_max, double tol) {
  if (theta0 == 0.0 || !std::isfinite(theta0))
    throw DomainError("q0_of: zero rotation angle");
  const double beta = std::fabs(theta0) / kTwoPi;
  if (auto f = rational_approx(beta, q_max, tol); f && f->num() != 0)
    return f->den();
  return std::int64_t(std::ceil(kTwoPi / std::fabs(theta0)));
}

std::int64_t q0_of(const PolarNormalForm& m) {
  if (const auto& ex = m.params().theta0_over_pi) {
    if (ex->num() == 0) throw DomainError("q0_of: zero rotation angle");
    // theta0 / 2pi = num / (2 den)
    return Fraction(ex->num(), 2 * ex->den()).den();
  }
  return q0_of(m.theta0());
}

double polar_distance(const PolarPoint& p, const PolarPoint& q) {
  // reduced parts suffice: sin^2 is 2pi-periodic in the half angle doubled
  const double s = std::sin(0.5 * (q.phi - p.phi));
  const double dr = p.r - q.r;
  return std::sqrt(dr * dr + 4.0 * p.r * q.r * s * s);
}

OverlapAnalysis overlap_sequences(const DiscreteSpiral& s, std::int64_t q0) {
  if (q0 < 1) throw DomainError("overlap_sequences: q0 must be >= 1");
  const auto n = std::int64_t(s.points.size());
  if (n <= q0 + 10) throw DomainError("overlap_sequences: spiral too short");
  OverlapAnalysis a;
  a.q0 = q0;
  const auto L = n - q0;
  a.y.resize(L);
  a.z.resize(L);
  a.w.resize(L);
  for (std::int64_t k = 0; k < L; ++k) {
    const auto& pk = s.points[k];
    const auto& pk1 = s.points[k + 1];
    const auto& pq = s.points[k + q0];
    a.y[k] = polar_distance(pk, pk1);
    a.z[k] = polar_distance(pk, pq);
    a.w[k] = polar_distance(pk1, pq);
  }
  return a;
}

std::optional<std::int64_t> first_overlap_index(std::span<const double> seq,
                                                double eps) {
  for (std::size_t k = 0; k < seq.size(); ++k)
    if (seq[k] < 2.0 * eps) return std::int64_t(k);
  return std::nullopt;
}

RegimeReport ordering_regime(const OverlapAnalysis& a, std::int64_t window) {
  const auto L = std::int64_t(a.y.size());
  if (std::int64_t(a.z.size()) != L) throw DomainError("ordering_regime: size mismatch");
  if (window <= 0) window = L / 4;
  if (window < 1 || L < 2 * window)
    throw DomainError("ordering_regime: sequences shorter than two windows");
  bool all_z = true, all_y = true;
  for (auto k = L - window; k < L; ++k) {
    if (!(a.z[k] < a.y[k])) all_z = false;
    if (!(a.y[k] < a.z[k])) all_y = false;
  }
  RegimeReport r;
  if (!all_z && !all_y) return r;
  r.regime = all_z ? Regime::RationalLike : Regime::IrrationalLike;
  // first index after which the winning order holds to the end
  std::int64_t k0 = 0;
  for (std::int64_t k = L - 1; k >= 0; --k) {
    const bool wins = all_z ? a.z[k] < a.y[k] : a.y[k] < a.z[k];
    if (!wins) {
      k0 = k + 1;
      break;
    }
  }
  r.K0 = k0;
  return r;
}

namespace {

PowerFit tail_fit(const std::vector<double>& seq) {
  const auto L = seq.size();
  std::vector<double> lx, ly;
  for (std::size_t k = std::max<std::size_t>(1, L / 2); k < L; ++k) {
    if (!(seq[k] > 0.0)) continue;
    lx.push_back(std::log(double(k)));
    ly.push_back(std::log(seq[k]));
  }
  if (lx.size() < 3) throw DomainError("overlap_exponents: too few positive values");
  const LinearFit f = linear_fit(lx, ly);
  return {f.slope, f.slope_stderr, std::exp(f.intercept)};
}

}  // namespace

OverlapExponents overlap_exponents(const OverlapAnalysis& a) {
  if (a.y.size() < 1000) throw DomainError("overlap_exponents: need >= 1000 terms");
  return {tail_fit(a.y), tail_fit(a.z), tail_fit(a.w)};
}

double predicted_z_coefficient(const PolarNormalForm& m, std::int64_t q0) {
  const double a = m.a(), b = m.b();
  if (a == 0.0) throw DomainError("predicted_z_coefficient: a must be nonzero");
  return double(q0) * std::hypot(a, b) * std::pow(2.0 * std::fabs(a), -1.5);
}

PolarNormalForm root_map(const PolarNormalForm& m, std::int64_t q) {
  if (q < 1) throw DomainError("root_map: q must be >= 1");
  if (q == 1) return m;
  NormalFormParams p = m.params();
  const double inv = 1.0 / double(q);
  p.a *= inv;
  p.b *= inv;
  p.theta0 /= double(q);
  p.d *= inv;
  p.c *= inv;
  for (auto& t : p.radial_tail) t.coefficient *= inv;
  for (auto& t : p.angular_tail) t.coefficient *= inv;
  if (p.theta0_over_pi) p.theta0_over_pi = *p.theta0_over_pi / Fraction(q);
  return PolarNormalForm(std::move(p));
}

}  // namespace spiraldim
