#include "spiraldim/normal_forms.hpp"

#include <cmath>
#include <string>

#include "spiraldim/errors.hpp"
#include "spiraldim/fit.hpp"

namespace spiraldim {

double ipow(double x, int n) {
  double result = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

PolarPoint PolarPoint::from_unreduced(double r, double phi) {
  PolarPoint p{r, 0.0, 0};
  return p.rotated(phi);
}

double PolarPoint::x() const { return r * std::cos(phi); }
double PolarPoint::y() const { return r * std::sin(phi); }

PolarPoint PolarPoint::rotated(double dphi) const {
  PolarPoint out{r, phi + dphi, turns};
  if (out.phi >= kTwoPi || out.phi < 0.0) {
    if (!std::isfinite(out.phi)) return out;
    // bulk reduction first for large increments, then settle the edges
    const double n = std::floor(out.phi / kTwoPi);
    if (std::fabs(n) > 1.0) {
      out.phi -= n * kTwoPi;
      out.turns += std::int64_t(n);
    }
    while (out.phi >= kTwoPi) {
      out.phi -= kTwoPi;
      ++out.turns;
    }
    while (out.phi < 0.0) {
      out.phi += kTwoPi;
      --out.turns;
    }
    // phi + 2pi can round up to exactly 2pi
    if (out.phi >= kTwoPi) {
      out.phi = 0.0;
      ++out.turns;
    }
  }
  return out;
}

PolarNormalForm::PolarNormalForm(NormalFormParams p) : p_(std::move(p)) {
  if (p_.alpha < 3 || p_.alpha % 2 == 0)
    throw DomainError("alpha must be odd and >= 3, got " +
                      std::to_string(p_.alpha));
  for (const auto& t : p_.radial_tail)
    if (t.exponent <= p_.alpha)
      throw DomainError("radial tail exponent must exceed alpha");
  for (const auto& t : p_.angular_tail)
    if (t.exponent <= p_.alpha - 1)
      throw DomainError("angular tail exponent must exceed alpha-1");
  for (double v : {p_.a, p_.b, p_.theta0, p_.d, p_.c, p_.mu})
    if (!std::isfinite(v)) throw DomainError("non-finite normal form coefficient");
  if (p_.theta0_over_pi) {
    const double exact = std::numbers::pi * p_.theta0_over_pi->value();
    if (std::fabs(exact - p_.theta0) > 1e-12 * std::max(1.0, std::fabs(exact)))
      throw DomainError("theta0 disagrees with its exact multiple of pi");
  }
}

double PolarNormalForm::radial(double r) const {
  double out = r + p_.a * ipow(r, p_.alpha);
  if (p_.mu != 0.0) out += p_.d * p_.mu * r;
  for (const auto& t : p_.radial_tail) out += t.coefficient * ipow(r, t.exponent);
  return out;
}

double PolarNormalForm::angle_increment(double r) const {
  double inc = p_.theta0;
  if (p_.mu != 0.0) inc += p_.c * p_.mu;
  if (p_.b != 0.0) inc += p_.b * ipow(r, p_.alpha - 1);
  for (const auto& t : p_.angular_tail) inc += t.coefficient * ipow(r, t.exponent);
  return inc;
}

PolarPoint eval(const PolarNormalForm& m, const PolarPoint& p) {
  if (!(p.r >= 0.0)) throw DomainError("eval: negative radius");
  PolarPoint out = p.rotated(m.angle_increment(p.r));
  out.r = m.radial(p.r);
  return out;
}

PolarPoint iterate_k(const PolarNormalForm& m, PolarPoint p, std::int64_t k) {
  if (k < 1) throw DomainError("iterate_k: k must be >= 1");
  for (std::int64_t i = 0; i < k; ++i) {
    p = eval(m, p);
    if (!std::isfinite(p.r)) throw NumericError("iterate_k: non-finite radius");
  }
  return p;
}

LeadingCoefficients leading_iterate_coefficients(const PolarNormalForm& m,
                                                 std::int64_t k) {
  if (k < 1) throw DomainError("leading_iterate_coefficients: k must be >= 1");
  const double kk = double(k);
  return {kk * m.a(), kk * m.theta0(), kk * m.b()};
}

PolarNormalForm inverse_leading(const PolarNormalForm& m) {
  if (m.a() == 0.0) throw DomainError("inverse_leading: a must be nonzero");
  NormalFormParams p = m.params();
  p.a = -p.a;
  p.b = -p.b;
  p.theta0 = -p.theta0;
  p.d = -p.d;
  p.c = -p.c;
  for (auto& t : p.radial_tail) t.coefficient = -t.coefficient;
  for (auto& t : p.angular_tail) t.coefficient = -t.coefficient;
  if (p.theta0_over_pi) p.theta0_over_pi = Fraction(0) - *p.theta0_over_pi;
  return PolarNormalForm(std::move(p));
}

ContinuousHopfSystem::ContinuousHopfSystem(HopfParams p) : p_(p) {
  if (p_.k < 1) throw DomainError("Hopf system: k must be >= 1");
  if (p_.omega == 0.0 || !std::isfinite(p_.omega))
    throw DomainError("Hopf system: omega must be nonzero");
}

double ContinuousHopfSystem::rdot(double r) const {
  return p_.d * p_.mu * r + p_.a * ipow(r, 2 * p_.k + 1);
}

double ContinuousHopfSystem::phidot(double r) const {
  return p_.omega + p_.c * p_.mu + p_.b * ipow(r, 2 * p_.k);
}

double ContinuousHopfSystem::third_lyapunov_coefficient() const {
  if (p_.k != 1)
    throw DomainError("third Lyapunov coefficient needs k = 1");
  return 9.0 * std::numbers::pi / p_.omega * p_.a;
}

FlowMap::FlowMap(ContinuousHopfSystem sys, double T, int steps, double ceiling)
    : sys_(sys), T_(T), steps_(steps), ceiling_(ceiling) {
  if (!(T >= 0.0)) throw DomainError("flow map: T must be >= 0");
  if (steps < 16) throw DomainError("flow map: need at least 16 steps");
  if (!(ceiling > 0.0)) throw DomainError("flow map: ceiling must be positive");
}

std::pair<double, double> FlowMap::advance(double r) const {
  if (!(r >= 0.0)) throw DomainError("flow map: negative radius");
  if (T_ == 0.0) return {r, 0.0};
  const double h = T_ / steps_;
  double phi = 0.0;
  for (int i = 0; i < steps_; ++i) {
    // phi does not feed back, so it rides along with the same stages
    const double k1 = sys_.rdot(r), l1 = sys_.phidot(r);
    const double r2 = r + 0.5 * h * k1;
    const double k2 = sys_.rdot(r2), l2 = sys_.phidot(r2);
    const double r3 = r + 0.5 * h * k2;
    const double k3 = sys_.rdot(r3), l3 = sys_.phidot(r3);
    const double r4 = r + h * k3;
    const double k4 = sys_.rdot(r4), l4 = sys_.phidot(r4);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    phi += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    if (!std::isfinite(r) || r > ceiling_)
      throw NumericError("flow map: radius blew up past ceiling");
  }
  return {r, phi};
}

PolarPoint FlowMap::operator()(const PolarPoint& p) const {
  const auto [r, dphi] = advance(p.r);
  PolarPoint out = p.rotated(dphi);
  out.r = r;
  return out;
}

FlowMap unit_time_map(const ContinuousHopfSystem& sys, double T, int steps,
                      double ceiling) {
  return FlowMap(sys, T, steps, ceiling);
}

double flow_radial_closed_form(double a, int k, double r0, double t) {
  if (k < 1) throw DomainError("closed form: k must be >= 1");
  if (!(r0 >= 0.0)) throw DomainError("closed form: negative radius");
  if (r0 == 0.0) return 0.0;
  const double base = 1.0 - 2.0 * k * a * ipow(r0, 2 * k) * t;
  if (!(base > 0.0))
    throw DomainError("closed form: finite-time blow-up before t");
  return r0 * std::pow(base, -1.0 / (2.0 * k));
}

FlowCoefficients fit_flow_coefficients(const FlowMap& f, double r_lo,
                                       double r_hi, int n) {
  if (!(r_lo > 0.0 && r_lo < r_hi) || n < 3)
    throw DomainError("fit_flow_coefficients: bad radius window");
  const int k = f.system().params().k;
  std::vector<double> s(n), radial(n), angle(n);
  for (int i = 0; i < n; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, double(i) / (n - 1));
    const auto [r1, dphi] = f.advance(r);
    s[i] = ipow(r, 2 * k);
    radial[i] = (r1 - r) / ipow(r, 2 * k + 1);
    angle[i] = dphi;
  }
  // both residuals are affine in r^(2k) to leading order
  const LinearFit fr = linear_fit(s, radial);
  const LinearFit fa = linear_fit(s, angle);
  return {fr.intercept, fa.slope, fa.intercept};
}

}  // namespace spiraldim
