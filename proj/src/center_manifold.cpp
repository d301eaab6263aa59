#include "spiraldim/center_manifold.hpp"

#include <cmath>
#include <string>

#include "spiraldim/errors.hpp"

namespace spiraldim {

double Polynomial2::operator()(double x, double y) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.c * ipow(x, t.i) * ipow(y, t.j);
  return s;
}

double Polynomial1::operator()(double x) const {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}

double Polynomial1::derivative_at_zero(int k) const {
  if (k < 0 || k >= int(c.size())) return 0.0;
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return fact * c[k];
}

Vec2 PlanarMapSystem::operator()(Vec2 p) const {
  return {lambda1 * p.x + f(p.x, p.y), lambda2 * p.y + g(p.x, p.y)};
}

namespace {

template <class F>
double richardson(F&& d, double h) {
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

double fxx(const Polynomial2& p, double h) {
  return richardson([&](double s) {
    return (p(s, 0) - 2.0 * p(0, 0) + p(-s, 0)) / (s * s);
  }, h);
}

double fxxx(const Polynomial2& p, double h) {
  return richardson([&](double s) {
    return (p(2 * s, 0) - 2.0 * p(s, 0) + 2.0 * p(-s, 0) - p(-2 * s, 0)) /
           (2.0 * s * s * s);
  }, h);
}

double fxy(const Polynomial2& p, double h) {
  return richardson([&](double s) {
    return (p(s, s) - p(s, -s) - p(-s, s) + p(-s, -s)) / (4.0 * s * s);
  }, h);
}

double fx(const Polynomial2& p, double h) { return (p(h, 0) - p(-h, 0)) / (2 * h); }
double fy(const Polynomial2& p, double h) { return (p(0, h) - p(0, -h)) / (2 * h); }

}  // namespace

CenterManifoldReport cm_coefficients(const PlanarMapSystem& sys, double fd_step,
                                     std::optional<double> c_override,
                                     double tol) {
  if (!(fd_step > 0.0)) throw DomainError("cm_coefficients: fd_step must be positive");
  if (std::fabs(std::fabs(sys.lambda1) - 1.0) > tol)
    throw DomainError("cm_coefficients: lambda1 must be +1 or -1");
  if (!(std::fabs(sys.lambda2) < 1.0))
    throw DomainError("cm_coefficients: need |lambda2| < 1");
  if (std::fabs(sys.f(0, 0)) > 1e-12 || std::fabs(sys.g(0, 0)) > 1e-12)
    throw DomainError("cm_coefficients: origin is not a fixed point");
  for (const auto* p : {&sys.f, &sys.g})
    if (std::fabs(fx(*p, fd_step)) > tol || std::fabs(fy(*p, fd_step)) > tol)
      throw DomainError("cm_coefficients: nonlinear part has a linear term");

  CenterManifoldReport r;
  r.lambda1 = sys.lambda1;
  r.lambda2 = sys.lambda2;
  r.sigma = fxx(sys.f, fd_step);
  r.delta = fxxx(sys.f, fd_step);
  r.a_coef = fxx(sys.g, fd_step);
  r.b_coef = fxy(sys.f, fd_step);
  r.c_overridden = c_override.has_value();
  r.c_used = c_override.value_or(sys.lambda2);
  if (r.c_used == 1.0) throw DomainError("cm_coefficients: c must differ from 1");
  r.omega_cm = r.a_coef / (sys.lambda1 * sys.lambda1 - sys.lambda2);
  r.cubic_coef = (r.delta + 3.0 * r.a_coef * r.b_coef / (1.0 - r.c_used)) / 6.0;
  r.nondegeneracy_order = nondegeneracy_order(restriction_map(r, sys.lambda1), tol);
  if (r.nondegeneracy_order)
    r.predicted_dim = Fraction(1) - Fraction(1, *r.nondegeneracy_order);
  return r;
}

Polynomial1 restriction_map(const CenterManifoldReport& r, double lambda1) {
  return Polynomial1{{0.0, lambda1, 0.5 * r.sigma, r.cubic_coef}};
}

std::optional<int> nondegeneracy_order(const Polynomial1& map1d, double tol) {
  if (std::fabs(std::fabs(map1d.derivative_at_zero(1)) - 1.0) > tol)
    throw DomainError("nondegeneracy_order: fixed point is not nonhyperbolic");
  if (std::fabs(map1d.derivative_at_zero(0)) > tol)
    throw DomainError("nondegeneracy_order: origin is not a fixed point");
  for (int k = 2; k <= map1d.degree(); ++k)
    if (std::fabs(map1d.derivative_at_zero(k)) > tol) return k;
  return std::nullopt;
}

std::vector<double> cm_orbit(const Polynomial1& g, double x1, double x_floor,
                             std::int64_t max_iter, double basin) {
  if (!(x_floor > 0.0)) throw DomainError("cm_orbit: x_floor must be positive");
  if (!(std::fabs(x1) <= basin)) throw DomainError("cm_orbit: start outside basin");
  std::vector<double> xs{x1};
  double x = x1;
  for (std::int64_t n = 0; n < max_iter && std::fabs(x) >= x_floor; ++n) {
    x = g(x);
    if (!std::isfinite(x) || std::fabs(x) > basin)
      throw DomainError("cm_orbit: orbit escapes the basin");
    xs.push_back(x);
  }
  return xs;
}

namespace {

DimensionEstimate ladder_dimension(const std::vector<Vec2>& pts,
                                   const CmOrbitParams& p) {
  // 1-D orbits carry their own tail down to the floor, no nucleus disk
  const PlanarSet set = planar_set(pts, 0.0);
  return fit_box_dimension(
      eps_ladder(set, p.eps_min, p.eps_max, p.rungs, p.area, p.threads));
}

}  // namespace

CmOrbitResult cm_orbit_and_dimension(const PlanarMapSystem& sys, double x1,
                                     const CmOrbitParams& p) {
  CmOrbitResult out;
  out.report = cm_coefficients(sys, p.fd_step, p.c_override, p.tol);
  out.predicted = out.report.predicted_dim;
  const Polynomial1 g = restriction_map(out.report, sys.lambda1);
  out.x = cm_orbit(g, x1, p.x_floor, p.max_iter, p.basin);
  out.lifted.reserve(out.x.size());
  for (double x : out.x) out.lifted.push_back({x, 0.5 * out.report.omega_cm * x * x});
  out.estimate = ladder_dimension(out.lifted, p);
  return out;
}

CmOrbitResult hyperbolic_orbit_and_dimension(const PlanarMapSystem& sys,
                                             double y1, const CmOrbitParams& p) {
  CmOrbitResult out;
  out.report.lambda1 = sys.lambda1;
  out.report.lambda2 = sys.lambda2;
  if (!(std::fabs(sys.lambda2) < 1.0))
    throw DomainError("hyperbolic orbit: need |lambda2| < 1");
  std::vector<Vec2> pts{{0.0, y1}};
  double y = y1;
  for (std::int64_t n = 0; n < p.max_iter && std::fabs(y) >= p.x_floor; ++n) {
    y = sys.lambda2 * y + sys.g(0.0, y);
    if (!std::isfinite(y) || std::fabs(y) > p.basin)
      throw DomainError("hyperbolic orbit escapes the basin");
    pts.push_back({0.0, y});
  }
  for (const auto& q : pts) out.x.push_back(q.y);
  out.lifted = pts;
  out.predicted = Fraction(0);
  out.estimate = ladder_dimension(pts, p);
  return out;
}

const char* to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::Hyperbolic: return "Hyperbolic";
    case FixedPointKind::Nonhyperbolic: return "Nonhyperbolic";
    case FixedPointKind::Saddle: return "Saddle";
  }
  return "?";
}

MultiplierReport multipliers(const PlanarMap& F, Vec2 fp, double tol,
                             double fd_step) {
  const Vec2 img = F(fp);
  if (std::hypot(img.x - fp.x, img.y - fp.y) > 1e-8)
    throw DomainError("multipliers: point is not a fixed point");
  const double h = fd_step;
  const Vec2 xp = F({fp.x + h, fp.y}), xm = F({fp.x - h, fp.y});
  const Vec2 yp = F({fp.x, fp.y + h}), ym = F({fp.x, fp.y - h});
  const double j11 = (xp.x - xm.x) / (2 * h), j21 = (xp.y - xm.y) / (2 * h);
  const double j12 = (yp.x - ym.x) / (2 * h), j22 = (yp.y - ym.y) / (2 * h);
  const double tr = j11 + j22, det = j11 * j22 - j12 * j21;
  const double disc = 0.25 * tr * tr - det;
  MultiplierReport r;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    r.lambda1 = 0.5 * tr + s;
    r.lambda2 = 0.5 * tr - s;
  } else {
    const double s = std::sqrt(-disc);
    r.lambda1 = {0.5 * tr, s};
    r.lambda2 = {0.5 * tr, -s};
  }
  if (std::abs(r.lambda2) > std::abs(r.lambda1)) std::swap(r.lambda1, r.lambda2);
  for (const auto& l : {r.lambda1, r.lambda2}) {
    const double m = std::abs(l);
    if (std::fabs(m - 1.0) <= tol) ++r.n0;
    else if (m < 1.0) ++r.n_minus;
    else ++r.n_plus;
  }
  r.kind = r.n0 > 0 ? FixedPointKind::Nonhyperbolic
         : r.n_minus * r.n_plus != 0 ? FixedPointKind::Saddle
         : FixedPointKind::Hyperbolic;
  return r;
}

}  // namespace spiraldim
