#include "spiraldim/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "spiraldim/errors.hpp"
#include "spiraldim/fit.hpp"

namespace spiraldim {

const char* to_string(StopReason s) {
  switch (s) {
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::RadiusFloor: return "RadiusFloor";
    case StopReason::Escape: return "Escape";
  }
  return "?";
}

namespace {

template <class Step>
void run_orbit(DiscreteSpiral& s, Step&& step, std::int64_t max_iter,
               double r_floor, double escape) {
  if (!(s.r0 > r_floor && r_floor > 0.0))
    throw DomainError("generate_spiral: need r0 > r_floor > 0");
  if (max_iter < 0) throw DomainError("generate_spiral: max_iter < 0");
  PolarPoint p = PolarPoint::from_unreduced(s.r0, s.phi0);
  s.points.push_back(p);
  s.stop_reason = StopReason::MaxIterations;
  for (std::int64_t k = 0; k < max_iter; ++k) {
    PolarPoint next;
    try {
      next = step(p);
    } catch (const NumericError&) {
      s.stop_reason = StopReason::Escape;
      return;
    }
    if (!std::isfinite(next.r) || !std::isfinite(next.phi)) {
      s.stop_reason = StopReason::Escape;
      return;
    }
    s.points.push_back(next);
    if (next.r > escape || next.r < 0.0) {
      s.stop_reason = StopReason::Escape;
      return;
    }
    if (next.r < r_floor) {
      s.stop_reason = StopReason::RadiusFloor;
      return;
    }
    p = next;
  }
}

}  // namespace

DiscreteSpiral generate_spiral(const PolarNormalForm& m, double r0, double phi0,
                               std::int64_t max_iter, double r_floor,
                               double escape) {
  DiscreteSpiral s;
  s.map = m;
  s.r0 = r0;
  s.phi0 = phi0;
  run_orbit(s, [&](const PolarPoint& p) { return eval(m, p); }, max_iter,
            r_floor, escape);
  return s;
}

DiscreteSpiral generate_spiral(const FlowMap& f, double r0, double phi0,
                               std::int64_t max_iter, double r_floor,
                               double escape) {
  DiscreteSpiral s;
  s.flow = f;
  s.r0 = r0;
  s.phi0 = phi0;
  run_orbit(s, f, max_iter, r_floor, escape);
  return s;
}

double spiral_angle(const ContinuousHopfSystem& sys, double r, double r_ref) {
  const auto& p = sys.params();
  if (p.mu != 0.0) throw DomainError("spiral_angle: needs mu = 0");
  const double two_k = 2.0 * p.k;
  auto Phi = [&](double x) {
    return -p.omega / (two_k * p.a) * std::pow(x, -two_k) +
           p.b / p.a * std::log(x);
  };
  return Phi(r) - Phi(r_ref);
}

ContinuousSpiralSample sample_continuous_spiral(const ContinuousHopfSystem& sys,
                                                double r_start, double r_end,
                                                std::int64_t n,
                                                double max_angle_step) {
  const auto& p = sys.params();
  if (!(p.a < 0.0))
    throw DomainError("continuous spiral: needs a < 0 (use the time-reversed system)");
  if (!(r_end > 0.0 && r_end < r_start))
    throw DomainError("continuous spiral: need 0 < r_end < r_start");
  if (n < 2) throw DomainError("continuous spiral: n must be >= 2");
  if (!(max_angle_step > 0.0))
    throw DomainError("continuous spiral: max_angle_step must be positive");
  // phidot must keep one sign or Phi is not monotone
  const double w0 = sys.phidot(r_end), w1 = sys.phidot(r_start);
  if (!(w0 * w1 > 0.0))
    throw DomainError("continuous spiral: angular velocity changes sign");

  ContinuousSpiralSample out{{}, sys, 0.0, spiral_angle(sys, r_end, r_start)};
  const double ratio = r_end / r_start;
  auto radius_at = [&](std::int64_t i) {
    if (i == 0) return r_start;
    if (i == n - 1) return r_end;
    return r_start * std::pow(ratio, double(i) / double(n - 1));
  };
  // inverse of Phi by bisection in log r; Phi is monotone on the range
  auto invert = [&](double target, double lo_r, double hi_r) {
    double lo = std::log(lo_r), hi = std::log(hi_r);
    const double phi_lo = spiral_angle(sys, lo_r, r_start);
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = spiral_angle(sys, std::exp(mid), r_start);
      if ((v - target) * (phi_lo - target) > 0.0) lo = mid;
      else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
  };

  double r_prev = r_start, phi_prev = 0.0;
  out.points.push_back(PolarPoint::from_unreduced(r_start, 0.0));
  for (std::int64_t i = 1; i < n; ++i) {
    const double r = radius_at(i);
    const double phi = spiral_angle(sys, r, r_start);
    const double gap = std::fabs(phi - phi_prev);
    if (std::isfinite(max_angle_step) && gap > max_angle_step) {
      const auto m = std::int64_t(std::ceil(gap / max_angle_step));
      for (std::int64_t j = 1; j < m; ++j) {
        const double target = phi_prev + (phi - phi_prev) * double(j) / double(m);
        out.points.push_back(
            PolarPoint::from_unreduced(invert(target, r, r_prev), target));
      }
    }
    out.points.push_back(PolarPoint::from_unreduced(r, phi));
    r_prev = r;
    phi_prev = phi;
  }
  return out;
}

DecayFit radial_decay_exponent(const DiscreteSpiral& s, std::int64_t k_min) {
  if (k_min < 1) throw DomainError("radial_decay_exponent: k_min must be >= 1");
  const std::int64_t k0 = s.first_index;
  const auto len = k0 + std::int64_t(s.points.size());
  if (k0 < 0 || len < 10 * k_min)
    throw DomainError("radial_decay_exponent: spiral shorter than 10*k_min");
  std::vector<double> lk, kk, lr;
  for (std::int64_t k = std::max(k_min, k0); k < len; ++k) {
    const double r = s.points[k - k0].r;
    if (!(r > 0.0)) break;
    lk.push_back(std::log(double(k)));
    kk.push_back(double(k));
    lr.push_back(std::log(r));
  }
  if (lk.size() < 3) throw DomainError("radial_decay_exponent: too few radii");
  const LinearFit ll = linear_fit(lk, lr);
  const LinearFit sl = linear_fit(kk, lr);
  DecayFit f;
  f.gamma = -ll.slope;
  f.gamma_stderr = ll.slope_stderr;
  f.r2_loglog = ll.r2;
  f.r2_semilog = sl.r2;
  f.n = lk.size();
  f.power_law = ll.r2 >= 0.995 && ll.r2 >= sl.r2;
  return f;
}

}  // namespace spiraldim
