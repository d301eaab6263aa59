#include "spiraldim/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "spiraldim/errors.hpp"
#include "spiraldim/fit.hpp"

namespace spiraldim {

namespace {

struct Series {
  std::vector<double> x, y, w;
};

LinearFit fit_range(const Series& s, std::size_t lo, std::size_t hi) {
  std::span<const double> x(s.x), y(s.y), w(s.w);
  return weighted_linear_fit(x.subspan(lo, hi - lo), y.subspan(lo, hi - lo),
                             w.subspan(lo, hi - lo));
}

}  // namespace

DimensionEstimate fit_box_dimension(std::span<const EpsAreaSample> ladder) {
  if (ladder.size() < 5) throw DomainError("fit_box_dimension: need >= 5 rungs");
  std::vector<EpsAreaSample> sorted(ladder.begin(), ladder.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.eps < b.eps; });
  bool all_err = true;
  for (const auto& s : sorted) {
    if (!(s.eps > 0.0) || !(s.area > 0.0))
      throw DomainError("fit_box_dimension: eps and area must be positive");
    if (!(s.std_error > 0.0)) all_err = false;
  }
  Series ser;
  for (const auto& s : sorted) {
    ser.x.push_back(std::log(s.eps));
    ser.y.push_back(std::log(s.area));
    const double rel = s.std_error / s.area;
    ser.w.push_back(all_err ? 1.0 / (rel * rel) : 1.0);
  }
  const std::size_t n = sorted.size();
  const LinearFit f = fit_range(ser, 0, n);

  DimensionEstimate e;
  e.dim_raw = 2.0 - f.slope;
  e.dim = std::clamp(e.dim_raw, 0.0, 2.0);
  e.dim_stderr = f.slope_stderr;
  e.r2 = f.r2;
  e.poor_fit = f.r2 < kPoorFitR2;
  // halves split at the geometric median; an odd middle rung goes to both
  const std::size_t half = (n + 1) / 2;
  e.dim_lower = std::clamp(2.0 - fit_range(ser, 0, half).slope, 0.0, 2.0);
  e.dim_upper = std::clamp(2.0 - fit_range(ser, n - half, n).slope, 0.0, 2.0);

  double lo = INFINITY, hi = 0.0;
  for (const auto& s : sorted) {
    const double c = s.area / std::pow(s.eps, 2.0 - e.dim);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  e.content_lower = lo;
  e.content_upper = hi;
  e.ladder = std::move(sorted);
  return e;
}

DimensionEstimate fit_box_dimension_from_counts(
    std::span<const BoxCountSample> counts) {
  if (counts.size() < 5) throw DomainError("box-count fit: need >= 5 samples");
  std::vector<BoxCountSample> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.delta < b.delta; });
  Series ser;
  for (const auto& c : sorted) {
    if (!(c.delta > 0.0) || c.count < 1)
      throw DomainError("box-count fit: delta > 0 and count >= 1 required");
    ser.x.push_back(-std::log(c.delta));
    ser.y.push_back(std::log(double(c.count)));
    ser.w.push_back(1.0);
  }
  const std::size_t n = sorted.size();
  const LinearFit f = fit_range(ser, 0, n);
  DimensionEstimate e;
  e.dim_raw = f.slope;
  e.dim = std::clamp(f.slope, 0.0, 2.0);
  e.dim_stderr = f.slope_stderr;
  e.r2 = f.r2;
  e.poor_fit = f.r2 < kPoorFitR2;
  const std::size_t half = (n + 1) / 2;
  e.dim_lower = std::clamp(fit_range(ser, 0, half).slope, 0.0, 2.0);
  e.dim_upper = std::clamp(fit_range(ser, n - half, n).slope, 0.0, 2.0);
  e.counts = std::move(sorted);
  return e;
}

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Hyperbolic: return "Hyperbolic";
    case ScenarioKind::SaddleNodeCM: return "SaddleNodeCM";
    case ScenarioKind::PitchforkOrPDCM: return "PitchforkOrPDCM";
    case ScenarioKind::NSRational: return "NSRational";
    case ScenarioKind::NSIrrational: return "NSIrrational";
    case ScenarioKind::ContinuousHopfSpiral: return "ContinuousHopfSpiral";
    case ScenarioKind::Chenciner: return "Chenciner";
  }
  return "?";
}

std::string Scenario::str() const {
  switch (kind) {
    case ScenarioKind::PitchforkOrPDCM:
    case ScenarioKind::NSRational:
    case ScenarioKind::NSIrrational:
    case ScenarioKind::ContinuousHopfSpiral:
      return std::string(to_string(kind)) + "(" + std::to_string(order) + ")";
    default:
      return to_string(kind);
  }
}

TheoreticalDimension theoretical_dimension(const Scenario& s) {
  const Fraction one(1);
  TheoreticalDimension t{s, Fraction(0), std::nullopt};
  switch (s.kind) {
    case ScenarioKind::Hyperbolic:
      break;
    case ScenarioKind::SaddleNodeCM:
      t.value = Fraction(1, 2);
      break;
    case ScenarioKind::PitchforkOrPDCM:
      if (s.order < 2) throw DomainError("PitchforkOrPDCM needs k >= 2");
      t.value = one - Fraction(1, s.order);
      break;
    case ScenarioKind::NSRational:
    case ScenarioKind::NSIrrational: {
      if (s.order < 3 || s.order % 2 == 0)
        throw DomainError("NS scenario needs odd alpha >= 3");
      const Fraction lo = one - Fraction(1, s.order);
      const Fraction hi = Fraction(2) * lo;
      t.value = s.kind == ScenarioKind::NSRational ? lo : hi;
      t.bounds = std::make_pair(lo, hi);
      break;
    }
    case ScenarioKind::ContinuousHopfSpiral:
      if (s.order < 1) throw DomainError("Hopf spiral needs k >= 1");
      t.value = Fraction(2) * (one - Fraction(1, 2 * s.order + 1));
      break;
    case ScenarioKind::Chenciner:
      t.value = Fraction(8, 5);
      t.bounds = std::make_pair(Fraction(4, 5), Fraction(8, 5));
      break;
    default:
      throw DomainError("unknown scenario");
  }
  return t;
}

FiniteStability finite_stability_check(std::span<const DimensionEstimate> parts,
                                       const DimensionEstimate& whole,
                                       double tol) {
  if (parts.empty()) throw DomainError("finite_stability_check: no parts");
  FiniteStability r;
  r.max_dim = 0.0;
  for (const auto& p : parts) r.max_dim = std::max(r.max_dim, p.dim);
  r.union_dim = whole.dim;
  r.pass = std::fabs(whole.dim - r.max_dim) <= tol;
  return r;
}

}  // namespace spiraldim
