#include "spiraldim/classification.hpp"

#include <cmath>
#include <complex>

#include "spiraldim/errors.hpp"

namespace spiraldim {

namespace {

RotationAnalysis from_fraction(double theta0, Fraction beta, std::int64_t q_max,
                               double tol) {
  RotationAnalysis r;
  r.theta0 = theta0;
  r.beta = beta.value();
  r.q_max = q_max;
  r.tol = tol;
  r.exact = true;
  if (beta.den() <= q_max) {
    r.kind = RotationKind::Rational;
    r.p = beta.num();
    r.q = beta.den();
  }
  r.nonresonant = nonresonance_check(theta0, tol);
  return r;
}

}  // namespace

RotationAnalysis rotation_rationality(double theta0, std::int64_t q_max,
                                      double tol) {
  if (q_max < 2) throw DomainError("rotation_rationality: q_max must be >= 2");
  if (!(tol > 0.0)) throw DomainError("rotation_rationality: tol must be positive");
  RotationAnalysis r;
  r.theta0 = theta0;
  r.beta = theta0 / kTwoPi;
  r.q_max = q_max;
  r.tol = tol;
  if (auto f = rational_approx(r.beta, q_max, tol)) {
    r.kind = RotationKind::Rational;
    r.p = f->num();
    r.q = f->den();
  }
  r.nonresonant = nonresonance_check(theta0, tol);
  return r;
}

RotationAnalysis rotation_rationality(const PolarNormalForm& m,
                                      std::int64_t q_max, double tol) {
  if (const auto& ex = m.params().theta0_over_pi)
    return from_fraction(m.theta0(), *ex / Fraction(2), q_max, tol);
  return rotation_rationality(m.theta0(), q_max, tol);
}

bool nonresonance_check(double theta0, double tol) {
  if (!(tol > 0.0)) throw DomainError("nonresonance_check: tol must be positive");
  double m = INFINITY;
  for (int n = 1; n <= 4; ++n)
    m = std::min(m, std::abs(std::polar(1.0, n * theta0) - 1.0));
  return m > tol;
}

double Tolerances::for_scenario(const Scenario& s) const {
  switch (s.kind) {
    case ScenarioKind::Hyperbolic: return hyperbolic;
    case ScenarioKind::SaddleNodeCM:
    case ScenarioKind::PitchforkOrPDCM: return center_manifold;
    case ScenarioKind::NSRational: return ns_rational;
    case ScenarioKind::NSIrrational: return ns_irrational;
    case ScenarioKind::ContinuousHopfSpiral: return hopf_spiral;
    case ScenarioKind::Chenciner: return chenciner;
  }
  return ns_irrational;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::Refused: return "Refused";
    case Verdict::NotEvaluated: return "NotEvaluated";
  }
  return "?";
}

namespace {

void judge(ClassificationReport& r, const std::optional<DimensionEstimate>& est,
           const Tolerances& tol) {
  r.tolerance = tol.for_scenario(r.predicted.scenario);
  if (!est) return;
  r.estimate = est->dim;
  bool ok = std::fabs(est->dim - r.predicted.value.value()) <= r.tolerance;
  if (r.predicted.bounds) {
    const double lo = r.predicted.bounds->first.value() - tol.envelope;
    const double hi = r.predicted.bounds->second.value() + tol.envelope;
    r.within_envelope = est->dim >= lo && est->dim <= hi;
    ok = ok && *r.within_envelope;
  }
  if (r.verdict != Verdict::Inconclusive) r.verdict = ok ? Verdict::Pass : Verdict::Fail;
}

ClassificationReport classify_polar(double a, int alpha, double radial_shift,
                                    const RotationAnalysis& rot,
                                    const std::optional<DimensionEstimate>& est,
                                    const std::optional<Regime>& regime,
                                    const Tolerances& tol) {
  ClassificationReport r;
  r.rotation = rot;
  r.regime = regime;
  if (!rot.nonresonant)
    throw RefusedError(
        "resonant rotation angle: exp(i n theta0) = 1 for some n <= 4, so the "
        "polar normal form does not apply");
  if (radial_shift != 0.0) {
    // |1 + d mu| != 1: the origin is hyperbolic
    r.predicted = theoretical_dimension({ScenarioKind::Hyperbolic, 0});
    r.explanation = "d*mu != 0: radial multiplier off the unit circle";
    judge(r, est, tol);
    return r;
  }
  if (a == 0.0)
    throw RefusedError("degenerate radial part (a = 0): no nondegenerate analysis");

  const bool rational = rot.kind == RotationKind::Rational;
  Scenario s;
  if (rational) s = {ScenarioKind::NSRational, alpha};
  else if (alpha == 5) s = {ScenarioKind::Chenciner, 5};
  else s = {ScenarioKind::NSIrrational, alpha};
  r.predicted = theoretical_dimension(s);
  r.explanation = rational
      ? "rotation number " + std::to_string(rot.p) + "/" + std::to_string(rot.q) +
            " within tolerance"
      : "no rational rotation number with denominator <= " +
            std::to_string(rot.q_max);
  if (a > 0.0) r.explanation += "; a > 0 analysed through the leading-order inverse";
  // A rational angle must order z_k < y_k eventually. The converse does not
  // hold: irrational angles away from zero also order z_k < y_k at small r.
  if (rational && regime && *regime == Regime::IrrationalLike) {
    r.verdict = Verdict::Inconclusive;
    r.explanation += "; overlap ordering looks irrational (y_k < z_k) although the "
                     "angle is rational within tolerance";
  }
  if (!rational && regime && *regime == Regime::Mixed)
    r.explanation += "; ordering is mixed, consider the q-th root map reduction";
  judge(r, est, tol);
  return r;
}

}  // namespace

ClassificationReport classify(const PolarNormalForm& m,
                              const std::optional<DimensionEstimate>& est,
                              const std::optional<Regime>& regime,
                              const Tolerances& tol) {
  const auto& p = m.params();
  return classify_polar(p.a, p.alpha, p.d * p.mu, rotation_rationality(m), est,
                        regime, tol);
}

ClassificationReport classify(const ContinuousHopfSystem& sys,
                              const std::optional<DimensionEstimate>& est,
                              const std::optional<Regime>& regime,
                              const Tolerances& tol) {
  const auto& p = sys.params();
  const double theta0 = p.omega + p.c * p.mu;
  auto r = classify_polar(p.a, 2 * p.k + 1, p.d * p.mu,
                          rotation_rationality(theta0), est, regime, tol);
  r.explanation += "; unit-time map of the flow";
  return r;
}

ClassificationReport classify_continuous_spiral(
    const ContinuousHopfSystem& sys, const std::optional<DimensionEstimate>& est,
    const Tolerances& tol) {
  const auto& p = sys.params();
  if (p.a == 0.0) throw RefusedError("degenerate flow (a = 0): no spiral trajectory");
  ClassificationReport r;
  r.predicted = theoretical_dimension({ScenarioKind::ContinuousHopfSpiral, p.k});
  r.explanation = "spiral trajectory of a weak focus of order " + std::to_string(p.k);
  judge(r, est, tol);
  return r;
}

ClassificationReport classify(const CenterManifoldReport& cm,
                              const std::optional<DimensionEstimate>& est,
                              const Tolerances& tol) {
  if (!cm.nondegeneracy_order)
    throw RefusedError("order of nondegeneracy undetermined up to cubic terms");
  const int k = *cm.nondegeneracy_order;
  ClassificationReport r;
  r.predicted = theoretical_dimension(
      k == 2 ? Scenario{ScenarioKind::SaddleNodeCM, 2}
             : Scenario{ScenarioKind::PitchforkOrPDCM, k});
  r.explanation = "restriction to the center manifold is " + std::to_string(k) +
                  "-nondegenerate";
  if (cm.c_overridden) r.explanation += "; denominator constant c overridden";
  judge(r, est, tol);
  return r;
}

ClassificationReport classify_hyperbolic(const std::optional<DimensionEstimate>& est,
                                         const Tolerances& tol) {
  ClassificationReport r;
  r.predicted = theoretical_dimension({ScenarioKind::Hyperbolic, 0});
  r.explanation = "no multiplier on the unit circle";
  r.tolerance = tol.hyperbolic;
  if (est) {
    r.estimate = est->dim;
    r.verdict = est->dim < tol.hyperbolic ? Verdict::Pass : Verdict::Fail;
  }
  return r;
}

}  // namespace spiraldim
