#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "spiraldim/errors.hpp"
#include "spiraldim/fit.hpp"
#include "spiraldim/orbits.hpp"

using namespace spiraldim;
using std::numbers::pi;

namespace {

PolarNormalForm make(double a, int alpha, double b, double theta0) {
  NormalFormParams p;
  p.a = a;
  p.alpha = alpha;
  p.b = b;
  p.theta0 = theta0;
  return PolarNormalForm(p);
}

double ang_dist(double x, double y) {
  double d = std::fmod(std::fabs(x - y), 2 * pi);
  return std::min(d, 2 * pi - d);
}

}  // namespace

TEST_CASE("generate_spiral: rational spiral length and stop reason") {
  const auto m = make(-1, 3, 0, pi / 6);
  const auto s = generate_spiral(m, 0.5, 0.0, 5000000, 1e-3);
  CHECK(s.stop_reason == StopReason::RadiusFloor);
  // r_k ~ (2k)^(-1/2): 1/(2 r_floor^2) = 5e5
  const double expected = 1.0 / (2 * 1e-6);
  CHECK(double(s.size()) > expected / 2);
  CHECK(double(s.size()) < expected * 2);
  CHECK(s.points.back().r < 1e-3);
  CHECK(s.points[s.size() - 2].r >= 1e-3);
  CHECK(s.points[0].r == 0.5);
  CHECK(s.points[0].unreduced() == 0.0);

  // every 12th point on the initial ray
  for (std::size_t k = 12; k < 12000; k += 12)
    CHECK(ang_dist(s.points[k].phi, 0.0) < 1e-12);
}

TEST_CASE("generate_spiral: start just above the floor") {
  const auto m = make(-1, 3, 0, 1.0);
  const auto s = generate_spiral(m, 0.10001, 0.0, 100, 0.1);
  CHECK(s.size() <= 2);
  CHECK(s.stop_reason == StopReason::RadiusFloor);
}

TEST_CASE("generate_spiral: preconditions") {
  const auto m = make(-1, 3, 0, 1.0);
  CHECK_THROWS_AS(generate_spiral(m, 0.1, 0.0, 10, 0.2), DomainError);
  CHECK_THROWS_AS(generate_spiral(m, 0.1, 0.0, 10, 0.0), DomainError);
}

TEST_CASE("generate_spiral: max iterations and zero iterations") {
  const auto m = make(-1, 3, 0, 1.0);
  auto s = generate_spiral(m, 0.5, 0.2, 10, 1e-3);
  CHECK(s.size() == 11);
  CHECK(s.stop_reason == StopReason::MaxIterations);
  s = generate_spiral(m, 0.5, 0.2, 0, 1e-3);
  CHECK(s.size() == 1);
  CHECK(s.points[0].unreduced() == doctest::Approx(0.2));
}

TEST_CASE("generate_spiral: escape") {
  const auto m = make(1, 3, 0, 1.0);
  const auto s = generate_spiral(m, 0.5, 0.0, 1000, 1e-3, 10.0);
  CHECK(s.stop_reason == StopReason::Escape);
  CHECK(s.points.back().r > 10.0);
  for (const auto& p : s.points) CHECK(std::isfinite(p.r));
}

TEST_CASE("generate_spiral: stored sequence replays bit for bit") {
  const auto m = make(-1, 3, 1, 1.0);
  const auto s = generate_spiral(m, 0.5, 0.3, 20000, 1e-3);
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const auto q = eval(m, s.points[k]);
    REQUIRE(q.r == s.points[k + 1].r);
    REQUIRE(q.phi == s.points[k + 1].phi);
    REQUIRE(q.turns == s.points[k + 1].turns);
  }
}

TEST_CASE("generate_spiral: r strictly decreasing for a < 0") {
  const auto m = make(-1, 5, 1, 1.0);
  const auto s = generate_spiral(m, 0.5, 0.0, 100000, 1e-2);
  for (std::size_t k = 0; k + 1 < s.size(); ++k) REQUIRE(s.points[k + 1].r < s.points[k].r);
}

TEST_CASE("rational angle: exactly q distinct angles mod 2pi") {
  for (auto [p, q] : {std::pair{1, 12}, std::pair{2, 5}, std::pair{3, 7}}) {
    const double theta0 = 2 * pi * p / q;
    const auto m = make(-1, 3, 0, theta0);
    const auto s = generate_spiral(m, 0.5, 0.1, 200000, 1e-6);
    std::vector<double> ang;
    for (const auto& pt : s.points) ang.push_back(pt.phi);
    std::sort(ang.begin(), ang.end());
    // cluster with gap 1e-10, wrapping around 2pi
    int clusters = 1;
    for (std::size_t i = 1; i < ang.size(); ++i)
      if (ang[i] - ang[i - 1] > 1e-10) ++clusters;
    if (ang.front() + 2 * pi - ang.back() <= 1e-10) --clusters;
    CHECK(clusters == q);
  }
}

TEST_CASE("spiral_angle closed form") {
  HopfParams h;
  h.a = -1;
  h.b = 0;
  h.omega = 1;
  const ContinuousHopfSystem sys(h);
  const double r_start = 0.5;
  CHECK(spiral_angle(sys, 0.1, r_start) ==
        doctest::Approx(50 - 1 / (2 * r_start * r_start)).scale(0).epsilon(1e-14));
  // dPhi/dr = phidot / rdot
  h.b = 1.5;
  const ContinuousHopfSystem s2(h);
  const double r = 0.2, e = 1e-6;
  const double num = (spiral_angle(s2, r + e, 0.5) - spiral_angle(s2, r - e, 0.5)) / (2 * e);
  CHECK(num == doctest::Approx(s2.phidot(r) / s2.rdot(r)).scale(0).epsilon(1e-7));
}

TEST_CASE("sample_continuous_spiral") {
  HopfParams h;
  h.a = -1;
  h.b = 0;
  h.omega = 1;
  const ContinuousHopfSystem sys(h);

  SUBCASE("n = 2 without densification gives the endpoints") {
    const auto s = sample_continuous_spiral(sys, 0.5, 0.1, 2, INFINITY);
    REQUIRE(s.points.size() == 2);
    CHECK(s.points[0].r == 0.5);
    CHECK(s.points[1].r == doctest::Approx(0.1).scale(0).epsilon(1e-15));
    CHECK(s.points[1].unreduced() - s.points[0].unreduced() ==
          doctest::Approx(50 - 2).scale(0).epsilon(1e-12));
  }

  SUBCASE("densified: monotone, gaps bounded") {
    const auto s = sample_continuous_spiral(sys, 0.5, 0.02, 200);
    REQUIRE(s.points.size() > 200);
    for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
      REQUIRE(s.points[i + 1].r < s.points[i].r);
      const double d = s.points[i + 1].unreduced() - s.points[i].unreduced();
      REQUIRE(d > 0);
      REQUIRE(d <= pi / 64 * (1 + 1e-12));
    }
    CHECK(s.phi_end - s.phi_start ==
          doctest::Approx(s.points.back().unreduced() - s.points.front().unreduced()));
  }

  SUBCASE("r ~ phi^(-1/2)") {
    const auto s = sample_continuous_spiral(sys, 0.5, 1e-2, 2000);
    std::vector<double> x, y;
    for (const auto& p : s.points) {
      const double phi = p.unreduced() - s.phi_start + 1 / (2 * 0.25);  // Phi = 1/(2r^2)
      if (phi > 100) {
        x.push_back(std::log(phi));
        y.push_back(std::log(p.r));
      }
    }
    CHECK(std::fabs(linear_fit(x, y).slope + 0.5) <= 0.01);
  }

  SUBCASE("rejects a >= 0 and bad ranges") {
    h.a = 1;
    CHECK_THROWS_AS(sample_continuous_spiral(ContinuousHopfSystem(h), 0.5, 0.1, 10),
                    DomainError);
    CHECK_THROWS_AS(sample_continuous_spiral(sys, 0.1, 0.5, 10), DomainError);
  }
}

TEST_CASE("radial_decay_exponent") {
  SUBCASE("alpha = 3") {
    const auto s = generate_spiral(make(-1, 3, 0, 1.0), 0.5, 0, 200000, 1e-4);
    const auto d = radial_decay_exponent(s);
    CHECK(std::fabs(d.gamma - 0.5) <= 0.03);
    CHECK(d.power_law);
    // invariant under dropping the first half
    DiscreteSpiral half = s;
    half.points.erase(half.points.begin(), half.points.begin() + s.size() / 2);
    half.first_index = std::int64_t(s.size() / 2);
    CHECK(std::fabs(radial_decay_exponent(half).gamma - d.gamma) < 0.01);
  }
  SUBCASE("alpha = 5") {
    const auto s = generate_spiral(make(-1, 5, 0, 1.0), 0.5, 0, 200000, 1e-4);
    CHECK(std::fabs(radial_decay_exponent(s).gamma - 0.25) <= 0.03);
  }
  SUBCASE("geometric decay is flagged") {
    DiscreteSpiral s;
    double r = 1.0;
    for (int k = 0; k < 2000; ++k, r *= 0.7) s.points.push_back({std::max(r, 1e-300), 0, 0});
    s.points.resize(1500);
    const auto d = radial_decay_exponent(s);
    CHECK_FALSE(d.power_law);
  }
  SUBCASE("too short") {
    const auto s = generate_spiral(make(-1, 3, 0, 1.0), 0.5, 0, 500, 1e-4);
    CHECK_THROWS_AS(radial_decay_exponent(s), DomainError);
  }
}
