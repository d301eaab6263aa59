#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spiraldim/errors.hpp"
#include "spiraldim/fit.hpp"
#include "spiraldim/neighborhood.hpp"
#include "spiraldim/overlaps.hpp"

using namespace spiraldim;
using std::numbers::pi;

namespace {

PolarNormalForm make(double a, int alpha, double b, double theta0,
                     std::optional<Fraction> exact = {}) {
  NormalFormParams p;
  p.a = a;
  p.alpha = alpha;
  p.b = b;
  p.theta0 = theta0;
  p.theta0_over_pi = exact;
  return PolarNormalForm(p);
}

// Shared long spirals; generated once.
const DiscreteSpiral& rational_spiral() {
  static const auto s = generate_spiral(make(-1, 3, 0, pi / 6), 0.5, 0.0, 5000000, 1e-3);
  return s;
}

}  // namespace

TEST_CASE("q0_of") {
  CHECK(q0_of(pi / 6) == 12);
  CHECK(q0_of(2 * pi / 5) == 5);
  CHECK(q0_of(1.0) == 7);
  CHECK(q0_of(-1.0) == 7);
  CHECK(q0_of(2 * pi * 3 / 7) == 7);  // p > 1: q0 theta0 = 2 pi p
  CHECK(q0_of(0.1) == 63);
  CHECK_THROWS_AS(q0_of(0.0), DomainError);
  CHECK(q0_of(make(-1, 3, 0, pi / 6, Fraction(1, 6))) == 12);
  CHECK(q0_of(make(-1, 3, 0, 2 * pi / 3, Fraction(2, 3))) == 3);
  CHECK(q0_of(make(-1, 3, 0, 1.0)) == 7);
}

TEST_CASE("polar_distance") {
  const PolarPoint a{1.0, 0.0, 0}, b{1.0, pi / 2, 0};
  CHECK(polar_distance(a, b) == doctest::Approx(std::sqrt(2.0)));
  CHECK(polar_distance(a, a) == 0.0);
  const PolarPoint c{0.5, 0.3, 0}, d{0.2, 0.3, 5};
  CHECK(polar_distance(c, d) == doctest::Approx(0.3).scale(0).epsilon(1e-14));
  // synthetic equal radii: isosceles chord
  const double th = 0.7;
  CHECK(polar_distance({0.4, 0.1, 0}, {0.4, 0.1 + th, 0}) ==
        doctest::Approx(2 * 0.4 * std::sin(th / 2)).scale(0).epsilon(1e-14));
}

TEST_CASE("overlap_sequences: rational collapse z_k = r_k - r_{k+12}") {
  const auto& s = rational_spiral();
  const auto a = overlap_sequences(s, 12);
  REQUIRE(a.z.size() == s.size() - 12);
  // drift of the exact ray alignment is ~1e-16 per turn, keep to early k
  for (std::size_t k = 0; k < 10000; ++k) {
    const double expect = s.points[k].r - s.points[k + 12].r;
    REQUIRE(std::fabs(a.z[k] - expect) <= 1e-12 * expect);
  }
  for (std::size_t k = 0; k < a.y.size(); k += 997) {
    CHECK(a.y[k] >= 0);
    CHECK(a.z[k] >= 0);
    CHECK(a.w[k] >= 0);
    // triangle inequality (A_k, A_{k+1}, A_{k+q0})
    CHECK(std::fabs(a.y[k] - a.w[k]) <= a.z[k] * (1 + 1e-9) + 1e-15);
    CHECK(a.z[k] <= (a.y[k] + a.w[k]) * (1 + 1e-9));
  }
  // tail window strictly decreasing
  for (std::size_t k = a.y.size() / 2; k + 1 < a.y.size(); ++k) {
    REQUIRE(a.y[k + 1] < a.y[k]);
    REQUIRE(a.z[k + 1] < a.z[k]);
    REQUIRE(a.w[k + 1] < a.w[k]);
  }
  const auto ex = overlap_exponents(a);
  CHECK(std::fabs(ex.z.slope + 1.5) <= 0.05);
  CHECK(std::fabs(ex.y.slope + 0.5) <= 0.05);
  CHECK(std::fabs(ex.w.slope + 0.5) <= 0.05);
}

TEST_CASE("overlap_sequences: too short") {
  const auto s = generate_spiral(make(-1, 3, 0, pi / 6), 0.5, 0.0, 20, 1e-3);
  CHECK_THROWS_AS(overlap_sequences(s, 12), DomainError);
}

TEST_CASE("overlap exponents with b = 1 and coefficient") {
  const auto m = make(-1, 3, 1, pi / 6, Fraction(1, 6));
  const auto s = generate_spiral(m, 0.5, 0.0, 5000000, 1e-3);
  const auto a = overlap_sequences(s, 12);
  const auto ex = overlap_exponents(a);
  CHECK(std::fabs(ex.z.slope + 1.5) <= 0.05);
  CHECK(std::fabs(ex.y.slope + 0.5) <= 0.05);
  CHECK(std::fabs(ex.w.slope + 0.5) <= 0.05);
  // z ~ q0 sqrt(a^2+b^2) r^3 with r ~ (2|a|k)^(-1/2)
  CHECK(predicted_z_coefficient(m, 12) == doctest::Approx(6.0).scale(0).epsilon(1e-14));
  const double k = double(a.z.size() - 1);
  const double c_emp = a.z.back() * std::pow(k, 1.5);
  CHECK(c_emp == doctest::Approx(6.0).scale(0).epsilon(0.15));
}

TEST_CASE("overlap exponents alpha = 5") {
  const auto s = generate_spiral(make(-1, 5, 0, pi / 6), 0.5, 0.0, 2000000, 0.03);
  const auto ex = overlap_exponents(overlap_sequences(s, 12));
  CHECK(std::fabs(ex.z.slope + 1.25) <= 0.05);
}

TEST_CASE("first_overlap_index") {
  const double eps = 0.1;
  std::vector<double> seq{5 * eps, 4 * eps, 3 * eps, 2 * eps, 1 * eps};
  CHECK(first_overlap_index(seq, eps) == 4);
  std::vector<double> big{5, 4, 3};
  CHECK_FALSE(first_overlap_index(big, 1.0));
}

TEST_CASE("m1(eps) scaling and agreement with overlap_count_tail") {
  const auto& s = rational_spiral();
  const auto a = overlap_sequences(s, 12);
  const auto pts = planar_set(s, false).points;
  for (double e : geometric_ladder(1e-3, 1e-2, 7)) {
    const auto m = first_overlap_index(a.z, e);
    REQUIRE(m);
    const double tail = double(overlap_count_tail(pts, e));
    CHECK(tail / double(*m) <= 2.0);
    CHECK(tail / double(*m) >= 0.5);
  }
  // the slope needs m1 >> 1/r0^2; at eps ~ 1e-2 the start radius still shows
  std::vector<double> x, y;
  for (double e : geometric_ladder(1e-6, 1e-4, 9)) {
    const auto m = first_overlap_index(a.z, e);
    REQUIRE(m);
    x.push_back(std::log(e));
    y.push_back(std::log(double(*m)));
  }
  CHECK(std::fabs(linear_fit(x, y).slope + 2.0 / 3.0) <= 0.05);
}

TEST_CASE("ordering_regime") {
  OverlapAnalysis syn;
  syn.y.assign(100, 1.0);
  syn.z.assign(100, 2.0);
  syn.w.assign(100, 1.0);
  auto r = ordering_regime(syn);
  CHECK(r.regime == Regime::IrrationalLike);
  REQUIRE(r.K0);
  CHECK(*r.K0 == 0);
  std::swap(syn.y, syn.z);
  CHECK(ordering_regime(syn).regime == Regime::RationalLike);
  // flips inside the window
  for (std::size_t k = 0; k < 100; ++k) syn.z[k] = (k % 2) ? 1.5 : 2.5;
  CHECK(ordering_regime(syn, 10).regime == Regime::Mixed);
  CHECK_THROWS(ordering_regime(syn, 60));

  const auto& s = rational_spiral();
  r = ordering_regime(overlap_sequences(s, 12));
  CHECK(r.regime == Regime::RationalLike);
  REQUIRE(r.K0);
  const auto a = overlap_sequences(s, 12);
  for (std::size_t k = std::size_t(*r.K0); k < a.y.size(); k += 101) CHECK(a.z[k] < a.y[k]);
}

TEST_CASE("root_map") {
  const auto m = make(-1, 3, 1, 1.0);
  auto r = root_map(m, 1);
  CHECK(r.a() == m.a());
  CHECK(r.b() == m.b());
  CHECK(r.theta0() == m.theta0());
  r = root_map(m, 7);
  CHECK(r.a() == doctest::Approx(-1.0 / 7));
  CHECK(r.b() == doctest::Approx(1.0 / 7));
  CHECK(r.theta0() == doctest::Approx(1.0 / 7));
  const PolarPoint p{1e-3, 0.2, 0};
  const auto a = iterate_k(r, p, 7), b = eval(m, p);
  CHECK(std::fabs(a.r - b.r) < 1e-11);
  CHECK(std::fabs(a.unreduced() - b.unreduced()) < 1e-11);
  CHECK_THROWS(root_map(m, 0));
}
