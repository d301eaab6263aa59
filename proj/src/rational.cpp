#include "spiraldim/rational.hpp"

#include <cmath>
#include <numeric>

#include "spiraldim/errors.hpp"

namespace spiraldim {

Fraction::Fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::string Fraction::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Fraction operator+(Fraction a, Fraction b) {
  return Fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Fraction operator-(Fraction a, Fraction b) {
  return Fraction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
Fraction operator*(Fraction a, Fraction b) {
  return Fraction(a.num_ * b.num_, a.den_ * b.den_);
}
Fraction operator/(Fraction a, Fraction b) {
  if (b.num_ == 0) throw DomainError("fraction division by zero");
  return Fraction(a.num_ * b.den_, a.den_ * b.num_);
}
bool operator<(Fraction a, Fraction b) {
  return a.num_ * b.den_ < b.num_ * a.den_;
}

Fraction parse_fraction(const std::string& s) {
  auto to_int = [&](const std::string& t) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (...) {
      throw DomainError("bad fraction '" + s + "'");
    }
    if (pos != t.size()) throw DomainError("bad fraction '" + s + "'");
    return std::int64_t(v);
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Fraction(to_int(s));
  return Fraction(to_int(s.substr(0, slash)), to_int(s.substr(slash + 1)));
}

std::vector<Fraction> convergents(double x, std::int64_t q_max) {
  if (!(x >= 0) || !std::isfinite(x)) throw DomainError("convergents: x < 0");
  std::vector<Fraction> out;
  // h_{-1}=1, h_{-2}=0; k_{-1}=0, k_{-2}=1
  std::int64_t h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  double rem = x;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(rem);
    if (fl > 9.0e15) break;
    const auto a = std::int64_t(fl);
    const std::int64_t h = a * h1 + h2, k = a * k1 + k2;
    if (k > q_max) break;
    out.emplace_back(h, k);
    h2 = h1; h1 = h;
    k2 = k1; k1 = k;
    const double frac = rem - fl;
    if (frac < 1e-300) break;
    rem = 1.0 / frac;
  }
  return out;
}

std::optional<Fraction> rational_approx(double x, std::int64_t q_max,
                                        double tol) {
  const double ax = std::fabs(x);
  for (const auto& c : convergents(ax, q_max)) {
    if (std::fabs(ax - c.value()) <= tol)
      return x < 0 ? Fraction(-c.num(), c.den()) : c;
  }
  return std::nullopt;
}

}  // namespace spiraldim
