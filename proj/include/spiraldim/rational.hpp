#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spiraldim {

// Small exact fraction, always normalised (den > 0, gcd = 1).
class Fraction {
 public:
  Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return double(num_) / double(den_); }
  std::string str() const;  // "2/3", "0", "-1/6"

  friend Fraction operator+(Fraction a, Fraction b);
  friend Fraction operator-(Fraction a, Fraction b);
  friend Fraction operator*(Fraction a, Fraction b);
  friend Fraction operator/(Fraction a, Fraction b);
  friend bool operator==(Fraction a, Fraction b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(Fraction a, Fraction b);
  friend bool operator<=(Fraction a, Fraction b) { return !(b < a); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Parses "p/q", "p", or a decimal-free integer ratio. Throws DomainError.
Fraction parse_fraction(const std::string& s);

// Convergents p_n/q_n of x (x >= 0) with q_n <= q_max.
std::vector<Fraction> convergents(double x, std::int64_t q_max);

// First convergent with |x - p/q| <= tol and q <= q_max, if any.
std::optional<Fraction> rational_approx(double x, std::int64_t q_max,
                                        double tol);

}  // namespace spiraldim
