#include "spiraldim/fit.hpp"

#include <cmath>
#include <vector>

#include "spiraldim/errors.hpp"

namespace spiraldim {

LinearFit weighted_linear_fit(std::span<const double> x,
                              std::span<const double> y,
                              std::span<const double> w) {
  const std::size_t n = x.size();
  if (y.size() != n || w.size() != n)
    throw DomainError("fit: size mismatch");
  if (n < 2) throw DomainError("fit: need at least two points");

  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w[i] >= 0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw DomainError("fit: non-finite input or negative weight");
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  if (!(sw > 0)) throw DomainError("fit: all weights zero");
  const double mx = sx / sw, my = sy / sw;

  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * dy;
    syy += w[i] * dy * dy;
  }
  // relative spread guard; a ladder with identical x is useless
  if (!(sxx > 1e-24 * (1.0 + mx * mx) * sw))
    throw DomainError("fit: degenerate abscissa (zero spread)");

  LinearFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;

  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += w[i] * r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
  if (n > 2) {
    // effective-sample normalisation so the stderr is scale free in w
    const double s2 = ssr / sw * double(n) / double(n - 2);
    const double sxx_n = sxx / sw * double(n);
    f.slope_stderr = std::sqrt(s2 / sxx_n);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / double(n) + mx * mx / sxx_n));
  }
  return f;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> w(x.size(), 1.0);
  return weighted_linear_fit(x, y, w);
}

}  // namespace spiraldim
