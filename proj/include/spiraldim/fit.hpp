#pragma once

#include <cstddef>
#include <span>

namespace spiraldim {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double r2 = 1.0;
  std::size_t n = 0;
};

// Ordinary least squares y ~ intercept + slope * x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Weighted least squares; w are relative weights (>= 0). Standard errors are
// residual based, so they do not depend on the overall scale of w.
LinearFit weighted_linear_fit(std::span<const double> x,
                              std::span<const double> y,
                              std::span<const double> w);

}  // namespace spiraldim
