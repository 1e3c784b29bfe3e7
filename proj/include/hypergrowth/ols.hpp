#ifndef HYPERGROWTH_OLS_HPP
#define HYPERGROWTH_OLS_HPP

#include <cstddef>
#include <span>

#include <fmt/format.h>

#include "hypergrowth/error.hpp"

namespace hypergrowth {

/// Straight line y = intercept + slope * x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;  // sum of squared residuals
  double tss = 0.0;  // total sum of squares about the mean of y

  double operator()(double x) const noexcept { return intercept + slope * x; }
};

/**
 * Closed-form unweighted least-squares line through (x[i], y[i]).
 *
 * Uses the centred normal equations: slope = Sxy / Sxx with sums taken about
 * the means, which keeps calendar years near 2000 from swamping the
 * reciprocal values in the cross products. Two points give exact
 * interpolation. Throws a numerical error when all x coincide.
 */
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw validation_error("fit_line: x and y lengths differ");
  if (n < 2) throw validation_error(fmt::format("fit_line: need 2 points, got {}", n));

  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_mean += x[i];
    y_mean += y[i];
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - x_mean;
    const double dy = y[i] - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw numerical_error("singular design: all abscissae identical");

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  fit.tss = syy;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit(x[i]);
    fit.rss += r * r;
  }
  return fit;
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_OLS_HPP
