#ifndef HYPERGROWTH_HYPERMODEL_HPP
#define HYPERGROWTH_HYPERMODEL_HPP

// Hyperbolic growth S(t) = 1 / (a - k t) and its reciprocal-space fit.
//
// The reciprocal of a hyperbola is the straight line 1/S = a - k t, so the
// fit is ordinary least squares on (t, 1/S). No weighting is applied: early,
// small values have large reciprocals and dominate the criterion.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "hypergrowth/error.hpp"
#include "hypergrowth/ols.hpp"
#include "hypergrowth/time_series.hpp"

namespace hypergrowth {

/// Relative distance from the pole below which evaluation is refused.
inline constexpr double kPoleGuard = 1e-12;

struct HyperbolicFit {
  double a = 0.0;  // 1/S at t = 0
  double k = 0.0;  // decline rate of 1/S per year; > 0 means growth
  Window window;   // first and last fitted year
  double rss_reciprocal = 0.0;
  std::optional<double> r2_reciprocal;  // empty when the reciprocals are constant
  std::size_t n = 0;

  bool is_growth() const noexcept { return k > 0.0; }

  /// Fitted reciprocal a - k t. Defined everywhere, including past the pole.
  double reciprocal_at(double t) const noexcept { return a - k * t; }

  friend bool operator==(const HyperbolicFit&, const HyperbolicFit&) = default;
};

struct Residual {
  double year = 0.0;
  double value = 0.0;

  friend bool operator==(const Residual&, const Residual&) = default;
};

struct Goodness {
  double rss_reciprocal = 0.0;
  std::optional<double> r2_reciprocal;
  std::vector<Residual> residuals;  // observed 1/S minus fitted line, by year
};

/// Same years, values replaced by 1/value.
inline TimeSeries reciprocal(const TimeSeries& series) {
  std::vector<Point> out;
  out.reserve(series.size());
  for (const auto& p : series.points()) {
    if (!(p.value > 0.0)) {
      throw numerical_error(fmt::format("reciprocal of non-positive value at {}", p.year));
    }
    out.push_back({p.year, 1.0 / p.value});
  }
  return TimeSeries(series.region(), std::move(out));
}

namespace detail {

inline std::optional<double> r_squared(double rss, double tss) {
  if (!(tss > 0.0)) return std::nullopt;
  return std::clamp(1.0 - rss / tss, 0.0, 1.0);
}

}  // namespace detail

/**
 * Fit 1/S = a - k t to the points of `series` inside `window`.
 *
 * Minimises sum (1/S_i - (a - k t_i))^2 in closed form. Deterministic: the
 * same input always yields bit-identical parameters.
 */
inline HyperbolicFit fit_hyperbolic(const TimeSeries& series, Window window) {
  const auto selected = select_range(series, window);
  const auto years = selected.years();
  std::vector<double> recip;
  recip.reserve(selected.size());
  for (const auto& p : selected.points()) recip.push_back(1.0 / p.value);

  const auto line = fit_line(years, recip);

  HyperbolicFit fit;
  fit.a = line.intercept;
  fit.k = -line.slope;
  fit.window = selected.span();
  fit.rss_reciprocal = line.rss;
  fit.r2_reciprocal = detail::r_squared(line.rss, line.tss);
  fit.n = selected.size();
  return fit;
}

/// Singularity year t_s = a / k. Throws when k <= 0 (no finite-time pole).
inline double singularity_time(const HyperbolicFit& fit) {
  if (!(fit.k > 0.0)) {
    throw numerical_error(fmt::format("no singularity: k = {} is not positive", fit.k));
  }
  return fit.a / fit.k;
}

inline double singularity_time(double a, double k) {
  HyperbolicFit fit;
  fit.a = a;
  fit.k = k;
  return singularity_time(fit);
}

/// S(t) = 1 / (a - k t). Throws within kPoleGuard * |a| of the pole.
inline double eval_model(const HyperbolicFit& fit, double t) {
  const double denom = fit.reciprocal_at(t);
  if (std::abs(denom) < kPoleGuard * std::abs(fit.a) || denom == 0.0) {
    throw numerical_error(fmt::format("model evaluated at its singularity (t = {})", t));
  }
  return 1.0 / denom;
}

/// Reciprocal-space residuals and fit statistics of `fit` over `window`.
inline Goodness goodness(const TimeSeries& series, const HyperbolicFit& fit, Window window) {
  const auto selected = select_range(series, window);
  Goodness out;
  double mean = 0.0;
  for (const auto& p : selected.points()) mean += 1.0 / p.value;
  mean /= static_cast<double>(selected.size());

  double tss = 0.0;
  for (const auto& p : selected.points()) {
    const double observed = 1.0 / p.value;
    const double r = observed - fit.reciprocal_at(p.year);
    out.residuals.push_back({p.year, r});
    out.rss_reciprocal += r * r;
    tss += (observed - mean) * (observed - mean);
  }
  out.r2_reciprocal = detail::r_squared(out.rss_reciprocal, tss);
  return out;
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_HYPERMODEL_HPP
