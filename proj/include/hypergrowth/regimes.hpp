#ifndef HYPERGROWTH_REGIMES_HPP
#define HYPERGROWTH_REGIMES_HPP

// Two-regime structure of a growth trajectory: the slow/fast breakpoint,
// intervals of outright decline, and the year from which observations bend
// away from an extrapolated hyperbola.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "hypergrowth/error.hpp"
#include "hypergrowth/hypermodel.hpp"
#include "hypergrowth/time_series.hpp"

namespace hypergrowth {

// ---------------------------------------------------------------------------
// Breakpoint search
// ---------------------------------------------------------------------------

struct SplitScore {
  double break_year = 0.0;
  double combined_rss = 0.0;

  friend bool operator==(const SplitScore&, const SplitScore&) = default;
};

struct SegmentationResult {
  double break_year = 0.0;
  HyperbolicFit slow_fit;
  HyperbolicFit fast_fit;
  std::optional<Window> gap;  // years excluded between the two fits
  double combined_rss = 0.0;
  double single_fit_rss = 0.0;  // one line through every point considered
  bool improves_on_single_fit = false;
  std::vector<SplitScore> scores;  // every evaluated candidate, by year

  friend bool operator==(const SegmentationResult&, const SegmentationResult&) = default;
};

namespace detail {

inline double reciprocal_tss(const TimeSeries& series) {
  double mean = 0.0;
  for (const auto& p : series.points()) mean += 1.0 / p.value;
  mean /= static_cast<double>(series.size());
  double tss = 0.0;
  for (const auto& p : series.points()) {
    const double d = 1.0 / p.value - mean;
    tss += d * d;
  }
  return tss;
}

}  // namespace detail

/// Two combined rss values closer than this are a tie (earliest year wins).
inline double breakpoint_tie_tolerance(const TimeSeries& series) {
  return 1e-12 * detail::reciprocal_tss(series);
}

/**
 * Exhaustive two-segment search over candidate break years.
 *
 * A candidate c splits the series into years < c (slow side) and years >= c
 * (fast side); each side is fitted with fit_hyperbolic and the split with the
 * smallest combined reciprocal rss wins. Ties within breakpoint_tie_tolerance
 * go to the earliest candidate. An empty candidate list means every data year.
 */
inline SegmentationResult find_breakpoint(const TimeSeries& series,
                                          std::vector<double> candidate_years,
                                          std::size_t min_points_per_side) {
  if (min_points_per_side < 2) {
    throw validation_error("min_points_per_side must be at least 2");
  }
  if (series.size() < 2 * min_points_per_side) {
    throw validation_error(fmt::format("series has {} points, need {} for two segments",
                                       series.size(), 2 * min_points_per_side));
  }
  const auto years = series.years();
  if (candidate_years.empty()) candidate_years = years;
  std::sort(candidate_years.begin(), candidate_years.end());
  candidate_years.erase(std::unique(candidate_years.begin(), candidate_years.end()),
                        candidate_years.end());

  const auto pts = series.points();
  const double tol = breakpoint_tie_tolerance(series);

  SegmentationResult best;
  bool found = false;
  for (const double c : candidate_years) {
    const auto it = std::lower_bound(years.begin(), years.end(), c);
    if (it == years.end() || *it != c) {
      throw validation_error(fmt::format("candidate break {} is not a data year", c));
    }
    const auto split = static_cast<std::size_t>(it - years.begin());
    if (split < min_points_per_side || pts.size() - split < min_points_per_side) continue;

    const TimeSeries left(series.region(), {pts.begin(), pts.begin() + split});
    const TimeSeries right(series.region(), {pts.begin() + split, pts.end()});
    const auto slow = fit_hyperbolic(left, left.span());
    const auto fast = fit_hyperbolic(right, right.span());
    const double combined = slow.rss_reciprocal + fast.rss_reciprocal;
    best.scores.push_back({c, combined});

    if (!found || combined < best.combined_rss - tol) {
      best.break_year = c;
      best.slow_fit = slow;
      best.fast_fit = fast;
      best.combined_rss = combined;
      found = true;
    }
  }
  if (!found) {
    throw validation_error(fmt::format(
        "no candidate leaves {} points on each side", min_points_per_side));
  }

  best.single_fit_rss = fit_hyperbolic(series, series.span()).rss_reciprocal;
  best.improves_on_single_fit = best.combined_rss < best.single_fit_rss - tol;
  return best;
}

/// Segmentation with both fit windows fixed by the caller. The break year is
/// the start of the fast window; any years strictly between are the gap.
inline SegmentationResult segment_by_windows(const TimeSeries& series, Window slow_window,
                                             Window fast_window) {
  if (!(slow_window.end <= fast_window.start)) {
    throw validation_error("slow window must end at or before the fast window starts");
  }
  SegmentationResult out;
  out.slow_fit = fit_hyperbolic(series, slow_window);
  out.fast_fit = fit_hyperbolic(series, fast_window);
  out.break_year = fast_window.start;
  out.combined_rss = out.slow_fit.rss_reciprocal + out.fast_fit.rss_reciprocal;
  if (slow_window.end < fast_window.start) out.gap = Window{slow_window.end, fast_window.start};
  const auto all = select_range(series, slow_window.start, fast_window.end);
  out.single_fit_rss = fit_hyperbolic(all, all.span()).rss_reciprocal;
  out.improves_on_single_fit =
      out.combined_rss < out.single_fit_rss - breakpoint_tie_tolerance(all);
  out.scores.push_back({out.break_year, out.combined_rss});
  return out;
}

// ---------------------------------------------------------------------------
// Declines
// ---------------------------------------------------------------------------

struct DeclineInterval {
  double start_year = 0.0;
  double end_year = 0.0;
  double start_value = 0.0;
  double end_value = 0.0;

  friend bool operator==(const DeclineInterval&, const DeclineInterval&) = default;
};

/// Maximal runs of consecutive strictly decreasing values.
inline std::vector<DeclineInterval> detect_decline(const TimeSeries& series) {
  std::vector<DeclineInterval> out;
  const auto pts = series.points();
  std::size_t i = 0;
  while (i + 1 < pts.size()) {
    if (!(pts[i + 1].value < pts[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j + 1 < pts.size() && pts[j + 1].value < pts[j].value) ++j;
    out.push_back({pts[i].year, pts[j].year, pts[i].value, pts[j].value});
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divergence from an extrapolated hyperbola
// ---------------------------------------------------------------------------

enum class Direction {
  above_line,  // observed 1/S above the line: growth slower than the hyperbola
  below_line,  // observed 1/S below the line: growth faster
};

inline const char* to_string(Direction d) noexcept {
  return d == Direction::above_line ? "above-line" : "below-line";
}

struct DivergenceOptions {
  double scan_from = 1870.0;
  std::size_t persistence = 5;
  double min_rel_residual = 0.02;

  friend bool operator==(const DivergenceOptions&, const DivergenceOptions&) = default;
};

/**
 * Outcome of scanning observations against an extrapolated fit.
 *
 * `onset_year` is empty when no qualifying run exists; `direction` and
 * `run_length` are meaningful only when it is set. `residuals` holds every
 * scanned point (year >= scan_from) up to the pole.
 */
struct DivergenceReport {
  DivergenceOptions options;
  std::optional<double> onset_year;
  std::optional<Direction> direction;
  std::size_t run_length = 0;
  std::vector<Residual> residuals;
  bool truncated_at_pole = false;

  bool detected() const noexcept { return onset_year.has_value(); }

  friend bool operator==(const DivergenceReport&, const DivergenceReport&) = default;
};

inline DivergenceReport detect_divergence(const TimeSeries& series, const HyperbolicFit& fit,
                                          const DivergenceOptions& options) {
  if (options.persistence < 2) throw validation_error("persistence must be at least 2");
  if (!(options.min_rel_residual >= 0.0)) {
    throw validation_error("min_rel_residual must be non-negative");
  }
  if (options.scan_from < fit.window.end) {
    throw validation_error(fmt::format("scan_from {} precedes the fit window end {}",
                                       options.scan_from, fit.window.end));
  }
  if (!(series.back().year > options.scan_from)) {
    throw validation_error(
        fmt::format("series ends at {}, nothing to scan beyond {}", series.back().year,
                    options.scan_from));
  }

  DivergenceReport report;
  report.options = options;

  // Qualification flag per scanned point: +1 above, -1 below, 0 neither.
  std::vector<int> sign;
  for (const auto& p : series.points()) {
    if (p.year < options.scan_from) continue;
    const double predicted = fit.reciprocal_at(p.year);
    if (!(predicted > 0.0)) {
      report.truncated_at_pole = true;
      break;
    }
    const double r = 1.0 / p.value - predicted;
    report.residuals.push_back({p.year, r});
    const bool big = std::abs(r) > options.min_rel_residual * std::abs(predicted);
    sign.push_back(!big || r == 0.0 ? 0 : (r > 0.0 ? 1 : -1));
  }

  std::size_t i = 0;
  while (i < sign.size()) {
    if (sign[i] == 0) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < sign.size() && sign[j] == sign[i]) ++j;
    if (j - i >= options.persistence) {
      report.onset_year = report.residuals[i].year;
      report.direction = sign[i] > 0 ? Direction::above_line : Direction::below_line;
      report.run_length = j - i;
      break;
    }
    i = j;
  }
  return report;
}

/// Years between the divergence onset and the fit's singularity.
inline double singularity_margin(const HyperbolicFit& fit, const DivergenceReport& report) {
  if (!report.onset_year) throw validation_error("no divergence onset to measure from");
  return singularity_time(fit) - *report.onset_year;
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_REGIMES_HPP
