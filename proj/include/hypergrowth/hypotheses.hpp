#ifndef HYPERGROWTH_HYPOTHESES_HPP
#define HYPERGROWTH_HYPOTHESES_HPP

// Evidence tests: randomness of residual signs (Wald-Wolfowitz runs test),
// monotonicity of the reciprocal trajectory, and an AIC comparison of
// hyperbolic, exponential and constant growth laws scored in log space.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hypergrowth/error.hpp"
#include "hypergrowth/hypermodel.hpp"
#include "hypergrowth/ols.hpp"
#include "hypergrowth/time_series.hpp"

namespace hypergrowth {

// ---------------------------------------------------------------------------
// Runs test
// ---------------------------------------------------------------------------

/// Largest sample evaluated by full enumeration of sign arrangements.
inline constexpr std::size_t kRunsExactMaxN = 12;
inline constexpr std::size_t kRunsMinN = 5;

enum class RunsMethod { exact, normal, single_sign };

inline const char* to_string(RunsMethod m) noexcept {
  switch (m) {
    case RunsMethod::exact: return "exact";
    case RunsMethod::normal: return "normal";
    case RunsMethod::single_sign: return "single-sign";
  }
  return "unknown";
}

struct RunsTestResult {
  std::size_t runs_count = 0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::size_t zeros_dropped = 0;
  double p_value = 1.0;
  RunsMethod method = RunsMethod::exact;

  friend bool operator==(const RunsTestResult&, const RunsTestResult&) = default;
};

namespace detail {

inline std::size_t count_runs(std::span<const int> signs) {
  if (signs.empty()) return 0;
  std::size_t runs = 1;
  for (std::size_t i = 1; i < signs.size(); ++i) runs += signs[i] != signs[i - 1];
  return runs;
}

/// Two-sided exact p: twice the smaller tail of the permutation distribution
/// of the run count, over all C(n, n_pos) placements of the positive signs.
inline double runs_exact_p(std::size_t n, std::size_t n_pos, std::size_t observed) {
  std::vector<std::uint64_t> tally(n + 2, 0);
  std::uint64_t total = 0;
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n_pos) continue;
    std::size_t runs = 1;
    for (std::size_t i = 1; i < n; ++i) runs += ((mask >> i) & 1u) != ((mask >> (i - 1)) & 1u);
    ++tally[runs];
    ++total;
  }
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  for (std::size_t r = 0; r < tally.size(); ++r) {
    if (r <= observed) lower += tally[r];
    if (r >= observed) upper += tally[r];
  }
  const double tail = static_cast<double>(std::min(lower, upper)) / static_cast<double>(total);
  return std::min(1.0, 2.0 * tail);
}

/// Normal approximation with continuity correction.
inline double runs_normal_p(std::size_t n_pos, std::size_t n_neg, std::size_t observed) {
  const double n1 = static_cast<double>(n_pos);
  const double n2 = static_cast<double>(n_neg);
  const double n = n1 + n2;
  const double mean = 1.0 + 2.0 * n1 * n2 / n;
  const double var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n) / (n * n * (n - 1.0));
  if (!(var > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(static_cast<double>(observed) - mean) - 0.5) /
                   std::sqrt(var);
  return std::erfc(z / std::sqrt(2.0));
}

}  // namespace detail

/**
 * Wald-Wolfowitz runs test on the signs of `residuals`.
 *
 * Zeros are dropped and counted. Needs at least five nonzero values. Samples
 * of up to twelve use the exact permutation distribution, larger ones the
 * continuity-corrected normal approximation. A single-sign sample has one
 * run and p = 2 * 0.5^n, the chance that n fair coin signs all agree.
 */
inline RunsTestResult runs_test(std::span<const double> residuals) {
  std::vector<int> signs;
  RunsTestResult out;
  for (const double r : residuals) {
    if (r > 0.0) {
      signs.push_back(1);
      ++out.n_positive;
    } else if (r < 0.0) {
      signs.push_back(-1);
      ++out.n_negative;
    } else {
      ++out.zeros_dropped;
    }
  }
  const std::size_t n = signs.size();
  if (n < kRunsMinN) {
    throw validation_error(
        fmt::format("runs test: insufficient data, {} nonzero residuals (need {})", n, kRunsMinN));
  }
  out.runs_count = detail::count_runs(signs);

  if (out.n_positive == 0 || out.n_negative == 0) {
    out.method = RunsMethod::single_sign;
    out.p_value = std::min(1.0, 2.0 * std::pow(0.5, static_cast<double>(n)));
  } else if (n <= kRunsExactMaxN) {
    out.method = RunsMethod::exact;
    out.p_value = detail::runs_exact_p(n, out.n_positive, out.runs_count);
  } else {
    out.method = RunsMethod::normal;
    out.p_value = detail::runs_normal_p(out.n_positive, out.n_negative, out.runs_count);
  }
  out.p_value = std::clamp(out.p_value, 0.0, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Stagnation evidence
// ---------------------------------------------------------------------------

enum class Verdict { stagnation_consistent, hyperbolic_consistent, inconclusive };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::stagnation_consistent: return "stagnation-consistent";
    case Verdict::hyperbolic_consistent: return "hyperbolic-consistent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct StagnationThresholds {
  double min_r2 = 0.95;  // reciprocal-line r2 for hyperbolic consistency
  double alpha = 0.05;   // runs-test level for "random about a flat level"

  friend bool operator==(const StagnationThresholds&, const StagnationThresholds&) = default;
};

struct StagnationReport {
  Window window;
  std::size_t n = 0;
  bool reciprocal_monotone_decreasing = false;
  std::optional<double> r2_reciprocal;
  std::size_t runs_count = 0;
  // Empty when fewer than five nonzero residuals make the runs test inapplicable.
  std::optional<double> runs_p_value;
  Verdict verdict = Verdict::inconclusive;
  StagnationThresholds thresholds;

  friend bool operator==(const StagnationReport&, const StagnationReport&) = default;
};

inline StagnationReport stagnation_report(const TimeSeries& series, Window window,
                                          const StagnationThresholds& thresholds = {}) {
  const auto selected = select_range(series, window);
  if (selected.size() < 3) {
    throw validation_error(
        fmt::format("stagnation report needs 3 points in window, got {}", selected.size()));
  }
  StagnationReport out;
  out.window = window;
  out.n = selected.size();
  out.thresholds = thresholds;

  const auto pts = selected.points();
  out.reciprocal_monotone_decreasing = true;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    // 1/v strictly decreasing <=> v strictly increasing.
    if (!(1.0 / pts[i].value < 1.0 / pts[i - 1].value)) {
      out.reciprocal_monotone_decreasing = false;
      break;
    }
  }

  const auto fit = fit_hyperbolic(selected, selected.span());
  out.r2_reciprocal = fit.r2_reciprocal;
  const auto g = goodness(selected, fit, selected.span());

  std::vector<double> residuals;
  std::vector<int> signs;
  for (const auto& r : g.residuals) {
    residuals.push_back(r.value);
    if (r.value != 0.0) signs.push_back(r.value > 0.0 ? 1 : -1);
  }
  out.runs_count = detail::count_runs(signs);
  if (signs.size() >= kRunsMinN) out.runs_p_value = runs_test(residuals).p_value;

  if (out.reciprocal_monotone_decreasing && out.r2_reciprocal &&
      *out.r2_reciprocal >= thresholds.min_r2) {
    out.verdict = Verdict::hyperbolic_consistent;
  } else if (!out.reciprocal_monotone_decreasing && out.runs_p_value &&
             *out.runs_p_value >= thresholds.alpha) {
    out.verdict = Verdict::stagnation_consistent;
  } else {
    out.verdict = Verdict::inconclusive;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model comparison
// ---------------------------------------------------------------------------

/// Per-point log residual treated as numerically exact. AIC floors rss_log
/// at n * kExactLogResidual^2 so that several exact fits tie and the simpler
/// model wins instead of whichever rounding error happens to be smallest.
inline constexpr double kExactLogResidual = 1e-10;

struct ModelScore {
  std::string name;
  std::size_t n_params = 0;
  bool feasible = true;
  std::vector<double> params;  // hyperbolic {a, k}; exponential {c, g}; constant {mu}
  std::optional<double> rss_log;
  std::optional<double> aic;

  friend bool operator==(const ModelScore&, const ModelScore&) = default;
};

struct ModelComparison {
  Window window;
  std::size_t n = 0;
  std::vector<ModelScore> models;
  std::string best;

  const ModelScore* find(const std::string& name) const {
    for (const auto& m : models) {
      if (m.name == name) return &m;
    }
    return nullptr;
  }

  friend bool operator==(const ModelComparison&, const ModelComparison&) = default;
};

inline double aic(std::size_t n, double rss_log, std::size_t n_params) {
  const double nn = static_cast<double>(n);
  const double floor = nn * kExactLogResidual * kExactLogResidual;
  return nn * std::log(std::max(rss_log, floor) / nn) + 2.0 * static_cast<double>(n_params);
}

/**
 * Fit hyperbolic, exponential and constant laws over `window` and rank them
 * by AIC on log-space residuals. A hyperbolic fit whose pole falls on or
 * before a data year in the window is marked infeasible and not ranked.
 */
inline ModelComparison compare_models(const TimeSeries& series, Window window) {
  const auto selected = select_range(series, window);
  const std::size_t n = selected.size();
  if (n < 4) throw validation_error(fmt::format("model comparison needs 4 points, got {}", n));

  const auto years = selected.years();
  std::vector<double> logs;
  for (const auto& p : selected.points()) logs.push_back(std::log(p.value));

  ModelComparison out;
  out.window = window;
  out.n = n;

  {
    const auto fit = fit_hyperbolic(selected, selected.span());
    ModelScore m{"hyperbolic", 2, true, {fit.a, fit.k}, std::nullopt, std::nullopt};
    double rss = 0.0;
    for (std::size_t i = 0; i < n && m.feasible; ++i) {
      const double denom = fit.reciprocal_at(years[i]);
      if (!(denom > 0.0)) {
        m.feasible = false;
        break;
      }
      const double r = logs[i] + std::log(denom);
      rss += r * r;
    }
    if (m.feasible) {
      m.rss_log = rss;
      m.aic = aic(n, rss, m.n_params);
    }
    out.models.push_back(std::move(m));
  }
  {
    const auto line = fit_line(years, logs);
    out.models.push_back({"exponential", 2, true, {line.intercept, line.slope}, line.rss,
                          aic(n, line.rss, 2)});
  }
  {
    double mean = 0.0;
    for (const double l : logs) mean += l;
    mean /= static_cast<double>(n);
    double rss = 0.0;
    for (const double l : logs) rss += (l - mean) * (l - mean);
    out.models.push_back({"constant", 1, true, {mean}, rss, aic(n, rss, 1)});
  }

  const ModelScore* best = nullptr;
  for (const auto& m : out.models) {
    if (!m.aic) continue;
    if (best == nullptr || *m.aic < *best->aic ||
        (*m.aic == *best->aic && m.n_params < best->n_params)) {
      best = &m;
    }
  }
  out.best = best->name;
  return out;
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_HYPOTHESES_HPP
