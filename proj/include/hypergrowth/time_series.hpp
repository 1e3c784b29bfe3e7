#ifndef HYPERGROWTH_TIME_SERIES_HPP
#define HYPERGROWTH_TIME_SERIES_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "hypergrowth/error.hpp"

namespace hypergrowth {

/// One observation. Years are real calendar years with AD 1 = 1.0; values
/// are in whatever unit the caller scaled to (billions of 1990 GK$ for the
/// Maddison series).
struct Point {
  double year = 0.0;
  double value = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed interval of calendar years.
struct Window {
  double start = 0.0;
  double end = 0.0;

  bool contains(double year) const noexcept {
    return year >= start && year <= end;
  }

  friend bool operator==(const Window&, const Window&) = default;
};

/**
 * Validated series of (year, value) observations for one region.
 *
 * Every instance satisfies: at least two points, strictly increasing years,
 * finite years and strictly positive finite values. Construction throws a
 * validation error otherwise, so downstream code never re-checks.
 */
class TimeSeries {
 public:
  TimeSeries(std::string region, std::vector<Point> points)
      : region_(std::move(region)), points_(std::move(points)) {
    validate();
  }

  const std::string& region() const noexcept { return region_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const Point& front() const { return points_.front(); }
  const Point& back() const { return points_.back(); }

  std::vector<double> years() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.year);
    return out;
  }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.value);
    return out;
  }

  Window span() const noexcept { return {points_.front().year, points_.back().year}; }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  void validate() const {
    if (points_.size() < 2) {
      throw validation_error(fmt::format(
          "series '{}' needs at least 2 points, got {}", region_, points_.size()));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (!std::isfinite(p.year)) {
        throw validation_error(fmt::format("series '{}': non-finite year at index {}", region_, i));
      }
      if (!std::isfinite(p.value) || !(p.value > 0.0)) {
        throw validation_error(fmt::format(
            "series '{}': value at year {} must be positive and finite, got {}", region_,
            p.year, p.value));
      }
      if (i > 0 && !(p.year > points_[i - 1].year)) {
        throw validation_error(fmt::format(
            "series '{}': years must be strictly increasing ({} follows {})", region_,
            p.year, points_[i - 1].year));
      }
    }
  }

  std::string region_;
  std::vector<Point> points_;
};

/// Sub-series with t0 <= year <= t1. Throws when fewer than 2 points remain.
inline TimeSeries select_range(const TimeSeries& series, double t0, double t1) {
  if (!(t0 < t1)) {
    throw validation_error(fmt::format("empty year range [{}, {}]", t0, t1));
  }
  std::vector<Point> kept;
  for (const auto& p : series.points()) {
    if (p.year >= t0 && p.year <= t1) kept.push_back(p);
  }
  if (kept.size() < 2) {
    throw validation_error(fmt::format("range [{}, {}] of '{}' holds {} point(s), need 2",
                                       t0, t1, series.region(), kept.size()));
  }
  return TimeSeries(series.region(), std::move(kept));
}

inline TimeSeries select_range(const TimeSeries& series, Window window) {
  return select_range(series, window.start, window.end);
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_TIME_SERIES_HPP
