#ifndef HYPERGROWTH_SIMULATE_HPP
#define HYPERGROWTH_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "hypergrowth/error.hpp"
#include "hypergrowth/time_series.hpp"

namespace hypergrowth {

struct HyperbolicParams {
  double a = 0.0;
  double k = 0.0;
};

/// level * (1 + amplitude * u), u ~ U(-1, 1), independently per year.
struct StagnationParams {
  double level = 1.0;
  double amplitude = 0.0;
};

/// `before` applies to years < break_year, `after` to years >= break_year.
struct BrokenParams {
  HyperbolicParams before;
  HyperbolicParams after;
  double break_year = 0.0;
};

using SimulationParams = std::variant<HyperbolicParams, StagnationParams, BrokenParams>;

namespace detail {

inline double hyperbola_value(const HyperbolicParams& p, double t) {
  const double denom = p.a - p.k * t;
  if (!(denom > 0.0)) {
    throw validation_error(
        fmt::format("hyperbola (a={}, k={}) is non-positive at year {}", p.a, p.k, t));
  }
  return 1.0 / denom;
}

}  // namespace detail

/**
 * Synthetic series on the given years.
 *
 * Noise is multiplicative log-normal: each value is multiplied by
 * exp(noise_rel * z) with z standard normal. Randomness comes from
 * std::mt19937_64 seeded with `seed`; the stagnation draws come first for
 * each year, then the noise draw. Same seed, same series.
 */
inline TimeSeries simulate_series(const SimulationParams& params, std::span<const double> years,
                                  double noise_rel, std::uint64_t seed,
                                  std::string region = "simulated") {
  if (!(noise_rel >= 0.0) || !std::isfinite(noise_rel)) {
    throw validation_error("noise_rel must be a non-negative finite number");
  }
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<Point> points;
  points.reserve(years.size());
  for (const double t : years) {
    const double clean = std::visit(
        [&](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, HyperbolicParams>) {
            return detail::hyperbola_value(p, t);
          } else if constexpr (std::is_same_v<T, StagnationParams>) {
            if (!(p.level > 0.0) || !(p.amplitude >= 0.0 && p.amplitude < 1.0)) {
              throw validation_error("stagnation needs level > 0 and 0 <= amplitude < 1");
            }
            return p.level * (1.0 + p.amplitude * unit(engine));
          } else {
            return detail::hyperbola_value(t < p.break_year ? p.before : p.after, t);
          }
        },
        params);
    const double value = noise_rel > 0.0 ? clean * std::exp(noise_rel * gauss(engine)) : clean;
    points.push_back({t, value});
  }
  return TimeSeries(std::move(region), std::move(points));
}

/// Evenly spaced years start, start + step, ..., up to and including `end`.
inline std::vector<double> year_grid(double start, double end, double step) {
  if (!(step > 0.0) || !(end >= start)) throw validation_error("invalid year grid");
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double t = start + static_cast<double>(i) * step;
    if (t > end) break;
    out.push_back(t);
  }
  return out;
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_SIMULATE_HPP
