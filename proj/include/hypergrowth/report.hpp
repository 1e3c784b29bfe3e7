#ifndef HYPERGROWTH_REPORT_HPP
#define HYPERGROWTH_REPORT_HPP

// End-to-end analysis of one regional series: ingest, slow and fast fits,
// segmentation, declines, divergence, stagnation evidence and model
// comparison, assembled into one JSON report plus two figure-data CSVs.

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "hypergrowth/error.hpp"
#include "hypergrowth/hypermodel.hpp"
#include "hypergrowth/hypotheses.hpp"
#include "hypergrowth/ingest.hpp"
#include "hypergrowth/json_io.hpp"
#include "hypergrowth/regimes.hpp"
#include "hypergrowth/time_series.hpp"
#include "hypergrowth/version.hpp"

namespace hypergrowth {

/// Lower-case hex SHA-256 of `bytes`.
inline std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw io_error("SHA-256 computation failed");
  }
  std::string out;
  for (unsigned int i = 0; i < len; ++i) fmt::format_to(std::back_inserter(out), "{:02x}", digest[i]);
  return out;
}

/**
 * Pipeline settings. Defaults reproduce the Latin America analysis
 * (slow 1-1500, fast 1600-1870, divergence scanned from 1870) except
 * `unit_scale`, which has no default and must always be given.
 */
struct PipelineConfig {
  std::string region = "Latin America";
  double unit_scale = 0.0;
  Window slow_window{1.0, 1500.0};
  Window fast_window{1600.0, 1870.0};
  DivergenceOptions divergence{};
  std::size_t min_points_per_side = 2;
  StagnationThresholds stagnation{};

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct AnalysisReport {
  std::string tool_version;
  std::string input_checksum;  // SHA-256 of the CSV bytes
  PipelineConfig config;
  SeriesSummary summary;
  TimeSeries series;
  HyperbolicFit slow_fit;
  HyperbolicFit fast_fit;
  SegmentationResult segmentation;  // exploratory breakpoint search
  std::vector<DeclineInterval> declines;
  DivergenceReport divergence;
  StagnationReport stagnation;
  ModelComparison comparison;
  std::optional<double> singularity_margin;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline void to_json(Json& j, const PipelineConfig& c) {
  j = Json{{"region", c.region},
           {"unit_scale", c.unit_scale},
           {"slow_window", c.slow_window},
           {"fast_window", c.fast_window},
           {"scan_from", c.divergence.scan_from},
           {"persistence", c.divergence.persistence},
           {"min_rel_residual", c.divergence.min_rel_residual},
           {"min_points_per_side", c.min_points_per_side},
           {"min_r2", c.stagnation.min_r2},
           {"alpha", c.stagnation.alpha}};
}

/// Missing keys keep their defaults, except `unit_scale`, which is required.
/// Unknown keys are rejected so typos do not silently fall back to defaults.
inline PipelineConfig config_from_json(const Json& j) {
  static const std::set<std::string> known = {
      "region",      "unit_scale", "slow_window", "fast_window",         "scan_from",
      "persistence", "min_rel_residual",          "min_points_per_side", "min_r2",
      "alpha"};
  if (!j.is_object()) throw validation_error("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw validation_error(fmt::format("unknown config key '{}'", key));
  }
  if (!j.contains("unit_scale")) throw validation_error("config is missing 'unit_scale'");

  PipelineConfig c;
  try {
    c.unit_scale = j.at("unit_scale").get<double>();
    if (j.contains("region")) c.region = j["region"].get<std::string>();
    if (j.contains("slow_window")) c.slow_window = j["slow_window"].get<Window>();
    if (j.contains("fast_window")) c.fast_window = j["fast_window"].get<Window>();
    if (j.contains("scan_from")) c.divergence.scan_from = j["scan_from"].get<double>();
    if (j.contains("persistence")) c.divergence.persistence = j["persistence"].get<std::size_t>();
    if (j.contains("min_rel_residual")) {
      c.divergence.min_rel_residual = j["min_rel_residual"].get<double>();
    }
    if (j.contains("min_points_per_side")) {
      c.min_points_per_side = j["min_points_per_side"].get<std::size_t>();
    }
    if (j.contains("min_r2")) c.stagnation.min_r2 = j["min_r2"].get<double>();
    if (j.contains("alpha")) c.stagnation.alpha = j["alpha"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(fmt::format("invalid config: {}", e.what()));
  }
  return c;
}

inline void to_json(Json& j, const AnalysisReport& r) {
  j = Json{{"tool_version", r.tool_version},
           {"input_checksum", r.input_checksum},
           {"config", r.config},
           {"summary", r.summary},
           {"series", r.series},
           {"slow_fit", r.slow_fit},
           {"fast_fit", r.fast_fit},
           {"segmentation", r.segmentation},
           {"declines", r.declines},
           {"divergence", r.divergence},
           {"stagnation", r.stagnation},
           {"comparison", r.comparison},
           {"singularity_margin", detail::optional_json(r.singularity_margin)}};
}

inline AnalysisReport report_from_json(const Json& j) {
  try {
    return AnalysisReport{
        j.at("tool_version").get<std::string>(),
        j.at("input_checksum").get<std::string>(),
        config_from_json(j.at("config")),
        j.at("summary").get<SeriesSummary>(),
        time_series_from_json(j.at("series")),
        j.at("slow_fit").get<HyperbolicFit>(),
        j.at("fast_fit").get<HyperbolicFit>(),
        j.at("segmentation").get<SegmentationResult>(),
        j.at("declines").get<std::vector<DeclineInterval>>(),
        j.at("divergence").get<DivergenceReport>(),
        j.at("stagnation").get<StagnationReport>(),
        j.at("comparison").get<ModelComparison>(),
        detail::optional_from<double>(j, "singularity_margin"),
    };
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(fmt::format("malformed report JSON: {}", e.what()));
  }
}

inline std::string to_json_text(const AnalysisReport& r) { return Json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

namespace detail {

/// Runs one stage, prefixing any library error with the stage name.
template <class F>
auto run_stage(std::string_view stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{}: {}", stage, e.what()));
  }
}

}  // namespace detail

/// Pipeline over CSV text already in memory. `checksum` is recorded as given.
inline AnalysisReport run_pipeline_text(std::string_view csv_text, const PipelineConfig& config,
                                        std::string checksum) {
  const auto parsed = detail::run_stage("ingest", [&] {
    return parse_series(csv_text, config.region, config.unit_scale);
  });
  const auto& s = parsed.series;

  auto slow = detail::run_stage("slow fit", [&] { return fit_hyperbolic(s, config.slow_window); });
  auto fast = detail::run_stage("fast fit", [&] { return fit_hyperbolic(s, config.fast_window); });
  auto segmentation = detail::run_stage("segmentation", [&] {
    const auto span = select_range(s, config.slow_window.start, config.fast_window.end);
    return find_breakpoint(span, {}, config.min_points_per_side);
  });
  auto divergence = detail::run_stage("divergence", [&] {
    return detect_divergence(s, fast, config.divergence);
  });
  std::optional<double> margin;
  if (divergence.detected() && fast.is_growth()) margin = singularity_margin(fast, divergence);
  auto stagnation = detail::run_stage("stagnation", [&] {
    return stagnation_report(s, config.slow_window, config.stagnation);
  });
  auto comparison = detail::run_stage("comparison", [&] {
    return compare_models(s, config.fast_window);
  });

  return AnalysisReport{std::string(kVersion),
                        std::move(checksum),
                        config,
                        summarize(parsed, config.unit_scale),
                        s,
                        std::move(slow),
                        std::move(fast),
                        std::move(segmentation),
                        detect_decline(s),
                        std::move(divergence),
                        std::move(stagnation),
                        std::move(comparison),
                        margin};
}

inline AnalysisReport run_pipeline(const std::filesystem::path& csv_path,
                                   const PipelineConfig& config) {
  const auto bytes = detail::run_stage("ingest", [&] { return read_file(csv_path); });
  return run_pipeline_text(bytes, config, sha256_hex(bytes));
}

// ---------------------------------------------------------------------------
// Figure data
// ---------------------------------------------------------------------------

enum class Figure { fig1, fig2 };

namespace detail {

inline std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

/// Observed years merged with a 1-year grid spanning the data.
inline std::vector<double> figure_years(const TimeSeries& s) {
  std::set<double> years;
  for (const auto& p : s.points()) years.insert(p.year);
  const double first = std::ceil(s.front().year);
  for (double t = first; t <= s.back().year; t += 1.0) years.insert(t);
  return {years.begin(), years.end()};
}

/// Model value, or nothing at and beyond the pole.
inline std::optional<double> model_cell(const HyperbolicFit& fit, double t) {
  const double denom = fit.reciprocal_at(t);
  if (!(denom > kPoleGuard * std::abs(fit.a))) return std::nullopt;
  if (fit.is_growth() && t >= singularity_time(fit)) return std::nullopt;
  return 1.0 / denom;
}

}  // namespace detail

/**
 * Figure data as CSV text.
 *
 * fig1: year, gdp_observed, gdp_slow_model, gdp_fast_model. Model columns
 * are empty at and past each model's pole; a '#' comment line names the pole.
 * fig2: year, reciprocal_observed, line_slow, line_fast, with the fitted
 * lines a - k t on every row. Observed columns hold each data point once,
 * unmodified, and are empty on grid-only rows.
 */
inline std::string render_figure_csv(const AnalysisReport& report, Figure which) {
  const auto& s = report.series;
  std::map<double, double> observed;
  for (const auto& p : s.points()) observed.emplace(p.year, p.value);
  const auto years = detail::figure_years(s);

  std::string out;
  const auto cell = [](std::optional<double> v) { return v ? detail::csv_number(*v) : std::string(); };

  if (which == Figure::fig1) {
    const std::array<std::pair<const char*, const HyperbolicFit*>, 2> models = {
        {{"slow", &report.slow_fit}, {"fast", &report.fast_fit}}};
    for (const auto& [name, fit] : models) {
      if (fit->is_growth()) {
        const double ts = singularity_time(*fit);
        if (ts <= years.back()) {
          fmt::format_to(std::back_inserter(out),
                         "# {} model pole at t_s = {:.17g}; gdp_{}_model empty from there on\n",
                         name, ts, name);
        }
      }
    }
    out += "year,gdp_observed,gdp_slow_model,gdp_fast_model\n";
    for (const double t : years) {
      const auto it = observed.find(t);
      fmt::format_to(std::back_inserter(out), "{},{},{},{}\n", detail::csv_number(t),
                     it != observed.end() ? detail::csv_number(it->second) : std::string(),
                     cell(detail::model_cell(report.slow_fit, t)),
                     cell(detail::model_cell(report.fast_fit, t)));
    }
  } else {
    out += "year,reciprocal_observed,line_slow,line_fast\n";
    for (const double t : years) {
      const auto it = observed.find(t);
      fmt::format_to(std::back_inserter(out), "{},{},{},{}\n", detail::csv_number(t),
                     it != observed.end() ? detail::csv_number(1.0 / it->second) : std::string(),
                     detail::csv_number(report.slow_fit.reciprocal_at(t)),
                     detail::csv_number(report.fast_fit.reciprocal_at(t)));
    }
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw io_error(fmt::format("error writing '{}'", path.string()));
}

inline void export_figure_data(const AnalysisReport& report, Figure which,
                               const std::filesystem::path& out_path) {
  write_text_file(out_path, render_figure_csv(report, which));
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_REPORT_HPP
