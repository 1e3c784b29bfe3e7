#ifndef HYPERGROWTH_JSON_IO_HPP
#define HYPERGROWTH_JSON_IO_HPP

// JSON mirrors of the result types. Objects keep declaration order
// (ordered_json) and doubles print in shortest round-trip form, so
// serialize -> parse reproduces every value bit for bit.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"  // nlohmann/json, vendored

#include "hypergrowth/error.hpp"
#include "hypergrowth/hypermodel.hpp"
#include "hypergrowth/hypotheses.hpp"
#include "hypergrowth/ingest.hpp"
#include "hypergrowth/regimes.hpp"
#include "hypergrowth/time_series.hpp"

namespace hypergrowth {

using Json = nlohmann::ordered_json;

namespace detail {

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> optional_from(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace detail

inline void to_json(Json& j, const Window& w) { j = Json::array({w.start, w.end}); }
inline void from_json(const Json& j, Window& w) {
  if (!j.is_array() || j.size() != 2) throw validation_error("window must be [start, end]");
  w.start = j[0].get<double>();
  w.end = j[1].get<double>();
}

inline void to_json(Json& j, const Point& p) { j = Json::array({p.year, p.value}); }
inline void from_json(const Json& j, Point& p) {
  p.year = j.at(0).get<double>();
  p.value = j.at(1).get<double>();
}

inline void to_json(Json& j, const Residual& r) { j = Json::array({r.year, r.value}); }
inline void from_json(const Json& j, Residual& r) {
  r.year = j.at(0).get<double>();
  r.value = j.at(1).get<double>();
}

inline void to_json(Json& j, const TimeSeries& s) {
  j = Json{{"region", s.region()}, {"points", Json::array()}};
  for (const auto& p : s.points()) j["points"].push_back(p);
}
inline TimeSeries time_series_from_json(const Json& j) {
  return TimeSeries(j.at("region").get<std::string>(), j.at("points").get<std::vector<Point>>());
}

inline void to_json(Json& j, const SeriesSummary& s) {
  j = Json{{"region", s.region},         {"n_points", s.n_points},
           {"first_year", s.first_year}, {"last_year", s.last_year},
           {"min_value", s.min_value},   {"max_value", s.max_value},
           {"skipped_rows", s.skipped_rows}, {"unit_scale", s.unit_scale}};
}
inline void from_json(const Json& j, SeriesSummary& s) {
  s.region = j.at("region").get<std::string>();
  s.n_points = j.at("n_points").get<std::size_t>();
  s.first_year = j.at("first_year").get<double>();
  s.last_year = j.at("last_year").get<double>();
  s.min_value = j.at("min_value").get<double>();
  s.max_value = j.at("max_value").get<double>();
  s.skipped_rows = j.at("skipped_rows").get<std::size_t>();
  s.unit_scale = j.at("unit_scale").get<double>();
}

inline void to_json(Json& j, const HyperbolicFit& f) {
  std::optional<double> ts;
  if (f.is_growth()) ts = singularity_time(f);
  j = Json{{"a", f.a},
           {"k", f.k},
           {"t_s", detail::optional_json(ts)},
           {"t_s_rounded", ts ? Json(std::llround(*ts)) : Json(nullptr)},
           {"rss", f.rss_reciprocal},
           {"r2", detail::optional_json(f.r2_reciprocal)},
           {"n", f.n},
           {"window", f.window}};
}
inline void from_json(const Json& j, HyperbolicFit& f) {
  f.a = j.at("a").get<double>();
  f.k = j.at("k").get<double>();
  f.rss_reciprocal = j.at("rss").get<double>();
  f.r2_reciprocal = detail::optional_from<double>(j, "r2");
  f.n = j.at("n").get<std::size_t>();
  f.window = j.at("window").get<Window>();
}

inline void to_json(Json& j, const SplitScore& s) {
  j = Json{{"break_year", s.break_year}, {"combined_rss", s.combined_rss}};
}
inline void from_json(const Json& j, SplitScore& s) {
  s.break_year = j.at("break_year").get<double>();
  s.combined_rss = j.at("combined_rss").get<double>();
}

inline void to_json(Json& j, const SegmentationResult& s) {
  j = Json{{"break_year", s.break_year},
           {"slow_fit", s.slow_fit},
           {"fast_fit", s.fast_fit},
           {"gap", detail::optional_json(s.gap)},
           {"combined_rss", s.combined_rss},
           {"single_fit_rss", s.single_fit_rss},
           {"improves_on_single_fit", s.improves_on_single_fit},
           {"scores", s.scores}};
}
inline void from_json(const Json& j, SegmentationResult& s) {
  s.break_year = j.at("break_year").get<double>();
  s.slow_fit = j.at("slow_fit").get<HyperbolicFit>();
  s.fast_fit = j.at("fast_fit").get<HyperbolicFit>();
  s.gap = detail::optional_from<Window>(j, "gap");
  s.combined_rss = j.at("combined_rss").get<double>();
  s.single_fit_rss = j.at("single_fit_rss").get<double>();
  s.improves_on_single_fit = j.at("improves_on_single_fit").get<bool>();
  s.scores = j.at("scores").get<std::vector<SplitScore>>();
}

inline void to_json(Json& j, const DeclineInterval& d) {
  j = Json{{"start_year", d.start_year},
           {"end_year", d.end_year},
           {"start_value", d.start_value},
           {"end_value", d.end_value}};
}
inline void from_json(const Json& j, DeclineInterval& d) {
  d.start_year = j.at("start_year").get<double>();
  d.end_year = j.at("end_year").get<double>();
  d.start_value = j.at("start_value").get<double>();
  d.end_value = j.at("end_value").get<double>();
}

inline Direction direction_from_string(std::string_view s) {
  if (s == "above-line") return Direction::above_line;
  if (s == "below-line") return Direction::below_line;
  throw validation_error(fmt::format("unknown direction '{}'", s));
}

inline void to_json(Json& j, const DivergenceOptions& o) {
  j = Json{{"scan_from", o.scan_from},
           {"persistence", o.persistence},
           {"min_rel_residual", o.min_rel_residual}};
}
inline void from_json(const Json& j, DivergenceOptions& o) {
  o.scan_from = j.at("scan_from").get<double>();
  o.persistence = j.at("persistence").get<std::size_t>();
  o.min_rel_residual = j.at("min_rel_residual").get<double>();
}

inline void to_json(Json& j, const DivergenceReport& d) {
  j = Json{{"options", d.options},
           {"onset_year", detail::optional_json(d.onset_year)},
           {"direction", d.direction ? Json(to_string(*d.direction)) : Json(nullptr)},
           {"run_length", d.run_length},
           {"truncated_at_pole", d.truncated_at_pole},
           {"residuals", d.residuals}};
}
inline void from_json(const Json& j, DivergenceReport& d) {
  d.options = j.at("options").get<DivergenceOptions>();
  d.onset_year = detail::optional_from<double>(j, "onset_year");
  const auto dir = detail::optional_from<std::string>(j, "direction");
  d.direction = dir ? std::optional<Direction>(direction_from_string(*dir)) : std::nullopt;
  d.run_length = j.at("run_length").get<std::size_t>();
  d.truncated_at_pole = j.at("truncated_at_pole").get<bool>();
  d.residuals = j.at("residuals").get<std::vector<Residual>>();
}

inline Verdict verdict_from_string(std::string_view s) {
  if (s == "stagnation-consistent") return Verdict::stagnation_consistent;
  if (s == "hyperbolic-consistent") return Verdict::hyperbolic_consistent;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw validation_error(fmt::format("unknown verdict '{}'", s));
}

inline void to_json(Json& j, const StagnationThresholds& t) {
  j = Json{{"min_r2", t.min_r2}, {"alpha", t.alpha}};
}
inline void from_json(const Json& j, StagnationThresholds& t) {
  t.min_r2 = j.at("min_r2").get<double>();
  t.alpha = j.at("alpha").get<double>();
}

inline void to_json(Json& j, const StagnationReport& s) {
  j = Json{{"window", s.window},
           {"n", s.n},
           {"reciprocal_monotone_decreasing", s.reciprocal_monotone_decreasing},
           {"r2_reciprocal", detail::optional_json(s.r2_reciprocal)},
           {"runs_count", s.runs_count},
           {"runs_p_value", detail::optional_json(s.runs_p_value)},
           {"verdict", to_string(s.verdict)},
           {"thresholds", s.thresholds}};
}
inline void from_json(const Json& j, StagnationReport& s) {
  s.window = j.at("window").get<Window>();
  s.n = j.at("n").get<std::size_t>();
  s.reciprocal_monotone_decreasing = j.at("reciprocal_monotone_decreasing").get<bool>();
  s.r2_reciprocal = detail::optional_from<double>(j, "r2_reciprocal");
  s.runs_count = j.at("runs_count").get<std::size_t>();
  s.runs_p_value = detail::optional_from<double>(j, "runs_p_value");
  s.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  s.thresholds = j.at("thresholds").get<StagnationThresholds>();
}

inline void to_json(Json& j, const ModelScore& m) {
  j = Json{{"name", m.name},
           {"n_params", m.n_params},
           {"feasible", m.feasible},
           {"params", m.params},
           {"rss_log", detail::optional_json(m.rss_log)},
           {"aic", detail::optional_json(m.aic)}};
}
inline void from_json(const Json& j, ModelScore& m) {
  m.name = j.at("name").get<std::string>();
  m.n_params = j.at("n_params").get<std::size_t>();
  m.feasible = j.at("feasible").get<bool>();
  m.params = j.at("params").get<std::vector<double>>();
  m.rss_log = detail::optional_from<double>(j, "rss_log");
  m.aic = detail::optional_from<double>(j, "aic");
}

inline void to_json(Json& j, const ModelComparison& c) {
  j = Json{{"window", c.window}, {"n", c.n}, {"models", c.models}, {"best", c.best}};
}
inline void from_json(const Json& j, ModelComparison& c) {
  c.window = j.at("window").get<Window>();
  c.n = j.at("n").get<std::size_t>();
  c.models = j.at("models").get<std::vector<ModelScore>>();
  c.best = j.at("best").get<std::string>();
}

inline void to_json(Json& j, const RunsTestResult& r) {
  j = Json{{"runs_count", r.runs_count},       {"n_positive", r.n_positive},
           {"n_negative", r.n_negative},       {"zeros_dropped", r.zeros_dropped},
           {"p_value", r.p_value},             {"method", to_string(r.method)}};
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_JSON_IO_HPP
