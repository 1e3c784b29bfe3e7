#ifndef HYPERGROWTH_INGEST_HPP
#define HYPERGROWTH_INGEST_HPP

// Two-column CSV ingestion for Maddison-style GDP tables.
//
// Format: UTF-8, header `year,value`, '.' decimal separator, no thousands
// separators, no quoting. Rows with an empty value cell are missing data and
// are skipped (and counted). Blank lines are ignored.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "hypergrowth/error.hpp"
#include "hypergrowth/time_series.hpp"

namespace hypergrowth {

struct ParsedSeries {
  TimeSeries series;
  std::size_t skipped_rows = 0;  // rows whose value cell was empty
};

struct SeriesSummary {
  std::string region;
  std::size_t n_points = 0;
  double first_year = 0.0;
  double last_year = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t skipped_rows = 0;
  double unit_scale = 1.0;

  friend bool operator==(const SeriesSummary&, const SeriesSummary&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  // from_chars rejects a leading '+'; accept it for friendliness.
  if (text.front() == '+') text.remove_prefix(1);
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace detail

/**
 * Parse `year,value` CSV text into a validated series.
 *
 * Values are multiplied by `unit_scale` (0.001 converts Maddison's millions
 * to billions). Rows are sorted by year after parsing. Throws a parse error
 * naming the 1-based line for non-numeric cells, and a validation error for
 * non-positive scaled values, duplicate years, or fewer than two usable rows.
 */
inline ParsedSeries parse_series(std::string_view csv_text, std::string region,
                                 double unit_scale) {
  if (!std::isfinite(unit_scale) || !(unit_scale > 0.0)) {
    throw validation_error(fmt::format("unit scale must be positive, got {}", unit_scale));
  }
  if (csv_text.starts_with("\xEF\xBB\xBF")) csv_text.remove_prefix(3);

  std::vector<Point> points;
  std::size_t skipped = 0;
  bool header_seen = false;
  std::size_t line_no = 0;

  while (!csv_text.empty()) {
    const auto nl = csv_text.find('\n');
    const auto raw = csv_text.substr(0, nl);
    csv_text = nl == std::string_view::npos ? std::string_view{} : csv_text.substr(nl + 1);
    ++line_no;

    const auto line = detail::trim(raw);
    if (line.empty()) continue;

    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw parse_error(fmt::format("line {}: expected exactly two comma-separated fields", line_no));
    }
    const auto year_text = detail::trim(line.substr(0, comma));
    const auto value_text = detail::trim(line.substr(comma + 1));

    if (!header_seen) {
      if (year_text != "year" || value_text != "value") {
        throw parse_error(fmt::format("line {}: expected header 'year,value'", line_no));
      }
      header_seen = true;
      continue;
    }

    double year = 0.0;
    if (!detail::parse_double(year_text, year)) {
      throw parse_error(fmt::format("line {}: non-numeric year '{}'", line_no, year_text));
    }
    if (value_text.empty()) {
      ++skipped;
      continue;
    }
    double value = 0.0;
    if (!detail::parse_double(value_text, value)) {
      throw parse_error(fmt::format("line {}: non-numeric value '{}'", line_no, value_text));
    }
    value *= unit_scale;
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw validation_error(
          fmt::format("line {}: value must be positive after scaling, got {}", line_no, value));
    }
    points.push_back({year, value});
  }

  if (!header_seen) throw parse_error("empty input: missing 'year,value' header");

  std::stable_sort(points.begin(), points.end(),
                   [](const Point& l, const Point& r) { return l.year < r.year; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].year == points[i - 1].year) {
      throw validation_error(fmt::format("duplicate year {}", points[i].year));
    }
  }
  if (points.size() < 2) {
    throw validation_error(
        fmt::format("need at least 2 rows with values, got {}", points.size()));
  }
  return {TimeSeries(std::move(region), std::move(points)), skipped};
}

/// Inverse of parse_series at unit_scale = 1. Numbers use 17 significant digits.
inline std::string serialize_series(const TimeSeries& series) {
  std::string out = "year,value\n";
  for (const auto& p : series.points()) {
    fmt::format_to(std::back_inserter(out), "{:.17g},{:.17g}\n", p.year, p.value);
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw io_error(fmt::format("error reading '{}'", path.string()));
  return buffer.str();
}

inline ParsedSeries load_series(const std::filesystem::path& path, std::string region,
                                double unit_scale) {
  return parse_series(read_file(path), std::move(region), unit_scale);
}

inline SeriesSummary summarize(const ParsedSeries& parsed, double unit_scale) {
  const auto& s = parsed.series;
  SeriesSummary out;
  out.region = s.region();
  out.n_points = s.size();
  out.first_year = s.front().year;
  out.last_year = s.back().year;
  const auto [lo, hi] = std::minmax_element(
      s.points().begin(), s.points().end(),
      [](const Point& l, const Point& r) { return l.value < r.value; });
  out.min_value = lo->value;
  out.max_value = hi->value;
  out.skipped_rows = parsed.skipped_rows;
  out.unit_scale = unit_scale;
  return out;
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_INGEST_HPP
