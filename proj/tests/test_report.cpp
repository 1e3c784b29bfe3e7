#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hypergrowth/hypergrowth.hpp"

namespace hg = hypergrowth;

namespace {

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line);
    } else if (t.header.empty()) {
      t.header = split(line);
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

std::optional<double> num(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return std::stod(cell);
}

// Exact hyperbola 1 / (1 - t/1200) sampled every 50 years over 0..1000.
std::string synthetic_csv() {
  const auto years = hg::year_grid(0, 1000, 50);
  const auto s = hg::simulate_series(hg::HyperbolicParams{1.0, 1.0 / 1200.0}, years, 0.0, 0);
  return hg::serialize_series(s);
}

hg::PipelineConfig synthetic_config() {
  hg::PipelineConfig c;
  c.region = "synthetic";
  c.unit_scale = 1.0;
  c.slow_window = {0, 500};
  c.fast_window = {550, 900};
  c.divergence.scan_from = 900;
  c.divergence.persistence = 2;
  return c;
}

hg::PipelineConfig latin_america_config() {
  hg::PipelineConfig c;
  c.unit_scale = 0.001;
  return c;
}

const std::string kLatinAmericaCsv = HYPERGROWTH_DATA_DIR "/latin_america_gdp.csv";

}  // namespace

TEST(Pipeline, ExactHyperbolaGivesSameLineInBothWindows) {
  const auto r = hg::run_pipeline_text(synthetic_csv(), synthetic_config(), "x");
  EXPECT_NEAR(r.slow_fit.a, 1.0, 1e-12);
  EXPECT_NEAR(r.fast_fit.a, 1.0, 1e-12);
  EXPECT_NEAR(r.slow_fit.k, 1.0 / 1200.0, 1e-15);
  EXPECT_NEAR(r.fast_fit.k, 1.0 / 1200.0, 1e-15);
  EXPECT_FALSE(r.divergence.detected());
  EXPECT_FALSE(r.singularity_margin.has_value());
  EXPECT_TRUE(r.declines.empty());
  EXPECT_EQ(r.stagnation.verdict, hg::Verdict::hyperbolic_consistent);
  EXPECT_EQ(r.comparison.best, "hyperbolic");
  EXPECT_EQ(r.summary.n_points, 21u);
}

TEST(Pipeline, LatinAmericaStages) {
  const auto r = hg::run_pipeline(kLatinAmericaCsv, latin_america_config());
  EXPECT_EQ(r.slow_fit.n, 3u);
  EXPECT_EQ(r.fast_fit.n, 4u);
  EXPECT_GT(r.fast_fit.k, r.slow_fit.k);
  ASSERT_FALSE(r.declines.empty());
  EXPECT_EQ(r.declines.front().start_year, 1500.0);
  EXPECT_EQ(r.declines.front().end_year, 1600.0);
  EXPECT_GE(r.segmentation.break_year, 1500.0);
  EXPECT_LE(r.segmentation.break_year, 1600.0);
}

TEST(Pipeline, ChecksumIsSha256OfInputBytes) {
  const auto bytes = hg::read_file(kLatinAmericaCsv);
  const auto r = hg::run_pipeline(kLatinAmericaCsv, latin_america_config());
  EXPECT_EQ(r.input_checksum, hg::sha256_hex(bytes));
  EXPECT_EQ(r.input_checksum.size(), 64u);
  EXPECT_EQ(hg::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Pipeline, JsonRoundTripPreservesReport) {
  for (const auto& r : {hg::run_pipeline(kLatinAmericaCsv, latin_america_config()),
                        hg::run_pipeline_text(synthetic_csv(), synthetic_config(), "x")}) {
    const auto text = hg::to_json_text(r);
    const auto back = hg::report_from_json(hg::Json::parse(text));
    EXPECT_EQ(back, r);
    EXPECT_EQ(hg::to_json_text(back), text);
  }
}

TEST(Pipeline, RepeatedRunsAreByteIdentical) {
  const auto a = hg::to_json_text(hg::run_pipeline(kLatinAmericaCsv, latin_america_config()));
  const auto b = hg::to_json_text(hg::run_pipeline(kLatinAmericaCsv, latin_america_config()));
  EXPECT_EQ(a, b);
  const auto r = hg::run_pipeline(kLatinAmericaCsv, latin_america_config());
  EXPECT_EQ(hg::render_figure_csv(r, hg::Figure::fig1), hg::render_figure_csv(r, hg::Figure::fig1));
}

TEST(Pipeline, ErrorsNameTheFailingStage) {
  auto c = latin_america_config();
  c.fast_window = {1960, 2000};
  try {
    hg::run_pipeline(kLatinAmericaCsv, c);
    FAIL() << "expected error";
  } catch (const hg::Error& e) {
    EXPECT_EQ(e.kind(), hg::ErrorKind::validation);
    EXPECT_EQ(std::string(e.what()).rfind("fast fit: ", 0), 0u) << e.what();
  }
  try {
    hg::run_pipeline("/nonexistent.csv", latin_america_config());
    FAIL() << "expected error";
  } catch (const hg::Error& e) {
    EXPECT_EQ(e.kind(), hg::ErrorKind::io);
    EXPECT_EQ(std::string(e.what()).rfind("ingest: ", 0), 0u) << e.what();
  }
}

TEST(Config, ParsesFlatKeysAndRequiresUnitScale) {
  const auto c = hg::config_from_json(hg::Json::parse(
      R"({"unit_scale": 0.001, "slow_window": [1, 1500], "persistence": 3, "alpha": 0.1})"));
  EXPECT_EQ(c.unit_scale, 0.001);
  EXPECT_EQ(c.divergence.persistence, 3u);
  EXPECT_EQ(c.stagnation.alpha, 0.1);
  EXPECT_EQ(c.fast_window, (hg::Window{1600, 1870}));
  EXPECT_THROW(hg::config_from_json(hg::Json::parse(R"({"region": "x"})")), hg::Error);
  EXPECT_THROW(hg::config_from_json(hg::Json::parse(R"({"unit_scale": 1, "persistance": 3})")),
               hg::Error);
  EXPECT_THROW(hg::config_from_json(hg::Json::parse(R"({"unit_scale": "big"})")), hg::Error);
  EXPECT_EQ(hg::config_from_json(hg::Json(c)), c);
}

TEST(Config, ShippedConfigMatchesDefaults) {
  const auto c = hg::config_from_json(
      hg::Json::parse(hg::read_file(HYPERGROWTH_DATA_DIR "/latin_america.config.json")));
  EXPECT_EQ(c, latin_america_config());
}

TEST(Figures, Fig1ObservedColumnHoldsDataOnceUnmodified) {
  const auto r = hg::run_pipeline(kLatinAmericaCsv, latin_america_config());
  const auto t = parse_csv(hg::render_figure_csv(r, hg::Figure::fig1));
  ASSERT_EQ(t.header,
            (std::vector<std::string>{"year", "gdp_observed", "gdp_slow_model", "gdp_fast_model"}));
  std::map<double, double> seen;
  for (const auto& row : t.rows) {
    ASSERT_EQ(row.size(), 4u);
    if (const auto v = num(row[1])) {
      EXPECT_TRUE(seen.emplace(std::stod(row[0]), *v).second) << "duplicate year " << row[0];
    }
  }
  ASSERT_EQ(seen.size(), r.series.size());
  for (const auto& p : r.series.points()) EXPECT_EQ(seen.at(p.year), p.value);
}

TEST(Figures, Fig1ModelColumnsMatchEvalModel) {
  const auto r = hg::run_pipeline(kLatinAmericaCsv, latin_america_config());
  const auto t = parse_csv(hg::render_figure_csv(r, hg::Figure::fig1));
  std::size_t checked = 0;
  for (const auto& row : t.rows) {
    const double year = std::stod(row[0]);
    if (r.slow_fit.window.contains(year)) {
      ASSERT_TRUE(num(row[2]));
      EXPECT_NEAR(*num(row[2]), hg::eval_model(r.slow_fit, year),
                  1e-12 * hg::eval_model(r.slow_fit, year));
      ++checked;
    }
    if (r.fast_fit.window.contains(year)) {
      ASSERT_TRUE(num(row[3]));
      EXPECT_NEAR(*num(row[3]), hg::eval_model(r.fast_fit, year),
                  1e-12 * hg::eval_model(r.fast_fit, year));
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Figures, Fig1MarksFastModelPole) {
  // The fast fit's pole lies before 1950, inside the figure's year range.
  const auto r = hg::run_pipeline(kLatinAmericaCsv, latin_america_config());
  const double ts = hg::singularity_time(r.fast_fit);
  ASSERT_LT(ts, 1950.0);
  const auto t = parse_csv(hg::render_figure_csv(r, hg::Figure::fig1));
  ASSERT_EQ(t.comments.size(), 1u);
  EXPECT_NE(t.comments[0].find("fast model pole"), std::string::npos);
  for (const auto& row : t.rows) {
    const double year = std::stod(row[0]);
    if (year >= ts) {
      EXPECT_TRUE(row[3].empty()) << year;
    } else {
      EXPECT_FALSE(row[3].empty()) << year;
    }
  }
}

TEST(Figures, Fig2LinesPassThroughExactHyperbola) {
  const auto r = hg::run_pipeline_text(synthetic_csv(), synthetic_config(), "x");
  const auto t = parse_csv(hg::render_figure_csv(r, hg::Figure::fig2));
  ASSERT_EQ(t.header, (std::vector<std::string>{"year", "reciprocal_observed", "line_slow",
                                                "line_fast"}));
  EXPECT_TRUE(t.comments.empty());
  std::size_t observed = 0;
  for (const auto& row : t.rows) {
    ASSERT_TRUE(num(row[2]) && num(row[3]));
    if (const auto y = num(row[1])) {
      ++observed;
      EXPECT_NEAR(*num(row[2]), *y, 1e-12);
      EXPECT_NEAR(*num(row[3]), *y, 1e-12);
    }
  }
  EXPECT_EQ(observed, 21u);
  EXPECT_EQ(t.rows.size(), 1001u);
}

TEST(Figures, ExportWritesFile) {
  const auto r = hg::run_pipeline(kLatinAmericaCsv, latin_america_config());
  const auto dir = std::filesystem::temp_directory_path() / "hypergrowth_test_report";
  std::filesystem::create_directories(dir);
  hg::export_figure_data(r, hg::Figure::fig2, dir / "fig2.csv");
  EXPECT_EQ(hg::read_file(dir / "fig2.csv"), hg::render_figure_csv(r, hg::Figure::fig2));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(hg::export_figure_data(r, hg::Figure::fig2, dir / "missing" / "fig2.csv"),
               hg::Error);
}

TEST(Simulate, SameSeedSameSeries) {
  const auto years = hg::year_grid(0, 500, 25);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto a = hg::simulate_series(hg::StagnationParams{2.0, 0.2}, years, 0.05, seed);
    const auto b = hg::simulate_series(hg::StagnationParams{2.0, 0.2}, years, 0.05, seed);
    EXPECT_EQ(a, b);
  }
  const auto a = hg::simulate_series(hg::HyperbolicParams{1, 1e-3}, years, 0.1, 1);
  const auto b = hg::simulate_series(hg::HyperbolicParams{1, 1e-3}, years, 0.1, 2);
  EXPECT_NE(a, b);
}

TEST(Simulate, BrokenSwitchesAtBreakYear) {
  const std::vector<double> years{0, 10, 20, 30};
  const hg::BrokenParams p{{1.0, 0.001}, {2.0, 0.05}, 20};
  const auto s = hg::simulate_series(p, years, 0.0, 0);
  EXPECT_DOUBLE_EQ(s[1].value, 1.0 / 0.99);
  EXPECT_DOUBLE_EQ(s[2].value, 1.0 / 1.0);
  EXPECT_DOUBLE_EQ(s[3].value, 1.0 / 0.5);
}

TEST(Simulate, RejectsInvalidParameters) {
  const auto years = hg::year_grid(0, 100, 10);
  EXPECT_THROW(hg::simulate_series(hg::HyperbolicParams{1, 0.02}, years, 0.0, 0), hg::Error);
  EXPECT_THROW(hg::simulate_series(hg::HyperbolicParams{1, 0.001}, years, -0.1, 0), hg::Error);
  EXPECT_THROW(hg::simulate_series(hg::StagnationParams{1, 1.0}, years, 0.0, 0), hg::Error);
  EXPECT_THROW(hg::year_grid(10, 0, 1), hg::Error);
}
