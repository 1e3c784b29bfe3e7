#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "hypergrowth/ingest.hpp"
#include "oracles.hpp"

namespace hg = hypergrowth;

namespace {

hg::ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const hg::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected hypergrowth::Error";
  return hg::ErrorKind::io;
}

}  // namespace

TEST(ParseSeries, ScalesMillionsToBillions) {
  const auto parsed = hg::parse_series("year,value\n1,2240\n1000,4560", "LA", 0.001);
  ASSERT_EQ(parsed.series.size(), 2u);
  EXPECT_DOUBLE_EQ(parsed.series[0].year, 1.0);
  EXPECT_DOUBLE_EQ(parsed.series[0].value, 2.240);
  EXPECT_DOUBLE_EQ(parsed.series[1].year, 1000.0);
  EXPECT_DOUBLE_EQ(parsed.series[1].value, 4.560);
  EXPECT_EQ(parsed.series.region(), "LA");
  EXPECT_EQ(parsed.skipped_rows, 0u);
}

TEST(ParseSeries, SkipsEmptyValueCells) {
  const auto parsed = hg::parse_series("year,value\n1,2240\n500,\n1000,4560", "LA", 0.001);
  EXPECT_EQ(parsed.series.size(), 2u);
  EXPECT_EQ(parsed.skipped_rows, 1u);
}

TEST(ParseSeries, ToleratesCrlfBomBlankLinesAndSortsRows) {
  const auto parsed =
      hg::parse_series("\xEF\xBB\xBFyear,value\r\n\r\n1820, 14921\r\n1,2240\r\n\n", "x", 1.0);
  ASSERT_EQ(parsed.series.size(), 2u);
  EXPECT_EQ(parsed.series.front().year, 1.0);
  EXPECT_EQ(parsed.series.back().value, 14921.0);
}

TEST(ParseSeries, MalformedRowsReportLineNumber) {
  try {
    hg::parse_series("year,value\n1,2\n2,abc\n", "x", 1.0);
    FAIL() << "expected parse error";
  } catch (const hg::Error& e) {
    EXPECT_EQ(e.kind(), hg::ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\nx1,2\n3,4", "x", 1.0); }),
            hg::ErrorKind::parse);
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,2,3\n", "x", 1.0); }),
            hg::ErrorKind::parse);
  EXPECT_EQ(kind_of([] { hg::parse_series("yr,val\n1,2\n3,4\n", "x", 1.0); }),
            hg::ErrorKind::parse);
  EXPECT_EQ(kind_of([] { hg::parse_series("", "x", 1.0); }), hg::ErrorKind::parse);
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,1,000\n", "x", 1.0); }),
            hg::ErrorKind::parse);
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,nan\n2,3\n", "x", 1.0); }),
            hg::ErrorKind::parse);
}

TEST(ParseSeries, RejectsInvalidSeries) {
  // Non-positive after scaling.
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,0\n2,3\n", "x", 1.0); }),
            hg::ErrorKind::validation);
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,-5\n2,3\n", "x", 1.0); }),
            hg::ErrorKind::validation);
  // Fewer than two usable rows.
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,2\n2,\n", "x", 1.0); }),
            hg::ErrorKind::validation);
  // Duplicate years break strict monotonicity.
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,2\n1,3\n", "x", 1.0); }),
            hg::ErrorKind::validation);
  // Unit scale must be explicit and positive.
  EXPECT_EQ(kind_of([] { hg::parse_series("year,value\n1,2\n2,3\n", "x", 0.0); }),
            hg::ErrorKind::validation);
}

TEST(TimeSeries, ConstructorEnforcesInvariants) {
  EXPECT_THROW(hg::TimeSeries("x", {{1, 1}}), hg::Error);
  EXPECT_THROW(hg::TimeSeries("x", {{2, 1}, {1, 1}}), hg::Error);
  EXPECT_THROW(hg::TimeSeries("x", {{1, 1}, {2, 0}}), hg::Error);
  EXPECT_THROW(hg::TimeSeries("x", {{1, 1}, {NAN, 2}}), hg::Error);
  EXPECT_NO_THROW(hg::TimeSeries("x", {{1, 1}, {2, 1}}));
}

TEST(SelectRange, IncludesBoundaries) {
  const hg::TimeSeries s("x", {{1, 1}, {1000, 2}, {1500, 3}, {1600, 2}});
  const auto r = hg::select_range(s, 1, 1500);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r.back().year, 1500.0);
  EXPECT_EQ(r.region(), "x");
}

TEST(SelectRange, EmptyWindowIsValidationError) {
  const hg::TimeSeries s("x", {{1, 1}, {1000, 2}, {1870, 3}});
  EXPECT_EQ(kind_of([&] { hg::select_range(s, 2000, 2100); }), hg::ErrorKind::validation);
  EXPECT_EQ(kind_of([&] { hg::select_range(s, 1500, 1000); }), hg::ErrorKind::validation);
}

TEST(SelectRange, IsContiguousSubsequence) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto years = oracle::random_years(rng, 12, 0, 500);
    std::vector<hg::Point> pts;
    for (double y : years) pts.push_back({y, 1.0 + y});
    const hg::TimeSeries s("x", pts);
    std::uniform_int_distribution<std::size_t> pick(0, years.size() - 2);
    const std::size_t i = pick(rng);
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i + 1, years.size() - 1)(rng);
    const auto r = hg::select_range(s, years[i], years[j]);
    ASSERT_EQ(r.size(), j - i + 1);
    for (std::size_t m = 0; m < r.size(); ++m) EXPECT_EQ(r[m], s[i + m]);
  }
}

TEST(ParseSeries, SerializeRoundTripIsIdentity) {
  std::mt19937_64 rng(11);
  std::lognormal_distribution<double> value(3.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto years = oracle::random_years(rng, 20, -500, 2000);
    std::vector<hg::Point> pts;
    for (double y : years) pts.push_back({y + 0.25, value(rng)});
    const hg::TimeSeries s("x", pts);
    const auto back = hg::parse_series(hg::serialize_series(s), "x", 1.0).series;
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(back[i].year, s[i].year);
      EXPECT_NEAR(back[i].value, s[i].value, 1e-12 * s[i].value);
    }
  }
}

TEST(LatinAmerica, ShippedCsvLoads) {
  const auto parsed =
      hg::load_series(HYPERGROWTH_DATA_DIR "/latin_america_gdp.csv", "Latin America", 0.001);
  const auto& s = parsed.series;
  ASSERT_EQ(s.size(), 9u);
  EXPECT_EQ(s.front().year, 1.0);
  EXPECT_DOUBLE_EQ(s.front().value, 2.240);
  EXPECT_DOUBLE_EQ(s[3].value, 3.763);  // AD 1600, after the decline
  // Fast window 1600-1870 covers the 1600, 1700, 1820 and 1870 rows.
  EXPECT_EQ(hg::select_range(s, 1600, 1870).size(), 4u);
  EXPECT_EQ(hg::select_range(s, 1, 1500).size(), 3u);
}

TEST(LoadSeries, MissingFileIsIoError) {
  EXPECT_EQ(kind_of([] { hg::load_series("/nonexistent/x.csv", "x", 1.0); }), hg::ErrorKind::io);
}

TEST(Summarize, ReportsSpanAndExtremes) {
  const auto parsed = hg::parse_series("year,value\n1,5\n2,\n3,2\n4,9\n", "x", 2.0);
  const auto s = hg::summarize(parsed, 2.0);
  EXPECT_EQ(s.n_points, 3u);
  EXPECT_EQ(s.first_year, 1.0);
  EXPECT_EQ(s.last_year, 4.0);
  EXPECT_EQ(s.min_value, 4.0);
  EXPECT_EQ(s.max_value, 18.0);
  EXPECT_EQ(s.skipped_rows, 1u);
}

TEST(ErrorKinds, MapToDocumentedExitCodes) {
  EXPECT_EQ(hg::exit_code(hg::ErrorKind::validation), 2);
  EXPECT_EQ(hg::exit_code(hg::ErrorKind::parse), 2);
  EXPECT_EQ(hg::exit_code(hg::ErrorKind::io), 3);
  EXPECT_EQ(hg::exit_code(hg::ErrorKind::numerical), 4);
}
