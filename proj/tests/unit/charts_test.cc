#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "adlens/charts.h"
#include "adlens/error.h"
#include "adlens/random.h"
#include "support.h"

namespace adlens {
namespace {

std::size_t idx(Gender g) { return static_cast<std::size_t>(g); }
std::size_t idx(AgeBucket a) { return static_cast<std::size_t>(a); }

ImpressionMatrix random_matrix(std::uint64_t seed) {
  Rng rng(seed);
  ImpressionMatrix m;
  for (Gender g : {Gender::kMale, Gender::kFemale})
    for (AgeBucket a : kAgeBuckets)
      m.cells[idx(g)][idx(a)] = rng.uniform01() < 0.2 ? 0.0 : std::floor(rng.uniform01() * 1e6);
  m.cells[idx(Gender::kMale)][idx(AgeBucket::k25_34)] = 2.5e6;
  return m;
}

TEST(PyramidChartTest, SingleCellDrawsOneBar) {
  ImpressionMatrix m;
  m.cells[idx(Gender::kFemale)][idx(AgeBucket::k35_44)] = 1234.5;
  const std::string svg = render_pyramid(m, "one cell");
  const auto bars = testing::svg_elements(svg, "rect");
  std::vector<std::map<std::string, std::string>> drawn;
  for (const auto &b : bars)
    if (b.count("data-value")) drawn.push_back(b);
  ASSERT_EQ(drawn.size(), 1u);
  EXPECT_EQ(drawn[0].at("data-gender"), "female");
  EXPECT_EQ(drawn[0].at("data-age"), "35-44");
  EXPECT_EQ(std::stod(drawn[0].at("data-value")), 1234.5);
}

TEST(PyramidChartTest, WidthsFollowRecordedScale) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ImpressionMatrix m = random_matrix(seed);
    const std::string svg = render_pyramid(m, "pyramid");
    EXPECT_EQ(svg, render_pyramid(m, "pyramid"));
    const double scale = std::stod(testing::svg_root(svg).at("data-scale"));
    const double centre = std::stod(testing::svg_root(svg).at("data-centre"));
    std::size_t bars = 0;
    for (const auto &b : testing::svg_elements(svg, "rect")) {
      if (!b.count("data-value")) continue;
      ++bars;
      const double v = std::stod(b.at("data-value"));
      const auto g = parse_gender(b.at("data-gender"));
      const auto a = parse_age_bucket(b.at("data-age"));
      ASSERT_TRUE(g && a);
      EXPECT_EQ(v, m.at(*g, *a));
      const double w = std::stod(b.at("width"));
      EXPECT_NEAR(w, v * scale, 0.005 * v * scale + 1e-3);
      const double x = std::stod(b.at("x"));
      if (*g == Gender::kMale)
        EXPECT_NEAR(x + w, centre, 2e-3);
      else
        EXPECT_NEAR(x, centre, 1e-9);
    }
    std::size_t positive = 0;
    for (Gender g : {Gender::kMale, Gender::kFemale})
      for (AgeBucket a : kAgeBuckets) positive += m.at(g, a) > 0.0;
    EXPECT_EQ(bars, positive);
  }
}

TEST(PyramidChartTest, EmptyMatrixRejected) {
  EXPECT_THROW(render_pyramid(ImpressionMatrix{}, "empty"), ValidationError);
}

TEST(SeriesChartTest, PolylinesCarryValues) {
  const Date start = Date::FromYmd(2019, 9, 1);
  const TimeSeries a("news", start, {0.1, 0.0, 0.35, 0.2, 1.0 / 3.0});
  const TimeSeries b("impressions", start, {100, 250, 0, 40, 75.5});
  const std::vector<EventMarker> events = {{start + 2, "vote <A & B>"}, {start + 30, "outside"}};
  const std::string svg = render_series({a, b}, events, "attention");
  EXPECT_EQ(svg, render_series({a, b}, events, "attention"));
  const auto root = testing::svg_root(svg);
  EXPECT_EQ(root.at("data-start"), "2019-09-01");
  EXPECT_EQ(root.at("data-days"), "5");
  const auto lines = testing::svg_elements(svg, "polyline");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].at("data-series"), "news");
  EXPECT_EQ(testing::parse_number_list(lines[0].at("data-values")), a.values());
  EXPECT_EQ(testing::parse_number_list(lines[1].at("data-values")), b.values());
  EXPECT_EQ(std::stod(lines[1].at("data-max")), 250.0);
  EXPECT_EQ(testing::parse_number_list(lines[1].at("points")).size(), 10u);
  const auto marks = testing::svg_elements(svg, "line");
  std::vector<std::map<std::string, std::string>> ev;
  for (const auto &l : marks)
    if (l.count("data-date")) ev.push_back(l);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].at("data-label"), "vote <A & B>");
  EXPECT_EQ(ev[0].at("data-date"), "2019-09-03");
}

TEST(SeriesChartTest, Preconditions) {
  const Date start = Date::FromYmd(2019, 9, 1);
  EXPECT_THROW(render_series({}, {}, "none"), ValidationError);
  EXPECT_THROW(render_series({TimeSeries("a", start, {1, 2}), TimeSeries("b", start + 1, {1, 2})},
                             {}, "misaligned"),
               ValidationError);
}

TEST(GrangerChartTest, SignificantLagsCircled) {
  const auto [x, y] = testing::planted_granger_pair(7);
  const auto fwd = granger_test(x, y, {.max_lag = 4});
  const auto back = granger_test(y, x, {.max_lag = 4});
  const std::string svg = render_granger({fwd, back}, "granger");
  const auto lines = testing::svg_elements(svg, "polyline");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].at("data-direction"), "x->y");
  const auto values = testing::parse_number_list(lines[0].at("data-values"));
  ASSERT_EQ(values.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(values[i], fwd.lags[i].f_statistic);
  std::size_t expected = fwd.flagged_lags().size() + back.flagged_lags().size();
  EXPECT_EQ(testing::svg_elements(svg, "circle").size(), expected);
  EXPECT_THROW(render_granger({}, "none"), ValidationError);
}

TEST(XmlEscapeTest, EscapesMarkup) {
  EXPECT_EQ(xml_escape("a<b>&\"c'"), "a&lt;b&gt;&amp;&quot;c&apos;");
  EXPECT_EQ(xml_escape("plain"), "plain");
}

TEST(EventMarkersTest, ReadsFixture) {
  const auto events = read_event_markers(testing::data_path("fixtures/events.csv"));
  ASSERT_FALSE(events.empty());
  for (std::size_t i = 1; i < events.size(); ++i) EXPECT_LE(events[i - 1].date, events[i].date);
}

}  // namespace
}  // namespace adlens
