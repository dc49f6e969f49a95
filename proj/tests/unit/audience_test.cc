#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "adlens/audience.h"
#include "adlens/delimited.h"
#include "adlens/error.h"
#include "adlens/random.h"
#include "adlens/store.h"
#include "support.h"

namespace adlens {
namespace {

AdRecord ad_with_cells(const std::string &id, std::uint64_t impressions,
                       std::vector<DemographicCell> cells) {
  AdRecord ad = testing::make_ad(id, Date(18000), Date(18000), impressions, impressions);
  ad.demographic_distribution = std::move(cells);
  return ad;
}

ImpressionMatrix two_gender(double male, double female) {
  ImpressionMatrix m;
  m.cells[0][1] = male;
  m.cells[1][1] = female;
  return m;
}

std::vector<std::string> twenty_regions() {
  return read_list_file(testing::data_path("config/italian_regions.txt"));
}

AdRecord covering_ad(const std::string &id, bool with_teens) {
  AdRecord ad = testing::make_ad(id, Date(18000), Date(18001), 1000, 1000);
  for (Gender g : {Gender::kMale, Gender::kFemale}) {
    for (AgeBucket a : kAgeBuckets) {
      if (a == AgeBucket::k13_17 && !with_teens) continue;
      ad.demographic_distribution.push_back({g, a, 1.0 / 14.0});
    }
  }
  for (const auto &r : twenty_regions()) ad.region_distribution.push_back({r, 0.05});
  return ad;
}

TEST(ImpressionMatrixTest, SingleCell) {
  const auto m = impressions_by_demographic(
      {ad_with_cells("a", 100, {{Gender::kFemale, AgeBucket::k35_44, 1.0}})});
  EXPECT_EQ(m.at(Gender::kFemale, AgeBucket::k35_44), 100.0);
  EXPECT_EQ(m.total(), 100.0);
  EXPECT_EQ(m.ads_count, 1u);
}

TEST(ImpressionMatrixTest, DuplicateAdsDouble) {
  const auto ad = ad_with_cells("a", 300, {{Gender::kMale, AgeBucket::k18_24, 0.25},
                                           {Gender::kFemale, AgeBucket::k65Plus, 0.75}});
  const auto one = impressions_by_demographic({ad});
  const auto two = impressions_by_demographic({ad, ad});
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t a = 0; a < 7; ++a) EXPECT_EQ(two.cells[g][a], 2.0 * one.cells[g][a]);
}

TEST(ImpressionMatrixTest, MatchesHandSummedOracle) {
  // Ten ads; cell (gender, age, share) lists written out explicitly.
  Rng rng(5);
  std::vector<AdRecord> ads;
  std::array<std::array<double, 7>, 3> oracle{};
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t lo = 1000 * (i + 1);
    const std::uint64_t hi = lo + 999;
    std::vector<DemographicCell> cells;
    double left = 1.0;
    for (int k = 0; k < 4; ++k) {
      const auto g = static_cast<Gender>((i + k) % 3);
      const auto a = static_cast<AgeBucket>((i * 3 + k) % 7);
      const double share = k == 3 ? left : std::round(left * 0.4 * 1000) / 1000;
      left -= share;
      cells.push_back({g, a, share});
      oracle[static_cast<std::size_t>(g)][static_cast<std::size_t>(a)] +=
          (static_cast<double>(lo) + static_cast<double>(hi)) / 2.0 * share;
    }
    ads.push_back(ad_with_cells(std::to_string(i), 0, cells));
    ads.back().impressions = {lo, hi};
  }
  const auto m = impressions_by_demographic(ads);
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t a = 0; a < 7; ++a) EXPECT_NEAR(m.cells[g][a], oracle[g][a], 1e-9);
  const auto no_unknown = impressions_by_demographic(ads, false);
  EXPECT_EQ(no_unknown.gender_total(Gender::kUnknown), 0.0);
  EXPECT_EQ(no_unknown.gender_total(Gender::kMale), m.gender_total(Gender::kMale));
}

TEST(ImpressionMatrixTest, AdditiveOverConcatenation) {
  const auto ads = dedup_ads(read_ads_file(testing::data_path("fixtures/ads.jsonl")));
  const std::vector<AdRecord> left(ads.begin(), ads.begin() + 120);
  const std::vector<AdRecord> right(ads.begin() + 120, ads.end());
  auto sum = impressions_by_demographic(left);
  sum += impressions_by_demographic(right);
  const auto whole = impressions_by_demographic(ads);
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t a = 0; a < 7; ++a)
      EXPECT_NEAR(sum.cells[g][a], whole.cells[g][a], 1e-9 * (1.0 + whole.cells[g][a]));
  EXPECT_EQ(sum.ads_count, whole.ads_count);
}

TEST(OddsTest, RatioExamplesAndReciprocity) {
  EXPECT_DOUBLE_EQ(*gender_odds_ratio(two_gender(60, 40), two_gender(50, 50)), 1.5);
  EXPECT_EQ(*gender_odds_ratio(two_gender(60, 40), two_gender(60, 40)), 1.0);
  EXPECT_DOUBLE_EQ(*gender_odds(two_gender(60, 40)), 1.5);
  EXPECT_FALSE(gender_odds_ratio(two_gender(60, 0), two_gender(50, 50)));
  EXPECT_FALSE(gender_odds_ratio(two_gender(60, 40), two_gender(0, 50)));
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto a = two_gender(1 + rng.uniform01() * 1e6, 1 + rng.uniform01() * 1e6);
    const auto b = two_gender(1 + rng.uniform01() * 1e6, 1 + rng.uniform01() * 1e6);
    EXPECT_NEAR(*gender_odds_ratio(a, b) * *gender_odds_ratio(b, a), 1.0, 4.5e-16);
  }
}

TEST(TargetingTest, ProfileCounts) {
  const RegionCatalog regions(twenty_regions());
  AdRecord ad = testing::make_ad("a", Date(0), Date(0), 1, 1);
  ad.region_distribution = {{"Lazio", 0.5}, {"Apulia", 0.3}, {"Sicily", 0.2}};
  ad.demographic_distribution = {{Gender::kMale, AgeBucket::k18_24, 0.7},
                                 {Gender::kMale, AgeBucket::k25_34, 0.3},
                                 {Gender::kUnknown, AgeBucket::k25_34, 0.0}};
  const auto p = detect_targeting(ad, regions);
  EXPECT_EQ(p.regions_reached, 3);
  EXPECT_EQ(p.age_buckets_reached.size(), 2u);
  EXPECT_EQ(p.gender_exclusive, GenderExclusive::kMaleOnly);
  EXPECT_FALSE(p.untargeted(regions.size()));

  ad.region_distribution.push_back({"Atlantide", 0.1});
  ad.region_distribution.push_back({"Atlantide", 0.1});
  EXPECT_EQ(detect_targeting(ad, regions).unknown_regions, (std::vector<std::string>{"Atlantide"}));
  EXPECT_EQ(detect_targeting(ad, regions).regions_reached, 3);
}

TEST(TargetingTest, EpsilonThreshold) {
  const RegionCatalog regions(twenty_regions());
  AdRecord ad = testing::make_ad("a", Date(0), Date(0), 1, 1);
  ad.region_distribution = {{"Lazio", 0.99}, {"Apulia", 0.01}};
  EXPECT_EQ(detect_targeting(ad, regions, 0.0).regions_reached, 2);
  EXPECT_EQ(detect_targeting(ad, regions, 0.02).regions_reached, 1);
}

TEST(TargetingTest, InvariantToBreakdownOrder) {
  const RegionCatalog regions(twenty_regions());
  Rng rng(8);
  for (const auto &ad : dedup_ads(read_ads_file(testing::data_path("fixtures/ads.jsonl")))) {
    AdRecord shuffled = ad;
    rng.shuffle(shuffled.region_distribution);
    rng.shuffle(shuffled.demographic_distribution);
    const auto a = detect_targeting(ad, regions);
    const auto b = detect_targeting(shuffled, regions);
    ASSERT_EQ(a.regions_reached, b.regions_reached);
    ASSERT_EQ(a.age_buckets_reached, b.age_buckets_reached);
    ASSERT_EQ(a.gender_exclusive, b.gender_exclusive);
    ASSERT_EQ(a.unknown_regions, b.unknown_regions);
  }
}

TEST(TargetingSummaryTest, ExtremesAndTeenExemption) {
  const RegionCatalog regions(twenty_regions());
  const auto all = targeting_summary({covering_ad("a", true), covering_ad("b", false)}, regions);
  EXPECT_EQ(all.targeted_share, 0.0);
  EXPECT_EQ(all.untargeted_share, 1.0);
  EXPECT_EQ(all.untargeted_ads, 2u);

  AdRecord one = covering_ad("c", true);
  one.region_distribution = {{"Lazio", 1.0}};
  const auto single = targeting_summary({one}, regions);
  EXPECT_EQ(single.targeted_share, 1.0);
  EXPECT_EQ(single.by_regions_reached[1].ads, 1u);
  EXPECT_EQ(single.by_regions_reached.size(), 21u);
  EXPECT_EQ(single.by_age_buckets_reached[7].ads, 1u);

  AdRecord no_seniors = covering_ad("d", true);
  std::erase_if(no_seniors.demographic_distribution,
                [](const auto &c) { return c.age == AgeBucket::k65Plus; });
  EXPECT_FALSE(detect_targeting(no_seniors, regions).untargeted(regions.size()));
}

TEST(TargetingSummaryTest, FixtureMatchesConstructionTruth) {
  const RegionCatalog regions(twenty_regions());
  const auto manifest = read_manifest(testing::data_path("fixtures/manifest.json"));
  const Dataset d = filter_period(load_dataset(manifest.paths), *manifest.period);
  std::map<std::string, bool> truth;
  for (const auto &row : read_delimited(testing::data_path("fixtures/truth.csv"), ',',
                                        {"ad_id", "kind", "untargeted"})) {
    truth[row.cols[0]] = row.cols[2] == "1";
  }
  const auto ads = dedup_ads(d.ads);
  for (const auto &ad : ads) {
    ASSERT_TRUE(truth.count(ad.id)) << ad.id;
    EXPECT_EQ(detect_targeting(ad, regions).untargeted(regions.size()), truth[ad.id]) << ad.id;
  }
  const auto s = targeting_summary(ads, regions);
  EXPECT_NEAR(s.targeted_share, 0.62, 0.005);
  EXPECT_EQ(s.diagnostics.size(), 1u);
}

TEST(NormalizeTest, AlgebraicCases) {
  const GroupDistribution a = {{"x", 1.0}, {"y", 1.0}, {"z", 1.0}};
  const GroupDistribution f = {{"x", 5.0}, {"y", 5.0}, {"z", 5.0}};
  const GroupDistribution p = {{"x", 0.2}, {"y", 0.3}, {"z", 0.5}};
  const auto out = normalize_to_population(a, f, p);
  for (const auto &[g, v] : p) EXPECT_NEAR(out.at(g), v, 1e-15);

  const GroupDistribution a2 = {{"x", 10.0}, {"y", 30.0}, {"z", 60.0}};
  const GroupDistribution proportional = {{"x", 2.0}, {"y", 3.0}, {"z", 5.0}};
  const auto same = normalize_to_population(a2, proportional, p);
  for (const auto &[g, v] : a2) EXPECT_NEAR(same.at(g), v / 100.0, 1e-15);
}

TEST(NormalizeTest, SkewedAudienceHandOracle) {
  // A = (40, 40, 20), F = (100, 400, 500), P = (0.25, 0.25, 0.5):
  // A*P/F = (0.1, 0.025, 0.02), total 0.145.
  const GroupDistribution a = {{"x", 40.0}, {"y", 40.0}, {"z", 20.0}};
  const GroupDistribution f = {{"x", 100.0}, {"y", 400.0}, {"z", 500.0}};
  const GroupDistribution p = {{"x", 0.25}, {"y", 0.25}, {"z", 0.5}};
  const auto out = normalize_to_population(a, f, p);
  EXPECT_NEAR(out.at("x"), 0.1 / 0.145, 1e-12);
  EXPECT_NEAR(out.at("y"), 0.025 / 0.145, 1e-12);
  EXPECT_NEAR(out.at("z"), 0.02 / 0.145, 1e-12);
}

TEST(NormalizeTest, InverseFactorsRecoverOriginal) {
  Rng rng(12);
  GroupDistribution a, f, p;
  double total = 0.0;
  for (int i = 0; i < 14; ++i) {
    const std::string g = "g" + std::to_string(i);
    a[g] = rng.uniform01() * 1000;
    f[g] = 10 + rng.uniform01() * 1000;
    p[g] = rng.uniform01();
    total += a[g];
  }
  const auto out = normalize_to_population(a, f, p);
  GroupDistribution back;
  double back_total = 0.0;
  for (const auto &[g, v] : out) {
    back[g] = v * f[g] / p[g];
    back_total += back[g];
  }
  for (const auto &[g, v] : a) EXPECT_NEAR(back[g] / back_total, v / total, 1e-12);
}

TEST(NormalizeTest, Errors) {
  const GroupDistribution a = {{"male:18-24", 5.0}};
  try {
    normalize_to_population(a, {{"male:18-24", 0.0}}, {{"male:18-24", 0.1}});
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("male:18-24"), std::string::npos);
  }
  EXPECT_THROW(normalize_to_population(a, {{"male:18-24", 3.0}}, {}), DataError);
  EXPECT_THROW(normalize_to_population({{"x", 0.0}}, {}, {}), NumericError);
}

TEST(CoarsenTest, Examples) {
  EXPECT_EQ(*coarsen_age_buckets({0, 0, 5, 0, 0, 0, 0}), (std::array<double, 3>{1, 0, 0}));
  const auto uniform = *coarsen_age_buckets({0, 1, 1, 1, 1, 1, 1});
  EXPECT_NEAR(uniform[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(uniform[1], 1.0 / 2.0, 1e-15);
  EXPECT_NEAR(uniform[2], 1.0 / 6.0, 1e-15);
  const auto teen = *coarsen_age_buckets({0.1, 0.15, 0.15, 0.15, 0.15, 0.15, 0.15});
  EXPECT_NEAR(teen[0], 0.3 / 0.9, 1e-15);
  EXPECT_NEAR(teen[1], 0.45 / 0.9, 1e-15);
  EXPECT_NEAR(teen[2], 0.15 / 0.9, 1e-15);
  EXPECT_FALSE(coarsen_age_buckets({1, 0, 0, 0, 0, 0, 0}));
}

TEST(CoarsenTest, PreservesRelativeMassWithinBuckets) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 7> d;
    for (auto &v : d) v = rng.uniform01();
    const auto c = *coarsen_age_buckets(d);
    const double adult = d[1] + d[2] + d[3] + d[4] + d[5] + d[6];
    EXPECT_NEAR(c[0], (d[1] + d[2]) / adult, 1e-14);
    EXPECT_NEAR(c[1], (d[3] + d[4] + d[5]) / adult, 1e-14);
    EXPECT_NEAR(c[2], d[6] / adult, 1e-14);
    EXPECT_NEAR(c[0] + c[1] + c[2], 1.0, 1e-15);
  }
}

TEST(SurveyTest, TotalVariationAndFlags) {
  const std::array<double, 3> a = {0.2, 0.5, 0.3};
  EXPECT_EQ(total_variation(a, a), 0.0);
  EXPECT_EQ(total_variation({1, 0, 0}, {0, 0, 1}), 1.0);
  const auto rows = compare_to_survey({{"PD", a}, {"Lega", a}}, {{"PD", a}}, {{"PD", a}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].party, "Lega");
  EXPECT_TRUE(rows[0].flagged);
  EXPECT_FALSE(rows[0].tv_all_vs_survey);
  EXPECT_FALSE(rows[1].flagged);
  EXPECT_EQ(*rows[1].tv_all_vs_survey, 0.0);
}

TEST(AudienceFilesTest, FixtureFilesAndValidation) {
  const auto population = read_population_shares(testing::data_path("fixtures/population.csv"));
  double total = 0.0;
  for (const auto &[g, v] : population) total += v;
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_EQ(population.size(), 14u);
  const auto audience = read_potential_audience(testing::data_path("fixtures/potential_audience.csv"));
  EXPECT_EQ(audience.size(), 5u);
  const auto survey = read_survey(testing::data_path("fixtures/survey.csv"));
  EXPECT_EQ(survey.at("PD"), (std::array<double, 3>{0.14, 0.49, 0.37}));

  testing::TempDir dir("aud");
  testing::write_file(dir.file("p.csv"), "gender,age,share\nmale,18-24,0.5\nfemale,18-24,0.4\n");
  EXPECT_THROW(read_population_shares(dir.file("p.csv")), DataError);
  testing::write_file(dir.file("s.csv"), "party,bucket,share\nPD,18-34,0.5\nPD,35-64,0.4\nPD,65+,0.2\n");
  EXPECT_THROW(read_survey(dir.file("s.csv")), DataError);
  testing::write_file(dir.file("s2.csv"), "party,bucket,share\nPD,18-30,1\n");
  EXPECT_THROW(read_survey(dir.file("s2.csv")), ParseError);
}

TEST(GroupTest, KeysAndMarginals) {
  EXPECT_EQ(group_key(Gender::kMale, AgeBucket::k18_24), "male:18-24");
  ImpressionMatrix m;
  m.cells[0][1] = 3;
  m.cells[1][1] = 4;
  m.cells[2][1] = 100;
  const auto g = matrix_groups(m);
  EXPECT_EQ(g.size(), 14u);
  const auto marginal = age_marginal(g);
  EXPECT_EQ(marginal[1], 7.0);
  EXPECT_THROW(age_marginal({{"male", 1.0}}), ValidationError);
}

}  // namespace
}  // namespace adlens
