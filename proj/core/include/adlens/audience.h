#ifndef ADLENS_AUDIENCE_H_
#define ADLENS_AUDIENCE_H_

// Demographic impression analytics.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adlens/ingest.h"

namespace adlens {

// Estimated impressions per (gender, age bucket), summed over ads.
struct ImpressionMatrix {
  std::array<std::array<double, 7>, 3> cells{};  // [gender][age]
  std::size_t ads_count = 0;

  double at(Gender g, AgeBucket a) const {
    return cells[static_cast<std::size_t>(g)][static_cast<std::size_t>(a)];
  }
  double gender_total(Gender g) const;
  std::array<double, 7> age_totals(bool include_unknown = true) const;
  double total() const;

  ImpressionMatrix &operator+=(const ImpressionMatrix &other);
};

// cell = sum over ads of estimated_impressions(ad) * share(cell).
ImpressionMatrix impressions_by_demographic(const std::vector<AdRecord> &ads,
                                            bool include_unknown = true,
                                            Date collection_date = kDefaultCollectionDate);

// male / female; nullopt when either total is zero.
std::optional<double> gender_odds(const ImpressionMatrix &m);

// (male_a / female_a) / (male_b / female_b); nullopt when any of the four
// totals is zero.
std::optional<double> gender_odds_ratio(const ImpressionMatrix &a, const ImpressionMatrix &b);

// The canonical region list, loaded from a one-name-per-line file.
class RegionCatalog {
 public:
  explicit RegionCatalog(std::vector<std::string> names);
  static RegionCatalog Load(const std::string &path);

  bool contains(const std::string &name) const { return names_.count(name) > 0; }
  std::size_t size() const { return names_.size(); }

 private:
  std::set<std::string> names_;
};

enum class GenderExclusive { kMaleOnly, kFemaleOnly, kNone };
std::string_view to_string(GenderExclusive g);

struct TargetingProfile {
  int regions_reached = 0;
  std::set<AgeBucket> age_buckets_reached;
  GenderExclusive gender_exclusive = GenderExclusive::kNone;
  std::vector<std::string> unknown_regions;  // diagnostics, not counted

  // All canonical regions, every age bucket except possibly 13-17, and both
  // genders.
  bool untargeted(std::size_t canonical_regions) const;
};

// A region, bucket or gender counts as reached when its share exceeds
// `epsilon`.
TargetingProfile detect_targeting(const AdRecord &ad, const RegionCatalog &regions,
                                  double epsilon = 0.0);

struct ReachBin {
  std::size_t ads = 0;
  double impressions = 0.0;
};

struct TargetingSummary {
  double targeted_impressions = 0.0;
  double untargeted_impressions = 0.0;
  double targeted_share = 0.0;    // of all impressions
  double untargeted_share = 0.0;
  std::size_t targeted_ads = 0;
  std::size_t untargeted_ads = 0;
  std::vector<ReachBin> by_regions_reached;      // index 0..catalog size
  std::vector<ReachBin> by_age_buckets_reached;  // index 0..7
  std::map<GenderExclusive, ReachBin> by_gender;
  std::vector<std::string> diagnostics;
};

TargetingSummary targeting_summary(const std::vector<AdRecord> &ads, const RegionCatalog &regions,
                                   double epsilon = 0.0,
                                   Date collection_date = kDefaultCollectionDate);

// Demographic group name -> value. Groups are "gender:age" cells such as
// "male:18-24", or coarse age buckets such as "18-34".
using GroupDistribution = std::map<std::string, double>;

std::string group_key(Gender g, AgeBucket a);

// Male and female cells of a matrix keyed by group_key.
GroupDistribution matrix_groups(const ImpressionMatrix &m);

// A'_g = A_g * P_g / F_g, renormalized to sum 1. Throws DataError naming the
// group when F_g <= 0 while A_g > 0, or when P lacks a group of A.
GroupDistribution normalize_to_population(const GroupDistribution &impressions,
                                          const GroupDistribution &potential_audience,
                                          const GroupDistribution &population);

inline constexpr std::array<const char *, 3> kCoarseBuckets = {"18-34", "35-64", "65+"};

// 18-24 + 25-34, 35-44 + 45-54 + 55-64, 65+; 13-17 dropped; renormalized.
// nullopt when nothing remains.
std::optional<std::array<double, 3>> coarsen_age_buckets(const std::array<double, 7> &d);

// Sums a "gender:age" distribution over genders into 7 age buckets.
std::array<double, 7> age_marginal(const GroupDistribution &cells);

double total_variation(const std::array<double, 3> &a, const std::array<double, 3> &b);

struct SurveyComparisonRow {
  std::string party;
  std::optional<std::array<double, 3>> ads_all;
  std::optional<std::array<double, 3>> ads_migration;
  std::optional<std::array<double, 3>> survey;
  std::optional<double> tv_all_vs_survey;
  std::optional<double> tv_migration_vs_survey;
  std::optional<double> tv_all_vs_migration;
  bool flagged = false;  // party missing from at least one source
};

std::vector<SurveyComparisonRow> compare_to_survey(
    const std::map<std::string, std::array<double, 3>> &ads_all,
    const std::map<std::string, std::array<double, 3>> &ads_migration,
    const std::map<std::string, std::array<double, 3>> &survey);

// Population shares: CSV "gender,age,share" (header required).
GroupDistribution read_population_shares(const std::string &path);
// Potential audience: CSV "party,gender,age,users".
std::map<std::string, GroupDistribution> read_potential_audience(const std::string &path);
// Survey: CSV "party,bucket,share" over the three coarse buckets.
std::map<std::string, std::array<double, 3>> read_survey(const std::string &path);

}  // namespace adlens

#endif  // ADLENS_AUDIENCE_H_
