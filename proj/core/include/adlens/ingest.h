#ifndef ADLENS_INGEST_H_
#define ADLENS_INGEST_H_

// Ads-archive and GKG record types, parsers and pre-filters.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adlens/date.h"
#include "json.hpp"

namespace adlens {

// Tolerance on the sum of per-ad breakdown shares (platform rounding).
inline constexpr double kShareSumTolerance = 0.02;

struct RangedValue {
  std::uint64_t lower = 0;
  std::optional<std::uint64_t> upper;  // absent = open-ended

  bool operator==(const RangedValue &) const = default;
};

// Average of the end points; the closed end point for open-ended ranges.
double midpoint(const RangedValue &r);

enum class Gender { kMale, kFemale, kUnknown };

enum class AgeBucket { k13_17, k18_24, k25_34, k35_44, k45_54, k55_64, k65Plus };

inline constexpr std::array<Gender, 3> kGenders = {Gender::kMale, Gender::kFemale,
                                                   Gender::kUnknown};
inline constexpr std::array<AgeBucket, 7> kAgeBuckets = {
    AgeBucket::k13_17, AgeBucket::k18_24, AgeBucket::k25_34, AgeBucket::k35_44,
    AgeBucket::k45_54, AgeBucket::k55_64, AgeBucket::k65Plus};

std::string_view to_string(Gender g);
std::string_view to_string(AgeBucket a);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<AgeBucket> parse_age_bucket(std::string_view s);

struct DemographicCell {
  Gender gender = Gender::kUnknown;
  AgeBucket age = AgeBucket::k18_24;
  double share = 0.0;

  bool operator==(const DemographicCell &) const = default;
};

struct RegionShare {
  std::string region;
  double share = 0.0;

  bool operator==(const RegionShare &) const = default;
};

struct AdRecord {
  std::string id;
  std::string page_id;
  std::optional<std::string> page_name;
  std::string text;
  std::optional<std::string> title;
  std::optional<std::string> url;
  DateTime created;
  Date delivery_start;
  std::optional<Date> delivery_stop;  // absent = still running at collection
  RangedValue cost;
  RangedValue impressions;
  std::vector<DemographicCell> demographic_distribution;
  std::vector<RegionShare> region_distribution;
  DateTime snapshot_time;
  // Length in days of the campaign before period clipping; absent when the
  // window was never clipped.
  std::optional<std::int32_t> scheduled_days;

  bool operator==(const AdRecord &) const = default;
};

// Number of delivery days (inclusive), treating an open window as running
// until `collection_date`. Never less than 1.
std::int32_t delivery_days(const AdRecord &ad, Date collection_date);

// Fraction of the scheduled campaign that lies inside the (possibly clipped)
// delivery window.
double window_fraction(const AdRecord &ad, Date collection_date);

// midpoint(impressions) scaled by window_fraction.
double estimated_impressions(const AdRecord &ad, Date collection_date);

// Collection date of the archive snapshot the fixtures emulate.
inline constexpr Date kDefaultCollectionDate = Date(18351);  // 2020-03-30

// Parses one Ads-Library-shaped JSON object. Throws ParseError naming the
// offending field.
AdRecord parse_ad_record(const nlohmann::json &raw);
nlohmann::json serialize_ad_record(const AdRecord &ad);

// Parses one ads-archive line; errors carry `file` and `line`.
AdRecord parse_ad_line(std::string_view line, const std::string &file = {},
                       std::size_t line_no = 0);
std::string serialize_ad_line(const AdRecord &ad);

// Reads a newline-delimited ads archive. Blank lines are skipped.
std::vector<AdRecord> read_ads_file(const std::string &path);

struct NewsArticle {
  std::string record_id;
  DateTime published;
  std::string url;
  std::vector<std::string> themes;  // repetitions preserved

  Date date() const { return published.date(); }
  bool operator==(const NewsArticle &) const = default;
};

// GKG 2.1 layout: 0=GKGRECORDID, 1=DATE, 4=DocumentIdentifier, 8=V2Themes.
NewsArticle parse_gkg_line(std::string_view line);
std::string serialize_gkg_line(const NewsArticle &a);
std::vector<NewsArticle> read_gkg_file(const std::string &path);

class ThemeCatalog {
 public:
  explicit ThemeCatalog(const std::vector<std::string> &themes);

  // The migration themes of the reference news study, in GKG form.
  static ThemeCatalog Default();
  static ThemeCatalog Load(const std::string &path);

  bool contains(std::string_view theme) const;
  const std::set<std::string, std::less<>> &themes() const { return themes_; }

  // Upper-case, spaces and dashes to underscores.
  static std::string Normalize(std::string_view name);

 private:
  std::set<std::string, std::less<>> themes_;
};

class KeywordList {
 public:
  explicit KeywordList(std::vector<std::string> stems);
  static KeywordList Load(const std::string &path);

  const std::vector<std::string> &stems() const { return stems_; }
  bool matches_token(std::string_view lowercase_token) const;

 private:
  std::vector<std::string> stems_;
};

// Keeps ads with any text/title token starting with a stem; order preserved.
std::vector<AdRecord> keyword_filter(const std::vector<AdRecord> &ads,
                                     const KeywordList &k);

struct ThemeCount {
  std::int64_t migration_count = 0;
  std::int64_t total_count = 0;

  bool operator==(const ThemeCount &) const = default;
};

ThemeCount migration_theme_count(const NewsArticle &a, const ThemeCatalog &c);

// Reads a plain-text list: one entry per line, '#' comments, blanks ignored.
std::vector<std::string> read_list_file(const std::string &path);

}  // namespace adlens

#endif  // ADLENS_INGEST_H_
