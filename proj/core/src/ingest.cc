#include "adlens/ingest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "adlens/error.h"
#include "adlens/text.h"

namespace adlens {

using nlohmann::json;

double midpoint(const RangedValue &r) {
  if (!r.upper) return static_cast<double>(r.lower);
  return (static_cast<double>(r.lower) + static_cast<double>(*r.upper)) / 2.0;
}

namespace {

constexpr std::array<std::string_view, 3> kGenderNames = {"male", "female",
                                                          "unknown"};
constexpr std::array<std::string_view, 7> kAgeNames = {
    "13-17", "18-24", "25-34", "35-44", "45-54", "55-64", "65+"};

}  // namespace

std::string_view to_string(Gender g) {
  return kGenderNames[static_cast<std::size_t>(g)];
}

std::string_view to_string(AgeBucket a) {
  return kAgeNames[static_cast<std::size_t>(a)];
}

std::optional<Gender> parse_gender(std::string_view s) {
  for (std::size_t i = 0; i < kGenderNames.size(); ++i) {
    if (kGenderNames[i] == s) return static_cast<Gender>(i);
  }
  return std::nullopt;
}

std::optional<AgeBucket> parse_age_bucket(std::string_view s) {
  for (std::size_t i = 0; i < kAgeNames.size(); ++i) {
    if (kAgeNames[i] == s) return static_cast<AgeBucket>(i);
  }
  return std::nullopt;
}

std::int32_t delivery_days(const AdRecord &ad, Date collection_date) {
  const Date stop = ad.delivery_stop.value_or(std::max(collection_date, ad.delivery_start));
  return std::max<std::int32_t>(1, stop - ad.delivery_start + 1);
}

double window_fraction(const AdRecord &ad, Date collection_date) {
  if (!ad.scheduled_days) return 1.0;
  return static_cast<double>(delivery_days(ad, collection_date)) /
         static_cast<double>(*ad.scheduled_days);
}

double estimated_impressions(const AdRecord &ad, Date collection_date) {
  return midpoint(ad.impressions) * window_fraction(ad, collection_date);
}

// ---------------------------------------------------------------------------
// Ads archive.

namespace {

const json *find(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string require_string(const json &obj, const char *key) {
  const json *v = find(obj, key);
  if (!v) throw ParseError(key, "missing mandatory field");
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer() || v->is_number_unsigned()) return v->dump();
  throw ParseError(key, "expected a string");
}

std::optional<std::string> optional_string(const json &obj, const char *key) {
  const json *v = find(obj, key);
  if (!v) return std::nullopt;
  if (!v->is_string()) throw ParseError(key, "expected a string");
  return v->get<std::string>();
}

std::uint64_t parse_count(const json &v, const std::string &field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto n = v.get<std::int64_t>();
    if (n < 0) throw ParseError(field, "negative count");
    return static_cast<std::uint64_t>(n);
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ParseError(field, "not a non-negative integer: '" + s + "'");
    return n;
  }
  throw ParseError(field, "expected an integer");
}

double parse_share(const json &v, const std::string &field) {
  double x;
  if (v.is_number()) {
    x = v.get<double>();
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    char *end = nullptr;
    x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw ParseError(field, "not a decimal number: '" + s + "'");
  } else {
    throw ParseError(field, "expected a number");
  }
  if (!std::isfinite(x)) throw ParseError(field, "not finite");
  return x;
}

RangedValue parse_range(const json &obj, const char *key, bool mandatory) {
  const json *v = find(obj, key);
  if (!v) {
    if (mandatory) throw ParseError(key, "missing mandatory field");
    return {};
  }
  if (!v->is_object()) throw ParseError(key, "expected an object with bounds");
  RangedValue r;
  const json *lo = find(*v, "lower_bound");
  if (!lo) throw ParseError(std::string(key) + ".lower_bound", "missing");
  r.lower = parse_count(*lo, std::string(key) + ".lower_bound");
  if (const json *hi = find(*v, "upper_bound")) {
    r.upper = parse_count(*hi, std::string(key) + ".upper_bound");
    if (*r.upper < r.lower)
      throw ParseError(key, "upper_bound below lower_bound");
  }
  return r;
}

Date parse_date_field(const json &obj, const char *key) {
  const std::string s = require_string(obj, key);
  if (auto d = Date::Parse(s)) return *d;
  if (auto dt = DateTime::Parse(s)) return dt->date();
  throw ParseError(key, "malformed date '" + s + "'");
}

DateTime parse_datetime_field(const json &obj, const char *key) {
  const std::string s = require_string(obj, key);
  if (auto dt = DateTime::Parse(s)) return *dt;
  throw ParseError(key, "malformed date-time '" + s + "'");
}

void check_share(double share, const std::string &field, const std::string &what) {
  if (share < 0.0 || share > 1.0) {
    std::ostringstream msg;
    msg << "share " << share << " outside [0,1] for cell " << what;
    throw ParseError(field, msg.str());
  }
}

json range_to_json(const RangedValue &r) {
  json j = json::object();
  j["lower_bound"] = std::to_string(r.lower);
  if (r.upper) j["upper_bound"] = std::to_string(*r.upper);
  return j;
}

}  // namespace

AdRecord parse_ad_record(const json &raw) {
  if (!raw.is_object()) throw ParseError("", "ad record is not a JSON object");
  AdRecord ad;
  ad.id = require_string(raw, "id");
  ad.page_id = require_string(raw, "page_id");
  ad.page_name = optional_string(raw, "page_name");
  ad.text = optional_string(raw, "ad_creative_body").value_or("");
  ad.title = optional_string(raw, "ad_creative_link_title");
  ad.url = optional_string(raw, "ad_snapshot_url");
  ad.impressions = parse_range(raw, "impressions", true);
  ad.cost = parse_range(raw, "spend", false);
  ad.delivery_start = parse_date_field(raw, "ad_delivery_start_time");
  if (find(raw, "ad_delivery_stop_time"))
    ad.delivery_stop = parse_date_field(raw, "ad_delivery_stop_time");
  if (ad.delivery_stop && *ad.delivery_stop < ad.delivery_start)
    throw ParseError("ad_delivery_stop_time", "stop precedes start");
  ad.created = find(raw, "ad_creation_time")
                   ? parse_datetime_field(raw, "ad_creation_time")
                   : DateTime(static_cast<std::int64_t>(ad.delivery_start.days()) * 86400);
  ad.snapshot_time = find(raw, "snapshot_time")
                         ? parse_datetime_field(raw, "snapshot_time")
                         : ad.created;

  if (const json *demo = find(raw, "demographic_distribution")) {
    if (!demo->is_array())
      throw ParseError("demographic_distribution", "expected an array");
    double sum = 0.0;
    for (std::size_t i = 0; i < demo->size(); ++i) {
      const json &c = (*demo)[i];
      const std::string field = "demographic_distribution[" + std::to_string(i) + "]";
      if (!c.is_object()) throw ParseError(field, "expected an object");
      const json *g = find(c, "gender");
      const json *a = find(c, "age");
      const json *p = find(c, "percentage");
      if (!g || !a || !p || !g->is_string() || !a->is_string())
        throw ParseError(field, "needs gender, age and percentage");
      DemographicCell cell;
      auto gender = parse_gender(g->get<std::string>());
      auto age = parse_age_bucket(a->get<std::string>());
      if (!gender) throw ParseError(field, "unknown gender '" + g->get<std::string>() + "'");
      if (!age) throw ParseError(field, "unknown age bucket '" + a->get<std::string>() + "'");
      cell.gender = *gender;
      cell.age = *age;
      cell.share = parse_share(*p, field);
      check_share(cell.share, field,
                  std::string(to_string(cell.gender)) + " " + std::string(to_string(cell.age)));
      for (const auto &prev : ad.demographic_distribution) {
        if (prev.gender == cell.gender && prev.age == cell.age)
          throw ParseError(field, "duplicate (gender, age) cell");
      }
      sum += cell.share;
      ad.demographic_distribution.push_back(cell);
    }
    if (sum > 1.0 + kShareSumTolerance)
      throw ParseError("demographic_distribution", "shares sum to " + std::to_string(sum));
  }

  if (const json *regions = find(raw, "region_distribution")) {
    if (!regions->is_array())
      throw ParseError("region_distribution", "expected an array");
    double sum = 0.0;
    for (std::size_t i = 0; i < regions->size(); ++i) {
      const json &c = (*regions)[i];
      const std::string field = "region_distribution[" + std::to_string(i) + "]";
      const json *r = find(c, "region");
      const json *p = find(c, "percentage");
      if (!r || !p || !r->is_string()) throw ParseError(field, "needs region and percentage");
      RegionShare rs{r->get<std::string>(), parse_share(*p, field)};
      check_share(rs.share, field, rs.region);
      sum += rs.share;
      ad.region_distribution.push_back(std::move(rs));
    }
    if (sum > 1.0 + kShareSumTolerance)
      throw ParseError("region_distribution", "shares sum to " + std::to_string(sum));
  }

  if (const json *sd = find(raw, "adlens_scheduled_days")) {
    const auto n = parse_count(*sd, "adlens_scheduled_days");
    if (n < 1) throw ParseError("adlens_scheduled_days", "must be positive");
    ad.scheduled_days = static_cast<std::int32_t>(n);
  }
  return ad;
}

json serialize_ad_record(const AdRecord &ad) {
  json j = json::object();
  j["id"] = ad.id;
  j["page_id"] = ad.page_id;
  if (ad.page_name) j["page_name"] = *ad.page_name;
  j["ad_creative_body"] = ad.text;
  if (ad.title) j["ad_creative_link_title"] = *ad.title;
  if (ad.url) j["ad_snapshot_url"] = *ad.url;
  j["ad_creation_time"] = ad.created.ToString();
  j["ad_delivery_start_time"] = ad.delivery_start.ToString();
  if (ad.delivery_stop) j["ad_delivery_stop_time"] = ad.delivery_stop->ToString();
  j["spend"] = range_to_json(ad.cost);
  j["impressions"] = range_to_json(ad.impressions);
  json demo = json::array();
  for (const auto &c : ad.demographic_distribution) {
    demo.push_back({{"gender", std::string(to_string(c.gender))},
                    {"age", std::string(to_string(c.age))},
                    {"percentage", c.share}});
  }
  j["demographic_distribution"] = std::move(demo);
  json regions = json::array();
  for (const auto &r : ad.region_distribution) {
    regions.push_back({{"region", r.region}, {"percentage", r.share}});
  }
  j["region_distribution"] = std::move(regions);
  j["snapshot_time"] = ad.snapshot_time.ToString();
  if (ad.scheduled_days) j["adlens_scheduled_days"] = *ad.scheduled_days;
  return j;
}

AdRecord parse_ad_line(std::string_view line, const std::string &file,
                       std::size_t line_no) {
  json raw;
  try {
    raw = json::parse(line);
  } catch (const json::parse_error &e) {
    throw ParseError("", std::string("invalid JSON record: ") + e.what(), file, line_no);
  }
  try {
    return parse_ad_record(raw);
  } catch (const ParseError &e) {
    throw e.At(file, line_no);
  }
}

std::string serialize_ad_line(const AdRecord &ad) {
  return serialize_ad_record(ad).dump(-1, ' ', false, json::error_handler_t::strict);
}

namespace {

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

}  // namespace

std::vector<AdRecord> read_ads_file(const std::string &path) {
  auto in = open_input(path);
  std::vector<AdRecord> ads;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ads.push_back(parse_ad_line(line, path, line_no));
  }
  return ads;
}

// ---------------------------------------------------------------------------
// GKG.

namespace {
constexpr std::size_t kGkgFieldCount = 27;
constexpr std::size_t kGkgMinFields = 9;
}  // namespace

NewsArticle parse_gkg_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = split(line, '\t');
  if (fields.size() < kGkgMinFields)
    throw ParseError("", "expected at least 9 tab-separated fields, got " +
                             std::to_string(fields.size()));
  NewsArticle a;
  a.record_id = fields[0];
  auto stamp = DateTime::ParseCompact(fields[1]);
  if (!stamp) throw ParseError("DATE", "unparseable date '" + fields[1] + "'");
  a.published = *stamp;
  a.url = fields[4];
  if (!fields[8].empty()) {
    for (const auto &entry : split(fields[8], ';')) {
      if (entry.empty()) continue;
      const auto comma = entry.find(',');
      a.themes.push_back(entry.substr(0, comma));
    }
  }
  return a;
}

std::string serialize_gkg_line(const NewsArticle &a) {
  std::vector<std::string> fields(kGkgFieldCount);
  fields[0] = a.record_id;
  fields[1] = a.published.ToCompact();
  fields[2] = "1";
  fields[4] = a.url;
  std::string themes;
  for (std::size_t i = 0; i < a.themes.size(); ++i) {
    if (i > 0) themes += ';';
    themes += a.themes[i] + "," + std::to_string(i);
  }
  fields[8] = themes;
  return join(fields, "\t");
}

std::vector<NewsArticle> read_gkg_file(const std::string &path) {
  auto in = open_input(path);
  std::vector<NewsArticle> articles;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      articles.push_back(parse_gkg_line(line));
    } catch (const ParseError &e) {
      throw e.At(path, line_no);
    }
  }
  return articles;
}

// ---------------------------------------------------------------------------
// Catalogs.

std::vector<std::string> read_list_file(const std::string &path) {
  auto in = open_input(path);
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    std::string_view entry = trim(std::string_view(line).substr(0, hash));
    if (!entry.empty()) entries.emplace_back(entry);
  }
  return entries;
}

std::string ThemeCatalog::Normalize(std::string_view name) {
  std::string out;
  bool pending_sep = false;
  for (char c : trim(name)) {
    if (c == ' ' || c == '-' || c == '_' || c == '\t') {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) out += '_';
    pending_sep = false;
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

ThemeCatalog::ThemeCatalog(const std::vector<std::string> &themes) {
  for (const auto &t : themes) {
    auto n = Normalize(t);
    if (!n.empty()) themes_.insert(std::move(n));
  }
  if (themes_.empty()) throw ValidationError("theme catalog is empty");
}

ThemeCatalog ThemeCatalog::Default() {
  return ThemeCatalog({
      "EPU_CATS_MIGRATION_FEAR_FEAR",
      "EPU_CATS_MIGRATION_FEAR_MIGRATION",
      "WB_2836_MIGRATION_POLICIES_AND_JOBS",
      "IMMIGRATION",
      "WB_2837_IMMIGRATION",
      "TAX_FNCACT_IMMIGRANTS",
      "WB_2844_EMIGRATION",
      "TAX_FNCACT_IMMIGRANT",
      "DISCRIMINATION_IMMIGRATION_XENOPHOBIC",
      "DISCRIMINATION_IMMIGRATION_XENOPHOBIA",
      "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRATION",
      "DISCRIMINATION_IMMIGRATION_ANTIIMMIGRANT",
      "DISCRIMINATION_IMMIGRATION_ULTRANATIONALIST",
      "HUMAN_RIGHTS_ABUSES_FORCED_MIGRATION",
      "SOC_MASSMIGRATION",
      "DISCRIMINATION_IMMIGRATION_AGAINST_IMMIGRANTS",
      "WB_2204_IN_MIGRATION",
      "TAX_FNCACT_MIGRANT_WORKER",
      "WB_2729_MIGRANT_WORKERS",
      "DISCRIMINATION_IMMIGRATION_ANTI_IMMIGRATION",
      "DISCRIMINATION_IMMIGRATION_ULTRA_NATIONALIST",
      "DISCRIMINATION_IMMIGRATION_ATTACKS_AGAINST_IMMIGRANTS",
      "WB_1602_RETURNING_MIGRANTS",
  });
}

ThemeCatalog ThemeCatalog::Load(const std::string &path) {
  return ThemeCatalog(read_list_file(path));
}

bool ThemeCatalog::contains(std::string_view theme) const {
  return themes_.find(theme) != themes_.end();
}

KeywordList::KeywordList(std::vector<std::string> stems) : stems_(std::move(stems)) {
  if (stems_.empty()) throw ValidationError("keyword list is empty");
  for (const auto &s : stems_) {
    if (s.empty() || utf8_lower(s) != s ||
        s.find_first_of(" \t\r\n") != std::string::npos)
      throw ValidationError("keyword stem must be lowercase without whitespace: '" + s + "'");
  }
}

KeywordList KeywordList::Load(const std::string &path) {
  std::vector<std::string> stems;
  for (auto &s : read_list_file(path)) stems.push_back(utf8_lower(s));
  return KeywordList(std::move(stems));
}

bool KeywordList::matches_token(std::string_view token) const {
  return std::any_of(stems_.begin(), stems_.end(),
                     [&](const std::string &s) { return token.starts_with(s); });
}

std::vector<AdRecord> keyword_filter(const std::vector<AdRecord> &ads,
                                     const KeywordList &k) {
  std::vector<AdRecord> kept;
  auto matches = [&](std::string_view text) {
    for (const auto &tok : word_tokens(text)) {
      if (k.matches_token(tok)) return true;
    }
    return false;
  };
  for (const auto &ad : ads) {
    if (matches(ad.text) || (ad.title && matches(*ad.title))) kept.push_back(ad);
  }
  return kept;
}

ThemeCount migration_theme_count(const NewsArticle &a, const ThemeCatalog &c) {
  ThemeCount count;
  count.total_count = static_cast<std::int64_t>(a.themes.size());
  for (const auto &t : a.themes) {
    if (c.contains(t)) ++count.migration_count;
  }
  return count;
}

}  // namespace adlens
