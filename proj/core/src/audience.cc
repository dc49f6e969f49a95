#include "adlens/audience.h"

#include <algorithm>
#include <cmath>

#include "adlens/delimited.h"
#include "adlens/error.h"

namespace adlens {

namespace {
std::size_t gi(Gender g) { return static_cast<std::size_t>(g); }
std::size_t ai(AgeBucket a) { return static_cast<std::size_t>(a); }
}  // namespace

double ImpressionMatrix::gender_total(Gender g) const {
  CompensatedSum s;
  for (double v : cells[gi(g)]) s.add(v);
  return s.value();
}

std::array<double, 7> ImpressionMatrix::age_totals(bool include_unknown) const {
  std::array<double, 7> out{};
  for (std::size_t a = 0; a < 7; ++a) {
    out[a] = cells[gi(Gender::kMale)][a] + cells[gi(Gender::kFemale)][a];
    if (include_unknown) out[a] += cells[gi(Gender::kUnknown)][a];
  }
  return out;
}

double ImpressionMatrix::total() const {
  CompensatedSum s;
  for (const auto &row : cells)
    for (double v : row) s.add(v);
  return s.value();
}

ImpressionMatrix &ImpressionMatrix::operator+=(const ImpressionMatrix &other) {
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t a = 0; a < 7; ++a) cells[g][a] += other.cells[g][a];
  ads_count += other.ads_count;
  return *this;
}

ImpressionMatrix impressions_by_demographic(const std::vector<AdRecord> &ads,
                                            bool include_unknown, Date collection_date) {
  std::array<std::array<CompensatedSum, 7>, 3> sums{};
  ImpressionMatrix m;
  for (const auto &ad : ads) {
    const double imps = estimated_impressions(ad, collection_date);
    for (const auto &cell : ad.demographic_distribution) {
      if (!include_unknown && cell.gender == Gender::kUnknown) continue;
      sums[gi(cell.gender)][ai(cell.age)].add(imps * cell.share);
    }
    ++m.ads_count;
  }
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t a = 0; a < 7; ++a) m.cells[g][a] = sums[g][a].value();
  return m;
}

std::optional<double> gender_odds(const ImpressionMatrix &m) {
  const double male = m.gender_total(Gender::kMale);
  const double female = m.gender_total(Gender::kFemale);
  if (male <= 0.0 || female <= 0.0) return std::nullopt;
  return male / female;
}

std::optional<double> gender_odds_ratio(const ImpressionMatrix &a, const ImpressionMatrix &b) {
  const double ma = a.gender_total(Gender::kMale), fa = a.gender_total(Gender::kFemale);
  const double mb = b.gender_total(Gender::kMale), fb = b.gender_total(Gender::kFemale);
  if (ma <= 0.0 || fa <= 0.0 || mb <= 0.0 || fb <= 0.0) return std::nullopt;
  return (ma * fb) / (fa * mb);
}

// ---------------------------------------------------------------------------
// Targeting.

RegionCatalog::RegionCatalog(std::vector<std::string> names)
    : names_(names.begin(), names.end()) {
  if (names_.empty()) throw ValidationError("region catalog is empty");
}

RegionCatalog RegionCatalog::Load(const std::string &path) {
  return RegionCatalog(read_list_file(path));
}

std::string_view to_string(GenderExclusive g) {
  switch (g) {
    case GenderExclusive::kMaleOnly: return "male_only";
    case GenderExclusive::kFemaleOnly: return "female_only";
    case GenderExclusive::kNone: return "none";
  }
  return "";
}

bool TargetingProfile::untargeted(std::size_t canonical_regions) const {
  if (static_cast<std::size_t>(regions_reached) != canonical_regions) return false;
  if (gender_exclusive != GenderExclusive::kNone) return false;
  for (AgeBucket a : kAgeBuckets) {
    if (a != AgeBucket::k13_17 && !age_buckets_reached.count(a)) return false;
  }
  return true;
}

TargetingProfile detect_targeting(const AdRecord &ad, const RegionCatalog &regions,
                                  double epsilon) {
  TargetingProfile p;
  std::set<std::string> reached;
  for (const auto &r : ad.region_distribution) {
    if (!(r.share > epsilon)) continue;
    if (regions.contains(r.region)) reached.insert(r.region);
    else p.unknown_regions.push_back(r.region);
  }
  std::sort(p.unknown_regions.begin(), p.unknown_regions.end());
  p.unknown_regions.erase(std::unique(p.unknown_regions.begin(), p.unknown_regions.end()),
                          p.unknown_regions.end());
  p.regions_reached = static_cast<int>(reached.size());

  std::array<double, 7> age{};
  std::array<double, 3> gender{};
  for (const auto &c : ad.demographic_distribution) {
    age[ai(c.age)] += c.share;
    gender[gi(c.gender)] += c.share;
  }
  for (AgeBucket a : kAgeBuckets) {
    if (age[ai(a)] > epsilon) p.age_buckets_reached.insert(a);
  }
  const bool male = gender[gi(Gender::kMale)] > epsilon;
  const bool female = gender[gi(Gender::kFemale)] > epsilon;
  if (male && !female) p.gender_exclusive = GenderExclusive::kMaleOnly;
  else if (female && !male) p.gender_exclusive = GenderExclusive::kFemaleOnly;
  return p;
}

TargetingSummary targeting_summary(const std::vector<AdRecord> &ads, const RegionCatalog &regions,
                                   double epsilon, Date collection_date) {
  TargetingSummary s;
  s.by_regions_reached.resize(regions.size() + 1);
  s.by_age_buckets_reached.resize(kAgeBuckets.size() + 1);
  CompensatedSum targeted, untargeted;
  std::set<std::string> unknown;
  for (const auto &ad : ads) {
    const TargetingProfile p = detect_targeting(ad, regions, epsilon);
    const double imps = estimated_impressions(ad, collection_date);
    unknown.insert(p.unknown_regions.begin(), p.unknown_regions.end());
    if (p.untargeted(regions.size())) {
      untargeted.add(imps);
      ++s.untargeted_ads;
    } else {
      targeted.add(imps);
      ++s.targeted_ads;
    }
    auto &rb = s.by_regions_reached[static_cast<std::size_t>(p.regions_reached)];
    ++rb.ads;
    rb.impressions += imps;
    auto &ab = s.by_age_buckets_reached[p.age_buckets_reached.size()];
    ++ab.ads;
    ab.impressions += imps;
    auto &gb = s.by_gender[p.gender_exclusive];
    ++gb.ads;
    gb.impressions += imps;
  }
  s.targeted_impressions = targeted.value();
  s.untargeted_impressions = untargeted.value();
  const double total = s.targeted_impressions + s.untargeted_impressions;
  if (total > 0.0) {
    s.targeted_share = s.targeted_impressions / total;
    s.untargeted_share = s.untargeted_impressions / total;
  }
  for (const auto &r : unknown)
    s.diagnostics.push_back("region outside the canonical list: " + r);
  return s;
}

// ---------------------------------------------------------------------------
// Population normalization and survey comparison.

std::string group_key(Gender g, AgeBucket a) {
  return std::string(to_string(g)) + ":" + std::string(to_string(a));
}

GroupDistribution matrix_groups(const ImpressionMatrix &m) {
  GroupDistribution out;
  for (Gender g : {Gender::kMale, Gender::kFemale}) {
    for (AgeBucket a : kAgeBuckets) out[group_key(g, a)] = m.at(g, a);
  }
  return out;
}

GroupDistribution normalize_to_population(const GroupDistribution &impressions,
                                          const GroupDistribution &potential_audience,
                                          const GroupDistribution &population) {
  GroupDistribution out;
  CompensatedSum total;
  for (const auto &[group, a] : impressions) {
    if (a < 0.0) throw DataError("negative impressions for group " + group);
    if (a == 0.0) {
      out[group] = 0.0;
      continue;
    }
    auto f = potential_audience.find(group);
    if (f == potential_audience.end() || !(f->second > 0.0))
      throw DataError("zero potential audience with nonzero impressions for group " + group);
    auto p = population.find(group);
    if (p == population.end()) throw DataError("population share missing for group " + group);
    const double v = a * p->second / f->second;
    out[group] = v;
    total.add(v);
  }
  const double t = total.value();
  if (!(t > 0.0)) throw NumericError("normalized distribution has zero mass");
  for (auto &[group, v] : out) v /= t;
  return out;
}

std::optional<std::array<double, 3>> coarsen_age_buckets(const std::array<double, 7> &d) {
  std::array<double, 3> c = {d[1] + d[2], d[3] + d[4] + d[5], d[6]};
  const double total = c[0] + c[1] + c[2];
  if (!(total > 0.0)) return std::nullopt;
  for (double &v : c) v /= total;
  return c;
}

std::array<double, 7> age_marginal(const GroupDistribution &cells) {
  std::array<double, 7> out{};
  for (const auto &[key, v] : cells) {
    const auto colon = key.find(':');
    if (colon == std::string::npos) throw ValidationError("not a gender:age group: " + key);
    auto age = parse_age_bucket(std::string_view(key).substr(colon + 1));
    if (!age) throw ValidationError("unknown age bucket in group " + key);
    out[ai(*age)] += v;
  }
  return out;
}

double total_variation(const std::array<double, 3> &a, const std::array<double, 3> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += std::abs(a[i] - b[i]);
  return s / 2.0;
}

std::vector<SurveyComparisonRow> compare_to_survey(
    const std::map<std::string, std::array<double, 3>> &ads_all,
    const std::map<std::string, std::array<double, 3>> &ads_migration,
    const std::map<std::string, std::array<double, 3>> &survey) {
  std::set<std::string> parties;
  for (const auto *src : {&ads_all, &ads_migration, &survey})
    for (const auto &[p, d] : *src) parties.insert(p);
  auto get = [](const auto &src, const std::string &p) -> std::optional<std::array<double, 3>> {
    auto it = src.find(p);
    if (it == src.end()) return std::nullopt;
    return it->second;
  };
  auto tv = [](const auto &a, const auto &b) -> std::optional<double> {
    if (!a || !b) return std::nullopt;
    return total_variation(*a, *b);
  };
  std::vector<SurveyComparisonRow> rows;
  for (const auto &p : parties) {
    SurveyComparisonRow r;
    r.party = p;
    r.ads_all = get(ads_all, p);
    r.ads_migration = get(ads_migration, p);
    r.survey = get(survey, p);
    r.tv_all_vs_survey = tv(r.ads_all, r.survey);
    r.tv_migration_vs_survey = tv(r.ads_migration, r.survey);
    r.tv_all_vs_migration = tv(r.ads_all, r.ads_migration);
    r.flagged = !r.ads_all || !r.ads_migration || !r.survey;
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Input files.

namespace {

std::pair<Gender, AgeBucket> parse_cell(const DelimitedRow &row, std::size_t g, std::size_t a,
                                        const std::string &path) {
  auto gender = parse_gender(row.cols[g]);
  auto age = parse_age_bucket(row.cols[a]);
  if (!gender) throw ParseError("gender", "unknown gender '" + row.cols[g] + "'", path, row.line);
  if (!age) throw ParseError("age", "unknown age bucket '" + row.cols[a] + "'", path, row.line);
  return {*gender, *age};
}

}  // namespace

GroupDistribution read_population_shares(const std::string &path) {
  GroupDistribution out;
  double total = 0.0;
  for (const auto &row : read_delimited(path, ',', {"gender", "age", "share"})) {
    auto [g, a] = parse_cell(row, 0, 1, path);
    const double share = parse_number(row.cols[2], "share", path, row.line);
    if (share < 0.0) throw ParseError("share", "negative share", path, row.line);
    out[group_key(g, a)] = share;
    total += share;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw DataError(path + ": population shares sum to " + std::to_string(total) + ", not 1");
  return out;
}

std::map<std::string, GroupDistribution> read_potential_audience(const std::string &path) {
  std::map<std::string, GroupDistribution> out;
  for (const auto &row : read_delimited(path, ',', {"party", "gender", "age", "users"})) {
    auto [g, a] = parse_cell(row, 1, 2, path);
    const double users = parse_number(row.cols[3], "users", path, row.line);
    if (users < 0.0) throw ParseError("users", "negative count", path, row.line);
    out[row.cols[0]][group_key(g, a)] = users;
  }
  return out;
}

std::map<std::string, std::array<double, 3>> read_survey(const std::string &path) {
  std::map<std::string, std::array<double, 3>> out;
  for (const auto &row : read_delimited(path, ',', {"party", "bucket", "share"})) {
    const auto it = std::find(kCoarseBuckets.begin(), kCoarseBuckets.end(), row.cols[1]);
    if (it == kCoarseBuckets.end())
      throw ParseError("bucket", "expected 18-34, 35-64 or 65+", path, row.line);
    out[row.cols[0]][static_cast<std::size_t>(it - kCoarseBuckets.begin())] =
        parse_number(row.cols[2], "share", path, row.line);
  }
  for (const auto &[party, d] : out) {
    if (std::abs(d[0] + d[1] + d[2] - 1.0) > 1e-6)
      throw DataError(path + ": survey shares for " + party + " do not sum to 1");
  }
  return out;
}

}  // namespace adlens
