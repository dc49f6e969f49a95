#include "adlens/store.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "adlens/error.h"
#include "adlens/text.h"
#include "json.hpp"

namespace adlens {

namespace fs = std::filesystem;
using nlohmann::json;

PeriodFilter::PeriodFilter(Date start, Date end) : start_date(start), end_date(end) {
  if (end < start)
    throw ValidationError("period start " + start.ToString() + " is after end " +
                          end.ToString());
}

std::optional<PeriodFilter> PeriodFilter::intersect(const PeriodFilter &other) const {
  const Date s = std::max(start_date, other.start_date);
  const Date e = std::min(end_date, other.end_date);
  if (e < s) return std::nullopt;
  return PeriodFilter(s, e);
}

std::vector<std::string> Dataset::unresolved_page_ids() const {
  std::set<std::string> unresolved;
  for (const auto &p : pages) {
    if (p.actor_type == ActorType::kUnresolved) unresolved.insert(p.page_id);
  }
  std::set<std::string> out;
  for (const auto &a : ads) {
    if (unresolved.count(a.page_id)) out.insert(a.page_id);
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Pages file.

std::vector<PageEntity> read_pages_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<PageEntity> pages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError("", std::string("invalid JSON record: ") + e.what(), path, line_no);
    }
    PageEntity p;
    try {
      p.page_id = j.at("page_id").get<std::string>();
      p.name = j.value("name", "");
      auto type = parse_actor_type(j.value("actor_type", "unresolved"));
      auto party = parse_party(j.value("party_affiliation", "none"));
      if (!type) throw ParseError("actor_type", "unknown value", path, line_no);
      if (!party) throw ParseError("party_affiliation", "unknown value", path, line_no);
      p.actor_type = *type;
      p.party_affiliation = *party;
      if (j.contains("matched_ngram") && !j["matched_ngram"].is_null())
        p.matched_ngram = j["matched_ngram"].get<std::string>();
    } catch (const json::exception &e) {
      throw ParseError("page_id", e.what(), path, line_no);
    }
    if (p.actor_type == ActorType::kUnresolved && p.party_affiliation != Party::kNone)
      throw ParseError("party_affiliation", "unresolved page with an affiliation", path, line_no);
    pages.push_back(std::move(p));
  }
  return pages;
}

void write_pages_file(const std::string &path, const std::vector<PageEntity> &pages) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto &p : pages) {
    json j = {{"page_id", p.page_id},
              {"name", p.name},
              {"actor_type", std::string(to_string(p.actor_type))},
              {"party_affiliation", std::string(to_string(p.party_affiliation))}};
    if (p.matched_ngram) j["matched_ngram"] = *p.matched_ngram;
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Manifest.

Manifest read_manifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ParseError("", std::string("invalid manifest: ") + e.what(), path);
  }
  const fs::path base = fs::path(path).parent_path();
  Manifest m;
  auto member_list = [&](const char *key, std::vector<std::string> &out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw ParseError(key, "expected a list of paths", path);
    for (const auto &p : j[key]) {
      if (!p.is_string()) throw ParseError(key, "expected a path string", path);
      fs::path member(p.get<std::string>());
      out.push_back((member.is_absolute() ? member : base / member).lexically_normal().string());
    }
  };
  member_list("ads", m.paths.ads);
  member_list("articles", m.paths.articles);
  member_list("pages", m.paths.pages);
  member_list("annotations", m.paths.annotations);
  if (j.contains("period")) {
    auto s = Date::Parse(j["period"].value("start", ""));
    auto e = Date::Parse(j["period"].value("end", ""));
    if (!s || !e) throw ParseError("period", "expected start and end as YYYY-MM-DD", path);
    m.period = PeriodFilter(*s, *e);
  }
  return m;
}

void write_manifest(const std::string &path, const Manifest &m) {
  const fs::path base = fs::path(path).parent_path();
  auto rel = [&](const std::vector<std::string> &paths) {
    json arr = json::array();
    for (const auto &p : paths) arr.push_back(fs::path(p).lexically_relative(base).string());
    return arr;
  };
  json j = {{"ads", rel(m.paths.ads)},
            {"articles", rel(m.paths.articles)},
            {"pages", rel(m.paths.pages)},
            {"annotations", rel(m.paths.annotations)}};
  if (m.period) {
    j["period"] = {{"start", m.period->start_date.ToString()},
                   {"end", m.period->end_date.ToString()}};
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Loading.

namespace {

std::string load_stamp(const std::string &path) {
  const auto now = std::chrono::time_point_cast<std::chrono::seconds>(
      std::chrono::system_clock::now());
  return path + "@" + DateTime(now.time_since_epoch().count()).ToString();
}

}  // namespace

Dataset load_dataset(const DatasetPaths &paths) {
  Dataset d;
  for (const auto &p : paths.ads) {
    auto ads = read_ads_file(p);
    d.ads.insert(d.ads.end(), std::make_move_iterator(ads.begin()),
                 std::make_move_iterator(ads.end()));
    d.provenance.push_back(load_stamp(p));
  }
  for (const auto &p : paths.articles) {
    auto articles = read_gkg_file(p);
    d.articles.insert(d.articles.end(), std::make_move_iterator(articles.begin()),
                      std::make_move_iterator(articles.end()));
    d.provenance.push_back(load_stamp(p));
  }
  for (const auto &p : paths.pages) {
    auto pages = read_pages_file(p);
    d.pages.insert(d.pages.end(), pages.begin(), pages.end());
    d.provenance.push_back(load_stamp(p));
  }
  for (const auto &p : paths.annotations) {
    auto ann = read_annotations(p);
    d.annotations.insert(d.annotations.end(), ann.begin(), ann.end());
    d.provenance.push_back(load_stamp(p));
  }

  std::set<std::string> known;
  for (const auto &p : d.pages) {
    if (!known.insert(p.page_id).second)
      throw DataError("duplicate page id in page files: " + p.page_id);
  }
  for (const auto &ad : d.ads) {
    if (known.insert(ad.page_id).second) {
      d.pages.push_back(PageEntity{ad.page_id, ad.page_name.value_or(""),
                                   ActorType::kUnresolved, Party::kNone, std::nullopt});
      d.diagnostics.push_back("page " + ad.page_id + " not in page files; flagged unresolved");
    }
  }
  return d;
}

std::vector<AdRecord> dedup_ads(const std::vector<AdRecord> &ads) {
  std::map<std::string, const AdRecord *> latest;
  for (const auto &ad : ads) {
    auto [it, inserted] = latest.try_emplace(ad.id, &ad);
    if (inserted) continue;
    const AdRecord &cur = *it->second;
    if (ad.snapshot_time > cur.snapshot_time ||
        (ad.snapshot_time == cur.snapshot_time &&
         serialize_ad_line(ad) > serialize_ad_line(cur)))
      it->second = &ad;
  }
  std::vector<AdRecord> out;
  out.reserve(latest.size());
  for (const auto &[id, ad] : latest) out.push_back(*ad);
  return out;
}

Dataset filter_period(const Dataset &d, const PeriodFilter &f, Date collection_date) {
  Dataset out;
  out.pages = d.pages;
  out.annotations = d.annotations;
  out.provenance = d.provenance;
  out.diagnostics = d.diagnostics;
  for (const auto &ad : d.ads) {
    const Date stop = ad.delivery_stop.value_or(std::max(collection_date, ad.delivery_start));
    if (stop < f.start_date || ad.delivery_start > f.end_date) continue;
    AdRecord clipped = ad;
    const std::int32_t before = delivery_days(ad, collection_date);
    if (ad.delivery_start < f.start_date) clipped.delivery_start = f.start_date;
    if (stop > f.end_date) clipped.delivery_stop = f.end_date;
    if (delivery_days(clipped, collection_date) != before && !clipped.scheduled_days)
      clipped.scheduled_days = before;
    out.ads.push_back(std::move(clipped));
  }
  for (const auto &a : d.articles) {
    if (f.contains(a.date())) out.articles.push_back(a);
  }
  return out;
}

void persist_dataset(const Dataset &d, const std::string &dir,
                     const std::optional<PeriodFilter> &period) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir + ": " + ec.message());
  const fs::path base(dir);
  Manifest m;
  m.period = period;
  {
    const auto p = (base / "ads.jsonl").string();
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + p);
    for (const auto &ad : d.ads) out << serialize_ad_line(ad) << '\n';
    m.paths.ads.push_back(p);
  }
  {
    const auto p = (base / "articles.gkg.tsv").string();
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + p);
    for (const auto &a : d.articles) out << serialize_gkg_line(a) << '\n';
    m.paths.articles.push_back(p);
  }
  {
    const auto p = (base / "pages.jsonl").string();
    write_pages_file(p, d.pages);
    m.paths.pages.push_back(p);
  }
  {
    const auto p = (base / "annotations.psv").string();
    write_annotations(p, d.annotations);
    m.paths.annotations.push_back(p);
  }
  write_manifest((base / "manifest.json").string(), m);
}

}  // namespace adlens
