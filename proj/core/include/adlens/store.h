#ifndef ADLENS_STORE_H_
#define ADLENS_STORE_H_

// Dataset catalog: loading, deduplication, period filtering, persistence.

#include <optional>
#include <string>
#include <vector>

#include "adlens/annotation.h"
#include "adlens/date.h"
#include "adlens/entities.h"
#include "adlens/ingest.h"

namespace adlens {

struct PeriodFilter {
  Date start_date;  // inclusive
  Date end_date;    // inclusive

  PeriodFilter(Date start, Date end);
  bool contains(Date d) const { return start_date <= d && d <= end_date; }
  // Empty when the periods do not overlap.
  std::optional<PeriodFilter> intersect(const PeriodFilter &other) const;

  bool operator==(const PeriodFilter &) const = default;
};

struct Dataset {
  std::vector<AdRecord> ads;
  std::vector<PageEntity> pages;
  std::vector<NewsArticle> articles;
  std::vector<AnnotationRecord> annotations;
  std::vector<std::string> provenance;   // "path@load-time"
  std::vector<std::string> diagnostics;  // non-fatal findings

  // Page ids of ads whose page never resolved to an actor.
  std::vector<std::string> unresolved_page_ids() const;
};

struct DatasetPaths {
  std::vector<std::string> ads;
  std::vector<std::string> articles;
  std::vector<std::string> pages;
  std::vector<std::string> annotations;
};

struct Manifest {
  DatasetPaths paths;  // resolved against the manifest's directory
  std::optional<PeriodFilter> period;
};

Manifest read_manifest(const std::string &path);
void write_manifest(const std::string &path, const Manifest &m);

// Loads every member file; any failure aborts the whole load. Ads whose page
// is missing from the page files get an unresolved PageEntity and a
// diagnostic.
Dataset load_dataset(const DatasetPaths &paths);

// One record per id, the latest snapshot winning; sorted by id.
std::vector<AdRecord> dedup_ads(const std::vector<AdRecord> &ads);

// Keeps ads whose delivery window meets the period, clipped to it, and
// articles published inside it. Open windows run to `collection_date`.
Dataset filter_period(const Dataset &d, const PeriodFilter &f,
                      Date collection_date = kDefaultCollectionDate);

// Writes ads.jsonl, pages.jsonl, articles.gkg.tsv, annotations.psv and
// manifest.json into `dir` (created if needed).
void persist_dataset(const Dataset &d, const std::string &dir,
                     const std::optional<PeriodFilter> &period = std::nullopt);

// Pages file: one JSON object per line.
std::vector<PageEntity> read_pages_file(const std::string &path);
void write_pages_file(const std::string &path, const std::vector<PageEntity> &pages);

}  // namespace adlens

#endif  // ADLENS_STORE_H_
