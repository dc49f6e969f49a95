// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adlens/agenda.h"
#include "adlens/annotation.h"
#include "adlens/audience.h"
#include "adlens/error.h"
#include "adlens/ingest.h"
#include "adlens/random.h"
#include "adlens/report.h"
#include "adlens/stance/evaluation.h"
#include "adlens/stance/models.h"
#include "adlens/stance/pipeline.h"
#include "adlens/stance/tfidf.h"
#include "adlens/store.h"
#include "support.h"

namespace adlens {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string &what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  void note(const std::string &s) { notes_.push_back(s); }

  bool passed() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream out;
    out << checks_ - failed_ << "/" << checks_ << " checks";
    for (const auto &n : notes_) out << "; " << n;
    for (const auto &f : failures_) out << "; failed: " << f;
    return out.str();
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Krippendorff's alpha.

// Cell of annotator `a` in a 3-annotator row code: 0 missing, else 1..3.
int row_cell(int code, int a) {
  for (int i = 0; i < a; ++i) code /= 4;
  return code % 4;
}

void compare_alpha(const ReliabilityMatrix &m, AlphaMetric metric, Check &c,
                   const std::string &label) {
  const auto oracle = testing::alpha_by_pairs(m, metric);
  if (!oracle) {
    bool threw = false;
    try {
      krippendorff_alpha(m, metric);
    } catch (const ValidationError &) {
      threw = true;
    }
    c.expect(threw, label + " should be rejected");
    return;
  }
  const AlphaResult r = krippendorff_alpha(m, metric);
  c.expect(r.degenerate == oracle->degenerate && std::abs(r.alpha - oracle->alpha) <= 1e-9,
           label + ": alpha " + fmt(r.alpha) + " vs oracle " + fmt(oracle->alpha));
}

void criterion_alpha(Check &c) {
  const auto t0 = Clock::now();
  // Alpha depends on a matrix only up to the order of its items, so every
  // multiset of row codes covers every matrix with those rows.
  std::size_t matrices = 0;
  for (int items = 1; items <= 4; ++items) {
    std::vector<int> codes(items, 0);
    while (true) {
      ReliabilityMatrix m(items, 3);
      for (int i = 0; i < items; ++i)
        for (int a = 0; a < 3; ++a) {
          const int v = row_cell(codes[i], a);
          if (v) m.set(i, a, v);
        }
      std::string label = "rows";
      for (int code : codes) label += " " + std::to_string(code);
      compare_alpha(m, AlphaMetric::kNominal, c, label + " nominal");
      compare_alpha(m, AlphaMetric::kOrdinal, c, label + " ordinal");
      ++matrices;
      int k = items - 1;
      while (k >= 0 && codes[k] == 63) --k;
      if (k < 0) break;
      ++codes[k];
      for (int j = k + 1; j < items; ++j) codes[j] = codes[k];
    }
  }
  c.note(std::to_string(matrices) + " matrices");

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    ReliabilityMatrix m(6, 3);
    for (std::size_t i = 0; i < 6; ++i) {
      const double v = 1.0 + static_cast<double>(rng.uniform_index(5));
      for (std::size_t a = 0; a < 3; ++a)
        if (a != i % 3 || i < 3) m.set(i, a, v);
    }
    for (AlphaMetric metric : {AlphaMetric::kNominal, AlphaMetric::kOrdinal}) {
      const AlphaResult r = krippendorff_alpha(m, metric);
      c.expect(r.alpha == 1.0, "perfect agreement gives alpha " + fmt(r.alpha));
    }
  }

  double sum_abs = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng r(derive_seed(2024, trial));
    ReliabilityMatrix m(1000, 3);
    for (std::size_t i = 0; i < 1000; ++i)
      for (std::size_t a = 0; a < 3; ++a) m.set(i, a, 1.0 + static_cast<double>(r.uniform_index(5)));
    sum_abs += std::abs(krippendorff_alpha(m, AlphaMetric::kNominal).alpha);
  }
  const double mean_abs = sum_abs / 100.0;
  c.expect(mean_abs < 0.05, "mean |alpha| on random labels " + fmt(mean_abs));
  c.note("mean |alpha| random " + fmt(mean_abs));

  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
  c.note(fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 2. Model contracts.

struct Features {
  stance::SparseMatrix x;
  std::vector<int> y;
  std::size_t features = 0;
};

Features planted_features(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  stance::TokenizedCorpus docs;
  Features f;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    std::vector<std::string> doc;
    for (int k = 0; k < 6; ++k) doc.push_back("w" + std::to_string(rng.uniform_index(30)));
    doc.push_back(label ? "porti" : "accoglienza");
    if (rng.uniform01() < 0.5) doc.push_back(label ? "invasione" : "integrazione");
    docs.push_back(doc);
    f.y.push_back(label);
  }
  const stance::TfidfModel m = stance::fit_tfidf(docs);
  f.x = stance::transform(docs, m);
  f.features = m.vocabulary_size();
  return f;
}

void criterion_models(Check &c) {
  for (const auto &nb : testing::naive_bayes_cases()) {
    const stance::NaiveBayesModel m(nb.x, nb.y, nb.features, nb.alpha);
    const auto lp = m.log_posteriors(nb.query);
    for (int k = 0; k < 2; ++k)
      c.expect(std::abs(lp[k] - nb.log_posterior[k]) <= 1e-12,
               "naive Bayes log posterior " + fmt(lp[k]) + " vs " + fmt(nb.log_posterior[k]));
  }

  const Features f = planted_features(200, 5);
  const stance::LogisticLoss loss(f.x, f.y, f.features, 0.1);
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> point(loss.dimension());
    for (auto &v : point) v = 0.5 * rng.normal();
    worst = std::max(worst, testing::logistic_gradient_error(loss, point));
  }
  c.expect(worst < 1e-5, "logistic gradient relative error " + fmt(worst));
  c.note("gradient error " + fmt(worst));

  const Features g = planted_features(120, 8);
  stance::TrainOptions opt;
  opt.seed = 42;
  opt.num_threads = 1;
  const stance::RandomForestModel ref(g.x, g.y, g.features, 25, 3, opt);
  const std::string ref_json = ref.to_json().dump();
  for (int threads = 2; threads <= 8; ++threads) {
    opt.num_threads = threads;
    const stance::RandomForestModel m(g.x, g.y, g.features, 25, 3, opt);
    c.expect(m.to_json().dump() == ref_json,
             "forest with " + std::to_string(threads) + " threads differs");
  }
}

// ---------------------------------------------------------------------------
// 3. Stance pipeline cross-validation.

void criterion_pipeline(Check &c) {
  const auto t0 = Clock::now();
  const stance::PipelineSpec spec;
  stance::TokenizedCorpus docs;
  std::vector<stance::StanceLabel> labels;
  for (const auto &d : testing::read_stance_corpus(
           testing::data_path("fixtures/stance_corpus.jsonl"))) {
    docs.push_back(stance::tokenize_stem(d.text, spec.tokens));
    labels.push_back(d.label);
  }
  c.expect(docs.size() == 500, "corpus has " + std::to_string(docs.size()) + " documents");
  const stance::CvResult r = stance::cross_validate_pipeline(docs, labels, spec, 10, 20200330);
  c.expect(r.metrics.macro_f1 >= 0.90, "macro F1 " + fmt(r.metrics.macro_f1));
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
  c.note("macro F1 " + fmt(r.metrics.macro_f1));
  c.note(fmt(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 4. Granger causality.

void criterion_granger(Check &c) {
  const GrangerOptions options;  // max_lag 10, significance 0.01
  int hits = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto [x, y] = testing::planted_granger_pair(derive_seed(300, trial));
    const GrangerResult forward = granger_test(x, y, options);
    const GrangerResult backward = granger_test(y, x, options);
    const bool lag1 = forward.lags[0].p_value < 0.01;
    hits += lag1 && backward.flagged_lags().empty();
  }
  c.expect(hits >= 95, std::to_string(hits) + "/100 planted trials");
  c.note(std::to_string(hits) + "/100 planted trials");

  double worst_oracle = 0.0, worst_affine = 0.0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const auto [x, y] = testing::planted_granger_pair(derive_seed(301, trial));
    for (const auto &[cause, effect] : {std::pair{&x, &y}, std::pair{&y, &x}}) {
      const GrangerResult r = granger_test(*cause, *effect, options);
      const auto oracle = testing::granger_f_oracle(cause->values(), effect->values(), 10);
      for (std::size_t i = 0; i < oracle.size(); ++i)
        worst_oracle = std::max(worst_oracle, std::abs(r.lags[i].f_statistic - oracle[i]));

      Rng rng(derive_seed(302, trial));
      const double a = 0.01 + 100.0 * rng.uniform01(), b = 50.0 * rng.normal();
      const double p = -(0.01 + 100.0 * rng.uniform01()), q = 50.0 * rng.normal();
      std::vector<double> cs, es;
      for (double v : cause->values()) cs.push_back(a * v + b);
      for (double v : effect->values()) es.push_back(p * v + q);
      const GrangerResult s = granger_test(TimeSeries(cause->name(), cause->start(), cs),
                                           TimeSeries(effect->name(), effect->start(), es),
                                           options);
      for (std::size_t i = 0; i < r.lags.size(); ++i)
        worst_affine =
            std::max(worst_affine, std::abs(s.lags[i].f_statistic - r.lags[i].f_statistic));
    }
  }
  c.expect(worst_oracle <= 1e-8, "oracle F difference " + fmt(worst_oracle));
  c.expect(worst_affine <= 1e-9, "affine F difference " + fmt(worst_affine));
  c.note("oracle diff " + fmt(worst_oracle) + ", affine diff " + fmt(worst_affine));
}

// ---------------------------------------------------------------------------
// 5. Arithmetic contracts.

void criterion_arithmetic(Check &c) {
  c.expect(midpoint({1000, 4999}) == 2999.5, "closed range midpoint");
  c.expect(midpoint({1000000, std::nullopt}) == 1000000.0, "open range midpoint");
  for (std::uint64_t lo = 0; lo < 100000; lo += 7919) {
    for (std::uint64_t w : {0u, 1u, 999u, 50000u}) {
      const double m = midpoint({lo, lo + w});
      c.expect(m >= static_cast<double>(lo) && m <= static_cast<double>(lo + w) &&
                   m == (static_cast<double>(lo) + static_cast<double>(lo + w)) / 2.0,
               "midpoint of [" + std::to_string(lo) + ", " + std::to_string(lo + w) + "]");
    }
  }

  const Date day = Date::FromYmd(2019, 10, 1);
  auto article = [](Date d, std::vector<std::string> themes) {
    NewsArticle a;
    a.published = DateTime(static_cast<std::int64_t>(d.days()) * 86400 + 7200);
    a.themes = std::move(themes);
    return a;
  };
  const ThemeCatalog catalog({"IMMIGRATION", "SOC_MASSMIGRATION"});
  const TimeSeries news = news_series(
      {article(day, {"IMMIGRATION", "SOC_MASSMIGRATION", "A", "B", "C"}),
       article(day + 2, {"IMMIGRATION", "A"}), article(day + 2, {"IMMIGRATION", "A", "B", "C"}),
       article(day + 3, {})},
      catalog);
  c.expect(news.size() == 4 && news[0] == 0.4 && news[1] == 0.0 && news[2] == 0.75 &&
               news[3] == 0.0,
           "daily theme fractions");

  const TimeSeries spread = impressions_series({testing::make_ad("a", day, day + 3, 1000, 1000)});
  bool uniform = spread.size() == 4;
  for (std::size_t i = 0; i < spread.size(); ++i) uniform &= spread[i] == 250.0;
  c.expect(uniform, "1000 impressions over 4 days");

  const auto manifest = read_manifest(testing::data_path("fixtures/manifest.json"));
  const auto ads = dedup_ads(filter_period(load_dataset(manifest.paths), *manifest.period).ads);
  double expected = 0.0;
  for (const auto &ad : ads) expected += estimated_impressions(ad, kDefaultCollectionDate);
  const double total = impressions_series(ads, manifest.period).sum();
  const double rel = std::abs(total - expected) / expected;
  c.expect(rel <= 1e-6, "mass conservation relative error " + fmt(rel));

  Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    ImpressionMatrix a, b;
    for (auto *m : {&a, &b})
      for (Gender g : {Gender::kMale, Gender::kFemale})
        m->cells[static_cast<std::size_t>(g)][rng.uniform_index(7)] =
            std::exp(10.0 * rng.uniform01());
    const double prod = *gender_odds_ratio(a, b) * *gender_odds_ratio(b, a);
    worst = std::max(worst, std::abs(prod - 1.0));
  }
  c.expect(worst <= 4.5e-16, "odds-ratio reciprocity error " + fmt(worst));

  const auto uniform7 = *coarsen_age_buckets({0, 1, 1, 1, 1, 1, 1});
  c.expect(std::abs(uniform7[0] - 1.0 / 3.0) <= 1e-15 && std::abs(uniform7[1] - 0.5) <= 1e-15 &&
               std::abs(uniform7[2] - 1.0 / 6.0) <= 1e-15,
           "uniform coarsening");
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 7> d;
    for (auto &v : d) v = rng.uniform01();
    const auto co = *coarsen_age_buckets(d);
    const double adult = d[1] + d[2] + d[3] + d[4] + d[5] + d[6];
    c.expect(std::abs(co[0] - (d[1] + d[2]) / adult) <= 1e-14 &&
                 std::abs(co[1] - (d[3] + d[4] + d[5]) / adult) <= 1e-14 &&
                 std::abs(co[2] - d[6] / adult) <= 1e-14,
             "coarsening trial " + std::to_string(trial));
  }
  c.expect(!coarsen_age_buckets({1, 0, 0, 0, 0, 0, 0}), "teen-only mass coarsens to nothing");
}

// ---------------------------------------------------------------------------
// 6. Targeting summary.

void criterion_targeting(Check &c) {
  const RegionCatalog regions = RegionCatalog::Load(testing::data_path("config/italian_regions.txt"));
  const auto manifest = read_manifest(testing::data_path("fixtures/manifest.json"));
  const auto ads = dedup_ads(filter_period(load_dataset(manifest.paths), *manifest.period).ads);
  const TargetingSummary s = targeting_summary(ads, regions);
  c.expect(std::abs(s.targeted_share - 0.62) <= 0.005, "targeted share " + fmt(s.targeted_share));
  c.note("targeted share " + fmt(s.targeted_share));

  std::size_t exempt = 0;
  for (const auto &ad : ads) {
    std::set<std::string> reached;
    for (const auto &r : ad.region_distribution)
      if (r.share > 0.0 && regions.contains(r.region)) reached.insert(r.region);
    std::set<std::pair<Gender, AgeBucket>> cells;
    for (const auto &d : ad.demographic_distribution)
      if (d.share > 0.0) cells.insert({d.gender, d.age});
    bool adults = true;
    for (Gender g : {Gender::kMale, Gender::kFemale})
      for (AgeBucket a : kAgeBuckets)
        if (a != AgeBucket::k13_17) adults &= cells.count({g, a}) > 0;
    const bool teens = cells.count({Gender::kMale, AgeBucket::k13_17}) ||
                       cells.count({Gender::kFemale, AgeBucket::k13_17});
    if (reached.size() != regions.size() || !adults || teens) continue;
    ++exempt;
    c.expect(detect_targeting(ad, regions).untargeted(regions.size()),
             "ad " + ad.id + " without 13-17 is untargeted");
  }
  c.expect(exempt > 0, "fixture has full-coverage ads without 13-17");
  c.note(std::to_string(exempt) + " full-coverage ads without 13-17");
}

// ---------------------------------------------------------------------------
// 7. End-to-end report.

std::set<std::string> listing(const std::string &dir) {
  std::set<std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out.insert(fs::relative(e.path(), dir).string());
  return out;
}

json load_json(const std::string &path) { return json::parse(testing::read_file(path)); }

void parse_back(const std::string &dir, const std::string &stem, Check &c) {
  const std::string svg = testing::read_file(dir + "/" + stem + ".svg");
  const std::string kind = testing::svg_root(svg).at("data-chart");
  const json table = load_json(dir + "/" + stem + ".json");
  if (kind == "pyramid") {
    std::map<std::pair<std::string, std::string>, double> cells;
    for (const auto &row : table.at("rows")) cells[{row[0], row[1]}] = row[2].get<double>();
    std::size_t bars = 0, positive = 0;
    for (const auto &bar : testing::svg_elements(svg, "rect")) {
      if (!bar.count("data-value")) continue;
      ++bars;
      c.expect(std::stod(bar.at("data-value")) ==
                   cells.at({bar.at("data-gender"), bar.at("data-age")}),
               stem + " bar " + bar.at("data-gender") + " " + bar.at("data-age"));
    }
    for (const auto &[key, v] : cells) positive += key.first != "unknown" && v > 0.0;
    c.expect(bars == positive, stem + " bar count");
  } else if (kind == "series") {
    const auto lines = testing::svg_elements(svg, "polyline");
    c.expect(lines.size() + 1 == table.at("columns").size(), stem + " series count");
    for (std::size_t k = 0; k < lines.size() && k + 1 < table.at("columns").size(); ++k) {
      const auto values = testing::parse_number_list(lines[k].at("data-values"));
      bool same = values.size() == table.at("rows").size() &&
                  lines[k].at("data-series") == table.at("columns")[k + 1];
      for (std::size_t i = 0; same && i < values.size(); ++i)
        same = values[i] == table.at("rows")[i][k + 1].get<double>();
      c.expect(same, stem + " series " + lines[k].at("data-series"));
    }
  } else if (kind == "granger") {
    const auto curves = testing::svg_elements(svg, "polyline");
    c.expect(curves.size() == table.size(), stem + " direction count");
    std::size_t significant = 0;
    for (std::size_t k = 0; k < curves.size() && k < table.size(); ++k) {
      const auto &r = table[k];
      const auto values = testing::parse_number_list(curves[k].at("data-values"));
      bool same = values.size() == r.at("lags").size();
      for (std::size_t i = 0; same && i < values.size(); ++i)
        same = values[i] == r.at("lags")[i].at("f_statistic").get<double>();
      for (const auto &lag : r.at("lags")) significant += lag.at("significant").get<bool>();
      c.expect(same, stem + " " + curves[k].at("data-direction"));
    }
    c.expect(testing::svg_elements(svg, "circle").size() == significant,
             stem + " significant markers");
  } else {
    c.expect(false, stem + ": unknown chart kind " + kind);
  }
}

void criterion_report(Check &c) {
  testing::TempDir tmp("acceptance_report");
  RunConfig config = RunConfig::Load(testing::data_path("config/run.json"));
  config.output_dir = tmp.file("a");
  const auto t0 = Clock::now();
  cmd_report(config);
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 120.0, "runtime " + fmt(elapsed) + " s");
  c.note(fmt(elapsed) + " s");
  config.output_dir = tmp.file("b");
  cmd_report(config);

  const auto files = listing(tmp.file("a"));
  c.expect(files == listing(tmp.file("b")), "same file set across runs");
  for (const auto &f : files)
    c.expect(testing::read_file(tmp.file("a/" + f)) == testing::read_file(tmp.file("b/" + f)),
             f + " differs between runs");

  std::size_t charts = 0;
  for (const auto &f : files) {
    if (fs::path(f).extension() != ".svg") continue;
    ++charts;
    const std::string stem = fs::path(f).replace_extension().string();
    c.expect(files.count(stem + ".csv") && files.count(stem + ".json"), f + " has no table");
    parse_back(tmp.file("a"), stem, c);
  }
  for (const char *stem : {"demographics_all", "demographics_pro", "demographics_anti", "series",
                           "granger"})
    c.expect(files.count(std::string(stem) + ".svg") > 0, std::string(stem) + ".svg missing");
  for (const char *table : {"stance", "stance_counts", "gender_odds", "odds_ratios",
                            "survey_comparison", "targeting_summary", "top_features"})
    c.expect(files.count(std::string(table) + ".csv") && files.count(std::string(table) + ".json"),
             std::string(table) + " table missing");
  c.note(std::to_string(files.size()) + " files, " + std::to_string(charts) + " charts");
}

// ---------------------------------------------------------------------------
// 8. Parsers.

void criterion_parsers(Check &c) {
  std::istringstream gkg(testing::read_file(testing::data_path("fixtures/articles.gkg.tsv")));
  std::size_t lines = 0;
  for (std::string line; std::getline(gkg, line);) {
    if (line.empty()) continue;
    ++lines;
    const NewsArticle a = parse_gkg_line(line);
    c.expect(parse_gkg_line(serialize_gkg_line(a)) == a, "GKG line " + std::to_string(lines));
  }
  c.expect(lines == 633, std::to_string(lines) + " GKG lines");

  const auto open = read_ads_file(testing::data_path("fixtures/malformed/open_range_ads.jsonl"));
  c.expect(open.size() == 1 && !open[0].impressions.upper && midpoint(open[0].impressions) > 0.0,
           "open impression range accepted");

  const std::string bad = testing::data_path("fixtures/malformed/bad_share_ads.jsonl");
  try {
    read_ads_file(bad);
    c.expect(false, "share outside [0,1] accepted");
  } catch (const ParseError &e) {
    c.expect(e.file() == bad && e.line() == 2, "bad share located at " + e.file() + ":" +
                                                   std::to_string(e.line()));
    c.expect(e.field().rfind("demographic_distribution", 0) == 0, "field " + e.field());
    c.expect(std::string(e.what()).find("outside [0,1]") != std::string::npos, e.what());
  }

  json raw = json::parse(
      R"({"id":"x","page_id":"p","ad_creative_body":"t",)"
      R"("ad_delivery_start_time":"2019-10-01T10:00:00+0000",)"
      R"("impressions":{"lower_bound":"1000"},)"
      R"("region_distribution":[{"region":"Lazio","percentage":-0.1}]})");
  try {
    parse_ad_record(raw);
    c.expect(false, "negative region share accepted");
  } catch (const ParseError &e) {
    c.expect(e.field().rfind("region_distribution", 0) == 0, "field " + e.field());
  }
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char *name;
  std::function<void(Check &)> run;
};

}  // namespace
}  // namespace adlens

int main() {
  using namespace adlens;
  const std::vector<Criterion> criteria = {
      {1, "krippendorff alpha", criterion_alpha},
      {2, "model contracts", criterion_models},
      {3, "stance pipeline cross-validation", criterion_pipeline},
      {4, "granger suite", criterion_granger},
      {5, "arithmetic contracts", criterion_arithmetic},
      {6, "targeting summary", criterion_targeting},
      {7, "end-to-end report", criterion_report},
      {8, "parsers", criterion_parsers},
  };
  int failed = 0;
  for (const auto &cr : criteria) {
    Check c;
    try {
      cr.run(c);
    } catch (const std::exception &e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    failed += !c.passed();
    std::printf("%s criterion %d (%s): %s\n", c.passed() ? "PASS" : "FAIL", cr.number, cr.name,
                c.summary().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
