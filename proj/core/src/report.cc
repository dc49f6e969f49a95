#include "adlens/report.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "adlens/annotation.h"
#include "adlens/audience.h"
#include "adlens/charts.h"
#include "adlens/delimited.h"
#include "adlens/entities.h"
#include "adlens/error.h"
#include "adlens/random.h"
#include "adlens/text.h"

namespace adlens {

namespace fs = std::filesystem;
using nlohmann::json;
using stance::StanceLabel;

// ---------------------------------------------------------------------------
// Configuration.

namespace {

const std::set<std::string> kConfigKeys = {
    "manifest", "keywords", "themes", "gazetteer", "regions", "population",
    "potential_audience", "survey", "events", "model", "period", "collection_date",
    "seed", "output_dir", "tokens", "tfidf", "models", "selection", "extra_irrelevant",
    "granger", "targeting_epsilon", "threads", "top_features", "report"};

std::string resolve_path(const std::string &p, const std::string &base_dir) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_relative() && !base_dir.empty()) path = fs::path(base_dir) / path;
  return path.lexically_normal().string();
}

Date parse_config_date(const json &j, const std::string &key) {
  const auto text = j.get<std::string>();
  auto d = Date::Parse(text);
  if (!d) throw ValidationError("config: " + key + " is not a YYYY-MM-DD date: " + text);
  return *d;
}

stance::ModelFamily parse_family(const json &j, const std::string &key) {
  const auto text = j.get<std::string>();
  auto f = stance::parse_model_family(text);
  if (!f) throw ValidationError("config: unknown model family for " + key + ": " + text);
  return *f;
}

void require_file(const std::string &path, const std::string &key) {
  if (path.empty()) throw ValidationError("config: " + key + " is required");
  if (!fs::is_regular_file(path))
    throw ValidationError("config: " + key + " does not exist: " + path);
}

void check_optional_file(const std::string &path, const std::string &key) {
  if (!path.empty()) require_file(path, key);
}

std::string default_model_path(const RunConfig &c) {
  return c.model.empty() ? (fs::path(c.output_dir) / "model.json").string() : c.model;
}

}  // namespace

RunConfig RunConfig::FromJson(const json &j, const std::string &base_dir) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  for (const auto &[key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw ValidationError("config: unknown key '" + key + "'");
  }
  RunConfig c;
  try {
    auto path = [&](const char *key, std::string &out) {
      if (j.contains(key)) out = resolve_path(j.at(key).get<std::string>(), base_dir);
    };
    path("manifest", c.manifest);
    path("keywords", c.keywords);
    path("themes", c.themes);
    path("gazetteer", c.gazetteer);
    path("regions", c.regions);
    path("population", c.population);
    path("potential_audience", c.potential_audience);
    path("survey", c.survey);
    path("events", c.events);
    path("model", c.model);
    path("output_dir", c.output_dir);

    if (j.contains("period")) {
      const auto &p = j.at("period");
      c.period.emplace(parse_config_date(p.at("start"), "period.start"),
                       parse_config_date(p.at("end"), "period.end"));
    }
    if (j.contains("collection_date"))
      c.collection_date = parse_config_date(j.at("collection_date"), "collection_date");
    if (j.contains("seed")) {
      const auto &s = j.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
        throw ValidationError("config: seed must be a non-negative integer");
      c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("tokens"))
      c.pipeline.tokens = stance::TokenPipelineConfig::from_json(j.at("tokens"));
    if (j.contains("tfidf")) {
      const auto &t = j.at("tfidf");
      c.pipeline.tfidf.l2_normalize = t.value("l2_normalize", true);
      c.pipeline.tfidf.ngram_max = t.value("ngram_max", 1);
    }
    if (j.contains("models")) {
      const auto &m = j.at("models");
      if (m.contains("relevance"))
        c.pipeline.relevance = stance::ModelSpec::from_json(m.at("relevance"));
      if (m.contains("leaning")) c.pipeline.leaning = stance::ModelSpec::from_json(m.at("leaning"));
    }
    if (j.contains("selection")) {
      const auto &s = j.at("selection");
      ModelSelection sel;
      if (s.contains("relevance")) sel.relevance = parse_family(s.at("relevance"), "selection.relevance");
      if (s.contains("leaning")) sel.leaning = parse_family(s.at("leaning"), "selection.leaning");
      sel.folds = s.value("folds", sel.folds);
      c.selection = sel;
    }
    c.extra_irrelevant = j.value("extra_irrelevant", c.extra_irrelevant);
    if (j.contains("granger")) {
      const auto &g = j.at("granger");
      c.granger.max_lag = g.value("max_lag", c.granger.max_lag);
      c.granger.significance = g.value("significance", c.granger.significance);
      c.granger.first_difference = g.value("first_difference", c.granger.first_difference);
    }
    c.targeting_epsilon = j.value("targeting_epsilon", c.targeting_epsilon);
    c.threads = j.value("threads", c.threads);
    c.top_features = j.value("top_features", c.top_features);
    if (j.contains("report")) {
      const auto &r = j.at("report");
      for (const auto &[key, value] : r.items()) {
        if (key != "audience" && key != "targeting" && key != "agenda" && key != "features")
          throw ValidationError("config: unknown report toggle '" + key + "'");
      }
      c.report.audience = r.value("audience", true);
      c.report.targeting = r.value("targeting", true);
      c.report.agenda = r.value("agenda", true);
      c.report.features = r.value("features", true);
    }
  } catch (const json::exception &e) {
    throw ValidationError(std::string("config: ") + e.what());
  } catch (const DataError &e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception &e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
  return FromJson(j, fs::path(path).parent_path().string());
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::kIngest: return "ingest";
    case Command::kResolve: return "resolve";
    case Command::kTrain: return "train";
    case Command::kClassify: return "classify";
    case Command::kReport: return "report";
  }
  return "";
}

void validate_config(const RunConfig &c, Command cmd) {
  if (c.output_dir.empty()) throw ValidationError("config: output_dir is required");
  require_file(c.manifest, "manifest");
  for (const auto &[path, key] :
       std::vector<std::pair<const std::string *, const char *>>{
           {&c.keywords, "keywords"}, {&c.themes, "themes"}, {&c.gazetteer, "gazetteer"},
           {&c.regions, "regions"}, {&c.population, "population"},
           {&c.potential_audience, "potential_audience"}, {&c.survey, "survey"},
           {&c.events, "events"}}) {
    check_optional_file(*path, key);
  }
  if (c.threads < 1) throw ValidationError("config: threads must be at least 1");
  if (c.granger.max_lag < 1) throw ValidationError("config: granger.max_lag must be at least 1");
  if (!(c.granger.significance > 0.0 && c.granger.significance < 1.0))
    throw ValidationError("config: granger.significance must lie in (0, 1)");
  if (c.targeting_epsilon < 0.0) throw ValidationError("config: targeting_epsilon is negative");
  if (c.pipeline.tfidf.ngram_max < 1 || c.pipeline.tfidf.ngram_max > 2)
    throw ValidationError("config: tfidf.ngram_max must be 1 or 2");
  c.pipeline.relevance.validate();
  c.pipeline.leaning.validate();
  if (c.selection && c.selection->folds < 2)
    throw ValidationError("config: selection.folds must be at least 2");

  switch (cmd) {
    case Command::kIngest:
      require_file(c.keywords, "keywords");
      break;
    case Command::kResolve:
      require_file(c.gazetteer, "gazetteer");
      break;
    case Command::kTrain:
      require_file(c.keywords, "keywords");
      if (!c.seed) throw ValidationError("config: seed is required");
      break;
    case Command::kClassify:
      require_file(c.keywords, "keywords");
      require_file(default_model_path(c), "model");
      break;
    case Command::kReport: {
      if (!c.seed) throw ValidationError("config: seed is required");
      if (!c.period) throw ValidationError("config: period is required for report");
      require_file(c.keywords, "keywords");
      require_file(c.gazetteer, "gazetteer");
      if (c.report.targeting) require_file(c.regions, "regions");
      const int audience_files = !c.population.empty() + !c.potential_audience.empty() +
                                 !c.survey.empty();
      if (audience_files != 0 && audience_files != 3)
        throw ValidationError(
            "config: population, potential_audience and survey must be given together");
      if (c.report.features) {
        auto linear = [](stance::ModelFamily f) { return f != stance::ModelFamily::kRandomForest; };
        const bool any_linear =
            c.selection ? linear(c.selection->relevance) || linear(c.selection->leaning)
                        : linear(c.pipeline.relevance.family) || linear(c.pipeline.leaning.family);
        if (!any_linear)
          throw ValidationError("config: features report needs a linear model in some stage");
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Tables and output files.

namespace {

std::string cell_text(const Cell &c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string &s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

json cell_json(const Cell &c) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(const std::string &s) const { return s; }
    json operator()(std::int64_t v) const { return v; }
    json operator()(double v) const { return v; }
    json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

Cell opt_cell(const std::optional<double> &v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

Cell count_cell(std::size_t n) { return Cell(static_cast<std::int64_t>(n)); }

}  // namespace

std::string Table::ToCsv() const {
  std::vector<std::string> header;
  for (const auto &c : columns) header.push_back(cell_text(Cell(c)));
  std::string out = join(header, ",") + "\n";
  for (const auto &row : rows) {
    if (row.size() != columns.size())
      throw ValidationError("table row has " + std::to_string(row.size()) + " cells, expected " +
                            std::to_string(columns.size()));
    std::vector<std::string> cells;
    for (const auto &c : row) cells.push_back(cell_text(c));
    out += join(cells, ",") + "\n";
  }
  return out;
}

json Table::to_json() const {
  json rows_json = json::array();
  for (const auto &row : rows) {
    json r = json::array();
    for (const auto &c : row) r.push_back(cell_json(c));
    rows_json.push_back(std::move(r));
  }
  return {{"columns", columns}, {"rows", rows_json}};
}

OutputSink::OutputSink(std::string root) : root_(std::move(root)) {}

std::string OutputSink::path(const std::string &relative) const {
  return (fs::path(root_) / relative).string();
}

void OutputSink::make_dir(const std::string &relative) {
  const fs::path target = relative.empty() ? fs::path(root_) : fs::path(root_) / relative;
  std::vector<fs::path> missing;
  for (fs::path p = target; !p.empty() && !fs::exists(p); p = p.parent_path()) {
    missing.push_back(p);
    if (p == p.parent_path()) break;
  }
  std::error_code ec;
  fs::create_directories(target, ec);
  if (ec) throw DataError("cannot create directory " + target.string() + ": " + ec.message());
  for (auto it = missing.begin(); it != missing.end(); ++it) created_dirs_.push_back(it->string());
}

void OutputSink::write(const std::string &relative, const std::string &content) {
  const fs::path target = fs::path(root_) / relative;
  make_dir(fs::path(relative).parent_path().string());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot move output into place: " + target.string());
  }
  written_.push_back(relative);
}

void OutputSink::write_table(const std::string &name, const Table &t) {
  write(name + ".csv", t.ToCsv());
  write(name + ".json", t.to_json().dump(2) + "\n");
}

void OutputSink::adopt(const std::string &relative) { written_.push_back(relative); }

void OutputSink::rollback() noexcept {
  std::error_code ec;
  for (auto it = written_.rbegin(); it != written_.rend(); ++it) {
    fs::remove(fs::path(root_) / *it, ec);
    fs::remove(fs::path(root_) / (*it + ".tmp"), ec);
  }
  written_.clear();
  // Deepest first; only directories that are now empty go.
  std::sort(created_dirs_.begin(), created_dirs_.end(),
            [](const std::string &a, const std::string &b) { return a.size() > b.size(); });
  for (const auto &d : created_dirs_) {
    if (fs::is_directory(d, ec) && fs::is_empty(d, ec)) fs::remove(d, ec);
  }
  created_dirs_.clear();
}

// ---------------------------------------------------------------------------
// Shared pipeline steps.

std::string ad_document(const AdRecord &ad) {
  return ad.title ? ad.text + "\n" + *ad.title : ad.text;
}

namespace {

struct Prepared {
  Dataset all;     // deduplicated
  Dataset period;  // deduplicated and clipped to the period
  std::optional<PeriodFilter> filter;
};

Prepared prepare(const RunConfig &c) {
  const Manifest m = read_manifest(c.manifest);
  Prepared p;
  p.all = load_dataset(m.paths);
  p.all.ads = dedup_ads(p.all.ads);
  p.filter = c.period ? c.period : m.period;
  p.period = p.filter ? filter_period(p.all, *p.filter, c.collection_date) : p.all;
  return p;
}

std::set<std::string> keyword_ids(const std::vector<AdRecord> &ads, const KeywordList &k) {
  std::set<std::string> ids;
  for (const auto &ad : keyword_filter(ads, k)) ids.insert(ad.id);
  return ids;
}

std::vector<PageEntity> resolve_pages(const std::vector<PageEntity> &pages, const Gazetteer &g) {
  std::vector<PageEntity> out;
  for (const auto &p : pages) out.push_back(resolve_page(p.page_id, p.name, g));
  std::sort(out.begin(), out.end(),
            [](const PageEntity &a, const PageEntity &b) { return a.page_id < b.page_id; });
  return out;
}

struct TrainingOutcome {
  stance::StancePipeline pipeline;
  Table summary;
  std::vector<std::string> diagnostics;
};

stance::LabeledCorpus tokenize_set(const auto &set, const stance::TokenPipelineConfig &tokens,
                                   auto positive) {
  stance::LabeledCorpus corpus;
  for (const auto &[text, label] : set) {
    corpus.docs.push_back(stance::tokenize_stem(text, tokens));
    corpus.labels.push_back(label == positive ? 1 : 0);
  }
  return corpus;
}

TrainingOutcome train(const RunConfig &c, const Dataset &all, const KeywordList &keywords) {
  const std::uint64_t seed = *c.seed;
  std::map<std::string, std::string> texts;
  for (const auto &ad : all.ads) texts[ad.id] = ad_document(ad);

  const auto matched = keyword_ids(all.ads, keywords);
  std::set<std::string> annotated;
  for (const auto &a : all.annotations) annotated.insert(a.ad_id);
  std::vector<std::string> negatives;  // sorted, since ads are sorted by id
  for (const auto &ad : all.ads) {
    if (!matched.count(ad.id) && !annotated.count(ad.id)) negatives.push_back(ad.id);
  }
  TrainingOutcome out;
  if (negatives.size() < c.extra_irrelevant) {
    out.diagnostics.push_back("only " + std::to_string(negatives.size()) +
                              " keyword-negative ads available as extra irrelevant examples");
  }
  Rng rng(derive_seed(seed, 2));
  rng.shuffle(negatives);
  negatives.resize(std::min(negatives.size(), c.extra_irrelevant));
  std::vector<std::string> extra;
  for (const auto &id : negatives) extra.push_back(texts.at(id));

  const TrainingSets sets = build_training_sets(all.annotations, texts, extra);
  stance::PipelineSpec spec = c.pipeline;
  out.summary.columns = {"key", "value"};
  if (c.selection) {
    const auto relevance = tokenize_set(sets.relevance_set, spec.tokens, Relevance::kRelevant);
    const auto leaning = tokenize_set(sets.leaning_set, spec.tokens, Leaning::kAnti);
    const auto r = stance::grid_search(relevance, stance::default_grid(c.selection->relevance),
                                       c.selection->folds, derive_seed(seed, 3), spec.tfidf,
                                       c.threads);
    const auto l = stance::grid_search(leaning, stance::default_grid(c.selection->leaning),
                                       c.selection->folds, derive_seed(seed, 4), spec.tfidf,
                                       c.threads);
    spec.relevance = r.best;
    spec.leaning = l.best;
    out.summary.rows.push_back({"relevance_cv_macro_f1", r.best_cv.metrics.macro_f1});
    out.summary.rows.push_back({"leaning_cv_macro_f1", l.best_cv.metrics.macro_f1});
    for (const auto *w : {&r.best_cv.warnings, &l.best_cv.warnings})
      out.diagnostics.insert(out.diagnostics.end(), w->begin(), w->end());
  }
  out.pipeline = stance::StancePipeline::Train(
      sets, spec, stance::TrainOptions{derive_seed(seed, 1), c.threads});

  std::size_t relevant = 0;
  for (const auto &[text, r] : sets.relevance_set) relevant += r == Relevance::kRelevant;
  std::size_t anti = 0;
  for (const auto &[text, l] : sets.leaning_set) anti += l == Leaning::kAnti;
  out.summary.rows.push_back({"relevance_model", spec.relevance.ToString()});
  out.summary.rows.push_back({"leaning_model", spec.leaning.ToString()});
  out.summary.rows.push_back({"relevance_examples", count_cell(sets.relevance_set.size())});
  out.summary.rows.push_back({"relevant_examples", count_cell(relevant)});
  out.summary.rows.push_back({"extra_irrelevant_examples", count_cell(extra.size())});
  out.summary.rows.push_back({"leaning_examples", count_cell(sets.leaning_set.size())});
  out.summary.rows.push_back({"anti_examples", count_cell(anti)});

  try {
    const AgreementReport agreement = agreement_report(all.annotations);
    out.summary.rows.push_back({"annotated_ads", count_cell(agreement.ads_total)});
    out.summary.rows.push_back({"annotated_ads_dropped", count_cell(agreement.ads_dropped)});
    out.summary.rows.push_back({"alpha_five_label_ordinal", agreement.five_label.alpha});
    out.summary.rows.push_back({"alpha_polarity_nominal", agreement.polarity.alpha});
  } catch (const ValidationError &e) {
    out.diagnostics.push_back(std::string("agreement not computed: ") + e.what());
  }
  std::sort(out.diagnostics.begin(), out.diagnostics.end());
  out.diagnostics.erase(std::unique(out.diagnostics.begin(), out.diagnostics.end()),
                        out.diagnostics.end());
  return out;
}

StanceAssignments classify_ads(const std::vector<AdRecord> &ads, const KeywordList &keywords,
                               const stance::StancePipeline &pipeline) {
  const auto matched = keyword_ids(ads, keywords);
  StanceAssignments labels;
  for (const auto &ad : ads) {
    labels[ad.id] = matched.count(ad.id) ? pipeline.classify(ad_document(ad))
                                         : StanceLabel::kNeutralOrIrrelevant;
  }
  return labels;
}

Table stance_table(const std::vector<AdRecord> &ads, const StanceAssignments &labels,
                   Date collection_date) {
  Table t;
  t.columns = {"ad_id", "page_id", "stance", "estimated_impressions"};
  for (const auto &ad : ads) {
    t.rows.push_back({ad.id, ad.page_id, std::string(stance::to_string(labels.at(ad.id))),
                      estimated_impressions(ad, collection_date)});
  }
  return t;
}

Table diagnostics_table(const std::vector<std::string> &diagnostics) {
  Table t;
  t.columns = {"diagnostic"};
  for (const auto &d : diagnostics) t.rows.push_back({d});
  return t;
}

std::vector<AdRecord> select(const std::vector<AdRecord> &ads,
                             const std::function<bool(const AdRecord &)> &keep) {
  std::vector<AdRecord> out;
  std::copy_if(ads.begin(), ads.end(), std::back_inserter(out), keep);
  return out;
}

Table matrix_table(const ImpressionMatrix &m) {
  Table t;
  t.columns = {"gender", "age", "impressions"};
  for (Gender g : kGenders)
    for (AgeBucket a : kAgeBuckets)
      t.rows.push_back({std::string(to_string(g)), std::string(to_string(a)), m.at(g, a)});
  return t;
}

std::optional<std::array<double, 3>> party_age_profile(const std::vector<AdRecord> &ads,
                                                       const GroupDistribution &potential,
                                                       const GroupDistribution &population,
                                                       Date collection_date) {
  const ImpressionMatrix m = impressions_by_demographic(ads, false, collection_date);
  if (!(m.total() > 0.0)) return std::nullopt;
  const GroupDistribution normalized =
      normalize_to_population(matrix_groups(m), potential, population);
  return coarsen_age_buckets(age_marginal(normalized));
}

// ---------------------------------------------------------------------------
// Report sections.

struct ReportContext {
  const RunConfig &config;
  const Prepared &data;
  const StanceAssignments &labels;
  const std::map<std::string, Party> &party_of_page;
  const stance::StancePipeline &pipeline;
  OutputSink &sink;
  std::vector<std::string> &diagnostics;

  bool is(const AdRecord &ad, StanceLabel l) const { return labels.at(ad.id) == l; }
  bool migration(const AdRecord &ad) const { return !is(ad, StanceLabel::kNeutralOrIrrelevant); }
  Party party(const AdRecord &ad) const {
    auto it = party_of_page.find(ad.page_id);
    return it == party_of_page.end() ? Party::kNone : it->second;
  }
};

void write_pyramid(ReportContext &ctx, const std::string &name, const ImpressionMatrix &m,
                   const std::string &title) {
  ctx.sink.write_table(name, matrix_table(m));
  bool positive = false;
  for (Gender g : {Gender::kMale, Gender::kFemale})
    for (AgeBucket a : kAgeBuckets) positive |= m.at(g, a) > 0.0;
  if (positive) ctx.sink.write(name + ".svg", render_pyramid(m, title));
  else ctx.diagnostics.push_back("no male or female impressions for " + name + "; chart skipped");
}

void audience_section(ReportContext &ctx) {
  const auto &ads = ctx.data.period.ads;
  const Date cd = ctx.config.collection_date;

  // Stance counts and impression shares.
  std::map<StanceLabel, std::pair<std::size_t, CompensatedSum>> by_label;
  for (StanceLabel l : {StanceLabel::kPro, StanceLabel::kAnti, StanceLabel::kNeutralOrIrrelevant})
    by_label[l];
  for (const auto &ad : ads) {
    auto &entry = by_label[ctx.labels.at(ad.id)];
    ++entry.first;
    entry.second.add(estimated_impressions(ad, cd));
  }
  double total = 0.0, migration_total = 0.0;
  for (const auto &[l, e] : by_label) {
    total += e.second.value();
    if (l != StanceLabel::kNeutralOrIrrelevant) migration_total += e.second.value();
  }
  Table counts;
  counts.columns = {"stance", "ads", "impressions", "share_of_impressions",
                    "share_of_migration_impressions"};
  for (const auto &[l, e] : by_label) {
    const double imps = e.second.value();
    std::optional<double> migration_share;
    if (l != StanceLabel::kNeutralOrIrrelevant && migration_total > 0.0)
      migration_share = imps / migration_total;
    counts.rows.push_back({std::string(stance::to_string(l)), count_cell(e.first), imps,
                           opt_cell(total > 0.0 ? std::optional(imps / total) : std::nullopt),
                           opt_cell(migration_share)});
  }
  ctx.sink.write_table("stance_counts", counts);

  // Demographic matrices and pyramids.
  const auto pro = select(ads, [&](const AdRecord &a) { return ctx.is(a, StanceLabel::kPro); });
  const auto anti = select(ads, [&](const AdRecord &a) { return ctx.is(a, StanceLabel::kAnti); });
  const auto migration = select(ads, [&](const AdRecord &a) { return ctx.migration(a); });
  const ImpressionMatrix m_all = impressions_by_demographic(ads, true, cd);
  const ImpressionMatrix m_pro = impressions_by_demographic(pro, true, cd);
  const ImpressionMatrix m_anti = impressions_by_demographic(anti, true, cd);
  const ImpressionMatrix m_migration = impressions_by_demographic(migration, true, cd);
  write_pyramid(ctx, "demographics_all", m_all, "Impressions by age and gender: all ads");
  write_pyramid(ctx, "demographics_pro", m_pro, "Impressions by age and gender: pro-migration ads");
  write_pyramid(ctx, "demographics_anti", m_anti,
                "Impressions by age and gender: anti-migration ads");

  // Gender odds and odds ratios.
  Table odds;
  odds.columns = {"group", "ads", "male_impressions", "female_impressions", "odds"};
  auto add_odds = [&](const std::string &group, const ImpressionMatrix &m) {
    odds.rows.push_back({group, count_cell(m.ads_count), m.gender_total(Gender::kMale),
                         m.gender_total(Gender::kFemale), opt_cell(gender_odds(m))});
  };
  Table ratios;
  ratios.columns = {"comparison", "odds_ratio"};
  add_odds("all", m_all);
  add_odds("migration", m_migration);
  add_odds("pro", m_pro);
  add_odds("anti", m_anti);
  ratios.rows.push_back({"anti_vs_pro", opt_cell(gender_odds_ratio(m_anti, m_pro))});
  ratios.rows.push_back({"pro_vs_anti", opt_cell(gender_odds_ratio(m_pro, m_anti))});
  ratios.rows.push_back({"migration_vs_all", opt_cell(gender_odds_ratio(m_migration, m_all))});
  for (Party p : kMajorParties) {
    const std::string name(to_string(p));
    const auto party_ads = select(ads, [&](const AdRecord &a) { return ctx.party(a) == p; });
    if (party_ads.empty()) continue;
    const auto party_migration =
        select(party_ads, [&](const AdRecord &a) { return ctx.migration(a); });
    const auto party_other =
        select(party_ads, [&](const AdRecord &a) { return !ctx.migration(a); });
    const auto m_party_migration = impressions_by_demographic(party_migration, true, cd);
    const auto m_party_other = impressions_by_demographic(party_other, true, cd);
    add_odds(name + ":all", impressions_by_demographic(party_ads, true, cd));
    add_odds(name + ":migration", m_party_migration);
    add_odds(name + ":other", m_party_other);
    ratios.rows.push_back({name + ":migration_vs_other",
                           opt_cell(gender_odds_ratio(m_party_migration, m_party_other))});
  }
  ctx.sink.write_table("gender_odds", odds);
  ctx.sink.write_table("odds_ratios", ratios);

  // Survey comparison.
  if (ctx.config.survey.empty()) return;
  const GroupDistribution population = read_population_shares(ctx.config.population);
  const auto potential = read_potential_audience(ctx.config.potential_audience);
  const auto survey = read_survey(ctx.config.survey);
  std::map<std::string, std::array<double, 3>> ads_all, ads_migration;
  for (Party p : kMajorParties) {
    const std::string name(to_string(p));
    auto f = potential.find(name);
    if (f == potential.end()) continue;
    const auto party_ads = select(ads, [&](const AdRecord &a) { return ctx.party(a) == p; });
    const auto party_migration =
        select(party_ads, [&](const AdRecord &a) { return ctx.migration(a); });
    if (auto d = party_age_profile(party_ads, f->second, population, cd)) ads_all[name] = *d;
    if (auto d = party_age_profile(party_migration, f->second, population, cd))
      ads_migration[name] = *d;
  }
  Table cmp;
  cmp.columns = {"party"};
  for (const char *source : {"ads_all", "ads_migration", "survey"})
    for (const char *bucket : kCoarseBuckets) cmp.columns.push_back(std::string(source) + ":" + bucket);
  for (const char *c : {"tv_all_vs_survey", "tv_migration_vs_survey", "tv_all_vs_migration",
                        "flagged"})
    cmp.columns.push_back(c);
  for (const auto &row : compare_to_survey(ads_all, ads_migration, survey)) {
    std::vector<Cell> r = {row.party};
    for (const auto *d : {&row.ads_all, &row.ads_migration, &row.survey})
      for (std::size_t i = 0; i < 3; ++i)
        r.push_back(*d ? Cell((**d)[i]) : Cell(std::monostate{}));
    r.push_back(opt_cell(row.tv_all_vs_survey));
    r.push_back(opt_cell(row.tv_migration_vs_survey));
    r.push_back(opt_cell(row.tv_all_vs_migration));
    r.push_back(row.flagged);
    cmp.rows.push_back(std::move(r));
  }
  ctx.sink.write_table("survey_comparison", cmp);
}

void targeting_section(ReportContext &ctx) {
  const RegionCatalog regions = RegionCatalog::Load(ctx.config.regions);
  const TargetingSummary s = targeting_summary(ctx.data.period.ads, regions,
                                               ctx.config.targeting_epsilon,
                                               ctx.config.collection_date);
  Table summary;
  summary.columns = {"metric", "value"};
  summary.rows = {
      {"targeted_ads", count_cell(s.targeted_ads)},
      {"untargeted_ads", count_cell(s.untargeted_ads)},
      {"targeted_impressions", s.targeted_impressions},
      {"untargeted_impressions", s.untargeted_impressions},
      {"targeted_share", s.targeted_share},
      {"untargeted_share", s.untargeted_share},
  };
  for (GenderExclusive g :
       {GenderExclusive::kMaleOnly, GenderExclusive::kFemaleOnly, GenderExclusive::kNone}) {
    auto it = s.by_gender.find(g);
    const ReachBin bin = it == s.by_gender.end() ? ReachBin{} : it->second;
    summary.rows.push_back({"gender_" + std::string(to_string(g)) + "_ads", count_cell(bin.ads)});
    summary.rows.push_back(
        {"gender_" + std::string(to_string(g)) + "_impressions", bin.impressions});
  }
  ctx.sink.write_table("targeting_summary", summary);

  auto bins = [](const std::vector<ReachBin> &v, const std::string &key) {
    Table t;
    t.columns = {key, "ads", "impressions"};
    for (std::size_t i = 0; i < v.size(); ++i)
      t.rows.push_back({count_cell(i), count_cell(v[i].ads), v[i].impressions});
    return t;
  };
  ctx.sink.write_table("targeting_regions", bins(s.by_regions_reached, "regions_reached"));
  ctx.sink.write_table("targeting_age_buckets",
                       bins(s.by_age_buckets_reached, "age_buckets_reached"));
  ctx.diagnostics.insert(ctx.diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
}

void agenda_section(ReportContext &ctx) {
  const PeriodFilter grid = *ctx.data.filter;
  const Date cd = ctx.config.collection_date;
  const ThemeCatalog catalog =
      ctx.config.themes.empty() ? ThemeCatalog::Default() : ThemeCatalog::Load(ctx.config.themes);
  const TimeSeries news = news_series(ctx.data.period.articles, catalog, grid);

  StanceAssignments migration_labels;
  for (const auto &[id, l] : ctx.labels)
    migration_labels[id] = l == StanceLabel::kNeutralOrIrrelevant ? l : StanceLabel::kAnti;
  TimeSeries migration = impressions_series(ctx.data.period.ads, migration_labels,
                                            StanceLabel::kAnti, grid, cd);
  migration.set_name("impressions_migration");
  TimeSeries pro = impressions_series(ctx.data.period.ads, ctx.labels, StanceLabel::kPro, grid, cd);
  pro.set_name("impressions_pro");
  TimeSeries anti =
      impressions_series(ctx.data.period.ads, ctx.labels, StanceLabel::kAnti, grid, cd);
  anti.set_name("impressions_anti");

  const std::vector<TimeSeries> all = {news, migration, pro, anti};
  Table series;
  series.columns = {"date"};
  for (const auto &s : all) series.columns.push_back(s.name());
  for (std::size_t i = 0; i < news.size(); ++i) {
    std::vector<Cell> row = {news.date(i).ToString()};
    for (const auto &s : all) row.push_back(s[i]);
    series.rows.push_back(std::move(row));
  }
  ctx.sink.write_table("series", series);
  const auto events = ctx.config.events.empty() ? std::vector<EventMarker>{}
                                                : read_event_markers(ctx.config.events);
  ctx.sink.write("series.svg",
                 render_series(all, events, "News attention and migration ad impressions"));

  std::vector<GrangerResult> results;
  for (const TimeSeries *s : {&migration, &anti, &pro}) {
    results.push_back(granger_test(news, *s, ctx.config.granger));
    results.push_back(granger_test(*s, news, ctx.config.granger));
  }
  Table granger;
  granger.columns = {"cause", "effect", "lag", "f_statistic", "p_value", "rss_restricted",
                     "rss_unrestricted", "observations", "df_numerator", "df_denominator",
                     "significant"};
  json bundle = json::array();
  for (const auto &r : results) {
    for (const auto &g : r.lags) {
      granger.rows.push_back({r.cause, r.effect, std::int64_t{g.lag}, g.f_statistic, g.p_value,
                              g.rss_restricted, g.rss_unrestricted, count_cell(g.observations),
                              std::int64_t{g.df_numerator}, std::int64_t{g.df_denominator},
                              g.significant});
    }
    bundle.push_back(r.to_json());
  }
  ctx.sink.write("granger.csv", granger.ToCsv());
  ctx.sink.write("granger.json", bundle.dump(2) + "\n");
  ctx.sink.write("granger.svg", render_granger(results, "Granger F statistic by lag"));
}

void features_section(ReportContext &ctx) {
  Table t;
  t.columns = {"stage", "direction", "rank", "term", "weight"};
  auto add = [&](const std::string &stage, const stance::Classifier &model,
                 const stance::TfidfModel &features, const std::string &negative,
                 const std::string &positive) {
    if (model.linear_weights().empty()) return;
    const auto ranking = stance::top_features(model, features, ctx.config.top_features);
    for (std::size_t i = 0; i < ranking.most_negative.size(); ++i) {
      const auto &[term, w] = ranking.most_negative[i];
      t.rows.push_back({stage, negative, count_cell(i + 1), term, w});
    }
    for (std::size_t i = 0; i < ranking.most_positive.size(); ++i) {
      const auto &[term, w] = ranking.most_positive[i];
      t.rows.push_back({stage, positive, count_cell(i + 1), term, w});
    }
  };
  add("relevance", ctx.pipeline.relevance_model(), ctx.pipeline.relevance_features(),
      "irrelevant", "relevant");
  add("leaning", ctx.pipeline.leaning_model(), ctx.pipeline.leaning_features(), "pro", "anti");
  ctx.sink.write_table("top_features", t);
}

template <typename Body>
CommandResult run_with_sink(Command cmd, const RunConfig &c, Body body) {
  validate_config(c, cmd);
  OutputSink sink(c.output_dir);
  CommandResult result;
  try {
    sink.make_dir();
    body(sink, result.diagnostics);
  } catch (...) {
    sink.rollback();
    throw;
  }
  result.files = sink.written();
  std::sort(result.files.begin(), result.files.end());
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands.

CommandResult cmd_ingest(const RunConfig &c) {
  return run_with_sink(Command::kIngest, c, [&](OutputSink &sink, auto &diagnostics) {
    const Manifest m = read_manifest(c.manifest);
    const Dataset raw = load_dataset(m.paths);
    const Prepared p = prepare(c);
    const KeywordList keywords = KeywordList::Load(c.keywords);
    const auto matched = keyword_ids(p.period.ads, keywords);

    sink.make_dir("dataset");
    persist_dataset(p.period, sink.path("dataset"), p.filter);
    for (const char *f : {"ads.jsonl", "articles.gkg.tsv", "pages.jsonl", "annotations.psv",
                          "manifest.json"})
      sink.adopt(std::string("dataset/") + f);

    Table t;
    t.columns = {"key", "value"};
    t.rows = {{"ads_loaded", count_cell(raw.ads.size())},
              {"ads_unique", count_cell(p.all.ads.size())},
              {"ads_in_period", count_cell(p.period.ads.size())},
              {"ads_keyword_matched", count_cell(matched.size())},
              {"articles_loaded", count_cell(p.all.articles.size())},
              {"articles_in_period", count_cell(p.period.articles.size())},
              {"pages", count_cell(p.all.pages.size())},
              {"annotations", count_cell(p.all.annotations.size())}};
    if (p.filter) {
      t.rows.push_back({"period_start", p.filter->start_date.ToString()});
      t.rows.push_back({"period_end", p.filter->end_date.ToString()});
    }
    sink.write_table("ingest_summary", t);
    diagnostics = p.all.diagnostics;
    sink.write_table("ingest_diagnostics", diagnostics_table(diagnostics));
  });
}

CommandResult cmd_resolve(const RunConfig &c) {
  return run_with_sink(Command::kResolve, c, [&](OutputSink &sink, auto &diagnostics) {
    const Manifest m = read_manifest(c.manifest);
    const Dataset d = load_dataset(m.paths);
    const Gazetteer g = Gazetteer::Load(c.gazetteer);
    const auto pages = resolve_pages(d.pages, g);
    write_pages_file(sink.path("pages_resolved.jsonl"), pages);
    sink.adopt("pages_resolved.jsonl");

    Table rollup;
    rollup.columns = {"party", "pages"};
    for (const auto &[party, n] : affiliation_rollup(pages))
      rollup.rows.push_back({std::string(to_string(party)), count_cell(n)});
    sink.write_table("affiliation", rollup);

    std::map<ActorType, std::size_t> by_type;
    for (const auto &p : pages) ++by_type[p.actor_type];
    Table types;
    types.columns = {"actor_type", "pages"};
    for (const auto &[type, n] : by_type)
      types.rows.push_back({std::string(to_string(type)), count_cell(n)});
    sink.write_table("actor_types", types);
    diagnostics = g.conflicts();
    for (const auto &p : pages) {
      if (p.actor_type == ActorType::kUnresolved)
        diagnostics.push_back("page " + p.page_id + " unresolved");
    }
  });
}

CommandResult cmd_train(const RunConfig &c) {
  return run_with_sink(Command::kTrain, c, [&](OutputSink &sink, auto &diagnostics) {
    const Prepared p = prepare(c);
    const KeywordList keywords = KeywordList::Load(c.keywords);
    const TrainingOutcome t = train(c, p.all, keywords);
    sink.write("model.json", t.pipeline.to_json().dump(2) + "\n");
    sink.write_table("training_summary", t.summary);
    diagnostics = t.diagnostics;
  });
}

CommandResult cmd_classify(const RunConfig &c) {
  return run_with_sink(Command::kClassify, c, [&](OutputSink &sink, auto &) {
    const auto pipeline = stance::StancePipeline::Load(default_model_path(c));
    const Prepared p = prepare(c);
    const KeywordList keywords = KeywordList::Load(c.keywords);
    const auto labels = classify_ads(p.period.ads, keywords, pipeline);
    sink.write_table("stance", stance_table(p.period.ads, labels, c.collection_date));
  });
}

CommandResult cmd_report(const RunConfig &c) {
  return run_with_sink(Command::kReport, c, [&](OutputSink &sink, auto &diagnostics) {
    if (!c.report.any()) return;
    const Prepared p = prepare(c);
    const KeywordList keywords = KeywordList::Load(c.keywords);
    const Gazetteer gazetteer = Gazetteer::Load(c.gazetteer);
    std::map<std::string, Party> party_of_page;
    for (const auto &page : resolve_pages(p.all.pages, gazetteer))
      party_of_page[page.page_id] = page.party_affiliation;

    TrainingOutcome t = train(c, p.all, keywords);
    const auto labels = classify_ads(p.period.ads, keywords, t.pipeline);
    diagnostics = p.all.diagnostics;
    diagnostics.insert(diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
    diagnostics.insert(diagnostics.end(), gazetteer.conflicts().begin(),
                       gazetteer.conflicts().end());

    sink.write("model.json", t.pipeline.to_json().dump(2) + "\n");
    sink.write_table("training_summary", t.summary);
    sink.write_table("stance", stance_table(p.period.ads, labels, c.collection_date));

    ReportContext ctx{c, p, labels, party_of_page, t.pipeline, sink, diagnostics};
    if (c.report.audience) audience_section(ctx);
    if (c.report.targeting) targeting_section(ctx);
    if (c.report.agenda) agenda_section(ctx);
    if (c.report.features) features_section(ctx);
    sink.write_table("diagnostics", diagnostics_table(diagnostics));
  });
}

CommandResult run_command(Command cmd, const RunConfig &c) {
  switch (cmd) {
    case Command::kIngest: return cmd_ingest(c);
    case Command::kResolve: return cmd_resolve(c);
    case Command::kTrain: return cmd_train(c);
    case Command::kClassify: return cmd_classify(c);
    case Command::kReport: return cmd_report(c);
  }
  throw ValidationError("unknown command");
}

}  // namespace adlens
