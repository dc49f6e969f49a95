#include "adlens/stance/pipeline.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "adlens/error.h"
#include "adlens/random.h"

namespace adlens::stance {

using nlohmann::json;

namespace {
constexpr const char *kFormat = "adlens.stance_pipeline";
constexpr int kFormatVersion = 1;
}  // namespace

std::string_view to_string(StanceLabel s) {
  switch (s) {
    case StanceLabel::kPro: return "pro";
    case StanceLabel::kAnti: return "anti";
    case StanceLabel::kNeutralOrIrrelevant: return "neutral_or_irrelevant";
  }
  return "";
}

std::optional<StanceLabel> parse_stance_label(std::string_view s) {
  if (s == "pro") return StanceLabel::kPro;
  if (s == "anti") return StanceLabel::kAnti;
  if (s == "neutral_or_irrelevant") return StanceLabel::kNeutralOrIrrelevant;
  return std::nullopt;
}

StancePipeline StancePipeline::Train(const TrainingSets &sets, const PipelineSpec &spec,
                                     const TrainOptions &options) {
  TokenizedCorpus rel_docs, lean_docs;
  std::vector<int> rel_y, lean_y;
  for (const auto &[text, cls] : sets.relevance_set) {
    rel_docs.push_back(tokenize_stem(text, spec.tokens));
    rel_y.push_back(cls == Relevance::kRelevant ? 1 : 0);
  }
  for (const auto &[text, cls] : sets.leaning_set) {
    lean_docs.push_back(tokenize_stem(text, spec.tokens));
    lean_y.push_back(cls == Leaning::kAnti ? 1 : 0);
  }
  return Train(rel_docs, rel_y, lean_docs, lean_y, spec, options);
}

StancePipeline StancePipeline::Train(const TokenizedCorpus &relevance_docs,
                                     const std::vector<int> &relevance_labels,
                                     const TokenizedCorpus &leaning_docs,
                                     const std::vector<int> &leaning_labels,
                                     const PipelineSpec &spec, const TrainOptions &options) {
  StancePipeline p;
  p.spec_ = spec;
  p.relevance_tfidf_ = fit_tfidf(relevance_docs, spec.tfidf);
  p.relevance_ = train_classifier(transform(relevance_docs, p.relevance_tfidf_),
                                  relevance_labels, p.relevance_tfidf_.vocabulary_size(),
                                  spec.relevance,
                                  TrainOptions{derive_seed(options.seed, 0), options.num_threads});
  p.relevance_prior_ =
      relevance_labels.empty()
          ? 0.0
          : static_cast<double>(std::count(relevance_labels.begin(), relevance_labels.end(), 1)) /
                static_cast<double>(relevance_labels.size());
  p.leaning_tfidf_ = fit_tfidf(leaning_docs, spec.tfidf);
  p.leaning_ = train_classifier(transform(leaning_docs, p.leaning_tfidf_), leaning_labels,
                                p.leaning_tfidf_.vocabulary_size(), spec.leaning,
                                TrainOptions{derive_seed(options.seed, 1), options.num_threads});
  return p;
}

StanceLabel StancePipeline::classify_tokens(const std::vector<std::string> &tokens) const {
  const SparseVector x = relevance_tfidf_.transform(tokens);
  const bool relevant = x.index.empty() ? relevance_prior_ > 0.5 : relevance_->predict(x) == 1;
  if (!relevant) return StanceLabel::kNeutralOrIrrelevant;
  return leaning_->predict(leaning_tfidf_.transform(tokens)) == 1 ? StanceLabel::kAnti
                                                                  : StanceLabel::kPro;
}

StanceLabel StancePipeline::classify(std::string_view text) const {
  return classify_tokens(tokenize_stem(text, spec_.tokens));
}

StanceLabel classify_stance(std::string_view text, const StancePipeline &p) {
  return p.classify(text);
}

json StancePipeline::to_json() const {
  return {{"format", kFormat},
          {"version", kFormatVersion},
          {"tokens", spec_.tokens.to_json()},
          {"relevance",
           {{"spec", spec_.relevance.to_json()},
            {"tfidf", relevance_tfidf_.to_json()},
            {"model", relevance_->to_json()},
            {"prior", relevance_prior_}}},
          {"leaning",
           {{"spec", spec_.leaning.to_json()},
            {"tfidf", leaning_tfidf_.to_json()},
            {"model", leaning_->to_json()}}}};
}

StancePipeline StancePipeline::from_json(const json &j) {
  if (j.value("format", "") != kFormat) throw DataError("not a stance pipeline model file");
  if (j.value("version", 0) != kFormatVersion)
    throw DataError("unsupported model file version " + std::to_string(j.value("version", 0)));
  StancePipeline p;
  try {
    p.spec_.tokens = TokenPipelineConfig::from_json(j.at("tokens"));
    p.spec_.relevance = ModelSpec::from_json(j.at("relevance").at("spec"));
    p.spec_.leaning = ModelSpec::from_json(j.at("leaning").at("spec"));
    p.relevance_tfidf_ = TfidfModel::from_json(j.at("relevance").at("tfidf"));
    p.leaning_tfidf_ = TfidfModel::from_json(j.at("leaning").at("tfidf"));
    p.spec_.tfidf = p.relevance_tfidf_.options();
    p.relevance_ = Classifier::from_json(j.at("relevance").at("model"));
    p.relevance_prior_ = j.at("relevance").at("prior").get<double>();
    p.leaning_ = Classifier::from_json(j.at("leaning").at("model"));
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  return p;
}

void StancePipeline::Save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << to_json().dump() << '\n';
}

StancePipeline StancePipeline::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw DataError(path + ": " + e.what());
  }
  return from_json(j);
}

CvResult cross_validate_pipeline(const TokenizedCorpus &docs,
                                 const std::vector<StanceLabel> &labels,
                                 const PipelineSpec &spec, int k, std::uint64_t seed,
                                 int num_threads) {
  if (docs.size() != labels.size()) throw ValidationError("documents and labels differ in length");
  std::vector<int> truth;
  for (auto l : labels) truth.push_back(static_cast<int>(l));
  const Folds folds = stratified_folds(truth, k, seed);
  std::vector<int> predicted(docs.size(), 0);
  for (int f = 0; f < k; ++f) {
    TokenizedCorpus rel_docs, lean_docs;
    std::vector<int> rel_y, lean_y;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (folds.fold_of[i] == f) continue;
      rel_docs.push_back(docs[i]);
      rel_y.push_back(labels[i] == StanceLabel::kNeutralOrIrrelevant ? 0 : 1);
      if (labels[i] != StanceLabel::kNeutralOrIrrelevant) {
        lean_docs.push_back(docs[i]);
        lean_y.push_back(labels[i] == StanceLabel::kAnti ? 1 : 0);
      }
    }
    const auto pipeline =
        StancePipeline::Train(rel_docs, rel_y, lean_docs, lean_y, spec,
                              TrainOptions{derive_seed(seed, static_cast<std::uint64_t>(f)),
                                           num_threads});
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (folds.fold_of[i] == f)
        predicted[i] = static_cast<int>(pipeline.classify_tokens(docs[i]));
    }
  }
  CvResult r;
  r.metrics = compute_metrics(truth, predicted, 3);
  r.stratified = folds.stratified;
  r.warnings = folds.warnings;
  return r;
}

FeatureRanking top_features(const Classifier &model, const TfidfModel &features,
                            std::size_t n) {
  const auto w = model.linear_weights();
  if (w.empty())
    throw ValidationError(std::string(to_string(model.family())) + " has no linear weights");
  if (w.size() != features.vocabulary_size())
    throw ValidationError("weight vector does not match the vocabulary");
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  // Ties resolve by term so rankings are reproducible.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (w[a] != w[b]) return w[a] < w[b];
    return features.terms()[a] < features.terms()[b];
  });
  FeatureRanking r;
  const std::size_t take = std::min(n, order.size());
  for (std::size_t i = 0; i < take; ++i)
    r.most_negative.emplace_back(features.terms()[order[i]], w[order[i]]);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t idx = order[order.size() - 1 - i];
    r.most_positive.emplace_back(features.terms()[idx], w[idx]);
  }
  return r;
}

}  // namespace adlens::stance
