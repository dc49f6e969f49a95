#include "adlens/stance/evaluation.h"

#include <numeric>

#include "adlens/error.h"
#include "adlens/random.h"

namespace adlens::stance {

Metrics compute_metrics(const std::vector<int> &truth, const std::vector<int> &predicted,
                        int num_classes) {
  if (truth.size() != predicted.size())
    throw ValidationError("truth and prediction lengths differ");
  const auto k = static_cast<std::size_t>(num_classes);
  Metrics m;
  m.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++m.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
    correct += truth[i] == predicted[i];
  }
  m.per_class.resize(k);
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = m.confusion[c][c], predicted_c = 0, actual_c = 0;
    for (std::size_t o = 0; o < k; ++o) {
      predicted_c += m.confusion[o][c];
      actual_c += m.confusion[c][o];
    }
    auto &cm = m.per_class[c];
    cm.support = actual_c;
    cm.precision = predicted_c ? static_cast<double>(tp) / static_cast<double>(predicted_c) : 0.0;
    cm.recall = actual_c ? static_cast<double>(tp) / static_cast<double>(actual_c) : 0.0;
    cm.f1 = cm.precision + cm.recall > 0.0
                ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                : 0.0;
    f1_sum += cm.f1;
  }
  m.macro_f1 = f1_sum / static_cast<double>(k);
  m.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
  return m;
}

Folds stratified_folds(const std::vector<int> &labels, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross-validation needs k >= 2");
  if (static_cast<std::size_t>(k) > labels.size())
    throw ValidationError("k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(labels.size()) + " available examples");
  Folds folds;
  folds.fold_of.assign(labels.size(), 0);
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto &[cls, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(k)) {
      folds.stratified = false;
      folds.warnings.push_back("class " + std::to_string(cls) + " has " +
                               std::to_string(members.size()) + " members, fewer than k = " +
                               std::to_string(k) + "; using non-stratified folds");
    }
  }
  Rng rng(seed);
  if (!folds.stratified) {
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t i = 0; i < order.size(); ++i)
      folds.fold_of[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return folds;
  }
  // Continue the round-robin across classes so fold sizes stay balanced.
  std::size_t next = 0;
  for (auto &[cls, members] : by_class) {
    rng.shuffle(members);
    for (std::size_t idx : members) {
      folds.fold_of[idx] = static_cast<int>(next % static_cast<std::size_t>(k));
      ++next;
    }
  }
  return folds;
}

CvResult cross_validate(const LabeledCorpus &corpus, const ModelSpec &spec, int k,
                        std::uint64_t seed, const TfidfOptions &tfidf, int num_threads) {
  spec.validate();
  if (corpus.docs.size() != corpus.labels.size())
    throw ValidationError("documents and labels differ in length");
  const Folds folds = stratified_folds(corpus.labels, k, seed);
  std::vector<int> predicted(corpus.docs.size(), 0);
  for (int f = 0; f < k; ++f) {
    TokenizedCorpus train_docs, test_docs;
    std::vector<int> train_y;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
      if (folds.fold_of[i] == f) {
        test_docs.push_back(corpus.docs[i]);
        test_idx.push_back(i);
      } else {
        train_docs.push_back(corpus.docs[i]);
        train_y.push_back(corpus.labels[i]);
      }
    }
    const TfidfModel vec = fit_tfidf(train_docs, tfidf);
    const auto model = train_classifier(
        transform(train_docs, vec), train_y, vec.vocabulary_size(), spec,
        TrainOptions{derive_seed(seed, static_cast<std::uint64_t>(f)), num_threads});
    const auto pred = model->predict(transform(test_docs, vec));
    for (std::size_t i = 0; i < test_idx.size(); ++i) predicted[test_idx[i]] = pred[i];
  }
  CvResult r;
  r.metrics = compute_metrics(corpus.labels, predicted, 2);
  r.stratified = folds.stratified;
  r.warnings = folds.warnings;
  return r;
}

GridSearchResult grid_search(const LabeledCorpus &corpus, const std::vector<ModelSpec> &grid,
                             int k, std::uint64_t seed, const TfidfOptions &tfidf,
                             int num_threads) {
  if (grid.empty()) throw ValidationError("empty hyperparameter grid");
  for (const auto &s : grid) {
    if (s.family != grid.front().family)
      throw ValidationError("grid mixes model families");
  }
  GridSearchResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.evaluated.push_back({grid[i], cross_validate(corpus, grid[i], k, seed, tfidf, num_threads)});
    if (i == 0) continue;
    const double f1 = result.evaluated[i].cv.metrics.macro_f1;
    const double best_f1 = result.evaluated[best].cv.metrics.macro_f1;
    if (f1 > best_f1 || (f1 == best_f1 && ModelSpec::SmallerModel(grid[i], grid[best])))
      best = i;
  }
  result.best = result.evaluated[best].spec;
  result.best_cv = result.evaluated[best].cv;
  return result;
}

std::vector<ModelSpec> expand_grid(ModelFamily family,
                                   const std::map<std::string, std::vector<double>> &axes) {
  std::vector<ModelSpec> out = {ModelSpec{family, {}}};
  for (const auto &[key, values] : axes) {
    if (values.empty()) throw ValidationError("grid axis '" + key + "' has no values");
    std::vector<ModelSpec> next;
    for (const auto &partial : out) {
      for (double v : values) {
        ModelSpec s = partial;
        s.hyperparameters[key] = v;
        next.push_back(std::move(s));
      }
    }
    out = std::move(next);
  }
  for (const auto &s : out) s.validate();
  return out;
}

std::vector<ModelSpec> default_grid(ModelFamily family) {
  switch (family) {
    case ModelFamily::kMultinomialNaiveBayes: {
      std::vector<double> alphas;
      for (int i = 1; i <= 10; ++i) alphas.push_back(i / 10.0);
      return expand_grid(family, {{"alpha", alphas}});
    }
    case ModelFamily::kRandomForest:
      return expand_grid(family, {{"n_trees", {50, 100, 200}}, {"min_samples_split", {2, 3, 5}}});
    case ModelFamily::kLogisticRegression:
      return expand_grid(family, {{"l2", {0.01, 0.1, 1, 10}}});
    case ModelFamily::kLinearSvm:
      return expand_grid(family, {{"C", {0.01, 0.1, 1, 10}}});
  }
  return {};
}

}  // namespace adlens::stance
