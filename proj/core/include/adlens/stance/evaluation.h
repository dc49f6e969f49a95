#ifndef ADLENS_STANCE_EVALUATION_H_
#define ADLENS_STANCE_EVALUATION_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "adlens/stance/models.h"
#include "adlens/stance/tfidf.h"

namespace adlens::stance {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  bool operator==(const ClassMetrics &) const = default;
};

struct Metrics {
  std::vector<ClassMetrics> per_class;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  // confusion[truth][predicted]
  std::vector<std::vector<std::size_t>> confusion;

  bool operator==(const Metrics &) const = default;
};

// Undefined precision or recall (no predictions / no support) counts as 0.
Metrics compute_metrics(const std::vector<int> &truth, const std::vector<int> &predicted,
                        int num_classes);

struct LabeledCorpus {
  TokenizedCorpus docs;
  std::vector<int> labels;  // 0..num_classes-1
};

struct Folds {
  std::vector<int> fold_of;  // fold index per document
  bool stratified = true;
  std::vector<std::string> warnings;
};

// Per class: seeded shuffle, then deal round-robin into k folds. Falls back to
// plain seeded k-fold (with a warning) when a class has fewer than k members.
Folds stratified_folds(const std::vector<int> &labels, int k, std::uint64_t seed);

struct CvResult {
  Metrics metrics;  // pooled over held-out predictions
  bool stratified = true;
  std::vector<std::string> warnings;

  bool operator==(const CvResult &other) const {
    return metrics == other.metrics && stratified == other.stratified;
  }
};

// TF-IDF is refit on each training fold. Throws ValidationError if k < 2 or
// k exceeds the corpus size.
CvResult cross_validate(const LabeledCorpus &corpus, const ModelSpec &spec, int k,
                        std::uint64_t seed, const TfidfOptions &tfidf = {},
                        int num_threads = 1);

struct GridPoint {
  ModelSpec spec;
  CvResult cv;
};

struct GridSearchResult {
  ModelSpec best;
  CvResult best_cv;
  std::vector<GridPoint> evaluated;
};

// Exhaustive; best macro F1, ties to the smaller model.
GridSearchResult grid_search(const LabeledCorpus &corpus, const std::vector<ModelSpec> &grid,
                             int k, std::uint64_t seed, const TfidfOptions &tfidf = {},
                             int num_threads = 1);

// Cartesian product of per-key value lists.
std::vector<ModelSpec> expand_grid(ModelFamily family,
                                   const std::map<std::string, std::vector<double>> &axes);
std::vector<ModelSpec> default_grid(ModelFamily family);

}  // namespace adlens::stance

#endif  // ADLENS_STANCE_EVALUATION_H_
