#ifndef ADLENS_STANCE_MODELS_H_
#define ADLENS_STANCE_MODELS_H_

// Binary text classifiers over sparse TF-IDF rows. Labels are 0/1.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adlens/stance/tfidf.h"
#include "json.hpp"

namespace adlens::stance {

enum class ModelFamily {
  kMultinomialNaiveBayes,
  kLogisticRegression,
  kRandomForest,
  kLinearSvm,
};

std::string_view to_string(ModelFamily f);
std::optional<ModelFamily> parse_model_family(std::string_view s);

// Hyperparameter keys per family:
//   multinomial_naive_bayes: alpha
//   logistic_regression:     l2
//   random_forest:           n_trees, min_samples_split
//   linear_svm:              C
struct ModelSpec {
  ModelFamily family = ModelFamily::kMultinomialNaiveBayes;
  std::map<std::string, double> hyperparameters;

  // Throws ValidationError when a key is missing or out of range.
  void validate() const;
  double get(const std::string &key) const;

  // Orders specs of one family from the smallest model to the largest:
  // fewer trees, stronger regularization, larger smoothing first.
  static bool SmallerModel(const ModelSpec &a, const ModelSpec &b);

  std::string ToString() const;
  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json &j);

  bool operator==(const ModelSpec &) const = default;

  static ModelSpec NaiveBayes(double alpha);
  static ModelSpec Logistic(double l2);
  static ModelSpec Forest(int n_trees, int min_samples_split);
  static ModelSpec Svm(double c);
};

struct TrainOptions {
  std::uint64_t seed = 0;
  int num_threads = 1;  // random forest trees only
};

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ModelFamily family() const = 0;
  // Positive favours class 1.
  virtual double decision(const SparseVector &x) const = 0;
  int predict(const SparseVector &x) const { return decision(x) > 0.0 ? 1 : 0; }
  std::vector<int> predict(const SparseMatrix &xs) const;

  // Weight per column for linear families; empty otherwise.
  virtual std::span<const double> linear_weights() const { return {}; }

  virtual nlohmann::json to_json() const = 0;
  static std::unique_ptr<Classifier> from_json(const nlohmann::json &j);
};

// Throws ValidationError on empty X, mismatched sizes or a single-class y.
std::unique_ptr<Classifier> train_classifier(const SparseMatrix &x, std::span<const int> y,
                                             std::size_t num_features, const ModelSpec &spec,
                                             const TrainOptions &options = {});

class NaiveBayesModel : public Classifier {
 public:
  NaiveBayesModel(const SparseMatrix &x, std::span<const int> y, std::size_t num_features,
                  double alpha);
  explicit NaiveBayesModel(const nlohmann::json &j);

  ModelFamily family() const override { return ModelFamily::kMultinomialNaiveBayes; }
  double decision(const SparseVector &x) const override;
  // log P(term | 1) - log P(term | 0).
  std::span<const double> linear_weights() const override { return weights_; }
  nlohmann::json to_json() const override;

  // Normalized log P(class | x) for classes 0 and 1.
  std::array<double, 2> log_posteriors(const SparseVector &x) const;
  const std::array<double, 2> &log_priors() const { return log_prior_; }
  const std::vector<double> &log_likelihoods(int cls) const { return log_prob_[cls]; }

 private:
  double alpha_ = 1.0;
  std::array<double, 2> log_prior_{};
  std::array<std::vector<double>, 2> log_prob_;
  std::vector<double> weights_;

  void derive_weights();
};

// Mean log-loss plus (l2/2)|w|^2; the intercept is not penalized.
class LogisticLoss {
 public:
  LogisticLoss(const SparseMatrix &x, std::span<const int> y, std::size_t num_features,
               double l2)
      : x_(x), y_(y), num_features_(num_features), l2_(l2) {}

  std::size_t dimension() const { return num_features_ + 1; }  // weights, then bias
  double value(std::span<const double> params) const;
  // Returns the loss; writes the gradient.
  double gradient(std::span<const double> params, std::span<double> grad) const;

 private:
  const SparseMatrix &x_;
  std::span<const int> y_;
  std::size_t num_features_;
  double l2_;
};

class LogisticRegressionModel : public Classifier {
 public:
  struct Fit {
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
  };

  LogisticRegressionModel(const SparseMatrix &x, std::span<const int> y,
                          std::size_t num_features, double l2,
                          double tolerance = 1e-6, std::size_t max_iterations = 20000);
  explicit LogisticRegressionModel(const nlohmann::json &j);

  ModelFamily family() const override { return ModelFamily::kLogisticRegression; }
  double decision(const SparseVector &x) const override { return x.dot(weights_) + bias_; }
  std::span<const double> linear_weights() const override { return weights_; }
  nlohmann::json to_json() const override;
  const Fit &fit() const { return fit_; }

 private:
  double l2_ = 1.0;
  std::vector<double> weights_;
  double bias_ = 0.0;
  Fit fit_;
};

// Primal subgradient descent on (lambda/2)|w|^2 + mean hinge loss with
// lambda = 1/(C n); the bias rides along as a constant feature.
class LinearSvmModel : public Classifier {
 public:
  LinearSvmModel(const SparseMatrix &x, std::span<const int> y, std::size_t num_features,
                 double c, std::size_t iterations = 1000);
  explicit LinearSvmModel(const nlohmann::json &j);

  ModelFamily family() const override { return ModelFamily::kLinearSvm; }
  double decision(const SparseVector &x) const override { return x.dot(weights_) + bias_; }
  std::span<const double> linear_weights() const override { return weights_; }
  nlohmann::json to_json() const override;

 private:
  double c_ = 1.0;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

// Gini-split trees on bootstrap samples with sqrt(V) candidate features per
// split. Tree t draws from derive_seed(seed, t), so the forest is identical
// for any thread count.
class RandomForestModel : public Classifier {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 = leaf
    double threshold = 0.0;     // go left when x <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    double positive_fraction = 0.0;

    bool operator==(const Node &) const = default;
  };
  using Tree = std::vector<Node>;

  RandomForestModel(const SparseMatrix &x, std::span<const int> y, std::size_t num_features,
                    int n_trees, int min_samples_split, const TrainOptions &options);
  explicit RandomForestModel(const nlohmann::json &j);

  ModelFamily family() const override { return ModelFamily::kRandomForest; }
  // Mean tree probability of class 1, minus one half.
  double decision(const SparseVector &x) const override;
  nlohmann::json to_json() const override;

  const std::vector<Tree> &trees() const { return trees_; }

 private:
  std::size_t num_features_ = 0;
  int min_samples_split_ = 2;
  std::vector<Tree> trees_;
};

}  // namespace adlens::stance

#endif  // ADLENS_STANCE_MODELS_H_
