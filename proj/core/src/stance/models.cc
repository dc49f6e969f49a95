#include "adlens/stance/models.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "adlens/error.h"
#include "adlens/random.h"

namespace adlens::stance {

using nlohmann::json;

namespace {

constexpr std::string_view kFamilyNames[] = {"multinomial_naive_bayes", "logistic_regression",
                                             "random_forest", "linear_svm"};

void check_training_data(const SparseMatrix &x, std::span<const int> y,
                         std::size_t num_features) {
  if (x.empty()) throw ValidationError("cannot train on an empty matrix");
  if (x.size() != y.size()) throw ValidationError("row count and label count differ");
  bool seen[2] = {false, false};
  for (int v : y) {
    if (v != 0 && v != 1) throw ValidationError("labels must be 0 or 1");
    seen[v] = true;
  }
  if (!seen[0] || !seen[1]) throw ValidationError("training labels contain a single class");
  for (const auto &row : x) {
    if (!row.index.empty() && row.index.back() >= num_features)
      throw ValidationError("feature index outside the feature space");
  }
}

}  // namespace

std::string_view to_string(ModelFamily f) { return kFamilyNames[static_cast<std::size_t>(f)]; }

std::optional<ModelFamily> parse_model_family(std::string_view s) {
  for (std::size_t i = 0; i < std::size(kFamilyNames); ++i) {
    if (kFamilyNames[i] == s) return static_cast<ModelFamily>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ModelSpec.

double ModelSpec::get(const std::string &key) const {
  auto it = hyperparameters.find(key);
  if (it == hyperparameters.end())
    throw ValidationError(std::string(to_string(family)) + " needs hyperparameter '" + key + "'");
  return it->second;
}

void ModelSpec::validate() const {
  auto positive = [&](const char *key) {
    if (!(get(key) > 0.0)) throw ValidationError(std::string(key) + " must be positive");
  };
  auto integral = [&](const char *key, double min) {
    const double v = get(key);
    if (v < min || v != std::floor(v))
      throw ValidationError(std::string(key) + " must be an integer >= " +
                            std::to_string(static_cast<int>(min)));
  };
  switch (family) {
    case ModelFamily::kMultinomialNaiveBayes: positive("alpha"); break;
    case ModelFamily::kLogisticRegression: positive("l2"); break;
    case ModelFamily::kLinearSvm: positive("C"); break;
    case ModelFamily::kRandomForest:
      integral("n_trees", 1);
      integral("min_samples_split", 2);
      break;
  }
}

bool ModelSpec::SmallerModel(const ModelSpec &a, const ModelSpec &b) {
  switch (a.family) {
    case ModelFamily::kMultinomialNaiveBayes: return a.get("alpha") > b.get("alpha");
    case ModelFamily::kLogisticRegression: return a.get("l2") > b.get("l2");
    case ModelFamily::kLinearSvm: return a.get("C") < b.get("C");
    case ModelFamily::kRandomForest:
      if (a.get("n_trees") != b.get("n_trees")) return a.get("n_trees") < b.get("n_trees");
      return a.get("min_samples_split") > b.get("min_samples_split");
  }
  return false;
}

std::string ModelSpec::ToString() const {
  std::ostringstream out;
  out << to_string(family) << '(';
  bool first = true;
  for (const auto &[k, v] : hyperparameters) {
    if (!first) out << ", ";
    out << k << '=' << v;
    first = false;
  }
  out << ')';
  return out.str();
}

json ModelSpec::to_json() const {
  return {{"family", std::string(to_string(family))}, {"hyperparameters", hyperparameters}};
}

ModelSpec ModelSpec::from_json(const json &j) {
  ModelSpec s;
  auto fam = parse_model_family(j.at("family").get<std::string>());
  if (!fam) throw ValidationError("unknown model family: " + j.at("family").get<std::string>());
  s.family = *fam;
  s.hyperparameters = j.at("hyperparameters").get<std::map<std::string, double>>();
  s.validate();
  return s;
}

ModelSpec ModelSpec::NaiveBayes(double alpha) {
  return {ModelFamily::kMultinomialNaiveBayes, {{"alpha", alpha}}};
}
ModelSpec ModelSpec::Logistic(double l2) { return {ModelFamily::kLogisticRegression, {{"l2", l2}}}; }
ModelSpec ModelSpec::Forest(int n_trees, int min_samples_split) {
  return {ModelFamily::kRandomForest,
          {{"n_trees", n_trees}, {"min_samples_split", min_samples_split}}};
}
ModelSpec ModelSpec::Svm(double c) { return {ModelFamily::kLinearSvm, {{"C", c}}}; }

// ---------------------------------------------------------------------------
// Classifier.

std::vector<int> Classifier::predict(const SparseMatrix &xs) const {
  std::vector<int> out;
  out.reserve(xs.size());
  for (const auto &x : xs) out.push_back(predict(x));
  return out;
}

std::unique_ptr<Classifier> Classifier::from_json(const json &j) {
  auto fam = parse_model_family(j.at("family").get<std::string>());
  if (!fam) throw DataError("unknown model family in model file");
  switch (*fam) {
    case ModelFamily::kMultinomialNaiveBayes: return std::make_unique<NaiveBayesModel>(j);
    case ModelFamily::kLogisticRegression: return std::make_unique<LogisticRegressionModel>(j);
    case ModelFamily::kLinearSvm: return std::make_unique<LinearSvmModel>(j);
    case ModelFamily::kRandomForest: return std::make_unique<RandomForestModel>(j);
  }
  throw DataError("unknown model family");
}

std::unique_ptr<Classifier> train_classifier(const SparseMatrix &x, std::span<const int> y,
                                             std::size_t num_features, const ModelSpec &spec,
                                             const TrainOptions &options) {
  spec.validate();
  check_training_data(x, y, num_features);
  switch (spec.family) {
    case ModelFamily::kMultinomialNaiveBayes:
      return std::make_unique<NaiveBayesModel>(x, y, num_features, spec.get("alpha"));
    case ModelFamily::kLogisticRegression:
      return std::make_unique<LogisticRegressionModel>(x, y, num_features, spec.get("l2"));
    case ModelFamily::kLinearSvm:
      return std::make_unique<LinearSvmModel>(x, y, num_features, spec.get("C"));
    case ModelFamily::kRandomForest:
      return std::make_unique<RandomForestModel>(
          x, y, num_features, static_cast<int>(spec.get("n_trees")),
          static_cast<int>(spec.get("min_samples_split")), options);
  }
  throw ValidationError("unknown model family");
}

// ---------------------------------------------------------------------------
// Multinomial naive Bayes.

NaiveBayesModel::NaiveBayesModel(const SparseMatrix &x, std::span<const int> y,
                                 std::size_t num_features, double alpha)
    : alpha_(alpha) {
  std::array<std::vector<double>, 2> counts = {std::vector<double>(num_features, 0.0),
                                               std::vector<double>(num_features, 0.0)};
  std::array<double, 2> docs = {0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int c = y[i];
    docs[c] += 1.0;
    for (std::size_t k = 0; k < x[i].nnz(); ++k) counts[c][x[i].index[k]] += x[i].value[k];
  }
  const double n = docs[0] + docs[1];
  for (int c = 0; c < 2; ++c) {
    log_prior_[c] = std::log(docs[c] / n);
    const double total = std::accumulate(counts[c].begin(), counts[c].end(), 0.0) +
                         alpha * static_cast<double>(num_features);
    log_prob_[c].resize(num_features);
    for (std::size_t j = 0; j < num_features; ++j)
      log_prob_[c][j] = std::log((counts[c][j] + alpha) / total);
  }
  derive_weights();
}

void NaiveBayesModel::derive_weights() {
  if (log_prob_[0].size() != log_prob_[1].size())
    throw DataError("naive Bayes class likelihoods differ in length");
  weights_.resize(log_prob_[0].size());
  for (std::size_t j = 0; j < weights_.size(); ++j) weights_[j] = log_prob_[1][j] - log_prob_[0][j];
}

NaiveBayesModel::NaiveBayesModel(const json &j) {
  alpha_ = j.at("alpha").get<double>();
  log_prior_ = j.at("log_prior").get<std::array<double, 2>>();
  log_prob_[0] = j.at("log_prob").at(0).get<std::vector<double>>();
  log_prob_[1] = j.at("log_prob").at(1).get<std::vector<double>>();
  derive_weights();
}

std::array<double, 2> NaiveBayesModel::log_posteriors(const SparseVector &x) const {
  std::array<double, 2> joint = {log_prior_[0] + x.dot(log_prob_[0]),
                                 log_prior_[1] + x.dot(log_prob_[1])};
  const double m = std::max(joint[0], joint[1]);
  const double lse = m + std::log(std::exp(joint[0] - m) + std::exp(joint[1] - m));
  return {joint[0] - lse, joint[1] - lse};
}

double NaiveBayesModel::decision(const SparseVector &x) const {
  return (log_prior_[1] + x.dot(log_prob_[1])) - (log_prior_[0] + x.dot(log_prob_[0]));
}

json NaiveBayesModel::to_json() const {
  return {{"family", std::string(to_string(family()))},
          {"alpha", alpha_},
          {"log_prior", log_prior_},
          {"log_prob", {log_prob_[0], log_prob_[1]}}};
}

// ---------------------------------------------------------------------------
// Logistic regression.

namespace {

// log(1 + exp(-m)), stable for large |m|.
double log1pexp_neg(double m) {
  return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// 1 / (1 + exp(m)).
double sigmoid_neg(double m) {
  if (m >= 0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

double LogisticLoss::value(std::span<const double> params) const {
  const double bias = params[num_features_];
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    double z = bias;
    for (std::size_t k = 0; k < x_[i].nnz(); ++k) z += x_[i].value[k] * params[x_[i].index[k]];
    const double s = y_[i] == 1 ? 1.0 : -1.0;
    loss += log1pexp_neg(s * z);
  }
  loss /= static_cast<double>(x_.size());
  double reg = 0.0;
  for (std::size_t j = 0; j < num_features_; ++j) reg += params[j] * params[j];
  return loss + 0.5 * l2_ * reg;
}

double LogisticLoss::gradient(std::span<const double> params, std::span<double> grad) const {
  const double bias = params[num_features_];
  const double inv_n = 1.0 / static_cast<double>(x_.size());
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    double z = bias;
    for (std::size_t k = 0; k < x_[i].nnz(); ++k) z += x_[i].value[k] * params[x_[i].index[k]];
    const double s = y_[i] == 1 ? 1.0 : -1.0;
    loss += log1pexp_neg(s * z);
    const double coef = -s * sigmoid_neg(s * z) * inv_n;
    for (std::size_t k = 0; k < x_[i].nnz(); ++k) grad[x_[i].index[k]] += coef * x_[i].value[k];
    grad[num_features_] += coef;
  }
  double reg = 0.0;
  for (std::size_t j = 0; j < num_features_; ++j) {
    grad[j] += l2_ * params[j];
    reg += params[j] * params[j];
  }
  return loss * inv_n + 0.5 * l2_ * reg;
}

LogisticRegressionModel::LogisticRegressionModel(const SparseMatrix &x, std::span<const int> y,
                                                 std::size_t num_features, double l2,
                                                 double tolerance,
                                                 std::size_t max_iterations)
    : l2_(l2) {
  const LogisticLoss loss(x, y, num_features, l2);
  const std::size_t dim = loss.dimension();
  std::vector<double> params(dim, 0.0), grad(dim), trial(dim);
  double f = loss.gradient(params, grad);
  double step = 1.0;
  for (fit_.iterations = 0; fit_.iterations < max_iterations; ++fit_.iterations) {
    double g2 = 0.0;
    for (double g : grad) g2 += g * g;
    fit_.gradient_norm = std::sqrt(g2);
    if (fit_.gradient_norm < tolerance) {
      fit_.converged = true;
      break;
    }
    // Armijo backtracking; the step grows again after each accepted move.
    step *= 2.0;
    double f_trial;
    while (true) {
      for (std::size_t j = 0; j < dim; ++j) trial[j] = params[j] - step * grad[j];
      f_trial = loss.value(trial);
      if (f_trial <= f - 0.5 * step * g2 || step < 1e-12) break;
      step *= 0.5;
    }
    params.swap(trial);
    f = loss.gradient(params, grad);
  }
  weights_.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(num_features));
  bias_ = params[num_features];
}

LogisticRegressionModel::LogisticRegressionModel(const json &j) {
  l2_ = j.at("l2").get<double>();
  weights_ = j.at("weights").get<std::vector<double>>();
  bias_ = j.at("bias").get<double>();
}

json LogisticRegressionModel::to_json() const {
  return {{"family", std::string(to_string(family()))},
          {"l2", l2_},
          {"weights", weights_},
          {"bias", bias_}};
}

// ---------------------------------------------------------------------------
// Linear SVM.

LinearSvmModel::LinearSvmModel(const SparseMatrix &x, std::span<const int> y,
                               std::size_t num_features, double c, std::size_t iterations)
    : c_(c) {
  const double n = static_cast<double>(x.size());
  const double lambda = 1.0 / (c * n);
  const double radius = 1.0 / std::sqrt(lambda);
  // Index num_features holds the bias.
  std::vector<double> w(num_features + 1, 0.0), sub(num_features + 1);

  auto margin = [&](std::size_t i) {
    return x[i].dot(w) + w[num_features];
  };
  auto objective = [&]() {
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = y[i] == 1 ? 1.0 : -1.0;
      hinge += std::max(0.0, 1.0 - s * margin(i));
    }
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return 0.5 * lambda * reg + hinge / n;
  };

  std::vector<double> best = w;
  double best_obj = objective();
  for (std::size_t t = 1; t <= iterations; ++t) {
    for (std::size_t j = 0; j < w.size(); ++j) sub[j] = lambda * w[j];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = y[i] == 1 ? 1.0 : -1.0;
      if (s * margin(i) < 1.0) {
        for (std::size_t k = 0; k < x[i].nnz(); ++k) sub[x[i].index[k]] -= s * x[i].value[k] / n;
        sub[num_features] -= s / n;
      }
    }
    const double eta = 1.0 / (lambda * static_cast<double>(t));
    double norm2 = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] -= eta * sub[j];
      norm2 += w[j] * w[j];
    }
    if (norm2 > radius * radius) {
      const double scale = radius / std::sqrt(norm2);
      for (double &v : w) v *= scale;
    }
    const double obj = objective();
    if (obj < best_obj) {
      best_obj = obj;
      best = w;
    }
  }
  weights_.assign(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(num_features));
  bias_ = best[num_features];
}

LinearSvmModel::LinearSvmModel(const json &j) {
  c_ = j.at("C").get<double>();
  weights_ = j.at("weights").get<std::vector<double>>();
  bias_ = j.at("bias").get<double>();
}

json LinearSvmModel::to_json() const {
  return {{"family", std::string(to_string(family()))},
          {"C", c_},
          {"weights", weights_},
          {"bias", bias_}};
}

// ---------------------------------------------------------------------------
// Random forest.

namespace {

double value_at(const SparseVector &row, std::uint32_t feature) {
  auto it = std::lower_bound(row.index.begin(), row.index.end(), feature);
  if (it == row.index.end() || *it != feature) return 0.0;
  return row.value[static_cast<std::size_t>(it - row.index.begin())];
}

class TreeBuilder {
 public:
  TreeBuilder(const SparseMatrix &x, std::span<const int> y, std::size_t num_features,
              int min_samples_split, std::uint64_t seed)
      : x_(x),
        y_(y),
        mtry_(std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(num_features)))))),
        min_samples_split_(min_samples_split),
        rng_(seed) {}

  RandomForestModel::Tree Build() {
    // Bootstrap: sample weights are draw counts.
    std::vector<double> weight(x_.size(), 0.0);
    for (std::size_t i = 0; i < x_.size(); ++i) weight[rng_.uniform_index(x_.size())] += 1.0;
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (weight[i] > 0.0) samples.push_back({static_cast<std::uint32_t>(i), weight[i]});
    }
    tree_.clear();
    Grow(std::move(samples));
    return std::move(tree_);
  }

 private:
  struct Sample {
    std::uint32_t row;
    double weight;
  };
  struct Split {
    std::uint32_t feature = 0;
    double threshold = 0.0;
    double impurity = 0.0;
    bool found = false;
  };

  std::int32_t Grow(std::vector<Sample> samples) {
    double total = 0.0, positive = 0.0;
    for (const auto &s : samples) {
      total += s.weight;
      if (y_[s.row] == 1) positive += s.weight;
    }
    const auto id = static_cast<std::int32_t>(tree_.size());
    tree_.push_back({});
    tree_[static_cast<std::size_t>(id)].positive_fraction = positive / total;
    if (total < min_samples_split_ || positive == 0.0 || positive == total) return id;

    const Split split = BestSplit(samples, total, positive);
    if (!split.found) return id;

    std::vector<Sample> left, right;
    for (const auto &s : samples) {
      (value_at(x_[s.row], split.feature) <= split.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    const std::int32_t l = Grow(std::move(left));
    const std::int32_t r = Grow(std::move(right));
    auto &node = tree_[static_cast<std::size_t>(id)];
    node.feature = static_cast<std::int32_t>(split.feature);
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split BestSplit(const std::vector<Sample> &samples, double total, double positive) {
    // Features that are zero for every sample in the node are constant.
    std::vector<std::uint32_t> features;
    for (const auto &s : samples) {
      const auto &idx = x_[s.row].index;
      features.insert(features.end(), idx.begin(), idx.end());
    }
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());

    Split best;
    std::size_t evaluated = 0;
    std::vector<std::tuple<double, double, int>> column;  // value, weight, label
    for (std::size_t k = 0; k < features.size() && evaluated < mtry_; ++k) {
      std::swap(features[k], features[k + rng_.uniform_index(features.size() - k)]);
      const std::uint32_t f = features[k];
      column.clear();
      for (const auto &s : samples) column.emplace_back(value_at(x_[s.row], f), s.weight, y_[s.row]);
      std::sort(column.begin(), column.end());
      if (std::get<0>(column.front()) == std::get<0>(column.back())) continue;
      ++evaluated;

      double left_w = 0.0, left_pos = 0.0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left_w += std::get<1>(column[i]);
        if (std::get<2>(column[i]) == 1) left_pos += std::get<1>(column[i]);
        const double v = std::get<0>(column[i]), next = std::get<0>(column[i + 1]);
        if (v == next) continue;
        const double right_w = total - left_w, right_pos = positive - left_pos;
        const double impurity = Gini(left_w, left_pos) + Gini(right_w, right_pos);
        if (!best.found || impurity < best.impurity) {
          best.found = true;
          best.impurity = impurity;
          best.feature = f;
          best.threshold = v + (next - v) / 2.0;
        }
      }
    }
    return best;
  }

  // Weighted Gini impurity: w * (1 - p^2 - (1-p)^2).
  static double Gini(double w, double pos) {
    if (w <= 0.0) return 0.0;
    const double p = pos / w;
    return w * 2.0 * p * (1.0 - p);
  }

  const SparseMatrix &x_;
  std::span<const int> y_;
  std::size_t mtry_;
  int min_samples_split_;
  Rng rng_;
  RandomForestModel::Tree tree_;
};

}  // namespace

RandomForestModel::RandomForestModel(const SparseMatrix &x, std::span<const int> y,
                                     std::size_t num_features, int n_trees,
                                     int min_samples_split, const TrainOptions &options)
    : num_features_(num_features), min_samples_split_(min_samples_split) {
  trees_.resize(static_cast<std::size_t>(n_trees));
  const int workers = std::max(1, std::min(options.num_threads, n_trees));
  auto work = [&](int worker) {
    for (int t = worker; t < n_trees; t += workers) {
      TreeBuilder builder(x, y, num_features, min_samples_split,
                          derive_seed(options.seed, static_cast<std::uint64_t>(t)));
      trees_[static_cast<std::size_t>(t)] = builder.Build();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto &t : threads) t.join();
  }
}

RandomForestModel::RandomForestModel(const json &j) {
  num_features_ = j.at("num_features").get<std::size_t>();
  min_samples_split_ = j.at("min_samples_split").get<int>();
  for (const auto &jt : j.at("trees")) {
    Tree tree;
    for (const auto &jn : jt) {
      Node n;
      n.feature = jn.at(0).get<std::int32_t>();
      n.threshold = jn.at(1).get<double>();
      n.left = jn.at(2).get<std::int32_t>();
      n.right = jn.at(3).get<std::int32_t>();
      n.positive_fraction = jn.at(4).get<double>();
      tree.push_back(n);
    }
    trees_.push_back(std::move(tree));
  }
}

double RandomForestModel::decision(const SparseVector &x) const {
  double sum = 0.0;
  for (const auto &tree : trees_) {
    std::size_t node = 0;
    while (tree[node].feature >= 0) {
      const double v = value_at(x, static_cast<std::uint32_t>(tree[node].feature));
      node = static_cast<std::size_t>(v <= tree[node].threshold ? tree[node].left
                                                                 : tree[node].right);
    }
    sum += tree[node].positive_fraction;
  }
  return sum / static_cast<double>(trees_.size()) - 0.5;
}

json RandomForestModel::to_json() const {
  json trees = json::array();
  for (const auto &tree : trees_) {
    json jt = json::array();
    for (const auto &n : tree)
      jt.push_back({n.feature, n.threshold, n.left, n.right, n.positive_fraction});
    trees.push_back(std::move(jt));
  }
  return {{"family", std::string(to_string(family()))},
          {"num_features", num_features_},
          {"min_samples_split", min_samples_split_},
          {"trees", std::move(trees)}};
}

}  // namespace adlens::stance
