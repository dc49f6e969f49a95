#ifndef ADLENS_STANCE_PIPELINE_H_
#define ADLENS_STANCE_PIPELINE_H_

// Two-stage stance classifier: relevance first, then pro/anti leaning on the
// relevant ads.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adlens/annotation.h"
#include "adlens/stance/evaluation.h"
#include "adlens/stance/models.h"
#include "adlens/stance/text.h"
#include "adlens/stance/tfidf.h"

namespace adlens::stance {

enum class StanceLabel { kPro, kAnti, kNeutralOrIrrelevant };

std::string_view to_string(StanceLabel s);
std::optional<StanceLabel> parse_stance_label(std::string_view s);

// Relevance model: class 1 = relevant. Leaning model: class 1 = anti.
struct PipelineSpec {
  TokenPipelineConfig tokens = TokenPipelineConfig::Default();
  TfidfOptions tfidf;
  ModelSpec relevance = ModelSpec::Forest(100, 3);
  ModelSpec leaning = ModelSpec::NaiveBayes(0.4);
};

class StancePipeline {
 public:
  static StancePipeline Train(const TrainingSets &sets, const PipelineSpec &spec,
                              const TrainOptions &options);
  // Same, from already tokenized examples.
  static StancePipeline Train(const TokenizedCorpus &relevance_docs,
                              const std::vector<int> &relevance_labels,
                              const TokenizedCorpus &leaning_docs,
                              const std::vector<int> &leaning_labels,
                              const PipelineSpec &spec, const TrainOptions &options);

  // A text with no term in the relevance vocabulary gets the majority
  // relevance class of the training data.
  StanceLabel classify(std::string_view text) const;
  StanceLabel classify_tokens(const std::vector<std::string> &tokens) const;

  const PipelineSpec &spec() const { return spec_; }
  const TfidfModel &relevance_features() const { return relevance_tfidf_; }
  const TfidfModel &leaning_features() const { return leaning_tfidf_; }
  const Classifier &relevance_model() const { return *relevance_; }
  const Classifier &leaning_model() const { return *leaning_; }
  double relevance_prior() const { return relevance_prior_; }

  nlohmann::json to_json() const;
  static StancePipeline from_json(const nlohmann::json &j);
  void Save(const std::string &path) const;
  static StancePipeline Load(const std::string &path);

 private:
  PipelineSpec spec_;
  TfidfModel relevance_tfidf_;
  TfidfModel leaning_tfidf_;
  std::shared_ptr<const Classifier> relevance_;
  std::shared_ptr<const Classifier> leaning_;
  // Share of relevant training documents; decides texts with no known term.
  double relevance_prior_ = 0.0;
};

// Free-function form of StancePipeline::classify.
StanceLabel classify_stance(std::string_view text, const StancePipeline &p);

// 10-fold (by default) evaluation of the whole two-stage pipeline over three
// classes, stratified on the three-class label. Class indices follow
// StanceLabel.
CvResult cross_validate_pipeline(const TokenizedCorpus &docs,
                                 const std::vector<StanceLabel> &labels,
                                 const PipelineSpec &spec, int k, std::uint64_t seed,
                                 int num_threads = 1);

struct FeatureRanking {
  std::vector<std::pair<std::string, double>> most_negative;  // ascending weight
  std::vector<std::pair<std::string, double>> most_positive;  // descending weight
};

// Throws ValidationError for a model without linear weights.
FeatureRanking top_features(const Classifier &model, const TfidfModel &features,
                            std::size_t n);

}  // namespace adlens::stance

#endif  // ADLENS_STANCE_PIPELINE_H_
