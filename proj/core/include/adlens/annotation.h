#ifndef ADLENS_ANNOTATION_H_
#define ADLENS_ANNOTATION_H_

// Human stance annotations and inter-annotator agreement.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adlens {

// Agreement with "our country has been made a worse place to live by people
// coming to live here": 1 = strongly disagree .. 5 = strongly agree, or the
// ad is off-topic.
class LikertLabel {
 public:
  static LikertLabel Irrelevant() { return LikertLabel(0); }
  static LikertLabel Score(int score);  // throws ValidationError outside 1..5
  static std::optional<LikertLabel> Parse(std::string_view text);

  bool irrelevant() const { return value_ == 0; }
  int score() const { return value_; }  // 0 for irrelevant
  std::string ToString() const;

  bool operator==(const LikertLabel &) const = default;
  auto operator<=>(const LikertLabel &) const = default;

 private:
  explicit LikertLabel(int v) : value_(v) {}
  int value_;
};

struct AnnotationRecord {
  std::string ad_id;
  std::string annotator_id;
  LikertLabel label = LikertLabel::Irrelevant();

  bool operator==(const AnnotationRecord &) const = default;
};

// Reads "ad_id|annotator_id|label" lines; rejects duplicate (ad, annotator).
std::vector<AnnotationRecord> read_annotations(const std::string &path);
void write_annotations(const std::string &path,
                       const std::vector<AnnotationRecord> &annotations);

// Items x annotators; a missing cell means the annotator did not label it.
class ReliabilityMatrix {
 public:
  ReliabilityMatrix(std::size_t items, std::size_t annotators)
      : items_(items), annotators_(annotators), cells_(items * annotators) {}

  std::size_t items() const { return items_; }
  std::size_t annotators() const { return annotators_; }

  const std::optional<double> &at(std::size_t item, std::size_t annotator) const {
    return cells_[item * annotators_ + annotator];
  }
  void set(std::size_t item, std::size_t annotator, std::optional<double> value) {
    cells_[item * annotators_ + annotator] = value;
  }

 private:
  std::size_t items_;
  std::size_t annotators_;
  std::vector<std::optional<double>> cells_;
};

enum class AlphaMetric { kNominal, kOrdinal, kInterval };

struct AlphaResult {
  double alpha = 1.0;
  // Expected disagreement is zero (every pairable value identical); alpha is
  // reported as 1 by convention.
  bool degenerate = false;
  std::size_t pairable_items = 0;
  double pairable_values = 0.0;
};

// Coincidence-matrix Krippendorff's alpha with missing data. Throws
// ValidationError unless at least two items carry two or more values.
AlphaResult krippendorff_alpha(const ReliabilityMatrix &m, AlphaMetric metric);

enum class Consensus { kKeep, kDrop };

// Drop iff at least two annotators judged the ad irrelevant.
Consensus relevance_consensus(std::span<const LikertLabel> labels);

enum class TieBreak { kTowardLower, kTowardHigher };

// Most frequent label. Ties go to the score closest to 3; equidistant scores
// follow `tie`; irrelevant loses every tie against a score.
LikertLabel majority_label(std::span<const LikertLabel> labels,
                           TieBreak tie = TieBreak::kTowardLower);

enum class Relevance { kRelevant, kIrrelevant };
enum class Leaning { kPro, kAnti };

std::string_view to_string(Relevance r);
std::string_view to_string(Leaning l);

struct TrainingSets {
  std::vector<std::pair<std::string, Relevance>> relevance_set;
  std::vector<std::pair<std::string, Leaning>> leaning_set;
};

// One example per annotated ad (sorted by ad id), then `extra_irrelevant`
// appended as irrelevant. Throws DataError for an annotated ad without text.
TrainingSets build_training_sets(const std::vector<AnnotationRecord> &annotations,
                                 const std::map<std::string, std::string> &ad_texts,
                                 const std::vector<std::string> &extra_irrelevant,
                                 TieBreak tie = TieBreak::kTowardLower);

// Agreement figures in the order of the reference protocol: drop ads judged
// irrelevant by two or more annotators, then ordinal alpha over the 1-5
// scores, then nominal alpha over the {1,2} vs {4,5} polarity.
struct AgreementReport {
  std::size_t ads_total = 0;
  std::size_t ads_dropped = 0;
  AlphaResult five_label;
  std::size_t polarity_items = 0;
  AlphaResult polarity;
};

AgreementReport agreement_report(const std::vector<AnnotationRecord> &annotations);

}  // namespace adlens

#endif  // ADLENS_ANNOTATION_H_
