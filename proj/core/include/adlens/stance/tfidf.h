#ifndef ADLENS_STANCE_TFIDF_H_
#define ADLENS_STANCE_TFIDF_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace adlens::stance {

// Sparse row with strictly increasing column indices.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
  double dot(const std::vector<double> &dense) const {
    double s = 0.0;
    for (std::size_t i = 0; i < index.size(); ++i) s += value[i] * dense[index[i]];
    return s;
  }
  bool operator==(const SparseVector &) const = default;
};

using SparseMatrix = std::vector<SparseVector>;
using TokenizedCorpus = std::vector<std::vector<std::string>>;

struct TfidfOptions {
  bool l2_normalize = true;
  int ngram_max = 1;  // 1 = unigrams, 2 adds bigrams
};

// Vocabulary sorted lexicographically; idf = ln((1+N)/(1+df)) + 1.
class TfidfModel {
 public:
  TfidfModel() = default;

  std::size_t vocabulary_size() const { return terms_.size(); }
  const std::vector<std::string> &terms() const { return terms_; }
  const std::vector<double> &idf() const { return idf_; }
  bool l2_normalize() const { return options_.l2_normalize; }
  const TfidfOptions &options() const { return options_; }
  // -1 when absent.
  std::int64_t column(const std::string &term) const;

  SparseVector transform(const std::vector<std::string> &tokens) const;

  nlohmann::json to_json() const;
  static TfidfModel from_json(const nlohmann::json &j);

  friend TfidfModel fit_tfidf(const TokenizedCorpus &corpus, const TfidfOptions &options);

 private:
  void rebuild_index();

  TfidfOptions options_;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> vocabulary_;
};

// Throws DataError on an empty corpus or when no token survives.
TfidfModel fit_tfidf(const TokenizedCorpus &corpus, const TfidfOptions &options = {});
SparseMatrix transform(const TokenizedCorpus &docs, const TfidfModel &model);

// Terms of one document after n-gram expansion.
std::vector<std::string> expand_ngrams(const std::vector<std::string> &tokens, int ngram_max);

}  // namespace adlens::stance

#endif  // ADLENS_STANCE_TFIDF_H_
