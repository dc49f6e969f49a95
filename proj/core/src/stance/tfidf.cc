#include "adlens/stance/tfidf.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "adlens/error.h"

namespace adlens::stance {

std::vector<std::string> expand_ngrams(const std::vector<std::string> &tokens,
                                       int ngram_max) {
  std::vector<std::string> terms = tokens;
  for (int n = 2; n <= ngram_max; ++n) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (int k = 1; k < n; ++k) g += " " + tokens[i + static_cast<std::size_t>(k)];
      terms.push_back(std::move(g));
    }
  }
  return terms;
}

TfidfModel fit_tfidf(const TokenizedCorpus &corpus, const TfidfOptions &options) {
  if (corpus.empty()) throw DataError("cannot fit TF-IDF on an empty corpus");
  if (options.ngram_max < 1) throw ValidationError("ngram_max must be >= 1");
  std::map<std::string, std::size_t> df;
  for (const auto &doc : corpus) {
    const auto terms = expand_ngrams(doc, options.ngram_max);
    for (const auto &t : std::set<std::string>(terms.begin(), terms.end())) ++df[t];
  }
  if (df.empty()) throw DataError("empty vocabulary: every token was filtered");
  TfidfModel m;
  m.options_ = options;
  const double n = static_cast<double>(corpus.size());
  for (const auto &[term, count] : df) {
    m.terms_.push_back(term);
    m.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  m.rebuild_index();
  return m;
}

void TfidfModel::rebuild_index() {
  vocabulary_.clear();
  for (std::uint32_t i = 0; i < terms_.size(); ++i) vocabulary_.emplace(terms_[i], i);
}

std::int64_t TfidfModel::column(const std::string &term) const {
  auto it = vocabulary_.find(term);
  return it == vocabulary_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

SparseVector TfidfModel::transform(const std::vector<std::string> &tokens) const {
  std::map<std::uint32_t, double> counts;
  for (const auto &t : expand_ngrams(tokens, options_.ngram_max)) {
    auto it = vocabulary_.find(t);
    if (it != vocabulary_.end()) counts[it->second] += 1.0;
  }
  SparseVector row;
  row.index.reserve(counts.size());
  row.value.reserve(counts.size());
  double norm2 = 0.0;
  for (const auto &[col, tf] : counts) {
    const double v = tf * idf_[col];
    row.index.push_back(col);
    row.value.push_back(v);
    norm2 += v * v;
  }
  if (options_.l2_normalize && norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto &v : row.value) v *= inv;
  }
  return row;
}

SparseMatrix transform(const TokenizedCorpus &docs, const TfidfModel &model) {
  SparseMatrix out;
  out.reserve(docs.size());
  for (const auto &d : docs) out.push_back(model.transform(d));
  return out;
}

nlohmann::json TfidfModel::to_json() const {
  return {{"l2_normalize", options_.l2_normalize},
          {"ngram_max", options_.ngram_max},
          {"terms", terms_},
          {"idf", idf_}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json &j) {
  TfidfModel m;
  m.options_.l2_normalize = j.at("l2_normalize").get<bool>();
  m.options_.ngram_max = j.at("ngram_max").get<int>();
  m.terms_ = j.at("terms").get<std::vector<std::string>>();
  m.idf_ = j.at("idf").get<std::vector<double>>();
  if (m.terms_.size() != m.idf_.size())
    throw DataError("TF-IDF model: terms and idf lengths differ");
  m.rebuild_index();
  return m;
}

}  // namespace adlens::stance
