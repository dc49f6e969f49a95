#ifndef ADLENS_STANCE_TEXT_H_
#define ADLENS_STANCE_TEXT_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace adlens::stance {

enum class Stemmer { kItalianLight, kNone };

struct TokenPipelineConfig {
  bool lowercase = true;
  Stemmer stemmer = Stemmer::kItalianLight;
  int min_token_length = 2;
  std::set<std::string, std::less<>> stopwords;

  // Light Italian configuration with the built-in stopword list.
  static TokenPipelineConfig Default();

  nlohmann::json to_json() const;
  static TokenPipelineConfig from_json(const nlohmann::json &j);
};

const std::set<std::string, std::less<>> &italian_stopwords();

// Suffix stripping of plural and gender endings:
//   -che/-chi/-ghe/-ghi -> -c/-g   (amiche -> amic)
//   final a/e/i/o/à/è/é/ì/ò/ù dropped when at least three code points remain.
std::string italian_light_stem(std::string_view token);

std::vector<std::string> tokenize_stem(std::string_view text,
                                       const TokenPipelineConfig &cfg);

}  // namespace adlens::stance

#endif  // ADLENS_STANCE_TEXT_H_
