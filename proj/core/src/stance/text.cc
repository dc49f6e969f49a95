#include "adlens/stance/text.h"

#include "adlens/error.h"
#include "adlens/text.h"

namespace adlens::stance {

const std::set<std::string, std::less<>> &italian_stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",     "ad",    "al",    "alla",  "alle",  "ai",    "agli",  "all",
      "anche", "che",   "chi",   "ci",    "come",  "con",   "da",    "dal",
      "dalla", "dai",   "degli", "dei",   "del",   "della", "delle", "dello",
      "di",    "e",     "è",     "ed",    "gli",   "ha",    "hanno", "i",
      "il",    "in",    "io",    "la",    "le",    "lo",    "loro",  "ma",
      "mi",    "ne",    "nei",   "nel",   "nella", "noi",   "non",   "o",
      "per",   "più",   "si",    "sono",  "su",    "sul",   "sulla", "tra",
      "fra",   "un",    "una",   "uno",   "voi",   "l",     "d",     "c",
      "questo", "questa", "quello", "quella", "se",  "siamo", "sia",  "tutti",
      "tutto", "ogni",  "nostro", "nostra", "vostro", "suo", "sua",  "cosa",
  };
  return words;
}

TokenPipelineConfig TokenPipelineConfig::Default() {
  TokenPipelineConfig cfg;
  cfg.stopwords = italian_stopwords();
  return cfg;
}

nlohmann::json TokenPipelineConfig::to_json() const {
  return {{"lowercase", lowercase},
          {"stemmer", stemmer == Stemmer::kItalianLight ? "italian_light" : "none"},
          {"min_token_length", min_token_length},
          {"stopwords", std::vector<std::string>(stopwords.begin(), stopwords.end())}};
}

TokenPipelineConfig TokenPipelineConfig::from_json(const nlohmann::json &j) {
  TokenPipelineConfig cfg;
  cfg.lowercase = j.value("lowercase", true);
  const std::string stemmer = j.value("stemmer", "italian_light");
  if (stemmer == "italian_light") cfg.stemmer = Stemmer::kItalianLight;
  else if (stemmer == "none") cfg.stemmer = Stemmer::kNone;
  else throw ValidationError("unknown stemmer: " + stemmer);
  cfg.min_token_length = j.value("min_token_length", 2);
  if (cfg.min_token_length < 1) throw ValidationError("min_token_length must be >= 1");
  if (j.contains("stopwords")) {
    for (const auto &w : j["stopwords"]) cfg.stopwords.insert(w.get<std::string>());
  } else {
    cfg.stopwords = italian_stopwords();
  }
  return cfg;
}

namespace {

// Final vowel length in bytes (1 for ASCII, 2 for the accented forms).
std::size_t final_vowel_bytes(std::string_view t) {
  if (t.empty()) return 0;
  const char last = t.back();
  if (last == 'a' || last == 'e' || last == 'i' || last == 'o') return 1;
  static constexpr std::string_view kAccented[] = {"à", "è", "é", "ì", "ò", "ù"};
  for (auto v : kAccented) {
    if (t.ends_with(v)) return v.size();
  }
  return 0;
}

// Replaces each lowercased token with its original spelling. Lowercasing keeps
// byte lengths for every letter word_tokens accepts.
void restore_case(std::string_view text, std::vector<std::string> &tokens) {
  const std::string lowered = utf8_lower(text);
  std::size_t pos = 0;
  for (auto &tok : tokens) {
    const auto at = lowered.find(tok, pos);
    if (at == std::string::npos) continue;
    tok = std::string(text.substr(at, tok.size()));
    pos = at + tok.size();
  }
}

}  // namespace

std::string italian_light_stem(std::string_view token) {
  std::string t(token);
  for (std::string_view suffix : {"che", "chi", "ghe", "ghi"}) {
    if (t.size() > suffix.size() + 1 && t.ends_with(suffix)) {
      t.resize(t.size() - 2);
      return t;
    }
  }
  const std::size_t v = final_vowel_bytes(t);
  if (v > 0 && utf8_length(std::string_view(t).substr(0, t.size() - v)) >= 3)
    t.resize(t.size() - v);
  return t;
}

std::vector<std::string> tokenize_stem(std::string_view text,
                                       const TokenPipelineConfig &cfg) {
  std::vector<std::string> out;
  std::vector<std::string> raw = word_tokens(text);
  if (!cfg.lowercase) restore_case(text, raw);
  for (auto &tok : raw) {
    if (utf8_length(tok) < static_cast<std::size_t>(cfg.min_token_length)) continue;
    if (cfg.stopwords.count(cfg.lowercase ? tok : utf8_lower(tok))) continue;
    out.push_back(cfg.stemmer == Stemmer::kItalianLight ? italian_light_stem(tok) : tok);
  }
  return out;
}

}  // namespace adlens::stance
