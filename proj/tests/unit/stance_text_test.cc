#include <gtest/gtest.h>

#include "adlens/stance/text.h"

namespace adlens::stance {
namespace {

using Tokens = std::vector<std::string>;

TEST(StemTest, SuffixRules) {
  EXPECT_EQ(italian_light_stem("clandestini"), "clandestin");
  EXPECT_EQ(italian_light_stem("amiche"), "amic");
  EXPECT_EQ(italian_light_stem("laghi"), "lag");
  EXPECT_EQ(italian_light_stem("città"), "citt");
  EXPECT_EQ(italian_light_stem("ong"), "ong");
  EXPECT_EQ(italian_light_stem("tre"), "tre");
}

TEST(TokenizeStemTest, Examples) {
  const auto cfg = TokenPipelineConfig::Default();
  EXPECT_EQ(tokenize_stem("Clandestini al confine!", cfg), (Tokens{"clandestin", "confin"}));
  EXPECT_TRUE(tokenize_stem("", cfg).empty());
  EXPECT_EQ(tokenize_stem("ONG ONG", cfg), (Tokens{"ong", "ong"}));
}

TEST(TokenizeStemTest, ConfigKnobs) {
  TokenPipelineConfig cfg;
  cfg.stemmer = Stemmer::kNone;
  cfg.min_token_length = 1;
  EXPECT_EQ(tokenize_stem("Clandestini al confine!", cfg),
            (Tokens{"clandestini", "al", "confine"}));
  cfg.lowercase = false;
  EXPECT_EQ(tokenize_stem("ONG", cfg), (Tokens{"ONG"}));
  cfg.min_token_length = 4;
  cfg.lowercase = true;
  EXPECT_EQ(tokenize_stem("un sbarco a Lampedusa", cfg), (Tokens{"sbarco", "lampedusa"}));
}

TEST(TokenizeStemTest, StopwordsRemoved) {
  const auto &stop = italian_stopwords();
  EXPECT_TRUE(stop.count("il"));
  EXPECT_TRUE(stop.count("della"));
  EXPECT_TRUE(tokenize_stem("il della e con", TokenPipelineConfig::Default()).empty());
}

TEST(TokenPipelineConfigTest, JsonRoundTrip) {
  auto cfg = TokenPipelineConfig::Default();
  cfg.min_token_length = 3;
  const auto back = TokenPipelineConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.min_token_length, 3);
  EXPECT_EQ(back.stopwords, cfg.stopwords);
  EXPECT_EQ(back.stemmer, cfg.stemmer);
  EXPECT_EQ(back.lowercase, cfg.lowercase);
}

}  // namespace
}  // namespace adlens::stance
