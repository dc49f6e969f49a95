#ifndef ADLENS_TEXT_H_
#define ADLENS_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace adlens {

// Lowercases ASCII and the Latin-1/Latin Extended-A letters used by Italian.
// Invalid UTF-8 bytes are passed through unchanged.
std::string utf8_lower(std::string_view text);

// Splits on anything that is not a letter or digit and lowercases each piece.
// Apostrophes split ("l'immigrazione" -> "l", "immigrazione").
std::vector<std::string> word_tokens(std::string_view text);

// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char delimiter);

std::string join(const std::vector<std::string> &parts, std::string_view sep);

}  // namespace adlens

#endif  // ADLENS_TEXT_H_
