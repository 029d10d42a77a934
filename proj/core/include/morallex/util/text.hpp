#ifndef MORALLEX_UTIL_TEXT_HPP
#define MORALLEX_UTIL_TEXT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace morallex {

// Code-point level helpers used by tokenization. Coverage: full case
// mapping for ASCII, Latin-1 supplement, Latin Extended-A, Greek and
// Cyrillic; other letters pass through unchanged. Code points outside
// known letter ranges count as separators.
std::uint32_t lower_codepoint(std::uint32_t cp);
bool is_alphabetic_codepoint(std::uint32_t cp);

// Decode UTF-8 into code points; invalid bytes decode as U+FFFD.
std::vector<std::uint32_t> decode_utf8(std::string_view text);
std::string encode_utf8(const std::vector<std::uint32_t>& codepoints);

// Lowercase, then split on every non-alphabetic code point.
std::vector<std::string> split_alphabetic_lower(std::string_view text);

// Number formatting used by the text serializers. %.12g for lexicon
// scores (12 significant digits by contract), %.17g where an exact
// double round-trip is needed, %.9g for float32 vectors.
std::string format_score(double value);
std::string format_double_exact(double value);
std::string format_float(float value);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace morallex

#endif
