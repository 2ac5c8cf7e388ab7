#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ragloop::text {

/// Lexical analysis settings shared by corpus statistics and the BM25 index.
///
/// Tokens are maximal runs of ASCII letters/digits or non-ASCII bytes, so UTF-8
/// words stay intact while ASCII punctuation and whitespace separate tokens.
struct TokenizerConfig {
    bool lowercase{true};
    std::set<std::string> stopwords;

    friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg = {});

/// Number of tokens `tokenize` would produce, without materializing them.
std::size_t count_tokens(std::string_view text, const TokenizerConfig& cfg = {});

std::string_view trim(std::string_view s);
/// Rvalue strings would leave the returned view dangling.
std::string_view trim(std::string&&) = delete;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);
std::string collapse_whitespace(std::string_view s);

} // namespace ragloop::text
