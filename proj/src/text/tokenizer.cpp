#include "ragloop/text/tokenizer.hpp"

#include <algorithm>
#include <cctype>

namespace ragloop::text {

namespace {

bool is_token_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

char lower_ascii(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

template <typename Fn>
void for_each_token(std::string_view text, const TokenizerConfig& cfg, Fn&& fn) {
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        if (cfg.stopwords.empty() || !cfg.stopwords.contains(token)) fn(token);
        token.clear();
    };
    for (char c : text) {
        if (is_token_byte(static_cast<unsigned char>(c))) {
            token.push_back(cfg.lowercase ? lower_ascii(c) : c);
        } else {
            flush();
        }
    }
    flush();
}

} // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
    std::vector<std::string> out;
    for_each_token(text, cfg, [&](const std::string& t) { out.push_back(t); });
    return out;
}

std::size_t count_tokens(std::string_view text, const TokenizerConfig& cfg) {
    std::size_t n = 0;
    for_each_token(text, cfg, [&](const std::string&) { ++n; });
    return n;
}

std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower_ascii);
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(),
                      [](char x, char y) { return lower_ascii(x) == lower_ascii(y); });
}

bool icontains(std::string_view haystack, std::string_view needle) {
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool pending_space = false;
    for (char c : trim(s)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = true;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

} // namespace ragloop::text
