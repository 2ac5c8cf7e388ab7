#pragma once

// Reference implementations written from the metric definitions, kept
// deliberately naive so they share no code or structure with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ragloop::oracle {

inline std::vector<std::string> split_spaces(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

inline std::string join(const std::vector<std::string>& toks) {
    std::string out;
    for (const auto& t : toks) out += (out.empty() ? "" : " ") + t;
    return out;
}

inline std::string lower(std::string s) {
    for (auto& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

inline std::string strip_punct(const std::string& s) {
    static const std::regex punct(R"([!-/:-@\[-`{-~])");
    return std::regex_replace(s, punct, "");
}

/// Lower, remove punctuation, remove articles, fix whitespace.
inline std::string normalize(const std::string& s) {
    static const std::regex articles(R"(\b(a|an|the)\b)");
    return join(split_spaces(std::regex_replace(strip_punct(lower(s)), articles, " ")));
}

inline int em(const std::string& pred, const std::vector<std::string>& golds) {
    int best = 0;
    for (const auto& g : golds) best = std::max(best, normalize(pred) == normalize(g) ? 1 : 0);
    return best;
}

inline int acc(const std::string& pred, const std::vector<std::string>& golds) {
    int best = 0;
    for (const auto& g : golds)
        best = std::max(best, normalize(pred).find(normalize(g)) != std::string::npos ? 1 : 0);
    return best;
}

inline double f1_pair(const std::vector<std::string>& p, const std::vector<std::string>& g) {
    if (p.empty() && g.empty()) return 1.0;
    if (p.empty() || g.empty()) return 0.0;
    std::set<std::string> distinct(p.begin(), p.end());
    long common = 0;
    for (const auto& t : distinct)
        common += std::min(std::count(p.begin(), p.end(), t), std::count(g.begin(), g.end(), t));
    if (common == 0) return 0.0;
    const double prec = double(common) / double(p.size());
    const double rec = double(common) / double(g.size());
    return 2 * prec * rec / (prec + rec);
}

inline double f1(const std::string& pred, const std::vector<std::string>& golds) {
    double best = 0.0;
    for (const auto& g : golds) best = std::max(best, f1_pair(split_spaces(normalize(pred)), split_spaces(normalize(g))));
    return best;
}

inline std::vector<std::string> long_tokens(const std::string& s) { return split_spaces(strip_punct(lower(s))); }

inline bool is_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& seq) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < seq.size() && j < sub.size(); ++i)
        if (seq[i] == sub[j]) ++j;
    return j == sub.size();
}

/// Longest common subsequence by enumerating every subsequence of `a`.
inline std::size_t lcs_enumerate(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t best = 0;
    const std::uint32_t limit = 1u << a.size();
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        std::vector<std::string> sub;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (mask & (1u << i)) sub.push_back(a[i]);
        if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
    }
    return best;
}

inline double rouge_l(const std::string& pred, const std::string& ref) {
    const auto p = long_tokens(pred), r = long_tokens(ref);
    if (p.empty() || r.empty()) return 0.0;
    const double l = double(lcs_enumerate(p, r));
    if (l == 0) return 0.0;
    const double prec = l / double(p.size()), rec = l / double(r.size());
    return 2 * prec * rec / (prec + rec);
}

inline std::vector<std::vector<std::string>> ngrams(const std::vector<std::string>& t, std::size_t n) {
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i + n <= t.size(); ++i) out.emplace_back(t.begin() + long(i), t.begin() + long(i + n));
    return out;
}

/// Sentence BLEU with the same smoothing convention as the library:
/// zero higher-order precisions become 1 / (2 |pred|), a zero unigram
/// precision makes the score 0.
inline double bleu(const std::string& pred, const std::string& ref, int max_n = 4) {
    const auto p = long_tokens(pred), r = long_tokens(ref);
    if (p.empty()) return 0.0;
    double product = 1.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto pg = ngrams(p, std::size_t(n)), rg = ngrams(r, std::size_t(n));
        double matched = 0;
        std::vector<std::vector<std::string>> seen;
        for (const auto& g : pg) {
            if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
            seen.push_back(g);
            matched += double(std::min(std::count(pg.begin(), pg.end(), g), std::count(rg.begin(), rg.end(), g)));
        }
        double prec;
        if (matched == 0) {
            if (n == 1) return 0.0;
            prec = 1.0 / (2.0 * double(p.size()));
        } else {
            prec = matched / double(pg.size());
        }
        product *= prec;
    }
    const double bp = p.size() >= r.size() ? 1.0 : std::exp(1.0 - double(r.size()) / double(p.size()));
    return bp * std::pow(product, 1.0 / max_n);
}

/// Okapi BM25 straight from the formula, over whitespace-tokenized documents.
struct Bm25Oracle {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> docs;
    double k1{1.2};
    double b{0.75};

    double score(const std::vector<std::string>& query, std::size_t d) const {
        const double n = double(docs.size());
        double total_len = 0;
        for (const auto& doc : docs) total_len += double(doc.size());
        const double avgdl = total_len / n;
        double s = 0;
        for (const auto& term : query) {
            double df = 0;
            for (const auto& doc : docs)
                if (std::find(doc.begin(), doc.end(), term) != doc.end()) df += 1;
            const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
            const double tf = double(std::count(docs[d].begin(), docs[d].end(), term));
            const double dl = double(docs[d].size());
            s += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl));
        }
        return s;
    }

    /// Every document with a positive score, best first, ties by id.
    std::vector<std::pair<std::string, double>> rank(const std::vector<std::string>& query) const {
        std::vector<std::pair<std::string, double>> out;
        for (std::size_t d = 0; d < docs.size(); ++d) {
            const double s = score(query, d);
            if (s > 0) out.emplace_back(ids[d], s);
        }
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
            return x.second != y.second ? x.second > y.second : x.first < y.first;
        });
        return out;
    }
};

} // namespace ragloop::oracle
