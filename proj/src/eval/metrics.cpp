#include "ragloop/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ragloop::eval {

namespace {

void require_golds(std::span<const std::string> golds) {
    if (golds.empty()) throw std::invalid_argument("at least one gold answer is required");
}

std::string lower_no_punct(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::ispunct(u)) continue;
        out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool is_article(const std::string& t) { return t == "a" || t == "an" || t == "the"; }

double f1_of(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
    if (pred.empty() || gold.empty()) return pred.empty() && gold.empty() ? 1.0 : 0.0;
    std::unordered_map<std::string, int> counts;
    for (const auto& t : gold) ++counts[t];
    std::size_t common = 0;
    for (const auto& t : pred) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    if (common == 0) return 0.0;
    const double p = static_cast<double>(common) / static_cast<double>(pred.size());
    const double r = static_cast<double>(common) / static_cast<double>(gold.size());
    return 2.0 * p * r / (p + r);
}

} // namespace

std::string normalize_answer(std::string_view text) {
    std::string out;
    for (const auto& tok : split_ws(lower_no_punct(text))) {
        if (is_article(tok)) continue;
        if (!out.empty()) out.push_back(' ');
        out += tok;
    }
    return out;
}

std::vector<std::string> answer_tokens(std::string_view text) { return split_ws(normalize_answer(text)); }

int exact_match(std::string_view pred, std::span<const std::string> golds) {
    require_golds(golds);
    const auto p = normalize_answer(pred);
    return std::any_of(golds.begin(), golds.end(), [&](const std::string& g) { return normalize_answer(g) == p; })
               ? 1
               : 0;
}

double token_f1(std::string_view pred, std::span<const std::string> golds) {
    require_golds(golds);
    const auto p = answer_tokens(pred);
    double best = 0.0;
    for (const auto& g : golds) best = std::max(best, f1_of(p, answer_tokens(g)));
    return best;
}

int accuracy_contains(std::string_view pred, std::span<const std::string> golds) {
    require_golds(golds);
    const auto p = normalize_answer(pred);
    return std::any_of(golds.begin(), golds.end(),
                       [&](const std::string& g) { return p.find(normalize_answer(g)) != std::string::npos; })
               ? 1
               : 0;
}

std::vector<std::string> metric_tokens(std::string_view text) { return split_ws(lower_no_punct(text)); }

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeL rouge_l_components(std::string_view pred, std::string_view ref) {
    const auto p = metric_tokens(pred);
    const auto r = metric_tokens(ref);
    RougeL out;
    if (p.empty() || r.empty()) return out;
    const auto lcs = static_cast<double>(lcs_length(p, r));
    if (lcs == 0.0) return out;
    out.precision = lcs / static_cast<double>(p.size());
    out.recall = lcs / static_cast<double>(r.size());
    out.f = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

double rouge_l(std::string_view pred, std::string_view ref) { return rouge_l_components(pred, ref).f; }

double bleu_tokens(std::span<const std::string> pred, std::span<const std::string> ref, int max_n) {
    if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
    if (pred.empty()) return 0.0;

    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto un = static_cast<std::size_t>(n);
        std::map<std::vector<std::string>, int> ref_counts, pred_counts;
        for (std::size_t i = 0; i + un <= ref.size(); ++i)
            ++ref_counts[std::vector<std::string>(ref.begin() + i, ref.begin() + i + un)];
        for (std::size_t i = 0; i + un <= pred.size(); ++i)
            ++pred_counts[std::vector<std::string>(pred.begin() + i, pred.begin() + i + un)];

        std::size_t total = pred.size() >= un ? pred.size() - un + 1 : 0;
        std::size_t clipped = 0;
        for (const auto& [gram, count] : pred_counts) {
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) clipped += static_cast<std::size_t>(std::min(count, it->second));
        }
        double precision;
        if (clipped == 0) {
            if (n == 1) return 0.0;
            precision = 1.0 / (2.0 * static_cast<double>(pred.size()));
        } else {
            precision = static_cast<double>(clipped) / static_cast<double>(total);
        }
        log_sum += std::log(precision);
    }
    const double geo = std::exp(log_sum / max_n);
    const double bp = pred.size() < ref.size()
                          ? std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(pred.size()))
                          : 1.0;
    return geo * bp;
}

double bleu(std::string_view pred, std::string_view ref, int max_n) {
    return bleu_tokens(metric_tokens(pred), metric_tokens(ref), max_n);
}

} // namespace ragloop::eval
