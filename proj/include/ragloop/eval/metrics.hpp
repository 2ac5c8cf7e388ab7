#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ragloop::eval {

/// Lowercase, delete ASCII punctuation, drop the articles a/an/the, collapse
/// whitespace. Idempotent.
std::string normalize_answer(std::string_view text);

/// Whitespace tokens of the normalized answer.
std::vector<std::string> answer_tokens(std::string_view text);

/// 1 iff the normalized prediction equals some normalized gold answer.
/// Throws `std::invalid_argument` when `golds` is empty; likewise below.
int exact_match(std::string_view pred, std::span<const std::string> golds);

/// Max over golds of the token-multiset F1 between normalized answers. Two
/// empty token lists score 1, one empty list scores 0.
double token_f1(std::string_view pred, std::span<const std::string> golds);

/// 1 iff some normalized gold answer is a substring of the normalized prediction.
int accuracy_contains(std::string_view pred, std::span<const std::string> golds);

/// Tokens for long-form metrics: lowercased, ASCII punctuation deleted, split
/// on whitespace. Articles are kept.
std::vector<std::string> metric_tokens(std::string_view text);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

struct RougeL {
    double precision{0.0};
    double recall{0.0};
    double f{0.0};
};

/// LCS-based precision (over the prediction), recall (over the reference)
/// and their harmonic mean. Empty inputs score 0.
RougeL rouge_l_components(std::string_view pred, std::string_view ref);
double rouge_l(std::string_view pred, std::string_view ref);

/// Sentence BLEU: uniform-weight geometric mean of clipped n-gram precisions
/// for n = 1..max_n times the brevity penalty. A zero unigram precision gives
/// 0; a zero precision for n >= 2 is replaced by 1 / (2 * |pred|).
double bleu(std::string_view pred, std::string_view ref, int max_n = 4);
double bleu_tokens(std::span<const std::string> pred, std::span<const std::string> ref, int max_n = 4);

} // namespace ragloop::eval
