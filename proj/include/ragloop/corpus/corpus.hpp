#pragma once

#include "ragloop/corpus/passage.hpp"
#include "ragloop/error.hpp"
#include "ragloop/text/tokenizer.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ragloop::corpus {

struct CorpusStats {
    std::uint64_t doc_count{0};
    std::uint64_t total_tokens{0};
    double avg_doc_len{0.0};

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

enum class CorpusFormat { jsonl, tsv };
enum class IngestMode { strict, lenient };

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(IngestMode mode);

/// A record that failed validation during ingest.
struct IngestIssue {
    std::size_t line{0};
    std::string message;
};

struct IngestReport {
    IngestMode mode{IngestMode::strict};
    std::size_t records{0};
    std::size_t skipped{0};
    /// Lenient mode only: earlier records replaced by a later duplicate id.
    std::size_t duplicates_replaced{0};
    std::vector<IngestIssue> issues;
};

/// Malformed record or duplicate id under strict ingest.
class CorpusFormatError : public Error {
public:
    CorpusFormatError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class PassageNotFound : public Error {
public:
    explicit PassageNotFound(const std::string& id);
};

/// In-memory passage store with incrementally maintained statistics.
///
/// Ingest is single-writer; once wrapped in a `std::shared_ptr<const Corpus>`
/// the store is immutable and safe for concurrent readers.
class Corpus {
public:
    explicit Corpus(text::TokenizerConfig tokenizer = {});

    /// Validates and inserts a passage. Throws `std::invalid_argument` for an
    /// empty id or blank text and for a duplicate id unless `replace` is set.
    /// Returns true if an existing passage was replaced.
    bool add(Passage passage, bool replace = false);

    const Passage* find(std::string_view id) const;
    const Passage& at(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id) != nullptr; }

    /// Passages in insertion order.
    const std::vector<Passage>& passages() const noexcept { return passages_; }
    std::size_t size() const noexcept { return passages_.size(); }
    bool empty() const noexcept { return passages_.empty(); }

    CorpusStats stats() const;
    /// Statistics recomputed from scratch over the stored passages.
    CorpusStats recompute_stats() const;

    const text::TokenizerConfig& tokenizer() const noexcept { return tokenizer_; }

private:
    text::TokenizerConfig tokenizer_;
    std::vector<Passage> passages_;
    std::vector<std::uint64_t> token_counts_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::uint64_t total_tokens_{0};
};

using CorpusHandle = std::shared_ptr<const Corpus>;

struct IngestResult {
    CorpusHandle corpus;
    IngestReport report;
};

/// Reads a passage file. Strict mode throws `CorpusFormatError` naming the
/// offending line; lenient mode skips bad records and lists them in the report.
IngestResult ingest_corpus(const std::filesystem::path& path,
                           CorpusFormat format = CorpusFormat::jsonl,
                           IngestMode mode = IngestMode::strict,
                           const text::TokenizerConfig& tokenizer = {});

/// Appends every record of `path` into an existing corpus.
IngestReport ingest_into(Corpus& corpus, const std::filesystem::path& path,
                         CorpusFormat format, IngestMode mode);

/// Parses a single JSONL corpus line. Throws `std::invalid_argument` on error.
Passage parse_passage_json(std::string_view line);
std::string passage_to_json(const Passage& passage);

} // namespace ragloop::corpus
