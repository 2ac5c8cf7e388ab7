#pragma once

#include "ragloop/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ragloop::eval {

struct QAExample {
    std::string id;
    std::string question;
    /// Never empty.
    std::vector<std::string> gold_answers;
    /// Reference passage ids, used by oracle retrieval.
    std::optional<std::vector<std::string>> gold_passages;

    friend bool operator==(const QAExample&, const QAExample&) = default;
};

class DatasetError : public Error {
public:
    DatasetError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Accepts `answers` (list) or `answer` (string); `gold_passages` is optional.
/// Throws `std::invalid_argument` on a malformed record.
QAExample example_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QAExample& example);

/// One JSON object per non-blank line. Duplicate ids are rejected.
std::vector<QAExample> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const std::vector<QAExample>& examples);

/// Sorted by id, then truncated to `limit`.
std::vector<QAExample> select_examples(std::vector<QAExample> examples, std::size_t limit);

} // namespace ragloop::eval
