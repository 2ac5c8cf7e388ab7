#pragma once

#include <string>
#include <vector>

namespace ragloop::corpus {

/// An addressable unit of corpus text.
struct Passage {
    std::string id;
    std::string title;
    std::string text;
    /// Hyperlink targets (passage ids) of the source article.
    std::vector<std::string> links;

    /// Text fed to lexical indexing: title and body joined by a space.
    std::string indexed_text() const;

    friend bool operator==(const Passage&, const Passage&) = default;
};

} // namespace ragloop::corpus
