#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dbtrail::xml {

/// Escapes &, < and > (and " when `attribute` is set).
std::string escape(std::string_view text, bool attribute = false);

struct Event {
    enum class Kind { StartElement, EndElement, Text };

    Kind kind = Kind::Text;
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::string text;

    const std::string* attribute(std::string_view key) const;
};

/// Minimal pull parser for well-formed XML.
///
/// Handles elements, attributes, character data, CDATA, comments, processing
/// instructions and a DOCTYPE (skipped, including an internal subset). Entity
/// references resolve the five predefined entities, numeric character
/// references, and the ISO Latin-1 names that bibliography dumps rely on.
/// Mismatched or unclosed tags raise ParseError.
class Reader {
public:
    explicit Reader(std::string_view document) : doc_(document) {}

    /// Next event, or nullopt at a well-formed end of document.
    std::optional<Event> next();

    /// 1-based line of the current read position, for diagnostics.
    std::size_t line() const;

private:
    std::string decode(std::string_view raw) const;
    void skip_markup();
    [[noreturn]] void fail(const std::string& what) const;

    std::string_view doc_;
    std::size_t pos_ = 0;
    std::vector<std::string> open_;
    std::optional<Event> pending_end_;
    bool seen_root_ = false;
};

/// Appends the UTF-8 encoding of `codepoint` to `out`.
void append_utf8(std::string& out, char32_t codepoint);

} // namespace dbtrail::xml
