#pragma once

#include "dbtrail/dataset.hpp"
#include "dbtrail/schema.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail {

struct Token {
    std::string text;
    std::size_t position = 0;

    bool operator==(const Token&) const = default;
};

/// Lowercases ASCII and splits on every byte that is not an ASCII letter or
/// digit. Bytes >= 0x80 count as word characters so UTF-8 names stay whole.
std::vector<Token> tokenize(std::string_view text);

/// Convenience: just the token texts.
std::vector<std::string> tokenize_words(std::string_view text);

/// Transient XML view of one row, used only as indexing input.
struct VirtualDocument {
    struct Element {
        std::string attribute; // uppercased column name
        std::string text;

        bool operator==(const Element&) const = default;
    };

    RowKey row_key;
    std::vector<Element> elements;

    bool operator==(const VirtualDocument&) const = default;

    /// <TABLE><row><COL>value</COL>...</row></TABLE>, one element per line.
    std::string to_xml() const;
};

/// One element per non-null column, in column order.
VirtualDocument build_virtual_document(const SchemaDescriptor& schema, const Row& row);

/// Parses the to_xml form back. The row key is recovered from the primary-key
/// elements, so the table must exist in `schema`.
VirtualDocument parse_virtual_document(const SchemaDescriptor& schema, std::string_view xml_text);

} // namespace dbtrail
