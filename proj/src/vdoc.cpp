#include "dbtrail/vdoc.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"
#include "dbtrail/xml.hpp"

namespace dbtrail {

namespace {
bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}
} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(Token{std::move(current), tokens.size()});
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                                   : static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
    return out;
}

std::string VirtualDocument::to_xml() const {
    std::string root = to_upper(row_key.table);
    std::string out = "<" + root + ">\n  <row>\n";
    for (const auto& e : elements) {
        out += "    <" + e.attribute + ">" + xml::escape(e.text) + "</" + e.attribute + ">\n";
    }
    out += "  </row>\n</" + root + ">\n";
    return out;
}

VirtualDocument build_virtual_document(const SchemaDescriptor& schema, const Row& row) {
    const TableDef& t = schema.table(row.table);
    VirtualDocument doc;
    doc.row_key.table = t.name;
    for (auto idx : t.primary_key_indices()) doc.row_key.pk_values.push_back(row.values.at(idx).value_or(""));
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (row.values[i]) doc.elements.push_back({to_upper(t.columns[i].name), *row.values[i]});
    }
    return doc;
}

VirtualDocument parse_virtual_document(const SchemaDescriptor& schema, std::string_view xml_text) {
    xml::Reader reader(xml_text);
    VirtualDocument doc;
    const TableDef* table = nullptr;
    int depth = 0;
    std::string text;
    while (auto ev = reader.next()) {
        using K = xml::Event::Kind;
        if (ev->kind == K::StartElement) {
            ++depth;
            if (depth == 1) {
                table = &schema.table(ev->name);
                doc.row_key.table = table->name;
            } else if (depth == 2 && ev->name != "row") {
                throw ParseError("virtual document: expected <row>, got <" + ev->name + ">");
            } else if (depth == 3) {
                text.clear();
            } else if (depth > 3) {
                throw ParseError("virtual document: nested element <" + ev->name + ">");
            }
        } else if (ev->kind == K::Text) {
            if (depth == 3) text += ev->text;
        } else {
            if (depth == 3) doc.elements.push_back({ev->name, std::move(text)});
            --depth;
        }
    }
    for (const auto& pk : table->primary_key) {
        std::string upper = to_upper(pk);
        bool found = false;
        for (const auto& e : doc.elements) {
            if (e.attribute == upper) {
                doc.row_key.pk_values.push_back(e.text);
                found = true;
                break;
            }
        }
        if (!found) throw ParseError("virtual document: missing primary key element " + upper);
    }
    return doc;
}

} // namespace dbtrail
