#include "dbtrail/xml.hpp"

#include "dbtrail/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dbtrail::xml {

std::string escape(std::string_view text, bool attribute) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"':
            if (attribute) {
                out += "&quot;";
                break;
            }
            [[fallthrough]];
        default: out.push_back(c);
        }
    }
    return out;
}

const std::string* Event::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

namespace {

struct NamedEntity {
    std::string_view name;
    char32_t codepoint;
};

// ISO 8859-1 names, sorted for binary search.
constexpr std::array<NamedEntity, 62> kLatin1 = {{
    {"AElig", 0xC6},  {"Aacute", 0xC1}, {"Acirc", 0xC2},  {"Agrave", 0xC0}, {"Aring", 0xC5},
    {"Atilde", 0xC3}, {"Auml", 0xC4},   {"Ccedil", 0xC7}, {"ETH", 0xD0},    {"Eacute", 0xC9},
    {"Ecirc", 0xCA},  {"Egrave", 0xC8}, {"Euml", 0xCB},   {"Iacute", 0xCD}, {"Icirc", 0xCE},
    {"Igrave", 0xCC}, {"Iuml", 0xCF},   {"Ntilde", 0xD1}, {"Oacute", 0xD3}, {"Ocirc", 0xD4},
    {"Ograve", 0xD2}, {"Oslash", 0xD8}, {"Otilde", 0xD5}, {"Ouml", 0xD6},   {"THORN", 0xDE},
    {"Uacute", 0xDA}, {"Ucirc", 0xDB},  {"Ugrave", 0xD9}, {"Uuml", 0xDC},   {"Yacute", 0xDD},
    {"aacute", 0xE1}, {"acirc", 0xE2},  {"aelig", 0xE6},  {"agrave", 0xE0}, {"aring", 0xE5},
    {"atilde", 0xE3}, {"auml", 0xE4},   {"ccedil", 0xE7}, {"eacute", 0xE9}, {"ecirc", 0xEA},
    {"egrave", 0xE8}, {"eth", 0xF0},    {"euml", 0xEB},   {"iacute", 0xED}, {"icirc", 0xEE},
    {"igrave", 0xEC}, {"iuml", 0xEF},   {"micro", 0xB5},  {"nbsp", 0xA0},   {"ntilde", 0xF1},
    {"oacute", 0xF3}, {"ocirc", 0xF4},  {"ograve", 0xF2}, {"oslash", 0xF8}, {"otilde", 0xF5},
    {"ouml", 0xF6},   {"szlig", 0xDF},  {"thorn", 0xFE},  {"uacute", 0xFA}, {"ucirc", 0xFB},
    {"ugrave", 0xF9}, {"uuml", 0xFC},
}};

std::optional<char32_t> lookup_entity(std::string_view name) {
    if (name == "amp") return U'&';
    if (name == "lt") return U'<';
    if (name == "gt") return U'>';
    if (name == "quot") return U'"';
    if (name == "apos") return U'\'';
    auto it = std::lower_bound(kLatin1.begin(), kLatin1.end(), name,
                               [](const NamedEntity& e, std::string_view n) { return e.name < n; });
    if (it != kLatin1.end() && it->name == name) return it->codepoint;
    return std::nullopt;
}

bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' || u >= 0x80;
}

} // namespace

void Reader::fail(const std::string& what) const {
    throw ParseError("xml: " + what + " at line " + std::to_string(line()));
}

std::size_t Reader::line() const {
    return 1 + static_cast<std::size_t>(
                   std::count(doc_.begin(), doc_.begin() + static_cast<std::ptrdiff_t>(pos_), '\n'));
}

std::string Reader::decode(std::string_view raw) const {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out.push_back(raw[i]);
            continue;
        }
        auto semi = raw.find(';', i);
        if (semi == std::string_view::npos) fail("unterminated entity reference");
        std::string_view name = raw.substr(i + 1, semi - i - 1);
        if (!name.empty() && name[0] == '#') {
            char32_t cp = 0;
            bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
            std::string_view digits = name.substr(hex ? 2 : 1);
            if (digits.empty()) fail("empty character reference");
            for (char d : digits) {
                int v;
                if (d >= '0' && d <= '9') v = d - '0';
                else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
                else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
                else fail("bad character reference &" + std::string(name) + ";");
                cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
                if (cp > 0x10FFFF) fail("character reference out of range");
            }
            append_utf8(out, cp);
        } else {
            auto cp = lookup_entity(name);
            if (!cp) fail("unknown entity &" + std::string(name) + ";");
            append_utf8(out, *cp);
        }
        i = semi;
    }
    return out;
}

void Reader::skip_markup() {
    // pos_ points at '<' followed by '!' or '?'
    std::string_view rest = doc_.substr(pos_);
    if (rest.starts_with("<?")) {
        auto end = doc_.find("?>", pos_);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        pos_ = end + 2;
    } else if (rest.starts_with("<!--")) {
        auto end = doc_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
    } else if (rest.starts_with("<!DOCTYPE")) {
        int depth = 0;
        for (std::size_t i = pos_; i < doc_.size(); ++i) {
            if (doc_[i] == '[') ++depth;
            else if (doc_[i] == ']') --depth;
            else if (doc_[i] == '>' && depth == 0) {
                pos_ = i + 1;
                return;
            }
        }
        fail("unterminated DOCTYPE");
    } else {
        fail("unsupported markup");
    }
}

std::optional<Event> Reader::next() {
    if (pending_end_) {
        auto ev = std::move(*pending_end_);
        pending_end_.reset();
        open_.pop_back();
        return ev;
    }
    while (pos_ < doc_.size()) {
        if (doc_[pos_] != '<') {
            auto lt = doc_.find('<', pos_);
            if (lt == std::string_view::npos) lt = doc_.size();
            std::string_view raw = doc_.substr(pos_, lt - pos_);
            pos_ = lt;
            if (open_.empty()) {
                bool blank = std::all_of(raw.begin(), raw.end(), [](unsigned char c) {
                    return std::isspace(c) != 0;
                });
                if (!blank) fail("character data outside the root element");
                continue;
            }
            Event ev;
            ev.kind = Event::Kind::Text;
            ev.text = decode(raw);
            return ev;
        }
        std::string_view rest = doc_.substr(pos_);
        if (rest.starts_with("<![CDATA[")) {
            auto end = doc_.find("]]>", pos_ + 9);
            if (end == std::string_view::npos) fail("unterminated CDATA section");
            if (open_.empty()) fail("CDATA outside the root element");
            Event ev;
            ev.kind = Event::Kind::Text;
            ev.text = std::string(doc_.substr(pos_ + 9, end - pos_ - 9));
            pos_ = end + 3;
            return ev;
        }
        if (rest.starts_with("<!") || rest.starts_with("<?")) {
            skip_markup();
            continue;
        }
        if (rest.starts_with("</")) {
            std::size_t i = pos_ + 2;
            std::size_t start = i;
            while (i < doc_.size() && is_name_char(doc_[i])) ++i;
            std::string name(doc_.substr(start, i - start));
            while (i < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[i]))) ++i;
            if (i >= doc_.size() || doc_[i] != '>') fail("malformed end tag");
            if (open_.empty() || open_.back() != name) {
                fail("mismatched end tag </" + name + ">");
            }
            pos_ = i + 1;
            open_.pop_back();
            Event ev;
            ev.kind = Event::Kind::EndElement;
            ev.name = std::move(name);
            return ev;
        }
        // start tag
        std::size_t i = pos_ + 1;
        std::size_t start = i;
        while (i < doc_.size() && is_name_char(doc_[i])) ++i;
        if (i == start) fail("malformed start tag");
        Event ev;
        ev.kind = Event::Kind::StartElement;
        ev.name = std::string(doc_.substr(start, i - start));
        bool self_closing = false;
        for (;;) {
            while (i < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[i]))) ++i;
            if (i >= doc_.size()) fail("unterminated start tag <" + ev.name + ">");
            if (doc_[i] == '>') {
                ++i;
                break;
            }
            if (doc_[i] == '/') {
                if (i + 1 >= doc_.size() || doc_[i + 1] != '>') fail("malformed start tag");
                self_closing = true;
                i += 2;
                break;
            }
            std::size_t an = i;
            while (i < doc_.size() && is_name_char(doc_[i])) ++i;
            if (i == an) fail("malformed attribute in <" + ev.name + ">");
            std::string key(doc_.substr(an, i - an));
            while (i < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[i]))) ++i;
            if (i >= doc_.size() || doc_[i] != '=') fail("attribute without value");
            ++i;
            while (i < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[i]))) ++i;
            if (i >= doc_.size() || (doc_[i] != '"' && doc_[i] != '\'')) fail("unquoted attribute");
            char quote = doc_[i++];
            auto close = doc_.find(quote, i);
            if (close == std::string_view::npos) fail("unterminated attribute value");
            ev.attributes.emplace_back(std::move(key), decode(doc_.substr(i, close - i)));
            i = close + 1;
        }
        if (open_.empty() && seen_root_) fail("multiple root elements");
        seen_root_ = true;
        pos_ = i;
        open_.push_back(ev.name);
        if (self_closing) {
            Event end;
            end.kind = Event::Kind::EndElement;
            end.name = ev.name;
            pending_end_ = std::move(end);
        }
        return ev;
    }
    if (!open_.empty()) fail("unclosed element <" + open_.back() + ">");
    if (!seen_root_) fail("no root element");
    return std::nullopt;
}

} // namespace dbtrail::xml
