#include "dbtrail/csv.hpp"

#include "dbtrail/error.hpp"

namespace dbtrail::csv {

std::vector<Record> parse(std::string_view text) {
    std::vector<Record> records;
    Record current;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        if (field.empty()) current.emplace_back(std::nullopt);
        else current.emplace_back(std::move(field));
        field.clear();
        quoted = false;
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(current));
        current.clear();
    };

    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    throw ParseError("csv: unexpected character after closing quote on line " +
                                     std::to_string(line));
                }
                continue;
            }
            if (c == '\n') ++line;
            field.push_back(c);
            ++i;
            continue;
        }
        switch (c) {
        case ',':
            end_field();
            ++i;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            [[fallthrough]];
        case '\n':
            end_record();
            ++line;
            ++i;
            break;
        case '"':
            if (field_started) {
                throw ParseError("csv: stray quote on line " + std::to_string(line));
            }
            quoted = true;
            field_started = true;
            ++i;
            break;
        default:
            field.push_back(c);
            field_started = true;
            ++i;
        }
    }
    if (quoted) throw ParseError("csv: unterminated quoted field on line " + std::to_string(line));
    if (field_started || !current.empty()) end_record();
    return records;
}

std::string format_record(const Record& record) {
    std::string out;
    for (std::size_t i = 0; i < record.size(); ++i) {
        if (i) out.push_back(',');
        if (!record[i]) continue;
        const std::string& v = *record[i];
        bool needs_quotes = v.find_first_of(",\"\r\n") != std::string::npos ||
                            (!v.empty() && (v.front() == ' ' || v.back() == ' '));
        if (!needs_quotes) {
            out += v;
            continue;
        }
        out.push_back('"');
        for (char c : v) {
            if (c == '"') out.push_back('"');
            out.push_back(c);
        }
        out.push_back('"');
    }
    out.push_back('\n');
    return out;
}

} // namespace dbtrail::csv
