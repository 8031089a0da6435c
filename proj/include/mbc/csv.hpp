#ifndef MBC_CSV_HPP
#define MBC_CSV_HPP

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "mbc/error.hpp"

namespace mbc::csv {

struct Record {
    std::size_t line;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

inline std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

/// RFC-4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF or LF.
/// Blank lines are skipped. Fields are returned untrimmed.
inline std::vector<Record> read(std::istream& in) {
    std::vector<Record> out;
    Record cur{1, {}};
    std::string field;
    std::size_t line = 1;
    bool in_quotes = false;
    bool field_started = false;
    bool was_quoted = false;

    auto end_field = [&] {
        cur.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
        was_quoted = false;
    };
    auto end_record = [&] {
        const bool blank = cur.fields.empty() && !field_started && field.empty();
        if (!blank) {
            end_field();
            out.push_back(std::move(cur));
        }
        cur = Record{line + 1, {}};
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (was_quoted || !trim(field).empty())
                    throw ParseError("unexpected quote inside unquoted field", line, cur.fields.size() + 1);
                field.clear();
                in_quotes = true;
                was_quoted = true;
                field_started = true;
                break;
            case ',':
                end_field();
                field_started = true;
                break;
            case '\r':
                if (in.peek() == '\n') break;
                end_record();
                ++line;
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                if (was_quoted && c != ' ' && c != '\t')
                    throw ParseError("text after closing quote", line, cur.fields.size() + 1);
                if (!was_quoted) field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", cur.line, cur.fields.size() + 1);
    end_record();
    return out;
}

/// Quotes a field when it contains a delimiter, quote or line break.
inline std::string escape(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r.push_back('"');
        r.push_back(c);
    }
    r.push_back('"');
    return r;
}

}  // namespace mbc::csv

#endif  // MBC_CSV_HPP
