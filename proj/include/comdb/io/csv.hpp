#pragma once

// Comma-separated values with double-quote escaping and a header row.

#include "comdb/io/tokens.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace comdb::io {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lines; // source line of each row

    std::optional<std::size_t> column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        return std::nullopt;
    }
};

inline CsvTable parse_csv(std::string_view text, const std::string& path = "<csv>")
{
    std::vector<std::vector<std::string>> records;
    std::vector<int> lines;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, in_record = false;
    int line = 1, start_line = 1;
    std::size_t i = 0;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        lines.push_back(start_line);
        record.clear();
        in_record = false;
    };

    while (i < text.size()) {
        char c = text[i];
        if (!in_record) {
            start_line = line;
            in_record = true;
        }
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            if (c == '\n')
                ++line;
            field += c;
            ++i;
            continue;
        }
        if (c == '"') {
            if (!field.empty())
                fail(Errc::parse_error, path + ":" + std::to_string(line) + ": quote inside unquoted field");
            quoted = true;
            ++i;
        } else if (c == ',') {
            end_field();
            ++i;
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            ++i;
        } else if (c == '\n') {
            end_record();
            ++line;
            ++i;
        } else {
            field += c;
            ++i;
        }
    }
    if (quoted)
        fail(Errc::parse_error, path + ":" + std::to_string(start_line) + ": unterminated quoted field");
    if (in_record)
        end_record();

    CsvTable t;
    if (records.empty())
        fail(Errc::parse_error, path + ": missing header row");
    t.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() == 1 && records[r][0].empty())
            continue; // blank line
        if (records[r].size() != t.header.size())
            fail(Errc::parse_error, path + ":" + std::to_string(lines[r]) + ": expected " + std::to_string(t.header.size()) +
                                        " fields, found " + std::to_string(records[r].size()));
        t.rows.push_back(std::move(records[r]));
        t.lines.push_back(lines[r]);
    }
    return t;
}

inline CsvTable load_csv(const std::string& path) { return parse_csv(read_text_file(path), path); }

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace comdb::io
