#pragma once

#include "comdb/coql/value.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace comdb::coql {

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    std::size_t size() const noexcept { return rows.size(); }

    /// Rows rendered as text, for comparisons in tests and tools.
    std::vector<std::vector<std::string>> text(const Schema& schema) const
    {
        std::vector<std::vector<std::string>> out;
        out.reserve(rows.size());
        for (const auto& r : rows) {
            std::vector<std::string> line;
            for (const auto& v : r)
                line.push_back(render(schema, v));
            out.push_back(std::move(line));
        }
        return out;
    }

    /// Same rows as a sorted multiset.
    std::vector<std::vector<std::string>> sorted_text(const Schema& schema) const
    {
        auto out = text(schema);
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// Appends `_2`, `_3`, … to repeated column names.
inline std::vector<std::string> unique_columns(std::vector<std::string> names)
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        int n = 1;
        std::string base = names[i];
        auto taken = [&](const std::string& s) {
            for (std::size_t j = 0; j < i; ++j)
                if (names[j] == s)
                    return true;
            return false;
        };
        while (taken(names[i]))
            names[i] = base + "_" + std::to_string(++n);
    }
    return names;
}

inline std::string render_table(const Schema& schema, const ResultTable& t, bool color = false)
{
    auto cells = t.text(schema);
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        width[c] = t.columns[c].size();
        for (const auto& r : cells)
            width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
        std::string out;
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c)
                out += "  ";
            out += r[c];
            if (c + 1 < r.size())
                out += std::string(width[c] - r[c].size(), ' ');
        }
        return out + "\n";
    };
    std::string out;
    std::string header = line(t.columns);
    out += color ? "\x1b[1m" + header.substr(0, header.size() - 1) + "\x1b[0m\n" : header;
    std::string rule;
    for (std::size_t c = 0; c < width.size(); ++c)
        rule += (c ? "  " : "") + std::string(width[c], '-');
    out += rule + "\n";
    for (const auto& r : cells)
        out += line(r);
    out += "(" + std::to_string(t.rows.size()) + (t.rows.size() == 1 ? " row)\n" : " rows)\n");
    return out;
}

inline std::string render_tsv(const Schema& schema, const ResultTable& t)
{
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out += (c ? "\t" : "") + t.columns[c];
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c)
            out += (c ? "\t" : "") + (is_null(r[c]) ? std::string() : render(schema, r[c]));
        out += "\n";
    }
    return out;
}

inline nlohmann::ordered_json to_json(const Schema& schema, const Value& v)
{
    Value d = deref(schema, v);
    if (is_null(d))
        return nullptr;
    if (auto b = std::get_if<bool>(&d))
        return *b;
    if (auto i = std::get_if<std::int64_t>(&d))
        return *i;
    if (auto c = as_collection(d)) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& m : c->members)
            arr.push_back(to_json(schema, m));
        return arr;
    }
    if (auto t = std::get_if<std::shared_ptr<const TupleValue>>(&d)) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& m : (*t)->values)
            arr.push_back(to_json(schema, m));
        return arr;
    }
    return render(schema, d); // decimals keep their exact text
}

inline std::string render_jsonl(const Schema& schema, const ResultTable& t)
{
    std::string out;
    for (const auto& r : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < r.size(); ++c)
            obj[t.columns[c]] = to_json(schema, r[c]);
        out += obj.dump() + "\n";
    }
    return out;
}

} // namespace comdb::coql
