#pragma once

// Data text format:
//
//   value Ages 30
//   item Employees e1 { name = "Ann Lee", age = 30 }
//   item Orders o1 { employee = e1, date = null }
//
// Entries may appear in any order. A slot into a value concept holds the
// literal itself; the value item is created on first reference.

#include "comdb/io/tokens.hpp"
#include "comdb/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace comdb::io {

namespace detail {

struct SlotEntry {
    std::string dim;
    std::optional<std::string> ref; // nullopt for null
    int line = 0;
};

struct ItemEntry {
    ConceptRef concept_ref;
    std::string id;
    std::vector<SlotEntry> slots;
    int line = 0;
};

} // namespace detail

/// Adds the entries in `text` to `schema`. On error `schema` is unchanged.
inline void parse_data(Schema& schema, std::string_view text, const std::string& path = "<data>")
{
    TokenCursor in(tokenize_file(text, path), path);
    std::vector<std::pair<ConceptRef, std::pair<std::string, int>>> values;
    std::vector<detail::ItemEntry> items;
    std::map<std::pair<std::uint32_t, std::string>, int> seen;

    auto concept_at = [&](int line) {
        std::string name = in.word("concept name");
        auto c = schema.find_concept(name);
        if (!c)
            fail(Errc::unknown_concept, in.where(line) + ": unknown concept '" + name + "'");
        return *c;
    };

    while (!in.at_end()) {
        int line = in.peek().line;
        std::string kw = in.word("'item' or 'value'");
        if (kw == "value") {
            ConceptRef c = concept_at(line);
            if (!schema.concept_at(c).is_value())
                fail(Errc::domain_violation, in.where(line) + ": '" + schema.concept_name(c) + "' is not a value concept");
            std::string lit = in.value("literal").text;
            in.accept(";");
            values.push_back({c, {lit, line}});
            continue;
        }
        if (kw != "item")
            fail(Errc::parse_error, in.where(line) + ": expected 'item' or 'value'; found '" + kw + "'");
        detail::ItemEntry e;
        e.line = line;
        e.concept_ref = concept_at(line);
        if (schema.concept_at(e.concept_ref).is_value())
            fail(Errc::domain_violation, in.where(line) + ": use 'value' entries for value concept '" + schema.concept_name(e.concept_ref) + "'");
        e.id = in.value("item id").text;
        auto key = std::make_pair(e.concept_ref.index, e.id);
        if (seen.count(key))
            fail(Errc::duplicate_item, in.where(line) + ": item '" + e.id + "' of '" + schema.concept_name(e.concept_ref) +
                                           "' already defined at line " + std::to_string(seen[key]));
        seen[key] = line;
        if (in.accept("{")) {
            if (!in.accept("}")) {
                do {
                    detail::SlotEntry s;
                    s.line = in.peek().line;
                    s.dim = in.word("dimension name");
                    in.expect("=");
                    const auto& t = in.value("reference or null");
                    if (!(t.kind == FileToken::word && t.text == "null"))
                        s.ref = t.text;
                    e.slots.push_back(std::move(s));
                } while (in.accept(","));
                in.expect("}");
            }
        }
        in.accept(";");
        items.push_back(std::move(e));
    }

    Schema work = schema;
    for (const auto& [c, v] : values) {
        const auto& [text, line] = v;
        auto lit = parse_literal(*work.concept_at(c).value_type(), text);
        if (!lit)
            fail(Errc::domain_violation, in.where(line) + ": '" + text + "' is not a " +
                                             std::string(value_type_name(*work.concept_at(c).value_type())) + " literal");
        if (work.find_value(c, *lit))
            fail(Errc::duplicate_item, in.where(line) + ": value '" + text + "' of '" + work.concept_name(c) + "' already exists");
        work.add_value(c, *lit);
    }
    // concept index order puts every domain before its users
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.concept_ref < b.concept_ref; });
    for (const auto& e : items) {
        const auto& con = work.concept_at(e.concept_ref);
        std::vector<SlotBinding> slots;
        for (const auto& s : e.slots) {
            auto di = con.dim_index(s.dim);
            if (!di)
                fail(Errc::unknown_dimension, in.where(s.line) + ": concept '" + con.name() + "' has no dimension '" + s.dim + "'");
            if (!s.ref) {
                slots.emplace_back(s.dim, std::nullopt);
                continue;
            }
            ConceptRef domain = con.dims()[*di].domain;
            const auto& dcon = work.concept_at(domain);
            if (dcon.is_value()) {
                auto lit = parse_literal(*dcon.value_type(), *s.ref);
                if (!lit)
                    fail(Errc::domain_violation, in.where(s.line) + ": '" + *s.ref + "' is not a " +
                                                     std::string(value_type_name(*dcon.value_type())) + " literal for '" + dcon.name() + "'");
                slots.emplace_back(s.dim, work.intern_value(domain, *lit));
                continue;
            }
            auto r = work.find_item(domain, *s.ref);
            if (!r)
                fail(Errc::unknown_referent, in.where(s.line) + ": item '" + e.id + "' references unknown '" + *s.ref + "' in '" +
                                                 dcon.name() + "'");
            slots.emplace_back(s.dim, *r);
        }
        try {
            work.add_item(e.concept_ref, e.id, slots);
        } catch (const Error& err) {
            fail(err.code(), in.where(e.line) + ": " + err.detail());
        }
    }
    schema = std::move(work);
}

inline void load_data(Schema& schema, const std::string& path) { parse_data(schema, read_text_file(path), path); }

/// Canonical text: concepts by name, then items by id.
inline std::string write_data(const Schema& schema)
{
    auto cs = schema.concepts();
    std::sort(cs.begin(), cs.end(), [&](ConceptRef a, ConceptRef b) { return schema.concept_name(a) < schema.concept_name(b); });
    std::string out;
    for (auto c : cs) {
        const auto& con = schema.concept_at(c);
        auto items = schema.items(c);
        std::sort(items.begin(), items.end(), [&](ItemRef a, ItemRef b) { return schema.item_id(a) < schema.item_id(b); });
        for (auto r : items) {
            if (con.is_value()) {
                out += "value " + con.name() + " " + quote_token(schema.item_id(r)) + "\n";
                continue;
            }
            out += "item " + con.name() + " " + quote_token(schema.item_id(r));
            if (con.dims().empty()) {
                out += "\n";
                continue;
            }
            out += " { ";
            for (std::size_t d = 0; d < con.dims().size(); ++d) {
                const auto& dim = con.dims()[d];
                auto v = schema.get_slot(r, dim.name);
                out += (d ? ", " : "") + dim.name + " = " + (v ? quote_token(schema.item_id(*v)) : std::string("null"));
            }
            out += " }\n";
        }
    }
    return out;
}

inline void save_data(const Schema& schema, const std::string& path) { write_text_file(path, write_data(schema)); }

} // namespace comdb::io
