#pragma once

// Schema text format:
//
//   concept Ages value int {}
//   concept Employees { name : Names; age : Ages; }
//   bottom OrderParts;
//
// Domains may be referenced before they are defined.

#include "comdb/io/tokens.hpp"
#include "comdb/model.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace comdb::io {

inline Schema parse_schema(std::string_view text, const std::string& path = "<schema>")
{
    TokenCursor in(tokenize_file(text, path), path);
    std::vector<ConceptSpec> specs;
    std::map<std::string, int> defined_at;
    std::vector<std::pair<std::string, int>> domains; // name, line
    std::optional<std::pair<std::string, int>> bottom;

    while (!in.at_end()) {
        int line = in.peek().line;
        std::string kw = in.word("'concept' or 'bottom'");
        if (kw == "bottom") {
            if (bottom)
                in.error("bottom declared twice", Errc::parse_error);
            bottom = std::make_pair(in.word("concept name"), line);
            in.expect(";");
            continue;
        }
        if (kw != "concept")
            fail(Errc::parse_error, in.where(line) + ": expected 'concept' or 'bottom'; found '" + kw + "'");
        ConceptSpec spec;
        spec.name = in.word("concept name");
        if (defined_at.count(spec.name))
            fail(Errc::duplicate_concept, in.where(line) + ": concept '" + spec.name + "' already defined at line " +
                                              std::to_string(defined_at[spec.name]));
        defined_at[spec.name] = line;
        if (in.peek().kind == FileToken::word && in.peek().text == "value") {
            in.next();
            std::string type = in.word("value type");
            spec.value_type = parse_value_type(type);
            if (!spec.value_type)
                fail(Errc::parse_error, in.where(line) + ": unknown value type '" + type + "'");
        }
        if (in.accept(";")) {
            specs.push_back(std::move(spec));
            continue;
        }
        in.expect("{");
        while (!in.accept("}")) {
            int dline = in.peek().line;
            std::string label = in.word("dimension name");
            in.expect(":");
            std::string domain = in.word("domain concept");
            in.expect(";");
            if (spec.value_type)
                fail(Errc::domain_violation, in.where(dline) + ": value concept '" + spec.name + "' cannot have dimensions");
            for (const auto& d : spec.dims)
                if (d.first == label)
                    fail(Errc::duplicate_label, in.where(dline) + ": dimension '" + label + "' declared twice on '" + spec.name + "'");
            spec.dims.emplace_back(label, domain);
            domains.emplace_back(domain, dline);
        }
        in.accept(";");
        specs.push_back(std::move(spec));
    }
    for (const auto& [domain, line] : domains)
        if (!defined_at.count(domain))
            fail(Errc::unknown_domain, in.where(line) + ": unknown domain '" + domain + "'");
    if (bottom && !defined_at.count(bottom->first))
        fail(Errc::unknown_concept, in.where(bottom->second) + ": unknown bottom concept '" + bottom->first + "'");

    Schema schema;
    try {
        schema.define_all(specs);
    } catch (const Error& e) {
        fail(e.code(), path + ": " + e.detail());
    }
    if (bottom)
        schema.designate_bottom(schema.concept_ref(bottom->first));
    return schema;
}

inline Schema load_schema(const std::string& path) { return parse_schema(read_text_file(path), path); }

/// Canonical text: concepts by name, dimensions in declaration order.
inline std::string write_schema(const Schema& schema)
{
    auto cs = schema.concepts();
    std::sort(cs.begin(), cs.end(), [&](ConceptRef a, ConceptRef b) { return schema.concept_name(a) < schema.concept_name(b); });
    std::string out;
    for (auto c : cs) {
        const auto& con = schema.concept_at(c);
        out += "concept " + con.name();
        if (con.value_type())
            out += " value " + std::string(value_type_name(*con.value_type()));
        if (con.dims().empty()) {
            out += " {}\n";
            continue;
        }
        out += " {\n";
        for (const auto& d : con.dims())
            out += "  " + d.name + " : " + schema.concept_name(d.domain) + ";\n";
        out += "}\n";
    }
    if (auto b = schema.designated_bottom())
        out += "bottom " + schema.concept_name(*b) + ";\n";
    return out;
}

inline void save_schema(const Schema& schema, const std::string& path) { write_text_file(path, write_schema(schema)); }

} // namespace comdb::io
