#pragma once

// Loads CSV tables into concepts. Each table maps its rows to items of one
// concept: a key column gives the item id, value columns become slots into
// value concepts and foreign-key columns name items of referenced concepts.
//
//   { "tables": [ { "file": "customers.csv", "concept": "Customers",
//                   "key": "id", "columns": { "name": "name" },
//                   "foreign_keys": { "country_id": "country" } } ] }

#include "comdb/io/csv.hpp"
#include "comdb/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace comdb::io {

struct IngestTable {
    std::string file;
    std::string concept_name;
    std::string key;
    std::vector<std::pair<std::string, std::string>> columns;      // column -> dimension
    std::vector<std::pair<std::string, std::string>> foreign_keys; // column -> dimension
};

struct IngestMap {
    std::vector<IngestTable> tables;
};

struct TableReport {
    std::string file;
    std::string concept_name;
    std::size_t created = 0;
    std::size_t skipped = 0;
    std::size_t rejected = 0;
    std::vector<std::string> errors;
};

struct IngestReport {
    std::vector<TableReport> tables;

    std::size_t created() const { return sum(&TableReport::created); }
    std::size_t skipped() const { return sum(&TableReport::skipped); }
    std::size_t rejected() const { return sum(&TableReport::rejected); }

private:
    std::size_t sum(std::size_t TableReport::*f) const
    {
        std::size_t n = 0;
        for (const auto& t : tables)
            n += t.*f;
        return n;
    }
};

inline IngestMap parse_ingest_map(std::string_view text, const std::string& path = "<ingest>")
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::parse_error, path + ": " + e.what());
    }
    IngestMap m;
    auto pairs = [&](const nlohmann::json& obj, const char* field) {
        std::vector<std::pair<std::string, std::string>> out;
        if (!obj.contains(field))
            return out;
        if (!obj[field].is_object())
            fail(Errc::parse_error, path + ": '" + field + "' must be an object");
        for (const auto& [k, v] : obj[field].items()) {
            if (!v.is_string())
                fail(Errc::parse_error, path + ": '" + field + "." + k + "' must name a dimension");
            out.emplace_back(k, v.get<std::string>());
        }
        return out;
    };
    if (!j.is_object() || !j.contains("tables") || !j["tables"].is_array())
        fail(Errc::parse_error, path + ": expected an object with a 'tables' array");
    for (const auto& t : j["tables"]) {
        for (const char* f : {"file", "concept", "key"})
            if (!t.contains(f) || !t[f].is_string())
                fail(Errc::parse_error, path + ": every table needs a string '" + f + "'");
        m.tables.push_back(IngestTable{t["file"].get<std::string>(), t["concept"].get<std::string>(), t["key"].get<std::string>(),
                                       pairs(t, "columns"), pairs(t, "foreign_keys")});
    }
    return m;
}

/// Ingests `files` (keyed by IngestTable::file) in dependency order.
/// Row-level problems are reported; map errors throw and leave `schema` unchanged.
inline IngestReport ingest_csv(Schema& schema, const IngestMap& map, const std::map<std::string, CsvTable>& files)
{
    Schema work = schema;
    struct Plan {
        const IngestTable* table;
        ConceptRef concept_ref;
        const CsvTable* csv;
        std::size_t key;
        std::vector<std::tuple<std::size_t, std::string, ConceptRef, bool>> slots; // column, dim, domain, is_value
    };
    std::vector<Plan> plans;
    for (const auto& t : map.tables) {
        Plan p{&t, work.concept_ref(t.concept_name), nullptr, 0, {}};
        auto f = files.find(t.file);
        if (f == files.end())
            fail(Errc::io_error, "no data for table file '" + t.file + "'");
        p.csv = &f->second;
        auto key = p.csv->column(t.key);
        if (!key)
            fail(Errc::parse_error, t.file + ": missing key column '" + t.key + "'");
        p.key = *key;
        const auto& con = work.concept_at(p.concept_ref);
        if (con.is_value())
            fail(Errc::domain_violation, t.file + ": target '" + con.name() + "' is a value concept");
        auto add = [&](const auto& list, bool values) {
            for (const auto& [column, dim] : list) {
                auto ci = p.csv->column(column);
                if (!ci)
                    fail(Errc::parse_error, t.file + ": missing column '" + column + "'");
                auto di = con.dim_index(dim);
                if (!di)
                    fail(Errc::unknown_dimension, t.file + ": concept '" + con.name() + "' has no dimension '" + dim + "'");
                ConceptRef domain = con.dims()[*di].domain;
                if (work.concept_at(domain).is_value() != values)
                    fail(Errc::domain_violation, t.file + ": dimension '" + dim + "' of '" + con.name() + "' leads to " +
                                                     (values ? "an entity concept; map it under foreign_keys"
                                                             : "a value concept; map it under columns"));
                p.slots.emplace_back(*ci, dim, domain, values);
            }
        };
        add(t.columns, true);
        add(t.foreign_keys, false);
        plans.push_back(std::move(p));
    }
    std::stable_sort(plans.begin(), plans.end(), [](const Plan& a, const Plan& b) { return a.concept_ref < b.concept_ref; });

    IngestReport report;
    for (const auto& p : plans) {
        TableReport tr{p.table->file, p.table->concept_name, 0, 0, 0, {}};
        for (std::size_t r = 0; r < p.csv->rows.size(); ++r) {
            const auto& row = p.csv->rows[r];
            std::string where = p.table->file + ":" + std::to_string(p.csv->lines[r]) + ": ";
            const std::string& id = row[p.key];
            if (id.empty()) {
                ++tr.rejected;
                tr.errors.push_back(where + "DomainViolation: empty key");
                continue;
            }
            // resolve everything before creating any value items
            std::vector<std::pair<std::string, std::optional<Literal>>> literals;
            std::vector<SlotBinding> refs;
            std::string error;
            for (const auto& [ci, dim, domain, is_value] : p.slots) {
                const std::string& cell = row[ci];
                if (cell.empty()) {
                    if (is_value)
                        literals.emplace_back(dim, std::nullopt);
                    else
                        refs.emplace_back(dim, std::nullopt);
                    continue;
                }
                if (is_value) {
                    auto lit = parse_literal(*work.concept_at(domain).value_type(), cell);
                    if (!lit) {
                        error = "DomainViolation: '" + cell + "' is not a valid " +
                                std::string(value_type_name(*work.concept_at(domain).value_type())) + " for '" + dim + "'";
                        break;
                    }
                    literals.emplace_back(dim, *lit);
                } else {
                    auto ref = work.find_item(domain, cell);
                    if (!ref) {
                        error = "UnknownReferent: no '" + cell + "' in '" + work.concept_name(domain) + "' for '" + dim + "'";
                        break;
                    }
                    refs.emplace_back(dim, *ref);
                }
            }
            if (!error.empty()) {
                ++tr.rejected;
                tr.errors.push_back(where + error);
                continue;
            }
            const auto& con = work.concept_at(p.concept_ref);
            auto domain_of = [&](const std::string& dim) { return con.dims()[*con.dim_index(dim)].domain; };
            // the slot a row asks for; nullopt when it would need a new value item
            auto wanted = [&](const std::string& dim) -> std::optional<std::optional<ItemRef>> {
                for (const auto& [d, lit] : literals)
                    if (d == dim) {
                        if (!lit)
                            return std::optional<ItemRef>{};
                        if (auto v = work.find_value(domain_of(d), *lit))
                            return std::optional<ItemRef>{*v};
                        return std::nullopt;
                    }
                for (const auto& [d, ref] : refs)
                    if (d == dim)
                        return ref;
                return std::optional<ItemRef>{};
            };
            if (auto existing = work.find_item(p.concept_ref, id)) {
                bool same = true;
                for (const auto& d : con.dims()) {
                    auto want = wanted(d.name);
                    if (!want || *want != work.get_slot(*existing, d.name))
                        same = false;
                }
                if (same) {
                    ++tr.skipped;
                } else {
                    ++tr.rejected;
                    tr.errors.push_back(where + "DuplicateItem: '" + id + "' already exists with different values");
                }
                continue;
            }
            std::vector<SlotBinding> slots = refs;
            for (const auto& [dim, lit] : literals) {
                if (!lit) {
                    slots.emplace_back(dim, std::nullopt);
                    continue;
                }
                slots.emplace_back(dim, work.intern_value(domain_of(dim), *lit));
            }
            work.add_item(p.concept_ref, id, slots);
            ++tr.created;
        }
        report.tables.push_back(std::move(tr));
    }
    schema = std::move(work);
    return report;
}

/// Reads the map at `map_path` and the CSV files it names, relative to it.
inline IngestReport ingest_files(Schema& schema, const std::string& map_path)
{
    IngestMap map = parse_ingest_map(read_text_file(map_path), map_path);
    std::filesystem::path base = std::filesystem::path(map_path).parent_path();
    std::map<std::string, CsvTable> files;
    for (const auto& t : map.tables) {
        if (files.count(t.file))
            continue;
        std::filesystem::path p = t.file;
        if (p.is_relative())
            p = base / p;
        CsvTable csv = load_csv(p.string());
        files.emplace(t.file, std::move(csv));
    }
    return ingest_csv(schema, map, files);
}

} // namespace comdb::io
