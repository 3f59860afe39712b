#pragma once

// Primitive (canonical) semantics: every item rewritten as rows over the
// bottom concept's paths to primitive concepts.

#include "comdb/model.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace comdb {

struct PrimitiveColumn {
    DimPath path;      // from bottom to a primitive concept
    ConceptRef domain; // that primitive concept
};

struct PrimitiveRow {
    ItemRef source;
    DimPath sub_dimension; // from bottom to the source item's concept
    std::vector<std::optional<ItemRef>> cells;
};

struct PrimitiveTable {
    ConceptRef bottom;
    std::vector<PrimitiveColumn> columns;
    std::vector<PrimitiveRow> rows;
    std::vector<std::string> warnings;
    /// Pairs of items of one concept with identical definitions.
    std::vector<std::pair<ItemRef, ItemRef>> duplicates;

    bool semantically_unique() const noexcept { return duplicates.empty(); }

    std::vector<std::size_t> rows_of(ItemRef item) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].source == item)
                out.push_back(i);
        return out;
    }

    std::optional<std::size_t> column_index(const DimPath& path) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i].path == path)
                return i;
        return std::nullopt;
    }
};

namespace detail {

inline std::vector<std::pair<ItemRef, ItemRef>> find_duplicates(const Schema& schema, ConceptRef c)
{
    std::vector<std::pair<ItemRef, ItemRef>> out;
    if (schema.concept_at(c).is_value())
        return out; // values are unique by construction
    std::map<std::vector<std::optional<ItemRef>>, ItemRef> seen;
    for (auto item : schema.items(c)) {
        auto [it, fresh] = seen.emplace(schema.slots(item), item);
        if (!fresh)
            out.emplace_back(it->second, item);
    }
    return out;
}

inline std::vector<ItemRef> items_by_id(const Schema& schema, ConceptRef c)
{
    auto items = schema.items(c);
    std::sort(items.begin(), items.end(),
              [&](ItemRef a, ItemRef b) { return schema.item_id(a) < schema.item_id(b); });
    return items;
}

// a's row covers-or-equals b's row: a agrees with b on every non-null cell of b.
inline bool row_matches(const PrimitiveRow& a, const PrimitiveRow& b)
{
    for (std::size_t i = 0; i < b.cells.size(); ++i)
        if (b.cells[i] && a.cells[i] != b.cells[i])
            return false;
    return true;
}

} // namespace detail

/// Flattens every item of every concept above `bottom` (the schema's bottom
/// when omitted). Columns are grouped by primitive concept name, then ordered
/// by path; rows follow concept name, item id, then sub-dimension.
inline PrimitiveTable flatten(const Schema& schema, std::optional<ConceptRef> bottom = std::nullopt)
{
    PrimitiveTable table;
    table.bottom = schema.require_bottom(bottom);

    for (const auto& path : schema.concept_paths(table.bottom, std::nullopt))
        table.columns.push_back(PrimitiveColumn{path, schema.resolve_path(table.bottom, path)});
    std::sort(table.columns.begin(), table.columns.end(), [&](const PrimitiveColumn& a, const PrimitiveColumn& b) {
        const auto& an = schema.concept_name(a.domain);
        const auto& bn = schema.concept_name(b.domain);
        if (an != bn)
            return an < bn;
        return a.path < b.path;
    });

    auto concepts = schema.concepts();
    std::sort(concepts.begin(), concepts.end(),
              [&](ConceptRef a, ConceptRef b) { return schema.concept_name(a) < schema.concept_name(b); });

    for (auto c : concepts) {
        if (!schema.reaches(table.bottom, c)) {
            table.warnings.push_back("UnreachableConcept: '" + schema.concept_name(c) + "' is not above bottom '" +
                                     schema.concept_name(table.bottom) + "'; skipped");
            continue;
        }
        auto dups = detail::find_duplicates(schema, c);
        table.duplicates.insert(table.duplicates.end(), dups.begin(), dups.end());

        auto subs = schema.concept_paths(table.bottom, c);
        std::sort(subs.begin(), subs.end());
        for (auto item : detail::items_by_id(schema, c)) {
            for (const auto& f : subs) {
                PrimitiveRow row{item, f, std::vector<std::optional<ItemRef>>(table.columns.size())};
                for (std::size_t k = 0; k < table.columns.size(); ++k) {
                    const auto& p = table.columns[k].path;
                    if (p.starts_with(f))
                        row.cells[k] = schema.walk(item, p.suffix_after(f.rank()));
                }
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

using PrimitiveSignature = std::vector<std::pair<DimPath, ItemRef>>;

/// Every (path to a primitive concept, value) pair of `item`, skipping
/// walks that hit a null.
inline PrimitiveSignature signature(const Schema& schema, ItemRef item)
{
    if (!schema.is_live(item))
        fail(Errc::unknown_item, "signature of a missing item");
    PrimitiveSignature out;
    auto paths = schema.concept_paths(item.concept_ref(), std::nullopt);
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths)
        if (auto v = schema.walk(item, p))
            out.emplace_back(p, *v);
    return out;
}

/// a is at least as specific as b: some row of a agrees with every row of b
/// on that row's non-null cells.
inline bool item_leq(const PrimitiveTable& table, ItemRef a, ItemRef b)
{
    auto ra = table.rows_of(a);
    auto rb = table.rows_of(b);
    for (std::size_t i : ra) {
        bool all = std::all_of(rb.begin(), rb.end(),
                               [&](std::size_t j) { return detail::row_matches(table.rows[i], table.rows[j]); });
        if (all)
            return true;
    }
    return false;
}

inline bool item_leq(const Schema& schema, ItemRef a, ItemRef b, std::optional<ConceptRef> bottom = std::nullopt)
{
    if (!schema.is_live(a) || !schema.is_live(b))
        fail(Errc::unknown_item, "item_leq on a missing item");
    return item_leq(flatten(schema, bottom), a, b);
}

/// Indices of bottom-concept rows agreeing with every row of `item` on that
/// row's non-null cells.
inline std::vector<std::size_t> coverage(const PrimitiveTable& table, ItemRef item)
{
    auto own = table.rows_of(item);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (r.source.concept_ref() != table.bottom)
            continue;
        if (std::all_of(own.begin(), own.end(), [&](std::size_t j) { return detail::row_matches(r, table.rows[j]); }))
            out.push_back(i);
    }
    return out;
}

inline std::vector<std::size_t> coverage(const Schema& schema, ItemRef item, std::optional<ConceptRef> bottom = std::nullopt)
{
    if (!schema.is_live(item))
        fail(Errc::unknown_item, "coverage of a missing item");
    return coverage(flatten(schema, bottom), item);
}

} // namespace comdb
