#pragma once

// Projection (->), dot (.) and de-projection (<-) over collections of items,
// plus chained access paths and their multi-dimensional forms.

#include "comdb/flatten.hpp"
#include "comdb/model.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>
#include <variant>
#include <vector>

namespace comdb {

/// A sequence of items of one concept; duplicates are allowed.
struct Collection {
    ConceptRef concept_ref;
    std::vector<ItemRef> members;

    std::size_t size() const noexcept { return members.size(); }
    bool empty() const noexcept { return members.empty(); }
    bool contains(ItemRef r) const { return std::find(members.begin(), members.end(), r) != members.end(); }

    friend bool operator==(const Collection&, const Collection&) = default;
};

inline Collection all_items(const Schema& schema, ConceptRef c) { return Collection{c, schema.items(c)}; }

/// Builds a collection from item ids; throws UnknownItem.
inline Collection collection_of(const Schema& schema, ConceptRef c, const std::vector<std::string>& ids)
{
    Collection out{c, {}};
    for (const auto& id : ids)
        out.members.push_back(schema.item(c, id));
    return out;
}

/// Removes duplicates, keeping first occurrences.
inline Collection distinct(Collection c)
{
    std::unordered_set<ItemRef, ItemRefHash> seen;
    std::vector<ItemRef> out;
    for (auto m : c.members)
        if (seen.insert(m).second)
            out.push_back(m);
    c.members = std::move(out);
    return c;
}

inline Collection intersect(const Collection& a, const Collection& b)
{
    if (a.concept_ref != b.concept_ref)
        fail(Errc::domain_mismatch, "cannot intersect collections of different concepts");
    std::unordered_set<ItemRef, ItemRefHash> in_b(b.members.begin(), b.members.end());
    Collection out{a.concept_ref, {}};
    for (auto m : distinct(a).members)
        if (in_b.count(m))
            out.members.push_back(m);
    return out;
}

/// E -> path: distinct super-items in first-reached order; null walks drop out.
inline Collection project(const Schema& schema, const Collection& e, const DimPath& path)
{
    Collection out{schema.resolve_path(e.concept_ref, path), {}};
    std::unordered_set<ItemRef, ItemRefHash> seen;
    for (auto m : e.members)
        if (auto s = schema.walk(m, path); s && seen.insert(*s).second)
            out.members.push_back(*s);
    return out;
}

struct DotResult {
    Collection collection;
    std::size_t dropped_nulls = 0;
};

/// E.path: one super-item per member, duplicates kept; null walks are counted.
inline DotResult dot(const Schema& schema, const Collection& e, const DimPath& path)
{
    DotResult out{Collection{schema.resolve_path(e.concept_ref, path), {}}, 0};
    for (auto m : e.members) {
        if (auto s = schema.walk(m, path))
            out.collection.members.push_back(*s);
        else
            ++out.dropped_nulls;
    }
    return out;
}

using DeprojectTarget = std::variant<ConceptRef, Collection>;

inline ConceptRef target_concept(const DeprojectTarget& t)
{
    if (auto c = std::get_if<ConceptRef>(&t))
        return *c;
    return std::get<Collection>(t).concept_ref;
}

/// E <- path <- target: members of the target whose walk along `path`
/// (written upward from the target) lands in E.
inline Collection deproject(const Schema& schema, const Collection& e, const DimPath& path, const DeprojectTarget& target)
{
    ConceptRef tc = target_concept(target);
    ConceptRef end = schema.resolve_path(tc, path);
    if (end != e.concept_ref)
        fail(Errc::domain_mismatch, "path '" + path.to_string() + "' from '" + schema.concept_name(tc) + "' ends in '" +
                                        schema.concept_name(end) + "', not '" + schema.concept_name(e.concept_ref) + "'");
    std::unordered_set<ItemRef, ItemRefHash> source(e.members.begin(), e.members.end());
    Collection candidates = std::holds_alternative<ConceptRef>(target) ? all_items(schema, tc) : distinct(std::get<Collection>(target));
    Collection out{tc, {}};
    for (auto s : candidates.members)
        if (auto v = schema.walk(s, path); v && source.count(*v))
            out.members.push_back(s);
    return out;
}

struct PathStep {
    enum class Kind { project, dot, deproject };

    Kind kind = Kind::project;
    DimPath path;
    std::optional<DeprojectTarget> target;

    static PathStep up(DimPath p) { return PathStep{Kind::project, std::move(p), std::nullopt}; }
    static PathStep along(DimPath p) { return PathStep{Kind::dot, std::move(p), std::nullopt}; }
    static PathStep down(DimPath p, DeprojectTarget t) { return PathStep{Kind::deproject, std::move(p), std::move(t)}; }
};

/// Left-to-right fold of projection, dot and de-projection steps.
inline Collection eval_path(const Schema& schema, Collection e, const std::vector<PathStep>& steps)
{
    for (const auto& step : steps) {
        switch (step.kind) {
        case PathStep::Kind::project: e = project(schema, e, step.path); break;
        case PathStep::Kind::dot: e = dot(schema, e, step.path).collection; break;
        case PathStep::Kind::deproject: e = deproject(schema, e, step.path, *step.target); break;
        }
    }
    return e;
}

/// E -> <d1, …, dn>: super-items reached along every listed dimension.
inline Collection multi_project(const Schema& schema, const Collection& e, const std::vector<std::string>& dims)
{
    if (dims.empty())
        fail(Errc::domain_mismatch, "multi-dimensional projection needs at least one dimension");
    ConceptRef domain = schema.dimension(e.concept_ref, dims.front()).domain;
    for (const auto& d : dims)
        if (schema.dimension(e.concept_ref, d).domain != domain)
            fail(Errc::domain_mismatch, "dimensions of a multi-dimensional projection must share one domain");
    Collection out = project(schema, e, DimPath{dims.front()});
    for (std::size_t i = 1; i < dims.size(); ++i)
        out = intersect(out, project(schema, e, DimPath{dims[i]}));
    return out;
}

/// E <- <f1, …, fm> <- target: target members referencing E along every listed dimension.
inline Collection multi_deproject(const Schema& schema, const Collection& e, const std::vector<std::string>& dims,
                                  const DeprojectTarget& target)
{
    if (dims.empty())
        fail(Errc::domain_mismatch, "multi-dimensional de-projection needs at least one dimension");
    Collection out = deproject(schema, e, DimPath{dims.front()}, target);
    for (std::size_t i = 1; i < dims.size(); ++i)
        out = intersect(out, deproject(schema, e, DimPath{dims[i]}, target));
    return out;
}

/// De-projection along all sub-dimensions of every rank: the bottom items
/// whose rows are covered by some member of E.
inline std::vector<ItemRef> full_deproject(const PrimitiveTable& table, const Collection& e)
{
    std::vector<ItemRef> out;
    std::unordered_set<ItemRef, ItemRefHash> seen;
    for (auto m : e.members)
        for (std::size_t row : coverage(table, m))
            if (seen.insert(table.rows[row].source).second)
                out.push_back(table.rows[row].source);
    return out;
}

inline std::vector<ItemRef> full_deproject(const Schema& schema, const Collection& e, std::optional<ConceptRef> bottom = std::nullopt)
{
    return full_deproject(flatten(schema, bottom), e);
}

} // namespace comdb
