#pragma once

#include "comdb/decimal.hpp"
#include "comdb/literal.hpp"
#include "comdb/model.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace comdb::coql {

struct CollectionValue;
struct TupleValue;

using Value = std::variant<std::monostate, bool, std::int64_t, Decimal, std::string, ItemRef, std::shared_ptr<const CollectionValue>,
                           std::shared_ptr<const TupleValue>>;

struct CollectionValue {
    std::optional<ConceptRef> concept_ref; // set when every member is an item of it
    std::vector<Value> members;
};

struct TupleValue {
    std::vector<Value> values;
};

inline bool is_null(const Value& v) noexcept { return std::holds_alternative<std::monostate>(v); }

inline Value make_collection(std::optional<ConceptRef> c, std::vector<Value> members)
{
    return std::make_shared<const CollectionValue>(CollectionValue{c, std::move(members)});
}

inline Value make_items(ConceptRef c, const std::vector<ItemRef>& items)
{
    std::vector<Value> members(items.begin(), items.end());
    return make_collection(c, std::move(members));
}

inline const CollectionValue* as_collection(const Value& v)
{
    auto p = std::get_if<std::shared_ptr<const CollectionValue>>(&v);
    return p ? p->get() : nullptr;
}

inline std::vector<ItemRef> item_members(const CollectionValue& c)
{
    std::vector<ItemRef> out;
    out.reserve(c.members.size());
    for (const auto& m : c.members)
        if (auto r = std::get_if<ItemRef>(&m))
            out.push_back(*r);
    return out;
}

inline Value from_literal(const Literal& lit)
{
    if (auto i = std::get_if<std::int64_t>(&lit))
        return *i;
    if (auto d = std::get_if<Decimal>(&lit))
        return *d;
    return std::get<std::string>(lit);
}

/// Replaces a value-concept item by its literal; other values pass through.
inline Value deref(const Schema& schema, const Value& v)
{
    if (auto r = std::get_if<ItemRef>(&v))
        if (const auto& lit = schema.item_value(*r))
            return from_literal(*lit);
    return v;
}

/// Display text: literals as written, items by literal or identifier.
inline std::string render(const Schema& schema, const Value& v)
{
    struct Visitor {
        const Schema& schema;
        std::string operator()(std::monostate) const { return "null"; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(const Decimal& d) const { return d.to_string(); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(ItemRef r) const
        {
            if (const auto& lit = schema.item_value(r))
                return literal_text(*lit);
            return schema.item_id(r);
        }
        std::string operator()(const std::shared_ptr<const CollectionValue>& c) const
        {
            std::string out = "{";
            for (std::size_t i = 0; i < c->members.size(); ++i)
                out += (i ? ", " : "") + render(schema, c->members[i]);
            return out + "}";
        }
        std::string operator()(const std::shared_ptr<const TupleValue>& t) const
        {
            std::string out = "<";
            for (std::size_t i = 0; i < t->values.size(); ++i)
                out += (i ? ", " : "") + render(schema, t->values[i]);
            return out + ">";
        }
    };
    return std::visit(Visitor{schema}, v);
}

} // namespace comdb::coql
