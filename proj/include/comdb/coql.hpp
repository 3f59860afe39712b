#pragma once

// Entry points for query text: parse, check, evaluate.

#include "comdb/coql/checker.hpp"
#include "comdb/coql/cube.hpp"
#include "comdb/coql/eval.hpp"
#include "comdb/coql/parser.hpp"
#include "comdb/coql/printer.hpp"
#include "comdb/coql/result.hpp"
#include "comdb/propagate.hpp"

#include <string_view>

namespace comdb::coql {

/// Runs a query, or a bare expression as a one-row table with column "value".
inline ResultTable run(const Schema& schema, const Registry& registry, std::string_view text)
{
    TopLevel top = parse(text);
    Checker checker(schema, registry);
    Evaluator eval(schema);
    if (auto q = std::get_if<QueryPtr>(&top))
        return eval.run(*checker.check(**q));
    if (auto e = std::get_if<ExprPtr>(&top)) {
        ResultTable out;
        out.columns = {"value"};
        out.rows.push_back({eval.value(*checker.check(*e))});
        return out;
    }
    fail(Errc::check_error, "a derived property definition is not a query; use define");
}

/// Runs on a copy of `schema` restricted by `constraints`.
inline ResultTable run(const Schema& schema, const Registry& registry, std::string_view text, const ConstraintSet& constraints)
{
    Schema restricted = restrict_schema(schema, constraints);
    return run(restricted, registry, text);
}

namespace detail {

inline bool is_local(const Expr& e)
{
    switch (e.kind) {
    case ExprKind::literal:
    case ExprKind::null: return true;
    case ExprKind::name: return (e.ref == NameRef::implicit_dim || e.ref == NameRef::implicit_id) && e.implicit_skip == 0;
    case ExprKind::member: return e.pseudo_id && is_local(*e.base);
    case ExprKind::unary: return is_local(*e.base);
    case ExprKind::binary: return is_local(*e.args[0]) && is_local(*e.args[1]);
    default: return false;
    }
}

} // namespace detail

/// Elementary constraint on `c` from a boolean expression over the item's
/// own identifier and slots, e.g. `age > 30 AND name != "Bo"`.
inline Possibility local_constraint(const Schema& schema, const Registry& registry, ConceptRef c, std::string_view text)
{
    Checker checker(schema, registry);
    ExprPtr e = checker.check_on(parse_expression(text), c);
    if (!detail::is_local(*e))
        fail(Errc::non_local_predicate, "'" + std::string(text) + "' looks beyond the item's own slots");
    if (e->type.kind != Type::Kind::boolean)
        fail(Errc::type_mismatch, "constraint must be boolean");
    Evaluator eval(schema);
    Possibility p = Possibility::all(schema, c);
    for (auto r : schema.items(c))
        if (!eval.holds_on(*e, r))
            p.set(r, false);
    return p;
}

/// Parses, checks and registers a derived property; returns its qualified name.
inline std::string register_derived(const Schema& schema, Registry& registry, std::string_view text)
{
    DerivedDef def = parse_derived(text);
    Checker checker(schema, registry);
    auto prop = checker.check(def);
    registry.add(prop);
    return def.owner + "::" + def.name;
}

} // namespace comdb::coql
