#pragma once

#include "comdb/coql/lexer.hpp"
#include "comdb/dim_path.hpp"
#include "comdb/literal.hpp"
#include "comdb/model.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace comdb::coql {

struct Expr;
struct Query;
struct DerivedProperty;
using ExprPtr = std::shared_ptr<Expr>;
using QueryPtr = std::shared_ptr<Query>;

/// Static type assigned by the checker.
struct Type {
    enum class Kind { unknown, null, boolean, integer, decimal, string, item, collection, tuple };

    Kind kind = Kind::unknown;
    std::optional<ConceptRef> concept_ref; // item, or collection of items
    std::shared_ptr<Type> element;         // collection of non-items

    static Type of(Kind k) { return Type{k, std::nullopt, nullptr}; }
    static Type item(ConceptRef c) { return Type{Kind::item, c, nullptr}; }
    static Type items(ConceptRef c) { return Type{Kind::collection, c, nullptr}; }
    static Type collection_of(Type elem)
    {
        if (elem.kind == Kind::item && elem.concept_ref)
            return items(*elem.concept_ref);
        return Type{Kind::collection, std::nullopt, std::make_shared<Type>(std::move(elem))};
    }

    bool is(Kind k) const noexcept { return kind == k; }
    bool is_collection() const noexcept { return kind == Kind::collection; }
    bool is_item_collection() const noexcept { return kind == Kind::collection && concept_ref.has_value(); }
    Type element_type() const
    {
        if (concept_ref)
            return item(*concept_ref);
        return element ? *element : of(Kind::unknown);
    }
};

enum class ExprKind {
    literal,
    null,
    name,
    this_ref,
    member,    // base.name
    call,      // base.name(args)
    project,   // base -> name
    dot_tuple, // base.<args>
    deproject, // base <- args[0] <- args[1] …
    filter,    // (base name? | args[0])
    multi,     // [args[0] AND args[1] …]
    subquery,
    unary,
    binary,
    aggregate,
};

enum class BinOp { or_, and_, eq, ne, lt, le, gt, ge, add, sub, mul, div };
enum class UnOp { not_, neg };
enum class Agg { count, size, sum, average };

inline std::string_view bin_op_text(BinOp op)
{
    switch (op) {
    case BinOp::or_: return "OR";
    case BinOp::and_: return "AND";
    case BinOp::eq: return "==";
    case BinOp::ne: return "!=";
    case BinOp::lt: return "<";
    case BinOp::le: return "<=";
    case BinOp::gt: return ">";
    case BinOp::ge: return ">=";
    case BinOp::add: return "+";
    case BinOp::sub: return "-";
    case BinOp::mul: return "*";
    case BinOp::div: return "/";
    }
    return "?";
}

inline std::string_view agg_text(Agg a)
{
    switch (a) {
    case Agg::count: return "COUNT";
    case Agg::size: return "SIZE";
    case Agg::sum: return "SUM";
    case Agg::average: return "AVERAGE";
    }
    return "?";
}

/// One hop group of a de-projection chain, resolved by the checker:
/// target items whose walk along `up` (written from the target) hits the source.
struct DeprojSegment {
    std::vector<std::string> dims; // as written, source side first
    DimPath up;                    // reversed dims
    ExprPtr target;                // collection expression
};

enum class NameRef { unresolved, variable, implicit_dim, implicit_id, concept_name };

struct Expr {
    ExprKind kind = ExprKind::literal;
    Span span;
    Literal literal;
    std::string name;
    ExprPtr base;
    std::vector<ExprPtr> args;
    QueryPtr query;
    BinOp bin = BinOp::eq;
    UnOp un = UnOp::not_;
    Agg agg = Agg::count;

    // checker annotations
    Type type;
    NameRef ref = NameRef::unresolved;
    int implicit_skip = 0; // implicit frames to skip when ref is implicit_*
    std::optional<ConceptRef> concept_ref;
    bool pseudo_id = false; // member access to an item's identifier
    std::shared_ptr<const DerivedProperty> property;
    std::vector<DeprojSegment> segments;
};

struct Source {
    ExprPtr expr;
    std::string var; // empty: implicit binding
};

struct SelectItem {
    ExprPtr expr;
    std::string alias;
};

enum class StmtKind { decl, if_return, ret };

struct Stmt {
    StmtKind kind = StmtKind::decl;
    Span span;
    std::string type_name; // decl: Collection, Item, double, integer or a concept name
    std::string type_arg;  // decl: Collection<type_arg>
    std::string var;
    ExprPtr expr; // decl initializer, IF condition
    std::vector<SelectItem> returns;
};

struct Query {
    Span span;
    bool forall = false;
    std::vector<Source> sources;
    bool has_body = false;
    std::vector<Stmt> body;
    ExprPtr where;
    bool has_select = false;
    bool select_star = false;
    std::vector<SelectItem> select;
};

struct Param {
    std::string type_name;
    std::string name;
};

struct DerivedDef {
    Span span;
    std::string owner;
    std::string name;
    std::vector<Param> params;
    std::vector<Stmt> body;
};

/// Registered, checked derived property.
struct DerivedProperty {
    ConceptRef owner;
    std::string name;
    std::vector<std::pair<std::string, ConceptRef>> params;
    std::vector<Stmt> body; // checked; `this` bound to the owner
    ExprPtr result;         // the RETURN expression
    Type type;
    std::vector<std::string> calls; // qualified names of properties used by the body
};

inline ExprPtr make_expr(ExprKind kind, Span span)
{
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->span = span;
    return e;
}

// ---- structural equality (ignores spans and annotations) ---------------

inline bool same(const ExprPtr& a, const ExprPtr& b);
inline bool same(const Query& a, const Query& b);

inline bool same_items(const std::vector<SelectItem>& a, const std::vector<SelectItem>& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].alias != b[i].alias || !same(a[i].expr, b[i].expr))
            return false;
    return true;
}

inline bool same_body(const std::vector<Stmt>& a, const std::vector<Stmt>& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.kind != y.kind || x.type_name != y.type_name || x.type_arg != y.type_arg || x.var != y.var || !same(x.expr, y.expr) ||
            !same_items(x.returns, y.returns))
            return false;
    }
    return true;
}

inline bool same(const Query& a, const Query& b)
{
    if (a.forall != b.forall || a.sources.size() != b.sources.size() || a.has_body != b.has_body || a.has_select != b.has_select ||
        a.select_star != b.select_star)
        return false;
    for (std::size_t i = 0; i < a.sources.size(); ++i)
        if (a.sources[i].var != b.sources[i].var || !same(a.sources[i].expr, b.sources[i].expr))
            return false;
    return same_body(a.body, b.body) && same(a.where, b.where) && same_items(a.select, b.select);
}

inline bool same(const ExprPtr& a, const ExprPtr& b)
{
    if (!a || !b)
        return !a && !b;
    if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size())
        return false;
    switch (a->kind) {
    case ExprKind::literal:
        if (a->literal != b->literal)
            return false;
        break;
    case ExprKind::binary:
        if (a->bin != b->bin)
            return false;
        break;
    case ExprKind::unary:
        if (a->un != b->un)
            return false;
        break;
    case ExprKind::aggregate:
        if (a->agg != b->agg)
            return false;
        break;
    case ExprKind::subquery:
        if (!a->query || !b->query || !same(*a->query, *b->query))
            return false;
        break;
    default: break;
    }
    if (!same(a->base, b->base))
        return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!same(a->args[i], b->args[i]))
            return false;
    return true;
}

} // namespace comdb::coql
