#pragma once

// Static resolution of COQL trees against a schema: names, dimensions,
// de-projection chains, derived property calls and operand types.

#include "comdb/coql/ast.hpp"
#include "comdb/coql/printer.hpp"
#include "comdb/model.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace comdb::coql {

/// Derived properties known to a model, keyed by owner concept and name.
class Registry {
public:
    std::shared_ptr<const DerivedProperty> find(ConceptRef owner, const std::string& name) const
    {
        auto it = props_.find({owner.index, name});
        return it == props_.end() ? nullptr : it->second;
    }

    void add(std::shared_ptr<const DerivedProperty> p)
    {
        auto key = std::make_pair(p->owner.index, p->name);
        if (props_.count(key))
            fail(Errc::duplicate_property, "derived property '" + p->name + "' is already defined");
        props_.emplace(key, std::move(p));
    }

    std::vector<std::shared_ptr<const DerivedProperty>> all() const
    {
        std::vector<std::shared_ptr<const DerivedProperty>> out;
        for (const auto& [k, p] : props_)
            out.push_back(p);
        return out;
    }

    std::size_t size() const noexcept { return props_.size(); }

private:
    std::map<std::pair<std::uint32_t, std::string>, std::shared_ptr<const DerivedProperty>> props_;
};

// ---- deep copies ---------------------------------------------------------

inline ExprPtr clone(const ExprPtr& e);

inline Query clone(const Query& q);

inline std::vector<Stmt> clone(const std::vector<Stmt>& body)
{
    std::vector<Stmt> out = body;
    for (auto& s : out) {
        s.expr = clone(s.expr);
        for (auto& r : s.returns)
            r.expr = clone(r.expr);
    }
    return out;
}

inline Query clone(const Query& q)
{
    Query out = q;
    for (auto& s : out.sources)
        s.expr = clone(s.expr);
    out.body = clone(q.body);
    out.where = clone(q.where);
    for (auto& s : out.select)
        s.expr = clone(s.expr);
    return out;
}

inline ExprPtr clone(const ExprPtr& e)
{
    if (!e)
        return nullptr;
    auto out = std::make_shared<Expr>(*e);
    out->base = clone(e->base);
    for (auto& a : out->args)
        a = clone(a);
    if (e->query)
        out->query = std::make_shared<Query>(clone(*e->query));
    out->segments.clear();
    return out;
}

// ---- scalar classes --------------------------------------------------------

enum class Scalar { unknown, null, boolean, integer, decimal, string, identity, none };

inline Scalar classify(const Schema& schema, const Type& t)
{
    using K = Type::Kind;
    switch (t.kind) {
    case K::unknown: return Scalar::unknown;
    case K::null: return Scalar::null;
    case K::boolean: return Scalar::boolean;
    case K::integer: return Scalar::integer;
    case K::decimal: return Scalar::decimal;
    case K::string: return Scalar::string;
    case K::item: {
        auto vt = schema.concept_at(*t.concept_ref).value_type();
        if (!vt)
            return Scalar::identity;
        switch (*vt) {
        case ValueType::integer: return Scalar::integer;
        case ValueType::decimal: return Scalar::decimal;
        default: return Scalar::string;
        }
    }
    default: return Scalar::none;
    }
}

inline bool numeric(Scalar s) { return s == Scalar::integer || s == Scalar::decimal || s == Scalar::unknown; }

class Checker {
public:
    Checker(const Schema& schema, const Registry& registry) : schema_(schema), registry_(registry) {}

    /// Annotated copy of `q`.
    QueryPtr check(const Query& q)
    {
        auto out = std::make_shared<Query>(clone(q));
        query(*out);
        return out;
    }

    ExprPtr check(const ExprPtr& e)
    {
        auto out = clone(e);
        expr(out);
        return out;
    }

    /// Annotated copy of `e` with the dimensions of `c` in scope as bare names.
    ExprPtr check_on(const ExprPtr& e, ConceptRef c)
    {
        scope_.push_back(Binding{"", Type::item(c), true});
        auto out = clone(e);
        try {
            expr(out);
        } catch (...) {
            scope_.pop_back();
            throw;
        }
        scope_.pop_back();
        return out;
    }

    std::shared_ptr<DerivedProperty> check(const DerivedDef& def)
    {
        ConceptRef owner = schema_.concept_ref(def.owner);
        if (registry_.find(owner, def.name))
            fail(Errc::duplicate_property, "derived property '" + def.owner + "::" + def.name + "' is already defined");
        auto prop = std::make_shared<DerivedProperty>();
        prop->owner = owner;
        prop->name = def.name;
        calls_.clear();
        try {
            for (const auto& p : def.params)
                prop->params.emplace_back(p.name, schema_.concept_ref(p.type_name));
            scope_.clear();
            scope_.push_back(Binding{"this", Type::item(owner), false});
            for (const auto& [name, c] : prop->params)
                scope_.push_back(Binding{name, Type::item(c), false});
            current_ = std::make_pair(owner, def.name);
            prop->body = clone(def.body);
            if (prop->body.empty() || prop->body.back().kind != StmtKind::ret || prop->body.back().returns.size() != 1)
                fail(Errc::check_error, "body must end with RETURN of one expression");
            for (auto& s : prop->body) {
                if (s.kind == StmtKind::if_return)
                    fail(Errc::check_error, "IF is not allowed in a derived property");
                if (s.kind == StmtKind::ret && &s != &prop->body.back())
                    fail(Errc::check_error, "RETURN must be the last statement");
                stmt(s);
            }
            prop->result = prop->body.back().returns[0].expr;
            prop->type = prop->result->type;
            prop->calls = calls_;
        } catch (const Error& e) {
            current_.reset();
            scope_.clear();
            if (e.code() == Errc::check_error)
                throw;
            fail(Errc::check_error, "derived property '" + def.owner + "::" + def.name + "': " + e.what());
        }
        current_.reset();
        scope_.clear();
        return prop;
    }

    /// Static type of a checked query used as a collection.
    static Type result_type(const Query& q)
    {
        const std::vector<SelectItem>* items = q.has_select ? &q.select : nullptr;
        for (const auto& s : q.body)
            if (s.kind != StmtKind::decl && !items)
                items = &s.returns;
        if (q.select_star || (!items && q.sources.size() == 1))
            return Type::collection_of(q.sources[0].expr->type.element_type());
        if (items && items->size() == 1)
            return Type::collection_of((*items)[0].expr->type);
        return Type::collection_of(Type::of(Type::Kind::tuple));
    }

private:
    struct Binding {
        std::string name;
        Type type;
        bool implicit;
    };

    const Schema& schema_;
    const Registry& registry_;
    std::vector<Binding> scope_;
    std::optional<std::pair<ConceptRef, std::string>> current_;
    std::vector<std::string> calls_;

    [[noreturn]] void type_error(const Expr& e, const std::string& msg) const
    {
        fail(Errc::type_mismatch, where(e.span) + ": " + msg + " in '" + to_text(e) + "'");
    }

    std::string tname(const Type& t) const
    {
        using K = Type::Kind;
        switch (t.kind) {
        case K::unknown: return "unknown";
        case K::null: return "null";
        case K::boolean: return "boolean";
        case K::integer: return "integer";
        case K::decimal: return "decimal";
        case K::string: return "string";
        case K::item: return "item of " + schema_.concept_name(*t.concept_ref);
        case K::collection: return t.concept_ref ? "collection of " + schema_.concept_name(*t.concept_ref) : "collection";
        case K::tuple: return "tuple";
        }
        return "?";
    }

    const Binding* find_var(const std::string& name) const
    {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (!it->implicit && it->name == name)
                return &*it;
        return nullptr;
    }

    bool any_implicit() const
    {
        return std::any_of(scope_.begin(), scope_.end(), [](const Binding& b) { return b.implicit; });
    }

    bool is_dim_anywhere(const std::string& name) const
    {
        for (auto c : schema_.concepts())
            if (schema_.concept_at(c).dim_index(name))
                return true;
        return false;
    }

    // ---- expressions --------------------------------------------------

    void name(Expr& e)
    {
        if (auto b = find_var(e.name)) {
            e.ref = NameRef::variable;
            e.type = b->type;
            return;
        }
        int skip = 0;
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (!it->implicit)
                continue;
            if (it->type.is(Type::Kind::item)) {
                const auto& con = schema_.concept_at(*it->type.concept_ref);
                if (auto di = con.dim_index(e.name)) {
                    e.ref = NameRef::implicit_dim;
                    e.implicit_skip = skip;
                    e.type = Type::item(con.dims()[*di].domain);
                    return;
                }
                if (e.name == "id") {
                    e.ref = NameRef::implicit_id;
                    e.implicit_skip = skip;
                    e.type = Type::of(Type::Kind::string);
                    return;
                }
            }
            ++skip;
        }
        if (auto c = schema_.find_concept(e.name)) {
            e.ref = NameRef::concept_name;
            e.concept_ref = *c;
            e.type = Type::items(*c);
            return;
        }
        if (any_implicit())
            fail(Errc::unknown_dimension, where(e.span) + ": no dimension, variable or concept named '" + e.name + "'");
        fail(Errc::unbound_variable, where(e.span) + ": unbound variable '" + e.name + "'");
    }

    // Resolves a collection-valued name used as a de-projection target.
    void target_name(Expr& e)
    {
        if (auto b = find_var(e.name)) {
            e.ref = NameRef::variable;
            e.type = b->type;
        } else if (auto c = schema_.find_concept(e.name)) {
            e.ref = NameRef::concept_name;
            e.concept_ref = *c;
            e.type = Type::items(*c);
        } else {
            fail(Errc::unknown_concept, where(e.span) + ": unknown concept '" + e.name + "'");
        }
    }

    ConceptRef item_concept(const Expr& e, const char* what) const
    {
        if ((e.type.is(Type::Kind::item) || e.type.is_collection()) && e.type.concept_ref)
            return *e.type.concept_ref;
        type_error(e, std::string(what) + " needs items, got " + tname(e.type));
    }

    const DimensionDecl& dim_of(ConceptRef c, const Expr& e) const
    {
        const auto& con = schema_.concept_at(c);
        auto di = con.dim_index(e.name);
        if (!di)
            fail(Errc::unknown_dimension, where(e.span) + ": concept '" + con.name() + "' has no dimension '" + e.name + "'");
        return con.dims()[*di];
    }

    void member(Expr& e)
    {
        expr(e.base);
        const Type& bt = e.base->type;
        if (bt.is(Type::Kind::unknown)) {
            e.type = Type::of(Type::Kind::unknown);
            return;
        }
        ConceptRef c = item_concept(*e.base, "'.'");
        bool single = bt.is(Type::Kind::item);
        if (!schema_.concept_at(c).dim_index(e.name) && e.name == "id") {
            e.pseudo_id = true;
            e.type = single ? Type::of(Type::Kind::string) : Type::collection_of(Type::of(Type::Kind::string));
            return;
        }
        ConceptRef d = dim_of(c, e).domain;
        e.type = single ? Type::item(d) : Type::items(d);
    }

    void project(Expr& e)
    {
        expr(e.base);
        if (e.base->type.is(Type::Kind::unknown)) {
            e.type = Type::of(Type::Kind::unknown);
            return;
        }
        ConceptRef c = item_concept(*e.base, "'->'");
        ConceptRef d = dim_of(c, e).domain;
        e.type = e.base->type.is(Type::Kind::item) ? Type::item(d) : Type::items(d);
    }

    void dot_tuple(Expr& e)
    {
        expr(e.base);
        ConceptRef c = item_concept(*e.base, "'.<>'");
        scope_.push_back(Binding{"", Type::item(c), true});
        for (auto& a : e.args)
            expr(a);
        scope_.pop_back();
        Type elem = e.args.size() == 1 ? e.args[0]->type : Type::of(Type::Kind::tuple);
        e.type = e.base->type.is(Type::Kind::item) ? elem : Type::collection_of(elem);
    }

    void call(Expr& e)
    {
        expr(e.base);
        if (!e.base->type.is(Type::Kind::item))
            type_error(e, "derived properties apply to single items, got " + tname(e.base->type));
        ConceptRef c = *e.base->type.concept_ref;
        if (current_ && current_->first == c && current_->second == e.name)
            fail(Errc::check_error, where(e.span) + ": recursive derived property '" + e.name + "'");
        auto prop = registry_.find(c, e.name);
        if (!prop)
            fail(Errc::unknown_dimension, where(e.span) + ": concept '" + schema_.concept_name(c) + "' has no derived property '" + e.name + "'");
        if (prop->params.size() != e.args.size())
            type_error(e, "'" + e.name + "' takes " + std::to_string(prop->params.size()) + " argument(s)");
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            expr(e.args[i]);
            const Type& at = e.args[i]->type;
            if (!at.is(Type::Kind::unknown) && !(at.is(Type::Kind::item) && *at.concept_ref == prop->params[i].second))
                type_error(e, "argument " + std::to_string(i + 1) + " must be an item of " + schema_.concept_name(prop->params[i].second));
        }
        calls_.push_back(schema_.concept_name(c) + "::" + e.name);
        e.property = prop;
        e.type = prop->type;
    }

    void deproject(Expr& e)
    {
        expr(e.base);
        ConceptRef cur = item_concept(*e.base, "'<-'");
        std::vector<std::string> dims;
        std::vector<Span> spans;
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            auto& el = e.args[i];
            bool last = i + 1 == e.args.size();
            if (el->kind == ExprKind::name && !last && (is_dim_anywhere(el->name) || !schema_.find_concept(el->name))) {
                dims.push_back(el->name);
                spans.push_back(el->span);
                continue;
            }
            if (el->kind == ExprKind::name)
                target_name(*el);
            else
                expr(el);
            if (!el->type.is_item_collection())
                type_error(e, "de-projection target must be a collection of items, got " + tname(el->type));
            ConceptRef target = *el->type.concept_ref;
            if (dims.empty())
                type_error(e, "de-projection needs at least one dimension before '" + to_text(*el) + "'");
            ConceptRef hop = cur;
            for (std::size_t j = 0; j < dims.size(); ++j) {
                if (j + 1 == dims.size()) {
                    const auto& con = schema_.concept_at(target);
                    auto di = con.dim_index(dims[j]);
                    if (!di)
                        fail(Errc::unknown_dimension,
                             where(spans[j]) + ": concept '" + con.name() + "' has no dimension '" + dims[j] + "'");
                    if (con.dims()[*di].domain != hop)
                        fail(Errc::domain_mismatch, where(spans[j]) + ": dimension '" + con.name() + "." + dims[j] + "' does not lead to '" +
                                                        schema_.concept_name(hop) + "'");
                    break;
                }
                std::vector<ConceptRef> owners;
                for (auto c : schema_.concepts()) {
                    const auto& con = schema_.concept_at(c);
                    if (auto di = con.dim_index(dims[j]); di && con.dims()[*di].domain == hop)
                        owners.push_back(c);
                }
                if (owners.empty())
                    fail(Errc::unknown_dimension,
                         where(spans[j]) + ": no concept has dimension '" + dims[j] + "' into '" + schema_.concept_name(hop) + "'");
                if (owners.size() > 1)
                    fail(Errc::ambiguous_deprojection, where(spans[j]) + ": several concepts have dimension '" + dims[j] + "' into '" +
                                                           schema_.concept_name(hop) + "'");
                hop = owners[0];
            }
            DeprojSegment seg;
            seg.dims = dims;
            for (auto it = dims.rbegin(); it != dims.rend(); ++it)
                seg.up.push_back(*it);
            seg.target = el;
            e.segments.push_back(std::move(seg));
            dims.clear();
            spans.clear();
            cur = target;
        }
        e.type = Type::items(cur);
    }

    void filter(Expr& e)
    {
        expr(e.base);
        const Type& bt = e.base->type;
        if (!bt.is_collection() && !bt.is(Type::Kind::unknown))
            type_error(e, "filter source must be a collection, got " + tname(bt));
        scope_.push_back(Binding{e.name, bt.element_type(), e.name.empty()});
        expr(e.args[0]);
        boolean(*e.args[0]);
        scope_.pop_back();
        e.type = bt;
    }

    void multi(Expr& e)
    {
        std::optional<ConceptRef> c;
        for (auto& a : e.args) {
            expr(a);
            if (!a->type.is_item_collection())
                type_error(e, "multi-dimensional de-projection needs collections of items");
            if (c && *c != *a->type.concept_ref)
                fail(Errc::domain_mismatch, where(e.span) + ": de-projections end in different concepts");
            c = a->type.concept_ref;
        }
        e.type = Type::items(*c);
    }

    void boolean(const Expr& e) const
    {
        if (!e.type.is(Type::Kind::boolean) && !e.type.is(Type::Kind::unknown))
            type_error(e, "condition must be boolean, got " + tname(e.type));
    }

    static ExprPtr count_of(ExprPtr coll)
    {
        auto c = make_expr(ExprKind::aggregate, coll->span);
        c->agg = Agg::count;
        c->base = std::move(coll);
        c->type = Type::of(Type::Kind::integer);
        return c;
    }

    void binary(Expr& e)
    {
        expr(e.args[0]);
        expr(e.args[1]);
        switch (e.bin) {
        case BinOp::and_:
        case BinOp::or_:
            boolean(*e.args[0]);
            boolean(*e.args[1]);
            e.type = Type::of(Type::Kind::boolean);
            return;
        case BinOp::add:
        case BinOp::sub:
        case BinOp::mul:
        case BinOp::div: {
            Scalar l = classify(schema_, e.args[0]->type);
            Scalar r = classify(schema_, e.args[1]->type);
            if (l == Scalar::null || r == Scalar::null) {
                e.type = Type::of(Type::Kind::null);
                return;
            }
            if (!numeric(l) || !numeric(r))
                type_error(e, "arithmetic needs numbers, got " + tname(e.args[0]->type) + " and " + tname(e.args[1]->type));
            if (l == Scalar::unknown || r == Scalar::unknown)
                e.type = Type::of(Type::Kind::unknown);
            else if (l == Scalar::integer && r == Scalar::integer && e.bin != BinOp::div)
                e.type = Type::of(Type::Kind::integer);
            else
                e.type = Type::of(Type::Kind::decimal);
            return;
        }
        default: break;
        }
        // comparison; a collection compared with a number counts its members
        for (int side = 0; side < 2; ++side) {
            auto& coll = e.args[side];
            Scalar other = classify(schema_, e.args[1 - side]->type);
            if (coll->type.is_collection() && (other == Scalar::integer || other == Scalar::decimal))
                coll = count_of(coll);
        }
        Scalar l = classify(schema_, e.args[0]->type);
        Scalar r = classify(schema_, e.args[1]->type);
        e.type = Type::of(Type::Kind::boolean);
        if (l == Scalar::unknown || r == Scalar::unknown || l == Scalar::null || r == Scalar::null)
            return;
        bool eq = e.bin == BinOp::eq || e.bin == BinOp::ne;
        bool ok = (numeric(l) && numeric(r)) || (l == Scalar::string && r == Scalar::string) ||
                  (l == Scalar::identity && r == Scalar::string) || (l == Scalar::string && r == Scalar::identity) ||
                  (eq && l == Scalar::identity && r == Scalar::identity) || (eq && l == Scalar::boolean && r == Scalar::boolean);
        if (!ok)
            type_error(e, "cannot compare " + tname(e.args[0]->type) + " with " + tname(e.args[1]->type));
    }

    void aggregate(Expr& e)
    {
        expr(e.base);
        const Type& bt = e.base->type;
        if (!bt.is_collection() && !bt.is(Type::Kind::unknown))
            type_error(e, std::string(agg_text(e.agg)) + " needs a collection, got " + tname(bt));
        switch (e.agg) {
        case Agg::count:
        case Agg::size: e.type = Type::of(Type::Kind::integer); return;
        case Agg::average: e.type = Type::of(Type::Kind::decimal); break;
        case Agg::sum: {
            Scalar s = bt.is_collection() ? classify(schema_, bt.element_type()) : Scalar::unknown;
            e.type = Type::of(s == Scalar::integer ? Type::Kind::integer : s == Scalar::decimal ? Type::Kind::decimal : Type::Kind::unknown);
            break;
        }
        }
        if (bt.is_collection()) {
            Scalar s = classify(schema_, bt.element_type());
            if (!numeric(s))
                type_error(e, std::string(agg_text(e.agg)) + " needs numbers, got " + tname(bt.element_type()));
        }
    }

    void expr(ExprPtr& p)
    {
        Expr& e = *p;
        switch (e.kind) {
        case ExprKind::literal:
            if (std::holds_alternative<std::int64_t>(e.literal))
                e.type = Type::of(Type::Kind::integer);
            else if (std::holds_alternative<Decimal>(e.literal))
                e.type = Type::of(Type::Kind::decimal);
            else
                e.type = Type::of(Type::Kind::string);
            return;
        case ExprKind::null: e.type = Type::of(Type::Kind::null); return;
        case ExprKind::name: name(e); return;
        case ExprKind::this_ref: {
            auto b = find_var("this");
            if (!b)
                fail(Errc::unbound_variable, where(e.span) + ": 'this' outside a derived property");
            e.ref = NameRef::variable;
            e.name = "this";
            e.type = b->type;
            return;
        }
        case ExprKind::member: member(e); return;
        case ExprKind::call: call(e); return;
        case ExprKind::project: project(e); return;
        case ExprKind::dot_tuple: dot_tuple(e); return;
        case ExprKind::deproject: deproject(e); return;
        case ExprKind::filter: filter(e); return;
        case ExprKind::multi: multi(e); return;
        case ExprKind::subquery:
            query(*e.query);
            e.type = result_type(*e.query);
            return;
        case ExprKind::unary:
            expr(e.base);
            if (e.un == UnOp::not_) {
                boolean(*e.base);
                e.type = Type::of(Type::Kind::boolean);
            } else {
                Scalar s = classify(schema_, e.base->type);
                if (!numeric(s))
                    type_error(e, "negation needs a number");
                e.type = Type::of(s == Scalar::integer ? Type::Kind::integer : s == Scalar::decimal ? Type::Kind::decimal : Type::Kind::unknown);
            }
            return;
        case ExprKind::binary: binary(e); return;
        case ExprKind::aggregate: aggregate(e); return;
        }
    }

    // ---- statements and queries -----------------------------------------

    void stmt(Stmt& s)
    {
        switch (s.kind) {
        case StmtKind::decl: {
            expr(s.expr);
            const Type& t = s.expr->type;
            bool unknown = t.is(Type::Kind::unknown);
            Scalar sc = classify(schema_, t);
            auto mismatch = [&] {
                fail(Errc::type_mismatch, where(s.span) + ": '" + s.var + "' declared " + s.type_name + " but initialised with " + tname(t));
            };
            if (s.type_name == "Collection") {
                if (!unknown && !t.is_collection())
                    mismatch();
                if (!s.type_arg.empty()) {
                    ConceptRef c = schema_.concept_ref(s.type_arg);
                    if (!unknown && !(t.is_item_collection() && *t.concept_ref == c))
                        mismatch();
                }
            } else if (s.type_name == "Item") {
                if (!unknown && !t.is(Type::Kind::item))
                    mismatch();
            } else if (s.type_name == "double") {
                if (!numeric(sc))
                    mismatch();
            } else if (s.type_name == "integer") {
                if (sc != Scalar::integer && sc != Scalar::unknown)
                    mismatch();
            } else {
                ConceptRef c = schema_.concept_ref(s.type_name);
                if (!unknown && !(t.is(Type::Kind::item) && *t.concept_ref == c))
                    mismatch();
            }
            scope_.push_back(Binding{s.var, t, false});
            return;
        }
        case StmtKind::if_return:
            expr(s.expr);
            boolean(*s.expr);
            [[fallthrough]];
        case StmtKind::ret:
            for (auto& r : s.returns)
                expr(r.expr);
            return;
        }
    }

    void query(Query& q)
    {
        std::size_t mark = scope_.size();
        for (auto& src : q.sources) {
            if (src.expr->kind == ExprKind::name)
                target_name(*src.expr);
            else
                expr(src.expr);
            const Type& t = src.expr->type;
            if (!t.is_collection() && !t.is(Type::Kind::unknown))
                fail(Errc::type_mismatch, where(src.expr->span) + ": FROM source must be a collection, got " + tname(t));
            scope_.push_back(Binding{src.var, t.element_type(), src.var.empty()});
        }
        bool has_return = false;
        std::size_t width = 0;
        for (auto& s : q.body) {
            stmt(s);
            if (s.kind != StmtKind::decl) {
                if (has_return && s.returns.size() != width)
                    fail(Errc::check_error, where(s.span) + ": RETURN statements must have the same number of values");
                has_return = true;
                width = s.returns.size();
            }
        }
        if (q.where) {
            expr(q.where);
            boolean(*q.where);
        }
        if (q.has_select && has_return)
            fail(Errc::check_error, where(q.span) + ": a query may use SELECT or RETURN, not both");
        if (q.select_star) {
            if (q.sources.size() != 1)
                fail(Errc::check_error, where(q.span) + ": SELECT * needs exactly one source");
            if (!q.sources[0].expr->type.is_item_collection())
                fail(Errc::type_mismatch, where(q.span) + ": SELECT * needs a collection of items");
        }
        for (auto& s : q.select)
            expr(s.expr);
        scope_.resize(mark);
    }
};

} // namespace comdb::coql
