#pragma once

// Nested-loop evaluation of checked COQL trees over one schema snapshot.

#include "comdb/coql/checker.hpp"
#include "comdb/coql/result.hpp"
#include "comdb/coql/value.hpp"
#include "comdb/navigate.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace comdb::coql {

class Evaluator {
public:
    explicit Evaluator(const Schema& schema) : schema_(schema) {}

    ResultTable run(const Query& q)
    {
        ResultTable out;
        out.columns = unique_columns(column_names(q));
        execute(q, [&](std::vector<Value> row, std::optional<ItemRef>) { out.rows.push_back(std::move(row)); });
        return out;
    }

    Value value(const Expr& e)
    {
        switch (e.kind) {
        case ExprKind::literal: return from_literal(e.literal);
        case ExprKind::null: return std::monostate{};
        case ExprKind::name: return name(e);
        case ExprKind::this_ref: return variable("this");
        case ExprKind::member: return member(e);
        case ExprKind::call: return call(e);
        case ExprKind::project: return project(e);
        case ExprKind::dot_tuple: return dot_tuple(e);
        case ExprKind::deproject: return deproject(e);
        case ExprKind::filter: return filter(e);
        case ExprKind::multi: return multi(e);
        case ExprKind::subquery: return query_value(*e.query);
        case ExprKind::unary: return unary(e);
        case ExprKind::binary: return binary(e);
        case ExprKind::aggregate: return aggregate(e);
        }
        return std::monostate{};
    }

    /// Evaluates an expression checked with Checker::check_on for `item`.
    Value value_on(const Expr& e, ItemRef item)
    {
        push("", item, true);
        try {
            Value v = value(e);
            env_.pop_back();
            return v;
        } catch (...) {
            env_.pop_back();
            throw;
        }
    }

    bool holds_on(const Expr& e, ItemRef item) { return truthy(value_on(e, item), e); }

    /// A query's rows packed as one collection.
    Value query_value(const Query& q)
    {
        Type t = Checker::result_type(q);
        std::vector<Value> members;
        execute(q, [&](std::vector<Value> row, std::optional<ItemRef> item) {
            if (item)
                members.push_back(*item);
            else if (row.size() == 1)
                members.push_back(std::move(row[0]));
            else
                members.push_back(std::make_shared<const TupleValue>(TupleValue{std::move(row)}));
        });
        return make_collection(t.concept_ref, std::move(members));
    }

    std::vector<std::string> column_names(const Query& q) const
    {
        std::vector<std::string> out;
        if (q.select_star) {
            for (const auto& d : schema_.concept_at(*q.sources[0].expr->type.concept_ref).dims())
                out.push_back(d.name);
            return out;
        }
        const std::vector<SelectItem>* items = q.has_select ? &q.select : nullptr;
        for (const auto& s : q.body)
            if (s.kind != StmtKind::decl && !items)
                items = &s.returns;
        if (!items) {
            for (const auto& s : q.sources) {
                if (!s.var.empty())
                    out.push_back(s.var);
                else if (s.expr->type.concept_ref)
                    out.push_back(schema_.concept_name(*s.expr->type.concept_ref));
                else
                    out.push_back("item");
            }
            return out;
        }
        for (std::size_t i = 0; i < items->size(); ++i)
            out.push_back(column_name((*items)[i], i));
        return out;
    }

private:
    struct Frame {
        std::string name;
        Value value;
        bool implicit;
    };

    const Schema& schema_;
    std::vector<Frame> env_;
    std::map<std::uint32_t, Value> concept_cache_;

    using RowSink = std::function<void(std::vector<Value>, std::optional<ItemRef>)>;

    static std::string column_name(const SelectItem& s, std::size_t i)
    {
        if (!s.alias.empty())
            return s.alias;
        const Expr& e = *s.expr;
        switch (e.kind) {
        case ExprKind::name:
        case ExprKind::member:
        case ExprKind::call:
        case ExprKind::project: return e.name;
        case ExprKind::aggregate: {
            std::string n(agg_text(e.agg));
            std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return n;
        }
        default: return "col" + std::to_string(i + 1);
        }
    }

    [[noreturn]] void runtime_error(Errc code, const Expr& e, const std::string& msg) const
    {
        fail(code, where(e.span) + ": " + msg + " in '" + to_text(e) + "'");
    }

    // ---- environment ------------------------------------------------------

    void push(const std::string& name, Value v, bool implicit) { env_.push_back(Frame{name, std::move(v), implicit}); }

    const Value& variable(const std::string& name) const
    {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (!it->implicit && it->name == name)
                return it->value;
        fail(Errc::unbound_variable, "unbound variable '" + name + "'");
    }

    const Value& implicit(int skip) const
    {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->implicit && skip-- == 0)
                return it->value;
        fail(Errc::unbound_variable, "no implicit item in scope");
    }

    ItemRef item_of(const Value& v, const Expr& e) const
    {
        if (auto r = std::get_if<ItemRef>(&v))
            return *r;
        if (is_null(v))
            runtime_error(Errc::null_navigation, e, "navigation from null");
        runtime_error(Errc::type_mismatch, e, "expected an item");
    }

    const CollectionValue& collection_of(const Value& v, const Expr& e) const
    {
        if (auto c = as_collection(v))
            return *c;
        runtime_error(Errc::type_mismatch, e, "expected a collection");
    }

    // Items of a value that is a single item or a collection of items.
    std::vector<ItemRef> items_of(const Value& v, const Expr& e) const
    {
        if (auto r = std::get_if<ItemRef>(&v))
            return {*r};
        if (is_null(v))
            runtime_error(Errc::null_navigation, e, "navigation from null");
        return item_members(collection_of(v, e));
    }

    bool truthy(const Value& v, const Expr& e) const
    {
        if (auto b = std::get_if<bool>(&v))
            return *b;
        if (is_null(v))
            return false;
        runtime_error(Errc::type_mismatch, e, "condition is not boolean");
    }

    static Value opt_item(const std::optional<ItemRef>& r)
    {
        if (r)
            return *r;
        return std::monostate{};
    }

    // ---- expressions --------------------------------------------------------

    Value name(const Expr& e)
    {
        switch (e.ref) {
        case NameRef::variable: return variable(e.name);
        case NameRef::implicit_dim: return opt_item(schema_.get_slot(item_of(implicit(e.implicit_skip), e), e.name));
        case NameRef::implicit_id: return schema_.item_id(item_of(implicit(e.implicit_skip), e));
        case NameRef::concept_name: {
            auto it = concept_cache_.find(e.concept_ref->index);
            if (it == concept_cache_.end())
                it = concept_cache_.emplace(e.concept_ref->index, make_items(*e.concept_ref, schema_.items(*e.concept_ref))).first;
            return it->second;
        }
        case NameRef::unresolved: break;
        }
        runtime_error(Errc::check_error, e, "name was not resolved");
    }

    Value member(const Expr& e)
    {
        Value b = value(*e.base);
        if (auto c = as_collection(b)) {
            std::vector<Value> out;
            for (const auto& m : c->members) {
                ItemRef r = item_of(m, e);
                if (e.pseudo_id)
                    out.push_back(schema_.item_id(r));
                else if (auto s = schema_.get_slot(r, e.name))
                    out.push_back(*s);
            }
            return make_collection(e.type.concept_ref, std::move(out));
        }
        ItemRef r = item_of(b, e);
        if (e.pseudo_id)
            return schema_.item_id(r);
        return opt_item(schema_.get_slot(r, e.name));
    }

    Value project(const Expr& e)
    {
        Value b = value(*e.base);
        if (auto c = as_collection(b)) {
            Collection coll{*c->concept_ref, item_members(*c)};
            auto p = comdb::project(schema_, coll, DimPath{e.name});
            return make_items(p.concept_ref, p.members);
        }
        return opt_item(schema_.get_slot(item_of(b, e), e.name));
    }

    Value dot_tuple(const Expr& e)
    {
        Value b = value(*e.base);
        auto one = [&](ItemRef r) -> Value {
            push("", r, true);
            std::vector<Value> vals;
            for (const auto& a : e.args)
                vals.push_back(value(*a));
            env_.pop_back();
            if (vals.size() == 1)
                return vals[0];
            return std::make_shared<const TupleValue>(TupleValue{std::move(vals)});
        };
        if (auto c = as_collection(b)) {
            std::vector<Value> out;
            for (const auto& m : c->members)
                out.push_back(one(item_of(m, e)));
            return make_collection(e.type.concept_ref, std::move(out));
        }
        return one(item_of(b, e));
    }

    Value call(const Expr& e)
    {
        ItemRef self = item_of(value(*e.base), e);
        std::vector<Value> args;
        for (const auto& a : e.args)
            args.push_back(value(*a));
        const auto& prop = *e.property;
        // the body sees only `this`, its parameters and its own declarations
        std::vector<Frame> saved;
        saved.swap(env_);
        push("this", self, false);
        for (std::size_t i = 0; i < args.size(); ++i)
            push(prop.params[i].first, args[i], false);
        Value out;
        try {
            for (const auto& s : prop.body)
                if (s.kind == StmtKind::decl)
                    push(s.var, value(*s.expr), false);
            out = value(*prop.result);
        } catch (...) {
            env_.swap(saved);
            throw;
        }
        env_.swap(saved);
        return out;
    }

    Value deproject(const Expr& e)
    {
        Value b = value(*e.base);
        Collection cur{*e.base->type.concept_ref, items_of(b, e)};
        for (const auto& seg : e.segments) {
            Value t = value(*seg.target);
            const auto& tc = collection_of(t, e);
            Collection target{*tc.concept_ref, item_members(tc)};
            cur = comdb::deproject(schema_, cur, seg.up, target);
        }
        return make_items(cur.concept_ref, cur.members);
    }

    Value filter(const Expr& e)
    {
        Value b = value(*e.base);
        const auto& c = collection_of(b, e);
        std::vector<Value> out;
        for (const auto& m : c.members) {
            push(e.name, m, e.name.empty());
            bool keep = truthy(value(*e.args[0]), *e.args[0]);
            env_.pop_back();
            if (keep)
                out.push_back(m);
        }
        return make_collection(c.concept_ref, std::move(out));
    }

    Value multi(const Expr& e)
    {
        std::optional<Collection> acc;
        for (const auto& a : e.args) {
            Value v = value(*a);
            const auto& c = collection_of(v, *a);
            Collection next{*c.concept_ref, item_members(c)};
            acc = acc ? intersect(*acc, next) : distinct(next);
        }
        return make_items(acc->concept_ref, acc->members);
    }

    Value unary(const Expr& e)
    {
        Value v = deref(schema_, value(*e.base));
        if (e.un == UnOp::not_) {
            if (is_null(v))
                return std::monostate{};
            return !truthy(v, e);
        }
        if (auto i = std::get_if<std::int64_t>(&v))
            return -*i;
        if (auto d = std::get_if<Decimal>(&v))
            return -*d;
        if (is_null(v))
            return v;
        runtime_error(Errc::type_mismatch, e, "negation needs a number");
    }

    static std::optional<Decimal> as_decimal(const Value& v)
    {
        if (auto i = std::get_if<std::int64_t>(&v))
            return Decimal::from_int(*i);
        if (auto d = std::get_if<Decimal>(&v))
            return *d;
        return std::nullopt;
    }

    template <class T>
    static bool ordered(BinOp op, const T& a, const T& b)
    {
        switch (op) {
        case BinOp::eq: return a == b;
        case BinOp::ne: return a != b;
        case BinOp::lt: return a < b;
        case BinOp::le: return a <= b;
        case BinOp::gt: return a > b;
        case BinOp::ge: return a >= b;
        default: return false;
        }
    }

    bool compare(const Expr& e, const Value& lhs, const Value& rhs) const
    {
        Value a = deref(schema_, lhs);
        Value b = deref(schema_, rhs);
        bool eq_op = e.bin == BinOp::eq || e.bin == BinOp::ne;
        if (is_null(a) || is_null(b)) {
            bool both = is_null(a) && is_null(b);
            if (e.bin == BinOp::eq)
                return both;
            if (e.bin == BinOp::ne)
                return !both;
            return false;
        }
        auto ia = std::get_if<std::int64_t>(&a);
        auto ib = std::get_if<std::int64_t>(&b);
        if (ia && ib)
            return ordered(e.bin, *ia, *ib);
        auto da = as_decimal(a);
        auto db = as_decimal(b);
        if (da && db)
            return ordered(e.bin, *da, *db);
        auto ra = std::get_if<ItemRef>(&a);
        auto rb = std::get_if<ItemRef>(&b);
        if (ra && rb && eq_op)
            return ordered(e.bin, *ra, *rb);
        auto text = [&](const Value& v, const ItemRef* r) -> const std::string* {
            if (r)
                return &schema_.item_id(*r);
            return std::get_if<std::string>(&v);
        };
        auto sa = text(a, ra);
        auto sb = text(b, rb);
        if (sa && sb && !(ra && rb))
            return ordered(e.bin, *sa, *sb);
        auto ba = std::get_if<bool>(&a);
        auto bb = std::get_if<bool>(&b);
        if (ba && bb && eq_op)
            return ordered(e.bin, *ba, *bb);
        runtime_error(Errc::type_mismatch, e, "incomparable operands");
    }

    Value arith(const Expr& e, const Value& lhs, const Value& rhs) const
    {
        Value a = deref(schema_, lhs);
        Value b = deref(schema_, rhs);
        if (is_null(a) || is_null(b))
            return std::monostate{};
        auto ia = std::get_if<std::int64_t>(&a);
        auto ib = std::get_if<std::int64_t>(&b);
        if (ia && ib && e.bin != BinOp::div) {
            switch (e.bin) {
            case BinOp::add: return *ia + *ib;
            case BinOp::sub: return *ia - *ib;
            default: return *ia * *ib;
            }
        }
        auto da = as_decimal(a);
        auto db = as_decimal(b);
        if (!da || !db)
            runtime_error(Errc::type_mismatch, e, "arithmetic needs numbers");
        switch (e.bin) {
        case BinOp::add: return *da + *db;
        case BinOp::sub: return *da - *db;
        case BinOp::mul: return *da * *db;
        default:
            if (db->units() == 0)
                runtime_error(Errc::division_by_zero, e, "division by zero");
            return *da / *db;
        }
    }

    Value binary(const Expr& e)
    {
        switch (e.bin) {
        case BinOp::and_:
            if (!truthy(value(*e.args[0]), *e.args[0]))
                return false;
            return truthy(value(*e.args[1]), *e.args[1]);
        case BinOp::or_:
            if (truthy(value(*e.args[0]), *e.args[0]))
                return true;
            return truthy(value(*e.args[1]), *e.args[1]);
        case BinOp::add:
        case BinOp::sub:
        case BinOp::mul:
        case BinOp::div: return arith(e, value(*e.args[0]), value(*e.args[1]));
        default: return compare(e, value(*e.args[0]), value(*e.args[1]));
        }
    }

    Value aggregate(const Expr& e)
    {
        Value held = value(*e.base);
        const auto& c = collection_of(held, e);
        if (e.agg == Agg::count || e.agg == Agg::size)
            return static_cast<std::int64_t>(c.members.size());
        std::int64_t isum = 0;
        Decimal dsum;
        bool any_decimal = e.type.is(Type::Kind::decimal) && e.agg == Agg::sum;
        std::size_t n = 0;
        for (const auto& m : c.members) {
            Value v = deref(schema_, m);
            if (is_null(v))
                continue;
            ++n;
            if (auto i = std::get_if<std::int64_t>(&v)) {
                isum += *i;
            } else if (auto d = std::get_if<Decimal>(&v)) {
                dsum += *d;
                any_decimal = true;
            } else {
                runtime_error(Errc::type_mismatch, e, "aggregate over non-numeric values");
            }
        }
        if (e.agg == Agg::sum) {
            if (any_decimal)
                return dsum + Decimal::from_int(isum);
            return isum;
        }
        if (n == 0)
            runtime_error(Errc::empty_aggregate, e, "AVERAGE of an empty collection");
        return (dsum + Decimal::from_int(isum)) / Decimal::from_int(static_cast<std::int64_t>(n));
    }

    // ---- queries ---------------------------------------------------------------

    void execute(const Query& q, const RowSink& sink)
    {
        std::size_t base = env_.size();
        try {
            loop(q, 0, sink);
        } catch (...) {
            env_.resize(base);
            throw;
        }
    }

    void loop(const Query& q, std::size_t i, const RowSink& sink)
    {
        if (i == q.sources.size()) {
            tuple(q, sink);
            return;
        }
        const auto& src = q.sources[i];
        Value coll = value(*src.expr);
        const auto& c = collection_of(coll, *src.expr);
        for (const auto& m : c.members) {
            push(src.var, m, src.var.empty());
            loop(q, i + 1, sink);
            env_.pop_back();
        }
    }

    void tuple(const Query& q, const RowSink& sink)
    {
        std::size_t mark = env_.size();
        std::size_t first_source = mark - q.sources.size();
        std::vector<std::vector<Value>> pending;
        auto items = [&](const std::vector<SelectItem>& list) {
            std::vector<Value> row;
            for (const auto& s : list)
                row.push_back(value(*s.expr));
            return row;
        };
        for (const auto& s : q.body) {
            switch (s.kind) {
            case StmtKind::decl: push(s.var, value(*s.expr), false); break;
            case StmtKind::if_return:
                if (truthy(value(*s.expr), *s.expr))
                    pending.push_back(items(s.returns));
                break;
            case StmtKind::ret: pending.push_back(items(s.returns)); break;
            }
        }
        bool keep = !q.where || truthy(value(*q.where), *q.where);
        if (keep) {
            if (q.select_star) {
                ItemRef r = item_of(env_[first_source].value, *q.sources[0].expr);
                std::vector<Value> row;
                for (const auto& slot : schema_.slots(r))
                    row.push_back(opt_item(slot));
                sink(std::move(row), r);
            } else if (q.has_select) {
                sink(items(q.select), std::nullopt);
            } else if (!pending.empty()) {
                for (auto& row : pending)
                    sink(std::move(row), std::nullopt);
            } else if (std::none_of(q.body.begin(), q.body.end(), [](const Stmt& s) { return s.kind != StmtKind::decl; })) {
                std::vector<Value> row;
                for (std::size_t k = first_source; k < mark; ++k)
                    row.push_back(env_[k].value);
                std::optional<ItemRef> item;
                if (row.size() == 1)
                    if (auto r = std::get_if<ItemRef>(&row[0]))
                        item = *r;
                sink(std::move(row), item);
            }
        }
        env_.resize(mark);
    }
};

} // namespace comdb::coql
