#pragma once

// Canonical text form of COQL trees; parse(print(t)) rebuilds t.

#include "comdb/coql/ast.hpp"

#include <string>

namespace comdb::coql {

inline std::string to_text(const Query& q);

namespace detail {

inline int precedence(const Expr& e)
{
    switch (e.kind) {
    case ExprKind::binary:
        switch (e.bin) {
        case BinOp::or_: return 1;
        case BinOp::and_: return 2;
        case BinOp::add:
        case BinOp::sub: return 5;
        case BinOp::mul:
        case BinOp::div: return 6;
        default: return 4;
        }
    case ExprKind::unary: return e.un == UnOp::not_ ? 3 : 7;
    default: return 8;
    }
}

inline std::string quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += '\'';
        out += c;
    }
    return out + "'";
}

inline std::string print(const Expr& e);

inline std::string print_at(const Expr& e, int min_prec)
{
    std::string s = print(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

inline std::string print_items(const std::vector<SelectItem>& items, bool wrap)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        out += print(*items[i].expr);
        if (!items[i].alias.empty())
            out += " AS " + items[i].alias;
    }
    return wrap && items.size() > 1 ? "(" + out + ")" : out;
}

inline std::string print_stmt(const Stmt& s)
{
    switch (s.kind) {
    case StmtKind::decl: {
        std::string t = s.type_name;
        if (!s.type_arg.empty())
            t += "<" + s.type_arg + ">";
        return t + " " + s.var + " = " + print(*s.expr) + ";";
    }
    case StmtKind::if_return: return "IF (" + print(*s.expr) + ") RETURN " + print_items(s.returns, true) + ";";
    case StmtKind::ret: return "RETURN " + print_items(s.returns, true) + ";";
    }
    return "";
}

inline std::string print_body(const std::vector<Stmt>& body)
{
    std::string out = "{";
    for (const auto& s : body)
        out += " " + print_stmt(s);
    return out + " }";
}

inline std::string print(const Expr& e)
{
    switch (e.kind) {
    case ExprKind::literal:
        if (auto s = std::get_if<std::string>(&e.literal))
            return quote(*s);
        return literal_text(e.literal);
    case ExprKind::null: return "null";
    case ExprKind::name: return e.name;
    case ExprKind::this_ref: return "this";
    case ExprKind::member: return print_at(*e.base, 8) + "." + e.name;
    case ExprKind::call: {
        std::string out = print_at(*e.base, 8) + "." + e.name + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i)
            out += (i ? ", " : "") + print(*e.args[i]);
        return out + ")";
    }
    case ExprKind::project: return print_at(*e.base, 8) + " -> " + e.name;
    case ExprKind::dot_tuple: {
        std::string out = print_at(*e.base, 8) + ".<";
        for (std::size_t i = 0; i < e.args.size(); ++i)
            out += (i ? ", " : "") + print_at(*e.args[i], 5);
        return out + ">";
    }
    case ExprKind::deproject: {
        std::string out = e.base->kind == ExprKind::deproject ? "(" + print(*e.base) + ")" : print_at(*e.base, 8);
        for (const auto& a : e.args)
            out += " <- " + print(*a);
        return out;
    }
    case ExprKind::filter: {
        std::string out = "(" + print(*e.base);
        if (!e.name.empty())
            out += " " + e.name;
        return out + " | " + print(*e.args[0]) + ")";
    }
    case ExprKind::multi: {
        std::string out = "[";
        for (std::size_t i = 0; i < e.args.size(); ++i)
            out += (i ? " AND " : "") + print_at(*e.args[i], 8);
        return out + "]";
    }
    case ExprKind::subquery: return "(" + to_text(*e.query) + ")";
    case ExprKind::unary: {
        if (e.un == UnOp::not_)
            return "NOT " + print_at(*e.base, 3);
        std::string inner = print_at(*e.base, 7);
        return (inner[0] == '-' ? "- " : "-") + inner; // "--" would start a comment
    }
    case ExprKind::binary: {
        int p = precedence(e);
        // comparisons do not chain; arithmetic and logic are left-associative
        int left = p == 4 ? 5 : p;
        int right = p + 1;
        return print_at(*e.args[0], left) + " " + std::string(bin_op_text(e.bin)) + " " + print_at(*e.args[1], right);
    }
    case ExprKind::aggregate: return std::string(agg_text(e.agg)) + "(" + print(*e.base) + ")";
    }
    return "";
}

} // namespace detail

inline std::string to_text(const Expr& e) { return detail::print(e); }

inline std::string to_text(const Query& q)
{
    std::string out = q.forall ? "FORALL " : "FROM ";
    if (q.sources.size() == 1 && q.sources[0].expr->kind != ExprKind::name && q.sources[0].expr->kind != ExprKind::subquery &&
        q.sources[0].expr->kind != ExprKind::filter && q.sources[0].expr->kind != ExprKind::multi) {
        out += "(" + detail::print(*q.sources[0].expr) + (q.sources[0].var.empty() ? "" : " " + q.sources[0].var) + ")";
    } else if (q.sources.size() == 1) {
        out += detail::print(*q.sources[0].expr) + (q.sources[0].var.empty() ? "" : " " + q.sources[0].var);
    } else {
        out += "(";
        for (std::size_t i = 0; i < q.sources.size(); ++i) {
            out += (i ? ", " : "") + detail::print(*q.sources[i].expr);
            if (!q.sources[i].var.empty())
                out += " " + q.sources[i].var;
        }
        out += ")";
    }
    if (q.has_body)
        out += " " + detail::print_body(q.body);
    if (q.where)
        out += " WHERE " + detail::print(*q.where);
    if (q.has_select)
        out += q.select_star ? " SELECT *" : " SELECT " + detail::print_items(q.select, false);
    return out;
}

inline std::string to_text(const DerivedDef& d)
{
    std::string out = d.owner + "::" + d.name + "(";
    for (std::size_t i = 0; i < d.params.size(); ++i)
        out += (i ? ", " : "") + d.params[i].type_name + " " + d.params[i].name;
    return out + ") " + detail::print_body(d.body);
}

} // namespace comdb::coql
