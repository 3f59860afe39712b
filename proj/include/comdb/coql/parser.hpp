#pragma once

#include "comdb/coql/ast.hpp"
#include "comdb/coql/lexer.hpp"

#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace comdb::coql {

/// A parsed top-level input: a query, a bare expression or a derived
/// property definition.
using TopLevel = std::variant<QueryPtr, ExprPtr, DerivedDef>;

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    TopLevel parse_toplevel()
    {
        TopLevel out;
        if (at_query_start())
            out = parse_query();
        else if (peek().kind == Tok::ident && peek(1).kind == Tok::scope)
            out = parse_derived();
        else
            out = parse_expr();
        accept(Tok::semicolon);
        expect_end();
        return out;
    }

    QueryPtr parse_single_query()
    {
        auto q = parse_query();
        accept(Tok::semicolon);
        expect_end();
        return q;
    }

    ExprPtr parse_single_expr()
    {
        auto e = parse_expr();
        expect_end();
        return e;
    }

    DerivedDef parse_single_derived()
    {
        auto d = parse_derived();
        accept(Tok::semicolon);
        expect_end();
        return d;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool is_kw(std::string_view w, std::size_t k = 0) const { return peek(k).kind == Tok::keyword && peek(k).text == w; }

    bool accept(Tok t)
    {
        if (peek().kind != t)
            return false;
        ++pos_;
        return true;
    }

    bool accept_kw(std::string_view w)
    {
        if (!is_kw(w))
            return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void error(std::initializer_list<std::string_view> expected) const
    {
        std::string msg = where(peek().span) + ": expected ";
        bool first = true;
        for (auto e : expected) {
            if (!first)
                msg += ", ";
            msg += e;
            first = false;
        }
        msg += "; found " + describe(peek());
        fail(Errc::parse_error, msg);
    }

    Token expect(Tok t, std::string_view what)
    {
        if (peek().kind != t)
            error({what});
        return next();
    }

    void expect_kw(std::string_view w)
    {
        if (!accept_kw(w))
            error({w});
    }

    std::string expect_ident(std::string_view what = "identifier") { return expect(Tok::ident, what).text; }

    void expect_end()
    {
        if (peek().kind != Tok::end)
            error({"end of input"});
    }

    bool at_query_start(std::size_t k = 0) const { return is_kw("FROM", k) || is_kw("FORALL", k) || is_kw("SELECT", k); }

    // Scans the parenthesised group opening at `start` for a top-level token.
    bool group_has(std::size_t start, Tok wanted) const
    {
        int depth = 0;
        int angle = 0;
        for (std::size_t i = start; i < toks_.size(); ++i) {
            Tok k = toks_[i].kind;
            switch (k) {
            case Tok::lparen:
            case Tok::lbracket:
            case Tok::lbrace: ++depth; break;
            case Tok::rparen:
            case Tok::rbracket:
            case Tok::rbrace:
                if (--depth == 0)
                    return false;
                break;
            case Tok::dot_lt: ++angle; break;
            case Tok::gt:
                if (angle > 0)
                    --angle;
                break;
            case Tok::end: return false;
            default: break;
            }
            if (k == wanted && depth == 1 && angle == 0)
                return true;
        }
        return false;
    }

    // ---- queries --------------------------------------------------------

    QueryPtr parse_query()
    {
        auto q = std::make_shared<Query>();
        q->span = peek().span;
        if (accept_kw("SELECT"))
            parse_select(*q);
        if (accept_kw("FORALL"))
            q->forall = true;
        else if (!accept_kw("FROM"))
            error({"FROM", "FORALL"});
        parse_sources(*q);
        if (peek().kind == Tok::lbrace) {
            q->has_body = true;
            q->body = parse_block();
        }
        for (;;) {
            if (!q->where && accept_kw("WHERE"))
                q->where = parse_expr();
            else if (!q->has_select && accept_kw("SELECT"))
                parse_select(*q);
            else
                break;
        }
        return q;
    }

    void parse_select(Query& q)
    {
        q.has_select = true;
        if (accept(Tok::star)) {
            q.select_star = true;
            return;
        }
        q.select = parse_item_list();
    }

    std::vector<SelectItem> parse_item_list()
    {
        std::vector<SelectItem> out;
        bool wrapped = peek().kind == Tok::lparen && !at_query_start(1) && group_has(pos_, Tok::comma);
        if (wrapped)
            next();
        do {
            SelectItem item{parse_expr(), {}};
            if (accept_kw("AS"))
                item.alias = expect_ident("alias");
            out.push_back(std::move(item));
        } while (accept(Tok::comma));
        if (wrapped)
            expect(Tok::rparen, "')'");
        return out;
    }

    void parse_sources(Query& q)
    {
        bool list = peek().kind == Tok::lparen && !at_query_start(1) && !group_has(pos_, Tok::bar);
        if (!list) {
            q.sources.push_back(parse_source());
            return;
        }
        next();
        do
            q.sources.push_back(parse_source());
        while (accept(Tok::comma));
        expect(Tok::rparen, "')'");
    }

    Source parse_source()
    {
        Source s{parse_postfix(), {}};
        if (peek().kind == Tok::ident)
            s.var = next().text;
        return s;
    }

    std::vector<Stmt> parse_block()
    {
        expect(Tok::lbrace, "'{'");
        std::vector<Stmt> out;
        while (peek().kind != Tok::rbrace) {
            out.push_back(parse_stmt());
            if (!accept(Tok::semicolon) && peek().kind != Tok::rbrace)
                error({"';'", "'}'"});
        }
        next();
        return out;
    }

    Stmt parse_stmt()
    {
        Stmt s;
        s.span = peek().span;
        if (accept_kw("IF")) {
            s.kind = StmtKind::if_return;
            s.expr = parse_expr();
            accept_kw("THEN");
            expect_kw("RETURN");
            s.returns = parse_item_list();
            return s;
        }
        if (accept_kw("RETURN")) {
            s.kind = StmtKind::ret;
            s.returns = parse_item_list();
            return s;
        }
        if (peek().kind != Tok::ident)
            error({"declaration", "IF", "RETURN", "'}'"});
        s.kind = StmtKind::decl;
        s.type_name = next().text;
        if (accept(Tok::lt)) {
            s.type_arg = expect_ident("collection type");
            expect(Tok::gt, "'>'");
        }
        s.var = expect_ident("variable name");
        expect(Tok::eq, "'='");
        s.expr = parse_expr();
        return s;
    }

    DerivedDef parse_derived()
    {
        DerivedDef d;
        d.span = peek().span;
        d.owner = expect_ident("concept name");
        expect(Tok::scope, "'::'");
        d.name = expect_ident("property name");
        expect(Tok::lparen, "'('");
        if (peek().kind != Tok::rparen) {
            do {
                Param p;
                p.type_name = expect_ident("parameter type");
                p.name = expect_ident("parameter name");
                d.params.push_back(std::move(p));
            } while (accept(Tok::comma));
        }
        expect(Tok::rparen, "')'");
        d.body = parse_block();
        return d;
    }

    // ---- expressions ----------------------------------------------------

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r)
    {
        auto e = make_expr(ExprKind::binary, l->span);
        e->bin = op;
        e->args = {std::move(l), std::move(r)};
        return e;
    }

    ExprPtr parse_or()
    {
        auto l = parse_and();
        while (accept_kw("OR"))
            l = binary(BinOp::or_, l, parse_and());
        return l;
    }

    ExprPtr parse_and()
    {
        auto l = parse_not();
        while (accept_kw("AND"))
            l = binary(BinOp::and_, l, parse_not());
        return l;
    }

    ExprPtr parse_not()
    {
        if (is_kw("NOT")) {
            auto e = make_expr(ExprKind::unary, next().span);
            e->un = UnOp::not_;
            e->base = parse_not();
            return e;
        }
        return parse_cmp();
    }

    ExprPtr parse_cmp()
    {
        auto l = parse_add();
        BinOp op;
        switch (peek().kind) {
        case Tok::eq: op = BinOp::eq; break;
        case Tok::ne: op = BinOp::ne; break;
        case Tok::lt: op = BinOp::lt; break;
        case Tok::le: op = BinOp::le; break;
        case Tok::gt: op = BinOp::gt; break;
        case Tok::ge: op = BinOp::ge; break;
        default: return l;
        }
        next();
        return binary(op, l, parse_add());
    }

    ExprPtr parse_add()
    {
        auto l = parse_mul();
        for (;;) {
            if (accept(Tok::plus))
                l = binary(BinOp::add, l, parse_mul());
            else if (accept(Tok::minus))
                l = binary(BinOp::sub, l, parse_mul());
            else
                return l;
        }
    }

    ExprPtr parse_mul()
    {
        auto l = parse_unary();
        for (;;) {
            if (accept(Tok::star))
                l = binary(BinOp::mul, l, parse_unary());
            else if (accept(Tok::slash))
                l = binary(BinOp::div, l, parse_unary());
            else
                return l;
        }
    }

    ExprPtr parse_unary()
    {
        if (peek().kind == Tok::minus) {
            auto e = make_expr(ExprKind::unary, next().span);
            e->un = UnOp::neg;
            e->base = parse_unary();
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix()
    {
        auto e = parse_primary();
        for (;;) {
            Span s = peek().span;
            if (accept(Tok::arrow)) {
                auto p = make_expr(ExprKind::project, s);
                p->base = e;
                p->name = expect_ident("dimension name");
                e = p;
            } else if (accept(Tok::dot)) {
                std::string name = expect_ident("dimension name");
                if (accept(Tok::lparen)) {
                    auto c = make_expr(ExprKind::call, s);
                    c->base = e;
                    c->name = std::move(name);
                    if (peek().kind != Tok::rparen) {
                        do
                            c->args.push_back(parse_expr());
                        while (accept(Tok::comma));
                    }
                    expect(Tok::rparen, "')'");
                    e = c;
                } else {
                    auto m = make_expr(ExprKind::member, s);
                    m->base = e;
                    m->name = std::move(name);
                    e = m;
                }
            } else if (accept(Tok::dot_lt)) {
                auto t = make_expr(ExprKind::dot_tuple, s);
                t->base = e;
                do
                    t->args.push_back(parse_add());
                while (accept(Tok::comma));
                expect(Tok::gt, "'>'");
                e = t;
            } else if (peek().kind == Tok::back_arrow) {
                auto d = make_expr(ExprKind::deproject, s);
                d->base = e;
                while (accept(Tok::back_arrow))
                    d->args.push_back(parse_chain_element());
                e = d;
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_chain_element()
    {
        if (peek().kind == Tok::ident) {
            auto n = make_expr(ExprKind::name, peek().span);
            n->name = next().text;
            return n;
        }
        if (peek().kind == Tok::lparen || peek().kind == Tok::lbracket)
            return parse_primary();
        error({"dimension name", "collection"});
    }

    ExprPtr parse_primary()
    {
        const Token& t = peek();
        Span s = t.span;
        switch (t.kind) {
        case Tok::integer: {
            auto e = make_expr(ExprKind::literal, s);
            auto v = parse_int(t.text);
            if (!v)
                fail(Errc::lex_error, where(s) + ": integer literal out of range");
            e->literal = *v;
            next();
            return e;
        }
        case Tok::decimal: {
            auto e = make_expr(ExprKind::literal, s);
            auto v = Decimal::parse(t.text);
            if (!v)
                fail(Errc::lex_error, where(s) + ": bad decimal literal");
            e->literal = *v;
            next();
            return e;
        }
        case Tok::string: {
            auto e = make_expr(ExprKind::literal, s);
            e->literal = t.text;
            next();
            return e;
        }
        case Tok::ident: {
            auto e = make_expr(ExprKind::name, s);
            e->name = next().text;
            return e;
        }
        case Tok::lbracket: {
            next();
            auto e = make_expr(ExprKind::multi, s);
            do
                e->args.push_back(parse_postfix());
            while (accept_kw("AND"));
            expect(Tok::rbracket, "']'");
            return e;
        }
        case Tok::lparen: {
            next();
            if (at_query_start()) {
                auto e = make_expr(ExprKind::subquery, s);
                e->query = parse_query();
                expect(Tok::rparen, "')'");
                return e;
            }
            auto inner = parse_expr();
            std::string var;
            if (peek().kind == Tok::ident && peek(1).kind == Tok::bar)
                var = next().text;
            if (accept(Tok::bar)) {
                auto f = make_expr(ExprKind::filter, s);
                f->base = inner;
                f->name = std::move(var);
                f->args.push_back(parse_expr());
                expect(Tok::rparen, "')'");
                return f;
            }
            expect(Tok::rparen, "')'");
            return inner;
        }
        case Tok::keyword: {
            if (t.text == "null" || t.text == "NULL") {
                next();
                return make_expr(ExprKind::null, s);
            }
            if (t.text == "this") {
                next();
                return make_expr(ExprKind::this_ref, s);
            }
            if (at_query_start()) {
                auto e = make_expr(ExprKind::subquery, s);
                e->query = parse_query();
                return e;
            }
            Agg agg;
            if (t.text == "COUNT")
                agg = Agg::count;
            else if (t.text == "SIZE")
                agg = Agg::size;
            else if (t.text == "SUM")
                agg = Agg::sum;
            else if (t.text == "AVERAGE")
                agg = Agg::average;
            else
                break;
            next();
            auto e = make_expr(ExprKind::aggregate, s);
            e->agg = agg;
            expect(Tok::lparen, "'('");
            if (at_query_start()) {
                auto q = make_expr(ExprKind::subquery, peek().span);
                q->query = parse_query();
                e->base = q;
            } else {
                e->base = parse_expr();
            }
            expect(Tok::rparen, "')'");
            return e;
        }
        default: break;
        }
        error({"expression"});
    }
};

inline TopLevel parse(std::string_view text) { return Parser(text).parse_toplevel(); }
inline QueryPtr parse_query(std::string_view text) { return Parser(text).parse_single_query(); }
inline ExprPtr parse_expression(std::string_view text) { return Parser(text).parse_single_expr(); }
inline DerivedDef parse_derived(std::string_view text) { return Parser(text).parse_single_derived(); }

} // namespace comdb::coql
