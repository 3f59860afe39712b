#pragma once

#include "comdb/error.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace comdb::coql {

enum class Tok {
    end,
    ident,
    integer,
    decimal,
    string,
    keyword,
    lparen,
    rparen,
    lbracket,
    rbracket,
    lbrace,
    rbrace,
    comma,
    semicolon,
    dot,
    dot_lt, // .<
    bar,
    arrow,      // ->
    back_arrow, // <-
    scope,      // ::
    eq,         // == or =
    ne,         // != or <>
    lt,
    le,
    gt,
    ge,
    plus,
    minus,
    star,
    slash,
};

struct Span {
    int line = 1;
    int col = 1;
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    Span span;
};

inline bool is_keyword(std::string_view w)
{
    static constexpr std::string_view words[] = {"FROM", "SELECT", "WHERE", "FORALL", "IF",  "THEN",    "RETURN", "AND",  "OR",
                                                 "NOT",  "AS",     "COUNT", "SUM",    "SIZE", "AVERAGE", "null",   "NULL", "this"};
    for (auto k : words)
        if (k == w)
            return true;
    return false;
}

inline std::string describe(const Token& t)
{
    switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::string: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
    }
}

inline std::string where(Span s) { return std::to_string(s.line) + ":" + std::to_string(s.col); }

inline std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    std::size_t i = 0;
    Span pos;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++pos.line;
                pos.col = 1;
            } else {
                ++pos.col;
            }
        }
    };
    auto push = [&](Tok kind, std::size_t len) {
        out.push_back(Token{kind, std::string(src.substr(i, len)), pos});
        advance(len);
    };

    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') { // comment to end of line
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            auto word = src.substr(i, j - i);
            push(is_keyword(word) ? Tok::keyword : Tok::ident, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                    ++j;
                push(Tok::decimal, j - i);
            } else {
                push(Tok::integer, j - i);
            }
            continue;
        }
        if (c == '\'' || c == '"') {
            Span start = pos;
            std::string text;
            std::size_t j = i + 1;
            for (;;) {
                if (j >= src.size())
                    fail(Errc::lex_error, where(start) + ": unterminated string literal");
                if (src[j] == c) {
                    if (j + 1 < src.size() && src[j + 1] == c) { // doubled quote
                        text += c;
                        j += 2;
                        continue;
                    }
                    break;
                }
                text += src[j++];
            }
            advance(j + 1 - i);
            out.push_back(Token{Tok::string, std::move(text), start});
            continue;
        }
        auto two = src.substr(i, 2);
        if (two == "->") { push(Tok::arrow, 2); continue; }
        if (two == "<-") { push(Tok::back_arrow, 2); continue; }
        if (two == "::") { push(Tok::scope, 2); continue; }
        if (two == "==") { push(Tok::eq, 2); continue; }
        if (two == "!=" || two == "<>") { push(Tok::ne, 2); continue; }
        if (two == "<=") { push(Tok::le, 2); continue; }
        if (two == ">=") { push(Tok::ge, 2); continue; }
        if (two == ".<") { push(Tok::dot_lt, 2); continue; }
        switch (c) {
        case '(': push(Tok::lparen, 1); continue;
        case ')': push(Tok::rparen, 1); continue;
        case '[': push(Tok::lbracket, 1); continue;
        case ']': push(Tok::rbracket, 1); continue;
        case '{': push(Tok::lbrace, 1); continue;
        case '}': push(Tok::rbrace, 1); continue;
        case ',': push(Tok::comma, 1); continue;
        case ';': push(Tok::semicolon, 1); continue;
        case '.': push(Tok::dot, 1); continue;
        case '|': push(Tok::bar, 1); continue;
        case '=': push(Tok::eq, 1); continue;
        case '<': push(Tok::lt, 1); continue;
        case '>': push(Tok::gt, 1); continue;
        case '+': push(Tok::plus, 1); continue;
        case '-': push(Tok::minus, 1); continue;
        case '*': push(Tok::star, 1); continue;
        case '/': push(Tok::slash, 1); continue;
        default: break;
        }
        fail(Errc::lex_error, where(pos) + ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back(Token{Tok::end, "", pos});
    return out;
}

} // namespace comdb::coql
