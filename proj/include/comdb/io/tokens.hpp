#pragma once

// Tokenizer shared by the schema and data file formats.

#include "comdb/error.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace comdb::io {

struct FileToken {
    enum Kind { word, quoted, punct, end } kind = end;
    std::string text;
    int line = 0;
};

inline bool bare_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' || c == '+' || c == '/';
}

/// Splits `text` into words, quoted strings and the punctuation `{}=,;:`.
/// `#` starts a comment running to the end of the line.
inline std::vector<FileToken> tokenize_file(std::string_view text, const std::string& path)
{
    std::vector<FileToken> out;
    int line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                ++i;
        } else if (c == '"') {
            FileToken t{FileToken::quoted, "", line};
            ++i;
            for (;;) {
                if (i >= text.size() || text[i] == '\n')
                    fail(Errc::parse_error, path + ":" + std::to_string(line) + ": unterminated string");
                if (text[i] == '"') {
                    ++i;
                    break;
                }
                if (text[i] == '\\' && i + 1 < text.size()) {
                    char e = text[i + 1];
                    t.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                    i += 2;
                    continue;
                }
                t.text += text[i++];
            }
            out.push_back(std::move(t));
        } else if (c == '{' || c == '}' || c == '=' || c == ',' || c == ';' || c == ':') {
            out.push_back(FileToken{FileToken::punct, std::string(1, c), line});
            ++i;
        } else if (bare_char(c)) {
            std::size_t start = i;
            while (i < text.size() && bare_char(text[i]))
                ++i;
            out.push_back(FileToken{FileToken::word, std::string(text.substr(start, i - start)), line});
        } else {
            fail(Errc::parse_error, path + ":" + std::to_string(line) + ": unexpected character '" + std::string(1, c) + "'");
        }
    }
    out.push_back(FileToken{FileToken::end, "", line});
    return out;
}

/// Writes `s` bare when it reads back as one word, quoted otherwise.
inline std::string quote_token(const std::string& s)
{
    bool bare = !s.empty() && s != "null";
    for (char c : s)
        if (!bare_char(c))
            bare = false;
    if (bare)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '\t') {
            out += "\\t";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

class TokenCursor {
public:
    TokenCursor(std::vector<FileToken> toks, std::string path) : toks_(std::move(toks)), path_(std::move(path)) {}

    const FileToken& peek() const { return toks_[pos_]; }
    const FileToken& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at_end() const { return peek().kind == FileToken::end; }

    bool accept(std::string_view punct)
    {
        if (peek().kind == FileToken::punct && peek().text == punct) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(std::string_view punct)
    {
        if (!accept(punct))
            error("expected '" + std::string(punct) + "'; found " + describe(peek()));
    }

    /// A word or quoted string.
    const FileToken& value(std::string_view what)
    {
        if (peek().kind != FileToken::word && peek().kind != FileToken::quoted)
            error("expected " + std::string(what) + "; found " + describe(peek()));
        return next();
    }

    /// A bare word.
    std::string word(std::string_view what)
    {
        if (peek().kind != FileToken::word)
            error("expected " + std::string(what) + "; found " + describe(peek()));
        return next().text;
    }

    std::string where(int line) const { return path_ + ":" + std::to_string(line); }
    std::string where() const { return where(peek().line); }

    [[noreturn]] void error(const std::string& msg, Errc code = Errc::parse_error) const { fail(code, where() + ": " + msg); }

    static std::string describe(const FileToken& t)
    {
        switch (t.kind) {
        case FileToken::end: return "end of file";
        case FileToken::quoted: return "\"" + t.text + "\"";
        default: return "'" + t.text + "'";
        }
    }

private:
    std::vector<FileToken> toks_;
    std::string path_;
    std::size_t pos_ = 0;
};

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::io_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot write '" + path + "'");
    out << text;
    if (!out)
        fail(Errc::io_error, "write to '" + path + "' failed");
}

} // namespace comdb::io
