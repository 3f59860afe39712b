#pragma once

// Line-oriented command shell over one mutable model.

#include "comdb/coql.hpp"
#include "comdb/flatten.hpp"
#include "comdb/io/data_file.hpp"
#include "comdb/io/ingest.hpp"
#include "comdb/io/schema_file.hpp"
#include "comdb/navigate.hpp"
#include "comdb/propagate.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace comdb {

enum class OutputFormat { table, tsv, json };

inline std::optional<OutputFormat> parse_format(std::string_view s)
{
    if (s == "table")
        return OutputFormat::table;
    if (s == "tsv")
        return OutputFormat::tsv;
    if (s == "json")
        return OutputFormat::json;
    return std::nullopt;
}

/// Splits a command line into words; double quotes group, backslash escapes inside them.
inline std::vector<std::string> split_words(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i >= line.size())
            break;
        std::string w;
        bool any = false;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            if (line[i] == '"') {
                any = true;
                ++i;
                while (i < line.size() && line[i] != '"') {
                    if (line[i] == '\\' && i + 1 < line.size())
                        ++i;
                    w += line[i++];
                }
                if (i >= line.size())
                    fail(Errc::usage_error, "unterminated quote");
                ++i;
            } else {
                w += line[i++];
            }
        }
        if (any || !w.empty())
            out.push_back(std::move(w));
    }
    return out;
}

class Shell {
public:
    Shell(std::ostream& out, std::ostream& err, OutputFormat format = OutputFormat::table, bool color = false)
        : out_(out), err_(err), format_(format), color_(color)
    {
    }

    Schema& schema() noexcept { return schema_; }
    const Schema& schema() const noexcept { return schema_; }
    coql::Registry& registry() noexcept { return registry_; }
    const ConstraintSet& constraints() const noexcept { return constraints_; }
    bool finished() const noexcept { return finished_; }

    /// Runs one command; throws comdb::Error on failure.
    void execute(std::string_view line)
    {
        std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text.rfind("--", 0) == 0)
            return;
        auto sp = text.find_first_of(" \t");
        std::string cmd = text.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : trim(text.substr(sp));
        auto it = commands().find(cmd);
        if (it == commands().end())
            fail(Errc::usage_error, "unknown command '" + cmd + "'; try 'help'");
        (this->*(it->second.run))(rest);
    }

    /// Runs commands until `quit` or end of input. A line ending in a
    /// backslash continues on the next. Stops at the first error when
    /// `stop_on_error`; returns the exit status.
    int run(std::istream& in, bool stop_on_error, const std::string& prompt = "")
    {
        std::string line, pending;
        int status = 0;
        int lineno = 0;
        for (;;) {
            if (!prompt.empty()) {
                out_ << (color_ ? "\x1b[36m" + prompt + "\x1b[0m" : prompt) << std::flush;
            }
            if (!std::getline(in, line))
                break;
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty() && line.back() == '\\') {
                pending += line.substr(0, line.size() - 1) + "\n";
                continue;
            }
            pending += line;
            std::string cmd = std::move(pending);
            pending.clear();
            if (!handle(cmd, stop_on_error ? lineno : 0)) {
                status = 1;
                if (stop_on_error)
                    return status;
            }
            if (finished_)
                break;
        }
        if (!pending.empty() && !handle(pending, lineno) && stop_on_error)
            return 1;
        if (!prompt.empty())
            out_ << "\n";
        return status;
    }

    /// Runs one command, reporting errors; returns false on error.
    bool handle(std::string_view line, int lineno = 0)
    {
        try {
            execute(line);
            return true;
        } catch (const Error& e) {
            std::string where = lineno ? "line " + std::to_string(lineno) + ": " : "";
            err_ << (color_ ? "\x1b[31merror:\x1b[0m " : "error: ") << where << e.what() << "\n";
        } catch (const std::exception& e) {
            err_ << (color_ ? "\x1b[31merror:\x1b[0m " : "error: ") << e.what() << "\n";
        }
        return false;
    }

private:
    using Handler = void (Shell::*)(const std::string&);
    struct Command {
        Handler run;
        const char* usage;
    };

    static const std::map<std::string, Command>& commands()
    {
        static const std::map<std::string, Command> table = {
            {"help", {&Shell::cmd_help, "help                               list commands"}},
            {"quit", {&Shell::cmd_quit, "quit                               leave the shell"}},
            {"exit", {&Shell::cmd_quit, nullptr}},
            {"load", {&Shell::cmd_load, "load SCHEMA [DATA]                 replace the model from files"}},
            {"save", {&Shell::cmd_save, "save SCHEMA [DATA]                 write the model in canonical form"}},
            {"import", {&Shell::cmd_import, "import MAP.json                    ingest CSV tables"}},
            {"query", {&Shell::cmd_query, "query [--constrained] COQL         run a query or expression"}},
            {"define", {&Shell::cmd_define, "define DEF                         add a derived property"}},
            {"flatten", {&Shell::cmd_flatten, "flatten [--tsv] [--bottom C]       primitive table"}},
            {"project", {&Shell::cmd_project, "project C PATH [ID...]             distinct items reached along PATH"}},
            {"dot", {&Shell::cmd_dot, "dot C PATH [ID...]                 values along PATH, duplicates kept"}},
            {"deproject", {&Shell::cmd_deproject, "deproject C PATH [ID...]           items of C whose PATH leads to ID"}},
            {"constrain", {&Shell::cmd_constrain, "constrain C EXPR | --clear         restrict items of C"}},
            {"propagate", {&Shell::cmd_propagate, "propagate --down|--up              spread the constraints"}},
            {"infer", {&Shell::cmd_infer, "infer (--from C --via P)... --to C --via P"}},
            {"check", {&Shell::cmd_check, "check                              validate model and constraints"}},
            {"stats", {&Shell::cmd_stats, "stats [C...]                       metrics per concept"}},
            {"format", {&Shell::cmd_format, "format table|tsv|json              output format"}},
        };
        return table;
    }

    static std::string trim(std::string_view s)
    {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
            ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
            --b;
        return std::string(s.substr(a, b - a));
    }

    /// The argument as one string: a single quoted word is unquoted,
    /// anything else is taken as written.
    static std::string text_arg(const std::string& rest)
    {
        if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"') {
            try {
                auto words = split_words(rest);
                if (words.size() == 1)
                    return words[0];
            } catch (const Error&) {
            }
        }
        return rest;
    }

    void print(const coql::ResultTable& t)
    {
        switch (format_) {
        case OutputFormat::table: out_ << coql::render_table(schema_, t, color_); break;
        case OutputFormat::tsv: out_ << coql::render_tsv(schema_, t); break;
        case OutputFormat::json: out_ << coql::render_jsonl(schema_, t); break;
        }
    }

    std::string ids(const std::vector<ItemRef>& items) const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < items.size(); ++i)
            s += (i ? ", " : "") + coql::render(schema_, items[i]);
        return s + "}";
    }

    void cmd_help(const std::string&)
    {
        for (const auto& [name, c] : commands())
            if (c.usage)
                out_ << c.usage << "\n";
    }

    void cmd_quit(const std::string&) { finished_ = true; }

    void cmd_format(const std::string& rest)
    {
        auto f = parse_format(rest);
        if (!f)
            fail(Errc::usage_error, "format must be table, tsv or json");
        format_ = *f;
    }

    void cmd_load(const std::string& rest)
    {
        auto a = split_words(rest);
        if (a.empty() || a.size() > 2)
            fail(Errc::usage_error, "usage: load SCHEMA [DATA]");
        Schema s = io::load_schema(a[0]);
        if (a.size() == 2)
            io::load_data(s, a[1]);
        schema_ = std::move(s);
        registry_ = coql::Registry();
        constraints_ = ConstraintSet();
        out_ << "loaded " << schema_.concept_count() << " concepts, " << schema_.total_items() << " items\n";
    }

    void cmd_save(const std::string& rest)
    {
        auto a = split_words(rest);
        if (a.empty() || a.size() > 2)
            fail(Errc::usage_error, "usage: save SCHEMA [DATA]");
        io::save_schema(schema_, a[0]);
        if (a.size() == 2)
            io::save_data(schema_, a[1]);
        out_ << "saved " << schema_.concept_count() << " concepts, " << schema_.total_items() << " items\n";
    }

    void cmd_import(const std::string& rest)
    {
        auto a = split_words(rest);
        if (a.size() != 1)
            fail(Errc::usage_error, "usage: import MAP.json");
        auto report = io::ingest_files(schema_, a[0]);
        for (const auto& t : report.tables) {
            out_ << t.concept_name << " (" << t.file << "): created " << t.created << ", skipped " << t.skipped << ", rejected "
                 << t.rejected << "\n";
            for (const auto& e : t.errors)
                out_ << "  " << e << "\n";
        }
    }

    void cmd_query(const std::string& rest)
    {
        std::string text = rest;
        bool constrained = false;
        if (text.rfind("--constrained", 0) == 0) {
            constrained = true;
            text = trim(text.substr(13));
        }
        text = text_arg(text);
        if (text.empty())
            fail(Errc::usage_error, "usage: query [--constrained] COQL");
        if (constrained) {
            Schema restricted = restrict_schema(schema_, constraints_);
            coql::ResultTable t = coql::run(restricted, registry_, text);
            switch (format_) {
            case OutputFormat::table: out_ << coql::render_table(restricted, t, color_); break;
            case OutputFormat::tsv: out_ << coql::render_tsv(restricted, t); break;
            case OutputFormat::json: out_ << coql::render_jsonl(restricted, t); break;
            }
            return;
        }
        print(coql::run(schema_, registry_, text));
    }

    void cmd_define(const std::string& rest)
    {
        std::string text = text_arg(rest);
        if (text.empty())
            fail(Errc::usage_error, "usage: define DEF");
        out_ << "defined " << coql::register_derived(schema_, registry_, text) << "\n";
    }

    void cmd_flatten(const std::string& rest)
    {
        auto a = split_words(rest);
        bool tsv = false;
        std::optional<ConceptRef> bottom;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == "--tsv")
                tsv = true;
            else if (a[i] == "--bottom" && i + 1 < a.size())
                bottom = schema_.concept_ref(a[++i]);
            else
                fail(Errc::usage_error, "usage: flatten [--tsv] [--bottom C]");
        }
        PrimitiveTable table = flatten(schema_, bottom);
        coql::ResultTable t;
        if (!tsv)
            t.columns = {"item", "via"};
        for (const auto& c : table.columns)
            t.columns.push_back(c.path.to_string());
        for (const auto& r : table.rows) {
            std::vector<coql::Value> row;
            if (!tsv) {
                row.push_back(schema_.concept_name(r.source.concept_ref()) + ":" + schema_.item_id(r.source));
                row.push_back(r.sub_dimension.empty() ? std::string("-") : r.sub_dimension.to_string());
            }
            for (const auto& cell : r.cells)
                row.push_back(cell ? coql::Value(*cell) : coql::Value(std::monostate{}));
            t.rows.push_back(std::move(row));
        }
        if (tsv)
            out_ << coql::render_tsv(schema_, t);
        else
            print(t);
        for (const auto& w : table.warnings)
            err_ << "warning: " << w << "\n";
    }

    /// C PATH [ID...]
    std::tuple<ConceptRef, DimPath, std::vector<std::string>> nav_args(const std::string& rest, const char* usage) const
    {
        auto a = split_words(rest);
        if (a.size() < 2)
            fail(Errc::usage_error, std::string("usage: ") + usage);
        ConceptRef c = schema_.concept_ref(a[0]);
        DimPath path = DimPath::parse(a[1]);
        return {c, path, std::vector<std::string>(a.begin() + 2, a.end())};
    }

    void cmd_project(const std::string& rest)
    {
        auto [c, path, names] = nav_args(rest, "project C PATH [ID...]");
        Collection e = names.empty() ? all_items(schema_, c) : collection_of(schema_, c, names);
        Collection r = project(schema_, e, path);
        out_ << schema_.concept_name(r.concept_ref) << ": " << ids(r.members) << "\n";
    }

    void cmd_dot(const std::string& rest)
    {
        auto [c, path, names] = nav_args(rest, "dot C PATH [ID...]");
        Collection e = names.empty() ? all_items(schema_, c) : collection_of(schema_, c, names);
        DotResult r = dot(schema_, e, path);
        out_ << schema_.concept_name(r.collection.concept_ref) << ": " << ids(r.collection.members);
        if (r.dropped_nulls)
            out_ << " (" << r.dropped_nulls << " null)";
        out_ << "\n";
    }

    void cmd_deproject(const std::string& rest)
    {
        auto [c, path, names] = nav_args(rest, "deproject C PATH [ID...]");
        ConceptRef end = schema_.resolve_path(c, path);
        Collection e = names.empty() ? all_items(schema_, end) : collection_of(schema_, end, names);
        Collection r = deproject(schema_, e, path, c);
        out_ << schema_.concept_name(c) << ": " << ids(r.members) << "\n";
    }

    void print_possibility(const Possibility& p)
    {
        auto on = p.possible_items(schema_);
        out_ << schema_.concept_name(p.concept_ref()) << ": " << on.size() << " of " << schema_.items(p.concept_ref()).size()
             << " possible " << ids(on) << "\n";
    }

    void print_constraints()
    {
        auto cs = constraints_.concepts();
        std::sort(cs.begin(), cs.end(), [&](ConceptRef a, ConceptRef b) { return schema_.concept_name(a) < schema_.concept_name(b); });
        for (auto c : cs)
            print_possibility(constraints_.get(schema_, c));
    }

    void cmd_constrain(const std::string& rest)
    {
        if (rest == "--clear") {
            constraints_ = ConstraintSet();
            out_ << "constraints cleared\n";
            return;
        }
        auto sp = rest.find_first_of(" \t");
        if (sp == std::string::npos)
            fail(Errc::usage_error, "usage: constrain C EXPR | --clear");
        ConceptRef c = schema_.concept_ref(rest.substr(0, sp));
        Possibility p = coql::local_constraint(schema_, registry_, c, text_arg(trim(rest.substr(sp))));
        constraints_.restrict(p);
        print_possibility(constraints_.get(schema_, c));
    }

    void cmd_propagate(const std::string& rest)
    {
        if (rest == "--down")
            constraints_ = propagate_down(schema_, constraints_);
        else if (rest == "--up")
            constraints_ = propagate_up(schema_, constraints_);
        else
            fail(Errc::usage_error, "usage: propagate --down|--up");
        print_constraints();
    }

    void cmd_infer(const std::string& rest)
    {
        auto a = split_words(rest);
        std::vector<InferSource> sources;
        std::optional<InferTarget> target;
        for (std::size_t i = 0; i < a.size(); i += 4) {
            if (i + 3 >= a.size() || a[i + 2] != "--via")
                fail(Errc::usage_error, "usage: infer (--from C --via P)... --to C --via P");
            ConceptRef c = schema_.concept_ref(a[i + 1]);
            DimPath via = a[i + 3] == "-" ? DimPath() : DimPath::parse(a[i + 3]);
            if (a[i] == "--from")
                sources.push_back(InferSource{constraints_.get(schema_, c), via});
            else if (a[i] == "--to" && !target)
                target = InferTarget{c, via};
            else
                fail(Errc::usage_error, "usage: infer (--from C --via P)... --to C --via P");
        }
        if (!target)
            fail(Errc::usage_error, "infer needs --to C --via P");
        print_possibility(infer(schema_, sources, *target));
    }

    void cmd_check(const std::string&)
    {
        auto report = schema_.validate();
        for (const auto& v : report.violations)
            out_ << errc_name(v.code) << ": " << v.message << "\n";
        auto bad = consistency_violations(schema_, constraints_);
        for (auto r : bad)
            out_ << "stored item " << schema_.concept_name(r.concept_ref()) << ":" << schema_.item_id(r) << " is impossible\n";
        if (report.ok() && bad.empty())
            out_ << "ok: model valid, constraints consistent\n";
        else if (report.ok())
            out_ << "model valid, constraints inconsistent (" << bad.size() << " items)\n";
        else
            out_ << "model invalid (" << report.violations.size() << " violations)\n";
    }

    void cmd_stats(const std::string& rest)
    {
        auto names = split_words(rest);
        std::vector<ConceptRef> cs;
        if (names.empty()) {
            cs = schema_.concepts();
            std::sort(cs.begin(), cs.end(), [&](ConceptRef a, ConceptRef b) { return schema_.concept_name(a) < schema_.concept_name(b); });
        } else {
            for (const auto& n : names)
                cs.push_back(schema_.concept_ref(n));
        }
        auto bottom = schema_.bottom();
        coql::ResultTable t;
        t.columns = {"concept", "items", "dimensions", "primitive", "rank", "sub_dimensions"};
        for (auto c : cs) {
            auto paths = schema_.concept_paths(c, std::nullopt);
            std::size_t rank = 0;
            for (const auto& p : paths)
                rank = std::max(rank, p.rank());
            std::vector<coql::Value> row;
            row.push_back(schema_.concept_name(c));
            row.push_back(static_cast<std::int64_t>(schema_.items(c).size()));
            row.push_back(static_cast<std::int64_t>(schema_.concept_at(c).dims().size()));
            row.push_back(static_cast<std::int64_t>(paths.size()));
            row.push_back(static_cast<std::int64_t>(rank));
            if (bottom && schema_.reaches(*bottom, c))
                row.push_back(static_cast<std::int64_t>(schema_.concept_paths(*bottom, c).size()));
            else
                row.push_back(std::monostate{});
            t.rows.push_back(std::move(row));
        }
        print(t);
    }

    std::ostream& out_;
    std::ostream& err_;
    OutputFormat format_;
    bool color_;
    Schema schema_;
    coql::Registry registry_;
    ConstraintSet constraints_;
    bool finished_ = false;
};

} // namespace comdb
