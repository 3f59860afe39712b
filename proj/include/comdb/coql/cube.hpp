#pragma once

// Multi-dimensional grouping: fact items are grouped over the Cartesian
// product of level concepts and measured per cell.

#include "comdb/coql/eval.hpp"
#include "comdb/coql/parser.hpp"

#include <map>
#include <string>
#include <vector>

namespace comdb::coql {

struct CubeDimension {
    DimPath path;     // from the fact concept to the level concept
    ConceptRef level;
    ExprPtr filter;   // over level items; optional
};

struct CubeMeasure {
    std::string name;
    Agg agg = Agg::sum;
    ExprPtr expr; // over fact items; ignored by COUNT
};

struct CubeSpec {
    ConceptRef fact;
    std::vector<CubeDimension> dims;
    ExprPtr fact_filter; // optional
    std::vector<CubeMeasure> measures;
};

/// Parses "AGG(expr)" or "name=AGG(expr)"; COUNT accepts "COUNT(*)".
inline CubeMeasure parse_measure(const std::string& text)
{
    CubeMeasure m;
    std::string body = text;
    if (auto eq = text.find('='); eq != std::string::npos && text.find('(') > eq) {
        m.name = text.substr(0, eq);
        body = text.substr(eq + 1);
    }
    auto open = body.find('(');
    if (open == std::string::npos || body.back() != ')')
        fail(Errc::parse_error, "measure must look like AGG(expr): '" + text + "'");
    std::string agg = body.substr(0, open);
    std::string arg = body.substr(open + 1, body.size() - open - 2);
    if (agg == "COUNT" || agg == "SIZE")
        m.agg = Agg::count;
    else if (agg == "SUM")
        m.agg = Agg::sum;
    else if (agg == "AVERAGE")
        m.agg = Agg::average;
    else
        fail(Errc::parse_error, "unknown aggregate '" + agg + "'");
    if (m.agg != Agg::count || (arg != "*" && !arg.empty()))
        m.expr = parse_expression(arg);
    if (m.name.empty()) {
        m.name = agg;
        for (auto& c : m.name)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return m;
}

inline ResultTable cube(const Schema& schema, const Registry& registry, const CubeSpec& spec)
{
    Checker checker(schema, registry);
    Evaluator eval(schema);

    struct Level {
        std::vector<ItemRef> items;
    };
    std::vector<Level> levels;
    ResultTable out;
    for (const auto& d : spec.dims) {
        ConceptRef end = schema.resolve_path(spec.fact, d.path);
        if (end != d.level)
            fail(Errc::path_mismatch, "path '" + d.path.to_string() + "' from '" + schema.concept_name(spec.fact) + "' ends in '" +
                                          schema.concept_name(end) + "', not '" + schema.concept_name(d.level) + "'");
        Level lv;
        ExprPtr f = d.filter ? checker.check_on(d.filter, d.level) : nullptr;
        for (auto r : schema.items(d.level))
            if (!f || eval.holds_on(*f, r))
                lv.items.push_back(r);
        levels.push_back(std::move(lv));
        out.columns.push_back(schema.concept_name(d.level));
    }

    std::vector<ExprPtr> measure_exprs;
    std::vector<bool> decimal_sum;
    for (const auto& m : spec.measures) {
        ExprPtr e = m.expr ? checker.check_on(m.expr, spec.fact) : nullptr;
        if (e && m.agg != Agg::count && !numeric(classify(schema, e->type)))
            fail(Errc::type_mismatch, "measure '" + m.name + "' is not numeric");
        decimal_sum.push_back(e && classify(schema, e->type) == Scalar::decimal);
        measure_exprs.push_back(e);
        out.columns.push_back(m.name);
    }
    out.columns = unique_columns(out.columns);

    ExprPtr fact_filter = spec.fact_filter ? checker.check_on(spec.fact_filter, spec.fact) : nullptr;
    std::map<std::vector<ItemRef>, std::vector<ItemRef>> groups;
    for (auto f : schema.items(spec.fact)) {
        if (fact_filter && !eval.holds_on(*fact_filter, f))
            continue;
        std::vector<ItemRef> key;
        bool complete = true;
        for (const auto& d : spec.dims) {
            auto v = schema.walk(f, d.path);
            if (!v) {
                complete = false;
                break;
            }
            key.push_back(*v);
        }
        if (complete)
            groups[key].push_back(f);
    }

    for (const auto& lv : levels)
        if (lv.items.empty())
            return out;
    std::vector<std::size_t> odometer(levels.size(), 0);
    for (;;) {
        std::vector<ItemRef> cell;
        for (std::size_t i = 0; i < levels.size(); ++i)
            cell.push_back(levels[i].items[odometer[i]]);
        auto it = groups.find(cell);
        static const std::vector<ItemRef> none;
        const auto& facts = it == groups.end() ? none : it->second;

        std::vector<Value> row(cell.begin(), cell.end());
        for (std::size_t m = 0; m < spec.measures.size(); ++m) {
            const auto& ms = spec.measures[m];
            if (ms.agg == Agg::count || ms.agg == Agg::size) {
                row.push_back(static_cast<std::int64_t>(facts.size()));
                continue;
            }
            std::int64_t isum = 0;
            Decimal dsum;
            bool dec = decimal_sum[m];
            std::size_t n = 0;
            for (auto f : facts) {
                Value v = deref(schema, eval.value_on(*measure_exprs[m], f));
                if (auto i = std::get_if<std::int64_t>(&v)) {
                    isum += *i;
                    ++n;
                } else if (auto d = std::get_if<Decimal>(&v)) {
                    dsum += *d;
                    dec = true;
                    ++n;
                }
            }
            if (ms.agg == Agg::sum) {
                if (dec)
                    row.push_back(dsum + Decimal::from_int(isum));
                else
                    row.push_back(isum);
            } else if (n == 0) {
                row.push_back(std::monostate{});
            } else {
                row.push_back((dsum + Decimal::from_int(isum)) / Decimal::from_int(static_cast<std::int64_t>(n)));
            }
        }
        out.rows.push_back(std::move(row));

        std::size_t k = levels.size();
        while (k > 0) {
            --k;
            if (++odometer[k] < levels[k].items.size())
                break;
            odometer[k] = 0;
            if (k == 0)
                return out;
        }
        if (levels.empty())
            return out;
    }
}

} // namespace comdb::coql
