#pragma once

// Corpus queries on the dinner (GROUP1) and sales (OLAP1) fixtures, each
// paired with a nested loop over the stored slots that computes the same rows.

#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace corpus {

using namespace comdb;

using Rows = std::vector<std::vector<std::string>>;

class Store {
public:
    explicit Store(const Schema& s) : s_(s) {}

    std::vector<ItemRef> all(const char* concept_name) const { return s_.items(s_.concept_ref(concept_name)); }
    ItemRef at(ItemRef r, const char* dim) const { return *s_.get_slot(r, dim); }
    std::string id(ItemRef r) const { return s_.item_id(r); }
    std::string id(ItemRef r, const char* dim) const { return s_.item_id(at(r, dim)); }
    std::int64_t integer(ItemRef r, const char* dim) const { return std::get<std::int64_t>(*s_.item_value(at(r, dim))); }
    Decimal decimal(ItemRef r, const char* dim) const { return std::get<Decimal>(*s_.item_value(at(r, dim))); }

private:
    const Schema& s_;
};

inline Rows sorted(Rows r)
{
    std::sort(r.begin(), r.end());
    return r;
}

inline Rows scalar(std::size_t n) { return {{std::to_string(n)}}; }

struct Case {
    std::string name;
    std::string fixture; // "group1" or "olap1"
    std::string query;
    Rows (*oracle)(const Store&);
};

// ---- GROUP1 ---------------------------------------------------------------

inline Rows older_than_55(const Store& db)
{
    Rows out;
    for (auto e : db.all("Employees"))
        if (db.integer(e, "age") > 55)
            out.push_back({db.id(e, "name"), db.id(e, "age")});
    return sorted(out);
}

inline Rows average_age(const Store& db)
{
    std::int64_t sum = 0;
    auto all = db.all("Employees");
    for (auto e : all)
        sum += db.integer(e, "age");
    return {{(Decimal::from_int(sum) / Decimal::from_int(static_cast<std::int64_t>(all.size()))).to_string()}};
}

inline Rows aged_30(const Store& db)
{
    std::size_t n = 0;
    for (auto e : db.all("Employees"))
        if (db.integer(e, "age") == 30)
            ++n;
    return scalar(n);
}

inline std::size_t order_count(const Store& db, ItemRef e)
{
    std::size_t n = 0;
    for (auto o : db.all("Orders"))
        if (db.at(o, "employee") == e)
            ++n;
    return n;
}

inline Rows busy_employees(const Store& db)
{
    std::size_t n = 0;
    for (auto e : db.all("Employees"))
        if (order_count(db, e) > 7)
            ++n;
    return scalar(n);
}

inline bool pizza_2006(const Store& db, ItemRef part)
{
    return db.id(db.at(part, "order"), "date") == "2006" && db.id(db.at(part, "dish"), "category") == "pizza";
}

inline std::size_t pizza_parts(const Store& db, ItemRef e)
{
    std::size_t n = 0;
    for (auto p : db.all("OrderParts"))
        if (db.at(db.at(p, "order"), "employee") == e && pizza_2006(db, p))
            ++n;
    return n;
}

inline Rows pizza_lovers(const Store& db)
{
    Rows out;
    for (auto e : db.all("Employees"))
        if (pizza_parts(db, e) > 3)
            out.push_back({db.id(e, "name")});
    return sorted(out);
}

// Name and total of employees with more than 3 pizza parts in 2006 and a total under 60.
inline Rows pizza_totals(const Store& db)
{
    Rows out;
    for (auto e : db.all("Employees")) {
        std::size_t n = 0;
        Decimal total;
        for (auto p : db.all("OrderParts")) {
            if (db.at(db.at(p, "order"), "employee") != e || !pizza_2006(db, p))
                continue;
            ++n;
            total = total + Decimal::from_int(db.integer(p, "count")) * db.decimal(db.at(p, "dish"), "price");
        }
        if (n > 3 && total < Decimal::from_int(60))
            out.push_back({db.id(e, "name"), total.to_string()});
    }
    return sorted(out);
}

inline Rows two_groups(const Store& db)
{
    Rows out;
    for (auto e : db.all("Employees")) {
        std::size_t orders2007 = 0;
        for (auto o : db.all("Orders"))
            if (db.at(o, "employee") == e && db.id(o, "date") == "2007")
                ++orders2007;
        if (pizza_parts(db, e) > 3 && orders2007 > 1)
            out.push_back({db.id(e, "name")});
    }
    return sorted(out);
}

// Employees e for which more than 10 employees ordered, in 2007, from a
// category that e ordered from in 2006.
inline Rows zigzag(const Store& db)
{
    Rows out;
    for (auto e : db.all("Employees")) {
        std::set<std::string> cats;
        for (auto p : db.all("OrderParts"))
            if (db.at(db.at(p, "order"), "employee") == e && db.id(db.at(p, "order"), "date") == "2006")
                cats.insert(db.id(db.at(p, "dish"), "category"));
        std::set<ItemRef> others;
        for (auto p : db.all("OrderParts"))
            if (db.id(db.at(p, "order"), "date") == "2007" && cats.count(db.id(db.at(p, "dish"), "category")))
                others.insert(db.at(db.at(p, "order"), "employee"));
        if (others.size() > 10)
            out.push_back({db.id(e, "name")});
    }
    return sorted(out);
}

inline Rows busy_dates(const Store& db)
{
    std::map<std::string, std::size_t> per_date;
    for (auto o : db.all("Orders"))
        ++per_date[db.id(o, "date")];
    std::size_t n = 0;
    for (auto p : db.all("OrderParts"))
        if (per_date[db.id(db.at(p, "order"), "date")] > 50)
            ++n;
    return scalar(n);
}

// ---- OLAP1 ----------------------------------------------------------------

inline ItemRef country_of(const Store& db, ItemRef part) { return db.at(db.at(db.at(part, "order"), "customer"), "country"); }
inline ItemRef category_of(const Store& db, ItemRef part) { return db.at(db.at(part, "product"), "category"); }

inline Rows country_category_2007(const Store& db)
{
    Rows out;
    for (auto cntr : db.all("Countries")) {
        bool has_customers = false;
        for (auto c : db.all("Customers"))
            has_customers = has_customers || db.at(c, "country") == cntr;
        if (!has_customers)
            continue;
        for (auto ctgr : db.all("Categories")) {
            Decimal total;
            std::set<ItemRef> orders;
            for (auto p : db.all("OrderParts")) {
                if (country_of(db, p) != cntr || category_of(db, p) != ctgr || db.id(db.at(p, "order"), "date") != "2007")
                    continue;
                total = total + db.decimal(p, "price");
                orders.insert(db.at(p, "order"));
            }
            // SUM over an empty group is the integer 0
            auto total_text = orders.empty() ? std::string("0") : total.to_string();
            out.push_back({db.id(cntr, "code"), db.id(ctgr), total_text, std::to_string(orders.size())});
        }
    }
    return sorted(out);
}

inline Rows country_category_groups(const Store& db)
{
    Rows out;
    for (auto cntr : db.all("Countries"))
        for (auto ctgr : db.all("Categories")) {
            Decimal total;
            std::size_t n = 0;
            for (auto p : db.all("OrderParts"))
                if (country_of(db, p) == cntr && category_of(db, p) == ctgr) {
                    total = total + db.decimal(p, "price");
                    ++n;
                }
            if (n > 0)
                out.push_back({db.id(cntr), db.id(ctgr), total.to_string()});
        }
    return sorted(out);
}

// Customers whose 2006 parts add up to more than 150.
inline Rows big_spenders(const Store& db)
{
    Rows out;
    for (auto c : db.all("Customers")) {
        Decimal total;
        for (auto p : db.all("OrderParts"))
            if (db.at(db.at(p, "order"), "customer") == c && db.id(db.at(p, "order"), "date") == "2006")
                total = total + db.decimal(p, "price") * Decimal::from_int(db.integer(p, "count"));
        if (Decimal::from_int(150) < total)
            out.push_back({db.id(c, "name"), total.to_string()});
    }
    return sorted(out);
}

inline const std::vector<Case>& cases()
{
    static const std::vector<Case> all = {
        {"SelectStar", "group1", "SELECT * FROM Employees WHERE age > 55", older_than_55},
        {"SelectFromSubquery", "group1", "SELECT * FROM (SELECT * FROM Employees) WHERE age > 55", older_than_55},
        {"AverageOfSelect", "group1", "AVERAGE( SELECT age FROM Employees )", average_age},
        {"CountFilter", "group1", "COUNT((Employees | age == 30))", aged_30},
        {"CountFilterNamed", "group1", "COUNT((Employees emp | emp.age == 30))", aged_30},
        {"CountNested", "group1", "COUNT((Employees e | COUNT( e <- employee <- Orders ) > 7))", busy_employees},
        {"PizzaCount", "group1",
         "FROM Employees e WHERE COUNT(e <- employee <- order <- (OrderParts | order.date == '2006' AND dish.category == 'pizza')) > 3 "
         "SELECT e.name",
         pizza_lovers},
        {"PizzaTotal", "group1",
         "FROM Employees e { Collection group = e <- employee <- order <- (OrderParts | order.date == '2006' AND "
         "dish.category == 'pizza'); double total = SUM( group.<count * dish.price> ); } "
         "WHERE COUNT( group ) > 3 AND total < 60 SELECT e.name, total",
         pizza_totals},
        {"PizzaTotalImperative", "group1",
         "FROM Employees e { Collection group = e <- employee <- order <- (OrderParts | order.date == '2006' AND "
         "dish.category == 'pizza'); double total = SUM( group.<count * dish.price> ); "
         "IF( COUNT( group ) > 3 AND total < 60 ) THEN RETURN( e.name, total ); }",
         pizza_totals},
        {"PizzaTotalCorrelated", "group1",
         "FROM Employees e { Collection group = FROM OrderParts op WHERE op.order.employee == e AND "
         "op.order.date == '2006' AND op.dish.category == 'pizza' SELECT op.count * op.dish.price; } "
         "WHERE COUNT( group ) > 3 AND SUM( group ) < 60 SELECT e.name, SUM( group ) AS total",
         pizza_totals},
        {"TwoGroups", "group1",
         "FROM Employees e { Collection group = e <- employee <- (Orders | date == '2006') <- order <- "
         "(OrderParts | dish.category == 'pizza'); Collection group2 = e <- employee <- (Orders | date == '2007'); } "
         "WHERE COUNT( group ) > 3 AND COUNT( group2 ) > 1 SELECT e.name",
         two_groups},
        {"Zigzag", "group1",
         "FROM Employees e { Collection group = e <- employee <- order <- (OrderParts | order.date == '2006') -> dish -> "
         "category <- category <- dish <- (OrderParts | order.date == '2007') -> order -> employee; } "
         "WHERE COUNT( group ) > 10 SELECT e.name",
         zigzag},
        {"BusyDates", "group1", "COUNT((OrderParts | COUNT(order.date <- date <- Orders) > 50))", busy_dates},
        {"CountryCategory2007", "olap1",
         "FROM (Countries cntr, Categories ctgr) { Collection grp = FROM OrderParts op WHERE "
         "op -> order -> customer -> country == cntr AND op -> product -> category == ctgr AND op.order.date == '2007'; "
         "double total = SUM(grp.price); integer cnt = COUNT(grp -> order); } "
         "WHERE cntr <- country <- Customers > 0 SELECT cntr.code, ctgr.id, total, cnt",
         country_category_2007},
        {"MultiDimensionalGroups", "olap1",
         "FROM (Countries cntr, Categories ctgr) { Collection grp = [ cntr <- country <- customer <- order <- OrderParts "
         "AND ctgr <- category <- product <- OrderParts ]; } WHERE SIZE(grp) > 0 "
         "SELECT cntr, ctgr, SUM(grp.price) AS total",
         country_category_groups},
        {"BigSpenders", "olap1",
         "FROM Customers c { double spent = SUM( (c <- customer <- (Orders | date == '2006') <- order <- OrderParts)"
         ".<price * count> ); } WHERE spent > 150 SELECT c.name, spent",
         big_spenders},
    };
    return all;
}

/// Parses, prints, reparses and runs one case; empty on success.
inline std::string check(const Case& c, const Schema& s)
{
    auto first = coql::parse(c.query);
    auto print = [](const coql::TopLevel& t) {
        if (auto q = std::get_if<coql::QueryPtr>(&t))
            return coql::to_text(**q);
        return coql::to_text(*std::get<coql::ExprPtr>(t));
    };
    auto printed = print(first);
    auto second = coql::parse(printed);
    bool same = false;
    if (auto q = std::get_if<coql::QueryPtr>(&first))
        same = std::holds_alternative<coql::QueryPtr>(second) && coql::same(**q, *std::get<coql::QueryPtr>(second));
    else
        same = std::holds_alternative<coql::ExprPtr>(second) && coql::same(std::get<coql::ExprPtr>(first), std::get<coql::ExprPtr>(second));
    if (!same)
        return "print/reparse changed the query: " + printed;
    coql::Registry reg;
    auto got = coql::run(s, reg, printed).sorted_text(s);
    Store db(s);
    auto want = c.oracle(db);
    if (want.empty())
        return "oracle found no rows; the case tests nothing";
    if (got != want)
        return "rows differ from the oracle (" + std::to_string(got.size()) + " vs " + std::to_string(want.size()) + ")";
    return {};
}

} // namespace corpus
