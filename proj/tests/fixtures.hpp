#pragma once

// Shared test fixtures: sample file loading, the seeded GROUP1 generator,
// a small one-level ordered set and random models for property suites.

#include "comdb/comdb.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#ifndef COMDB_SAMPLES_DIR
#define COMDB_SAMPLES_DIR "samples"
#endif

namespace fixtures {

using namespace comdb;

inline std::string sample(const std::string& name) { return std::string(COMDB_SAMPLES_DIR) + "/" + name; }

inline Schema load(const std::string& stem)
{
    Schema s = io::load_schema(sample(stem + ".schema"));
    io::load_data(s, sample(stem + ".data"));
    return s;
}

inline Schema flat1() { return load("flat1"); }
inline Schema nav1() { return load("nav1"); }
inline Schema inf1() { return load("inf1"); }
inline Schema down1() { return load("down1"); }
inline Schema group1() { return load("group1"); }
inline Schema olap1() { return load("olap1/olap1"); }

inline std::vector<std::string> ids(const Schema& s, const std::vector<ItemRef>& items)
{
    std::vector<std::string> out;
    for (auto r : items)
        out.push_back(s.item_id(r));
    return out;
}

inline std::vector<std::string> sorted_ids(const Schema& s, const std::vector<ItemRef>& items)
{
    auto out = ids(s, items);
    std::sort(out.begin(), out.end());
    return out;
}

/// Unbiased enough for fixtures and identical on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }
    bool chance(unsigned percent) { return below(100) < percent; }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline std::string pad(std::uint64_t n, int width)
{
    std::string s = std::to_string(n);
    return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

/// Employees order dinners made of dishes: 30 employees, 150 orders, 500 order parts.
inline Schema make_group1(std::uint64_t seed = 2006)
{
    Schema s;
    s.define_value_concept("Names", ValueType::string);
    s.define_value_concept("Ages", ValueType::integer);
    s.define_value_concept("Dates", ValueType::date);
    s.define_value_concept("Prices", ValueType::decimal);
    s.define_value_concept("Counts", ValueType::integer);
    s.define_concept("Categories");
    s.define_concept("Employees", {{"name", "Names"}, {"age", "Ages"}});
    s.define_concept("Orders", {{"employee", "Employees"}, {"date", "Dates"}});
    s.define_concept("Dishes", {{"category", "Categories"}, {"price", "Prices"}, {"name", "Names"}});
    s.define_concept("OrderParts", {{"order", "Orders"}, {"dish", "Dishes"}, {"count", "Counts"}});
    s.designate_bottom(s.concept_ref("OrderParts"));

    Rng rng(seed);
    const char* first[] = {"Ada", "Ben", "Cleo", "Dan", "Eva", "Finn", "Gus", "Hana", "Ivo", "Jill", "Kai", "Lena", "Max", "Nora", "Otto",
                           "Pia", "Quin", "Rosa", "Sam", "Tess", "Uli", "Vera", "Walt", "Xena", "Yann", "Zoe", "Abel", "Bea", "Cyd", "Dora"};
    for (int i = 0; i < 30; ++i) {
        auto name = s.intern_value(s.concept_ref("Names"), std::string(first[i]));
        auto age = s.intern_value(s.concept_ref("Ages"), static_cast<std::int64_t>(20 + rng.below(41)));
        s.add_item(s.concept_ref("Employees"), "e" + pad(i + 1, 2), {{"name", name}, {"age", age}});
    }
    for (const char* c : {"dessert", "pasta", "pizza", "salad", "soup"})
        s.add_item(s.concept_ref("Categories"), c);
    struct Dish {
        const char* name;
        const char* category;
        const char* price;
    };
    const Dish dishes[] = {{"Margherita", "pizza", "7.50"},  {"Diavola", "pizza", "8.90"},   {"Funghi", "pizza", "8.20"},
                           {"Calzone", "pizza", "9.40"},     {"Carbonara", "pasta", "9.10"}, {"Lasagne", "pasta", "10.30"},
                           {"Caesar", "salad", "6.80"},      {"Greek", "salad", "6.40"},     {"Minestrone", "soup", "4.90"},
                           {"Goulash", "soup", "5.60"},      {"Tiramisu", "dessert", "4.70"}, {"Panna cotta", "dessert", "4.20"}};
    for (std::size_t i = 0; i < std::size(dishes); ++i) {
        auto cat = s.item(s.concept_ref("Categories"), dishes[i].category);
        auto price = s.intern_value(s.concept_ref("Prices"), *Decimal::parse(dishes[i].price));
        auto name = s.intern_value(s.concept_ref("Names"), std::string(dishes[i].name));
        s.add_item(s.concept_ref("Dishes"), "d" + pad(i + 1, 2), {{"category", cat}, {"price", price}, {"name", name}});
    }
    auto employees = s.items(s.concept_ref("Employees"));
    for (int i = 0; i < 150; ++i) {
        auto emp = employees[rng.below(employees.size())];
        auto date = s.intern_value(s.concept_ref("Dates"), std::to_string(2005 + rng.below(3)));
        s.add_item(s.concept_ref("Orders"), "o" + pad(i + 1, 3), {{"employee", emp}, {"date", date}});
    }
    auto orders = s.items(s.concept_ref("Orders"));
    auto dish_items = s.items(s.concept_ref("Dishes"));
    for (int i = 0; i < 500; ++i) {
        auto order = orders[rng.below(orders.size())];
        // pizza dishes are the first four; weight them up
        auto dish = rng.chance(40) ? dish_items[rng.below(4)] : dish_items[rng.below(dish_items.size())];
        auto count = s.intern_value(s.concept_ref("Counts"), static_cast<std::int64_t>(1 + rng.below(3)));
        s.add_item(s.concept_ref("OrderParts"), "p" + pad(i + 1, 3), {{"order", order}, {"dish", dish}, {"count", count}});
    }
    return s;
}

/// The one-level ordered set: primitives e4, e5, e6 under top; e1 < e4, e5;
/// e2 < e5, e6; e3 < e5, e6. Edge labels are the super-element symbols.
inline poset::OrderedSet one_level()
{
    using namespace comdb::poset;
    OrderedSet s("t", "b");
    auto sup = [](std::vector<std::string> names) {
        std::vector<Binding> out;
        for (auto& n : names)
            out.emplace_back(n, ElementId{n});
        return Combination(std::move(out));
    };
    s.add_element("e4", Combination{});
    s.add_element("e5", Combination{});
    s.add_element("e6", Combination{});
    s.add_element("e1", sup({"e4", "e5"}));
    s.add_element("e2", sup({"e5", "e6"}));
    s.add_element("e3", sup({"e5", "e6"}));
    return s;
}

struct RandomModelOptions {
    int max_concepts = 6;
    int max_items = 30;
    unsigned null_percent = 15;
};

/// Random DAG schema with a designated bottom (the last concept) that has a
/// dimension into every concept without sub-concepts.
inline Schema random_model(std::uint64_t seed, RandomModelOptions opt = {})
{
    Rng rng(seed);
    Schema s;
    int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.max_concepts - 2)));
    int primitives = 1 + static_cast<int>(rng.below(2));
    std::vector<ConceptRef> cs;
    for (int i = 0; i < n; ++i) {
        std::string name = "K" + std::to_string(i);
        std::vector<std::pair<std::string, std::string>> dims;
        if (i >= primitives) {
            int k = 1 + static_cast<int>(rng.below(3));
            for (int d = 0; d < k; ++d)
                dims.emplace_back("d" + std::to_string(d), "K" + std::to_string(rng.below(static_cast<std::uint64_t>(i))));
        }
        if (i == n - 1) {
            // bottom: also reach every concept nothing else points to
            std::vector<char> used(static_cast<std::size_t>(n), 0);
            for (auto c : cs)
                for (const auto& d : s.concept_at(c).dims())
                    used[d.domain.index] = 1;
            for (const auto& d : dims)
                used[s.concept_ref(d.second).index] = 1;
            for (int j = 0; j < i; ++j)
                if (!used[static_cast<std::size_t>(j)])
                    dims.emplace_back("d" + std::to_string(dims.size()), "K" + std::to_string(j));
        }
        cs.push_back(s.define_concept(name, dims));
    }
    s.designate_bottom(cs.back());

    int budget = opt.max_items;
    for (int i = 0; i < n && budget > 0; ++i) {
        int remaining = n - i;
        int most = std::max(1, std::min(6, budget - (remaining - 1)));
        int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(most)));
        for (int k = 0; k < count; ++k) {
            std::vector<SlotBinding> slots;
            for (const auto& d : s.concept_at(cs[static_cast<std::size_t>(i)]).dims()) {
                auto pool = s.items(d.domain);
                if (pool.empty() || rng.chance(opt.null_percent))
                    slots.emplace_back(d.name, std::nullopt);
                else
                    slots.emplace_back(d.name, pool[rng.below(pool.size())]);
            }
            s.add_item(cs[static_cast<std::size_t>(i)], "k" + std::to_string(i) + "_" + std::to_string(k), slots);
        }
        budget -= count;
    }
    return s;
}

/// Random 0/1 map over the items of `c`.
inline Possibility random_possibility(const Schema& s, ConceptRef c, Rng& rng, unsigned zero_percent = 35)
{
    Possibility p = Possibility::all(s, c);
    for (auto r : s.items(c))
        if (rng.chance(zero_percent))
            p.set(r, false);
    return p;
}

} // namespace fixtures
