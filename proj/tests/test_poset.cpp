#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace comdb;
using namespace comdb::poset;

namespace {

std::vector<int> bits_of(const BinaryRow& r)
{
    std::vector<int> out;
    for (bool b : r.bits)
        out.push_back(b ? 1 : 0);
    return out;
}

template <class F>
Errc code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return Errc::usage_error;
}

} // namespace

TEST(Combination, ReduceAndExtend)
{
    Combination c{{"x", ElementId{"a"}}, {"y", std::nullopt}};
    auto r = reduce(c, "x");
    EXPECT_EQ(r.size(), 1u);
    EXPECT_FALSE(r.has("x"));
    auto e = extend(r, "z", ElementId{"b"});
    EXPECT_EQ(e.labels(), (std::vector<std::string>{"y", "z"}));
    EXPECT_EQ(code_of([&] { reduce(c, "nope"); }), Errc::unknown_label);
    EXPECT_EQ(code_of([&] { extend(c, "x", std::nullopt); }), Errc::duplicate_label);
}

TEST(Combination, EquivalenceIgnoresOrder)
{
    Combination a{{"x", ElementId{"1"}}, {"y", ElementId{"2"}}};
    Combination b{{"y", ElementId{"2"}}, {"x", ElementId{"1"}}};
    EXPECT_TRUE(equivalent(a, b));
    EXPECT_FALSE(a == b);
}

TEST(Combination, InducedOrderTreatsNullAsGeneral)
{
    Combination full{{"x", ElementId{"1"}}, {"y", ElementId{"2"}}};
    Combination half{{"x", ElementId{"1"}}, {"y", std::nullopt}};
    Combination none{{"x", std::nullopt}, {"y", std::nullopt}};
    EXPECT_TRUE(induced_leq(full, half));
    EXPECT_TRUE(induced_leq(half, none));
    EXPECT_TRUE(induced_leq(full, none));
    EXPECT_FALSE(induced_leq(half, full));
    EXPECT_TRUE(induced_leq(half, half));
}

TEST(Combination, AlignPadsWithNulls)
{
    Combination a{{"x", ElementId{"1"}}};
    Combination b{{"y", ElementId{"2"}}};
    EXPECT_EQ(code_of([&] { induced_leq(a, b); }), Errc::label_mismatch);
    auto [ra, rb] = align(a, b);
    EXPECT_EQ(ra.size(), 2u);
    EXPECT_FALSE(induced_leq(ra, rb));
    EXPECT_FALSE(induced_leq(rb, ra));
}

TEST(OrderedSet, RejectsBadElements)
{
    OrderedSet s;
    s.add_element("a", {});
    EXPECT_EQ(code_of([&] { s.add_element("a", {}); }), Errc::duplicate_id);
    EXPECT_EQ(code_of([&] { s.add_element("b", {{"x", ElementId{"zz"}}}); }), Errc::unknown_super);
    EXPECT_EQ(code_of([&] { s.add_element("c", {{"x", ElementId{"a"}}, {"x", ElementId{"a"}}}); }), Errc::duplicate_label);
    EXPECT_EQ(code_of([&] { s.add_element("d", {{"x", ElementId{"d"}}}); }), Errc::cycle_detected);
    EXPECT_EQ(code_of([&] { s.add_element("e", {{"x", s.bottom()}}); }), Errc::cycle_detected);
    EXPECT_EQ(code_of([] { OrderedSet bad("t", "t"); }), Errc::duplicate_id);
    EXPECT_EQ(s.size(), 1u);
}

TEST(OrderedSet, SyntheticEdges)
{
    auto s = fixtures::one_level();
    auto up = s.up_edges(ElementId{"e4"});
    ASSERT_EQ(up.size(), 1u);
    EXPECT_EQ(up[0].target, s.top());
    EXPECT_TRUE(up[0].synthetic);
    auto from_bottom = s.up_edges(s.bottom());
    ASSERT_EQ(from_bottom.size(), 3u);
    EXPECT_EQ(from_bottom[0].target.symbol, "e1");
    EXPECT_EQ(from_bottom[2].target.symbol, "e3");
    auto user = s.up_edges(ElementId{"e1"});
    ASSERT_EQ(user.size(), 2u);
    EXPECT_FALSE(user[0].synthetic);
}

TEST(OrderedSet, LessThanFollowsEdges)
{
    auto s = fixtures::one_level();
    EXPECT_TRUE(s.less_than(ElementId{"e1"}, ElementId{"e4"}));
    EXPECT_TRUE(s.less_than(ElementId{"e1"}, s.top()));
    EXPECT_TRUE(s.less_than(s.bottom(), ElementId{"e6"}));
    EXPECT_FALSE(s.less_than(ElementId{"e1"}, ElementId{"e6"}));
    EXPECT_FALSE(s.less_than(ElementId{"e4"}, ElementId{"e4"}));
    EXPECT_FALSE(s.less_than(ElementId{"e4"}, ElementId{"e1"}));
}

TEST(OrderedSet, Metrics)
{
    auto s = fixtures::one_level();
    auto e5 = s.metrics(ElementId{"e5"});
    EXPECT_EQ(e5.dimensionality, 1u);
    EXPECT_EQ(e5.cardinality, 3u);
    EXPECT_EQ(e5.primitive_dimensionality, 1u);
    EXPECT_EQ(e5.primitive_cardinality, 3u);
    auto e1 = s.metrics(ElementId{"e1"});
    EXPECT_EQ(e1.dimensionality, 2u);
    EXPECT_EQ(e1.canonical_dimensionality, 4u); // e4, e4.t, e5, e5.t
    auto b = s.metrics(s.bottom());
    EXPECT_EQ(b.primitive_dimensionality, 6u);
    EXPECT_EQ(s.metrics(s.top()).primitive_cardinality, 6u);
}

TEST(OrderedSet, PathEnumeration)
{
    auto s = fixtures::one_level();
    auto up = s.primitive_paths(ElementId{"e2"}, Direction::up);
    ASSERT_EQ(up.size(), 2u);
    EXPECT_EQ(up[0].labels, (std::vector<std::string>{"e5", "t"}));
    auto down = s.primitive_paths(ElementId{"e5"}, Direction::down);
    EXPECT_EQ(down.size(), 3u);
    EXPECT_EQ(down[0].to_string(), "b.e1.e5");
    EXPECT_EQ(s.primitive_paths(s.top(), Direction::up).size(), 1u);
    EXPECT_EQ(s.enumerate_paths(ElementId{"e3"}, Direction::up).size(), 4u);
}

TEST(OrderedSet, TopologicalOrder)
{
    auto s = fixtures::one_level();
    auto order = s.topological_order();
    ASSERT_EQ(order.size(), 8u);
    EXPECT_EQ(order.front(), s.bottom());
    EXPECT_EQ(order.back(), s.top());
    auto pos = [&](const std::string& x) {
        return std::find(order.begin(), order.end(), ElementId{x}) - order.begin();
    };
    EXPECT_LT(pos("e1"), pos("e4"));
    EXPECT_LT(pos("e3"), pos("e6"));
}

TEST(OrderedSet, SetInducedOrderUsesElementOrder)
{
    OrderedSet s;
    s.add_element("lo", {});
    s.add_element("hi", {});
    s.add_element("mid", {{"up", ElementId{"hi"}}});
    Combination a{{"x", ElementId{"mid"}}};
    Combination b{{"x", ElementId{"hi"}}};
    Combination n{{"x", std::nullopt}};
    EXPECT_TRUE(s.induced_leq(a, b));
    EXPECT_FALSE(s.induced_leq(b, a));
    EXPECT_TRUE(s.induced_leq(a, n));
    EXPECT_FALSE(s.induced_leq(n, a));
}

TEST(BinaryFlatten, ColumnsAreBottomToTopPaths)
{
    auto t = fixtures::one_level().flatten_binary();
    EXPECT_EQ(t.column_names(),
              (std::vector<std::string>{"b.e1.e4.t", "b.e1.e5.t", "b.e2.e5.t", "b.e2.e6.t", "b.e3.e5.t", "b.e3.e6.t"}));
}

TEST(BinaryFlatten, RowsPerElement)
{
    auto s = fixtures::one_level();
    auto t = s.flatten_binary();
    auto e3 = t.rows_of(ElementId{"e3"});
    ASSERT_EQ(e3.size(), 1u);
    EXPECT_EQ(bits_of(*e3[0]), (std::vector<int>{0, 0, 0, 0, 1, 1}));
    auto e6 = t.rows_of(ElementId{"e6"});
    ASSERT_EQ(e6.size(), 2u);
    EXPECT_EQ(bits_of(*e6[0]), (std::vector<int>{0, 0, 0, 1, 0, 0}));
    EXPECT_EQ(bits_of(*e6[1]), (std::vector<int>{0, 0, 0, 0, 0, 1}));
    EXPECT_EQ(t.rows_of(ElementId{"e5"}).size(), 3u);
    auto b = t.rows_of(s.bottom());
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(bits_of(*b[0]), (std::vector<int>(6, 1)));
    EXPECT_TRUE(t.rows_of(s.top()).empty());
    EXPECT_EQ(t.rows.size(), 10u);
}

TEST(BinaryFlatten, BottomRowBelowEverything)
{
    auto s = fixtures::one_level();
    auto t = s.flatten_binary();
    const auto& b = *t.rows_of(s.bottom())[0];
    for (const auto& r : t.rows)
        EXPECT_TRUE(induced_leq(b, r)) << r.source.symbol;
}

TEST(BinaryFlatten, RowOrderMatchesCombinationOrder)
{
    auto t = fixtures::one_level().flatten_binary();
    for (const auto& a : t.rows)
        for (const auto& b : t.rows)
            EXPECT_EQ(induced_leq(a, b), induced_leq(t.row_combination(a), t.row_combination(b)));
}

TEST(BinaryFlatten, E3FirstRowBelowSecondE6Row)
{
    auto t = fixtures::one_level().flatten_binary();
    const auto& r31 = *t.rows_of(ElementId{"e3"})[0];
    const auto& r62 = *t.rows_of(ElementId{"e6"})[1];
    EXPECT_TRUE(induced_leq(r31, r62));
    EXPECT_FALSE(induced_leq(r62, r31));
}
