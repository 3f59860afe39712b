#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace comdb;

namespace {

using Strings = std::vector<std::string>;

Strings possible_ids(const Schema& s, const ConstraintSet& cs, const std::string& concept_name)
{
    auto c = s.concept_ref(concept_name);
    return fixtures::sorted_ids(s, cs.get(s, c).possible_items(s));
}

Strings impossible_ids(const Schema& s, const ConstraintSet& cs, const std::string& concept_name)
{
    auto c = s.concept_ref(concept_name);
    return fixtures::sorted_ids(s, cs.get(s, c).impossible_items(s));
}

} // namespace

TEST(Possibility, AllAndOnly)
{
    Schema s = fixtures::inf1();
    auto X = s.concept_ref("X");
    auto all = Possibility::all(s, X);
    EXPECT_TRUE(all.all_possible(s));
    auto one = Possibility::only(s, X, {s.item(X, "x2")});
    EXPECT_EQ(fixtures::ids(s, one.possible_items(s)), (Strings{"x2"}));
    EXPECT_EQ(one.impossible_items(s).size(), 2u);
    EXPECT_THROW(one.set(s.item("Y", "y1"), false), Error);
}

TEST(Possibility, MeetNeverLiftsAZero)
{
    Schema s = fixtures::inf1();
    auto X = s.concept_ref("X");
    auto a = Possibility::only(s, X, {s.item(X, "x1"), s.item(X, "x2")});
    auto b = Possibility::only(s, X, {s.item(X, "x2"), s.item(X, "x3")});
    EXPECT_TRUE(a.meet(b));
    EXPECT_EQ(fixtures::ids(s, a.possible_items(s)), (Strings{"x2"}));
    EXPECT_FALSE(a.meet(b));
    EXPECT_THROW(a.meet(Possibility::all(s, s.concept_ref("Y"))), Error);
}

TEST(Constrain, ElementaryOnValues)
{
    Schema s = fixtures::group1();
    auto ages = s.concept_ref("Ages");
    auto p = constrain(s, ages, [](const LocalItem& it) { return std::get<std::int64_t>(*it.value()) >= 30; });
    for (auto r : s.items(ages))
        EXPECT_EQ(p.possible(r), std::get<std::int64_t>(*s.item_value(r)) >= 30);
    auto always = constrain(s, ages, [](const LocalItem&) { return true; });
    EXPECT_TRUE(always.all_possible(s));
}

TEST(Constrain, CombiningOnlyAddsZeros)
{
    Schema s = fixtures::group1();
    auto emp = s.concept_ref("Employees");
    ConstraintSet cs;
    cs.restrict(constrain(s, emp, [](const LocalItem& it) { return std::get<std::int64_t>(*it.slot_value("age")) >= 30; }));
    std::size_t first = cs.excluded(s);
    cs.restrict(constrain(s, emp, [](const LocalItem& it) { return it.id() != "e01"; }));
    EXPECT_GE(cs.excluded(s), first);
    cs.restrict(Possibility::all(s, emp));
    EXPECT_GE(cs.excluded(s), first);
}

TEST(PropagateDown, UnconstrainedIsUnchanged)
{
    Schema s = fixtures::flat1();
    ConstraintSet cs;
    EXPECT_EQ(propagate_down(s, cs), cs);
    cs.restrict(Possibility::all(s, s.concept_ref("V")));
    EXPECT_EQ(propagate_down(s, cs).excluded(s), 0u);
}

TEST(PropagateDown, Flat1ValueProhibition)
{
    Schema s = fixtures::flat1();
    ConstraintSet cs;
    auto V = s.concept_ref("V");
    auto p = Possibility::all(s, V);
    p.set(s.item(V, "3"), false);
    cs.restrict(p);
    auto out = propagate_down(s, cs);
    EXPECT_EQ(impossible_ids(s, out, "X"), (Strings{"7"}));
    EXPECT_EQ(impossible_ids(s, out, "Y"), (Strings{"10"}));
    EXPECT_EQ(impossible_ids(s, out, "Z"), (Strings{"12", "13"}));
    EXPECT_EQ(impossible_ids(s, out, "U"), Strings{});
    EXPECT_EQ(out.excluded(s), 5u);
}

TEST(PropagateDown, Down1MatchesDeprojectionClosure)
{
    Schema s = fixtures::down1();
    auto D = s.concept_ref("D");
    for (auto x : s.items(D)) {
        ConstraintSet cs;
        auto p = Possibility::all(s, D);
        p.set(x, false);
        cs.restrict(p);
        auto out = propagate_down(s, cs);
        for (auto c : s.concepts()) {
            std::set<ItemRef> want;
            if (c == D)
                want.insert(x);
            for (const auto& path : s.concept_paths(c, D))
                for (auto r : deproject(s, Collection{D, {x}}, path, c).members)
                    want.insert(r);
            auto got = out.get(s, c).impossible_items(s);
            EXPECT_EQ(std::set<ItemRef>(got.begin(), got.end()), want) << s.concept_name(c) << " for D=" << s.item_id(x);
        }
    }
}

TEST(PropagateDown, Down1ShortcutAndChain)
{
    Schema s = fixtures::down1();
    auto D = s.concept_ref("D");
    ConstraintSet cs;
    cs.restrict(Possibility::only(s, D, {s.item(D, "1"), s.item(D, "3")}));
    auto out = propagate_down(s, cs);
    EXPECT_EQ(impossible_ids(s, out, "C"), (Strings{"c2", "c3"}));
    EXPECT_EQ(impossible_ids(s, out, "B"), (Strings{"b2", "b3"}));
    EXPECT_EQ(impossible_ids(s, out, "A"), (Strings{"a2", "a3", "a4"}));
    EXPECT_EQ(impossible_ids(s, out, "E"), Strings{});
}

TEST(PropagateDown, DimensionFilter)
{
    Schema s = fixtures::down1();
    auto D = s.concept_ref("D");
    ConstraintSet cs;
    cs.restrict(Possibility::only(s, D, {s.item(D, "1"), s.item(D, "3")}));
    DimensionFilter only_chain{{s.concept_ref("C").index, {"d"}}, {s.concept_ref("B").index, {"c"}}};
    auto out = propagate_down(s, cs, only_chain);
    EXPECT_EQ(impossible_ids(s, out, "B"), (Strings{"b2", "b3"}));
    EXPECT_EQ(impossible_ids(s, out, "A"), Strings{});
}

TEST(PropagateUp, Flat1SingleBottomItem)
{
    Schema s = fixtures::flat1();
    auto Z = s.concept_ref("Z");
    ConstraintSet cs;
    cs.restrict(Possibility::only(s, Z, {s.item(Z, "12")}));
    auto out = propagate_up(s, cs);
    EXPECT_EQ(possible_ids(s, out, "X"), (Strings{"7"}));
    EXPECT_EQ(possible_ids(s, out, "Y"), (Strings{"10"}));
    EXPECT_EQ(possible_ids(s, out, "U"), (Strings{"1"}));
    EXPECT_EQ(possible_ids(s, out, "V"), (Strings{"3"}));
    EXPECT_EQ(possible_ids(s, out, "W"), (Strings{"5"}));
    EXPECT_EQ(possible_ids(s, out, "Z"), (Strings{"12"}));
}

TEST(PropagateUp, NoPossibleSeeds)
{
    Schema s = fixtures::flat1();
    ConstraintSet cs;
    cs.restrict(Possibility::all(s, s.concept_ref("Z"), false));
    auto out = propagate_up(s, cs);
    for (auto c : s.concepts())
        EXPECT_TRUE(out.get(s, c).possible_items(s).empty()) << s.concept_name(c);
}

TEST(PropagateUp, AllBottomPossibleKeepsUsedItems)
{
    Schema s = fixtures::flat1();
    ConstraintSet cs;
    cs.restrict(Possibility::all(s, s.concept_ref("Z")));
    auto out = propagate_up(s, cs);
    EXPECT_EQ(possible_ids(s, out, "X"), (Strings{"7"}));
    EXPECT_EQ(possible_ids(s, out, "Y"), (Strings{"10", "11"}));
    EXPECT_EQ(possible_ids(s, out, "V"), (Strings{"3", "4"}));
    EXPECT_EQ(possible_ids(s, out, "U"), (Strings{"1"}));
}

TEST(PropagateUp, SeedsAreLowestConstrainedConcepts)
{
    Schema s = fixtures::flat1();
    ConstraintSet cs;
    cs.restrict(Possibility::all(s, s.concept_ref("X")));
    cs.restrict(Possibility::all(s, s.concept_ref("U")));
    auto seeds = seed_concepts(s, cs);
    ASSERT_EQ(seeds.size(), 1u);
    EXPECT_EQ(seeds[0], s.concept_ref("X"));
}

TEST(Consistency, StaticConstraints)
{
    Schema s = fixtures::group1();
    ConstraintSet none(ConstraintKind::static_);
    EXPECT_TRUE(check_consistency(s, none));

    ConstraintSet bad(ConstraintKind::static_);
    auto emp = s.concept_ref("Employees");
    auto p = Possibility::all(s, emp);
    p.set(s.item(emp, "e03"), false);
    bad.restrict(p);
    EXPECT_FALSE(check_consistency(s, bad));
    EXPECT_EQ(fixtures::ids(s, consistency_violations(s, bad)), (Strings{"e03"}));
}

TEST(Consistency, ZeroOnUnstoredValue)
{
    Schema s = fixtures::group1();
    auto ages = s.concept_ref("Ages");
    auto ghost = s.add_value(ages, std::int64_t{99});
    ConstraintSet cs(ConstraintKind::static_);
    auto p = Possibility::all(s, ages);
    p.set(ghost, false);
    cs.restrict(p);
    s.remove_item(ghost);
    EXPECT_TRUE(check_consistency(s, cs));
}

TEST(Restrict, RemovesImpossibleItemsBottomUp)
{
    Schema s = fixtures::flat1();
    auto V = s.concept_ref("V");
    ConstraintSet cs;
    cs.restrict(Possibility::only(s, V, {s.item(V, "4")}));
    Schema r = restrict_schema(s, cs);
    EXPECT_EQ(r.total_items(), s.total_items() - 5);
    EXPECT_FALSE(r.find_item(r.concept_ref("Z"), "12"));
    EXPECT_TRUE(r.validate().ok());
    EXPECT_EQ(s.total_items(), 13u);
}

TEST(Infer, Inf1SingleSource)
{
    Schema s = fixtures::inf1();
    auto X = s.concept_ref("X");
    auto Y = s.concept_ref("Y");
    auto out = infer(s, {InferSource{Possibility::only(s, X, {s.item(X, "x1")}), DimPath{"x"}}}, InferTarget{Y, DimPath{"y"}});
    EXPECT_EQ(fixtures::sorted_ids(s, out.possible_items(s)), (Strings{"y1", "y2"}));
    auto back = infer(s, {InferSource{Possibility::only(s, Y, {s.item(Y, "y3")}), DimPath{"y"}}}, InferTarget{X, DimPath{"x"}});
    EXPECT_EQ(fixtures::sorted_ids(s, back.possible_items(s)), (Strings{"x2", "x3"}));
}

TEST(Infer, NoSourcesGivesUsedValues)
{
    Schema s = fixtures::inf1();
    auto out = infer(s, {}, InferTarget{s.concept_ref("Y"), DimPath{"y"}});
    EXPECT_EQ(out.possible_items(s).size(), 4u);
    auto xs = infer(s, {}, InferTarget{s.concept_ref("X"), DimPath{"x"}});
    EXPECT_EQ(xs.possible_items(s).size(), 3u);
}

TEST(Infer, DisjointSources)
{
    Schema s = fixtures::inf1();
    auto X = s.concept_ref("X");
    auto Y = s.concept_ref("Y");
    auto out = infer(s,
                     {InferSource{Possibility::only(s, X, {s.item(X, "x1")}), DimPath{"x"}},
                      InferSource{Possibility::only(s, Y, {s.item(Y, "y4")}), DimPath{"y"}}},
                     InferTarget{Y, DimPath{"y"}});
    EXPECT_TRUE(out.possible_items(s).empty());
}

TEST(Infer, NullSlotsNeverSurvive)
{
    Schema s = fixtures::inf1();
    auto X = s.concept_ref("X");
    auto out = infer(s, {InferSource{Possibility::all(s, X), DimPath{"x"}}}, InferTarget{s.concept_ref("Y"), DimPath{"y"}});
    EXPECT_EQ(fixtures::sorted_ids(s, out.possible_items(s)), (Strings{"y1", "y2", "y3"}));
}

TEST(Infer, Errors)
{
    Schema s = fixtures::inf1();
    auto X = s.concept_ref("X");
    auto Y = s.concept_ref("Y");
    try {
        infer(s, {InferSource{Possibility::all(s, X), DimPath{"y"}}}, InferTarget{Y, DimPath{"y"}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::path_mismatch);
    }
    Schema loose;
    loose.define_concept("A");
    loose.define_concept("B");
    try {
        infer(loose, {}, InferTarget{loose.concept_ref("A"), DimPath{}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::no_bottom);
    }
}
