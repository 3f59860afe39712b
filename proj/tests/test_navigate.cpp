#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace comdb;

namespace {

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

class Nav1 : public ::testing::Test {
protected:
    Schema s = fixtures::nav1();
    ConceptRef C = s.concept_ref("C");
    ConceptRef D = s.concept_ref("D");
    ConceptRef F = s.concept_ref("F");

    std::vector<std::string> ids(const Collection& c) const { return fixtures::ids(s, c.members); }
    std::vector<std::string> sorted(const Collection& c) const { return fixtures::sorted_ids(s, c.members); }
};

using Strings = std::vector<std::string>;

} // namespace

TEST_F(Nav1, ProjectDeduplicates)
{
    EXPECT_EQ(sorted(project(s, all_items(s, C), DimPath{"d"})), (Strings{"2", "3"}));
    EXPECT_EQ(ids(project(s, project(s, all_items(s, F), DimPath{"f"}), DimPath{"d"})), (Strings{"3"}));
    EXPECT_EQ(ids(project(s, all_items(s, F), DimPath{"f", "d"})), (Strings{"3"}));
}

TEST_F(Nav1, DotKeepsDuplicates)
{
    auto r = dot(s, all_items(s, F), DimPath{"f", "d"});
    EXPECT_EQ(ids(r.collection), (Strings{"3", "3", "3"}));
    EXPECT_EQ(r.dropped_nulls, 0u);
    auto mixed = dot(s, project(s, all_items(s, F), DimPath{"f"}), DimPath{"d"});
    EXPECT_EQ(ids(mixed.collection), (Strings{"3", "3"}));
}

TEST_F(Nav1, Deproject)
{
    EXPECT_EQ(sorted(deproject(s, all_items(s, C), DimPath{"f"}, F)), (Strings{"4", "5", "6"}));
    auto values = collection_of(s, D, {"2", "3"});
    EXPECT_EQ(sorted(deproject(s, values, DimPath{"f", "d"}, F)), (Strings{"4", "5", "6"}));
    EXPECT_TRUE(deproject(s, collection_of(s, D, {"1"}), DimPath{"d"}, C).empty());
    EXPECT_EQ(ids(deproject(s, collection_of(s, D, {"2"}), DimPath{"d"}, C)), (Strings{"i1"}));
}

TEST_F(Nav1, DeprojectIntoCollection)
{
    Collection only5 = collection_of(s, F, {"5", "5"});
    auto r = deproject(s, all_items(s, C), DimPath{"f"}, only5);
    EXPECT_EQ(ids(r), (Strings{"5"}));
}

TEST_F(Nav1, Zigzag)
{
    auto start = collection_of(s, F, {"4"});
    auto turn = eval_path(s, start,
                          {PathStep::up(DimPath{"f"}), PathStep::up(DimPath{"d"}), PathStep::down(DimPath{"d"}, C),
                           PathStep::down(DimPath{"f"}, F)});
    EXPECT_EQ(sorted(turn), (Strings{"4", "5", "6"}));
    auto back = eval_path(s, turn, {PathStep::up(DimPath{"f"}), PathStep::up(DimPath{"d"})});
    EXPECT_EQ(ids(back), (Strings{"3"}));
    auto along = eval_path(s, turn, {PathStep::along(DimPath{"f", "d"})});
    EXPECT_EQ(along.size(), 3u);
}

TEST_F(Nav1, PathErrors)
{
    EXPECT_EQ(code_of([&] { deproject(s, all_items(s, D), DimPath{"f"}, F); }), Errc::domain_mismatch);
    EXPECT_EQ(code_of([&] { project(s, all_items(s, F), DimPath{"g"}); }), Errc::unknown_dimension);
    EXPECT_EQ(code_of([&] { collection_of(s, F, {"99"}); }), Errc::unknown_item);
    EXPECT_EQ(code_of([&] { intersect(all_items(s, C), all_items(s, F)); }), Errc::domain_mismatch);
}

TEST(Navigate, NullWalksDrop)
{
    Schema s = fixtures::nav1();
    s.add_item(s.concept_ref("F"), "7");
    auto all = all_items(s, s.concept_ref("F"));
    EXPECT_EQ(project(s, all, DimPath{"f"}).size(), 2u);
    auto d = dot(s, all, DimPath{"f", "d"});
    EXPECT_EQ(d.collection.size(), 3u);
    EXPECT_EQ(d.dropped_nulls, 1u);
}

TEST(Navigate, MultiDimensional)
{
    Schema s;
    s.define_concept("P");
    s.define_concept("Pairs", {{"a", "P"}, {"b", "P"}});
    auto P = s.concept_ref("P");
    auto pairs = s.concept_ref("Pairs");
    for (auto id : {"p", "q", "r"})
        s.add_item(P, id);
    s.add_item(pairs, "pq", {{"a", s.item(P, "p")}, {"b", s.item(P, "q")}});
    s.add_item(pairs, "pp", {{"a", s.item(P, "p")}, {"b", s.item(P, "p")}});
    s.add_item(pairs, "rq", {{"a", s.item(P, "r")}, {"b", s.item(P, "q")}});
    auto all = all_items(s, pairs);
    EXPECT_EQ(fixtures::sorted_ids(s, multi_project(s, all, {"a", "b"}).members), (std::vector<std::string>{"p"}));
    EXPECT_EQ(fixtures::ids(s, multi_deproject(s, collection_of(s, P, {"p"}), {"a", "b"}, pairs).members),
              (std::vector<std::string>{"pp"}));
    EXPECT_EQ(fixtures::sorted_ids(s, multi_deproject(s, collection_of(s, P, {"p", "q"}), {"a", "b"}, pairs).members),
              (std::vector<std::string>{"pp", "pq"}));
    EXPECT_THROW(multi_project(s, all, {}), Error);
}

TEST(Navigate, MultiProjectNeedsSharedDomain)
{
    Schema s = fixtures::flat1();
    EXPECT_THROW(multi_project(s, all_items(s, s.concept_ref("X")), {"u", "v"}), Error);
}

TEST(Navigate, FullDeprojection)
{
    Schema s = fixtures::flat1();
    auto x7 = collection_of(s, s.concept_ref("X"), {"7"});
    EXPECT_EQ(fixtures::sorted_ids(s, full_deproject(s, x7)), (std::vector<std::string>{"12", "13"}));
    auto v4 = collection_of(s, s.concept_ref("V"), {"4"});
    EXPECT_TRUE(full_deproject(s, v4).empty()); // 4 sits on x.v in one row and y.v in the other
    auto y11 = collection_of(s, s.concept_ref("Y"), {"11"});
    EXPECT_EQ(fixtures::ids(s, full_deproject(s, y11)), (std::vector<std::string>{"13"}));
}

TEST(Navigate, ProjectMatchesWalkOnRandomModels)
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Schema s = fixtures::random_model(seed);
        auto z = s.require_bottom();
        for (const auto& path : s.concept_paths(z, std::nullopt)) {
            auto up = project(s, all_items(s, z), path);
            std::set<ItemRef> want;
            for (auto r : s.items(z))
                if (auto v = s.walk(r, path))
                    want.insert(*v);
            EXPECT_EQ(std::set<ItemRef>(up.members.begin(), up.members.end()), want);
            EXPECT_EQ(up.size(), want.size());
            auto down = deproject(s, up, path, z);
            for (auto r : down.members)
                EXPECT_TRUE(s.walk(r, path));
        }
    }
}
