#include <gtest/gtest.h>

#include "coarse/fixtures.hpp"
#include "coarse/group.hpp"
#include "support.hpp"

using namespace coarse;

TEST(Ball, Sizes) {
    EXPECT_EQ(support::z_ball(1, 3).elements.size(), 7u);
    EXPECT_EQ(support::f2_ball(2).elements.size(), 17u);
    EXPECT_EQ(support::z_ball(2, 2).elements.size(), 13u);
}

TEST(Ball, CapRejectsLargeWindow) {
    EXPECT_THROW(build_ball(std::make_shared<FreeGroup>(2), 6, 10), Error);
    try {
        build_ball(std::make_shared<FreeGroup>(2), 6, 10);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "window-too-large");
    }
}

TEST(Ball, WordMetricBoundsPathMetric) {
    for (auto g : std::vector<GroupPtr>{std::make_shared<FreeAbelian>(2), std::make_shared<FreeGroup>(2),
                                        std::make_shared<Lamplighter>(), std::make_shared<AmalgamZ2>()}) {
        auto b = build_ball(g, 4);
        for (PointId x = 0; x < b.elements.size(); x += 3)
            for (PointId y = 0; y < b.elements.size(); y += 5) {
                int w = b.word_distance(x, y);
                EXPECT_EQ(w, b.word_distance(y, x)) << g->describe();
                EXPECT_LE(w, b.space.distance(x, y)) << g->describe();
            }
        for (PointId x = 0; x < b.elements.size(); ++x) EXPECT_EQ(b.word_length[x], g->length(b.elements[x]));
    }
}

TEST(Ball, LeftActionIsPartialBijection) {
    auto b = support::f2_ball(4);
    auto act = b.left_action(b.group->word({1, -2}));
    std::vector<int> hits(b.elements.size(), 0);
    for (auto v : act)
        if (v >= 0) ++hits[v];
    for (int h : hits) EXPECT_LE(h, 1);
}

TEST(Subgroup, AxisOfLattice) {
    auto b = support::z_ball(2, 5);
    auto t = subgroup_trace(b, SubgroupSpec::axis(0));
    EXPECT_TRUE(t == support::select(b, [](const Element& e) { return e[1] == 0; }));
    EXPECT_EQ(t.count(), 11u);
}

TEST(Subgroup, CyclicInFreeGroup) {
    auto b = support::f2_ball(3);
    auto t = subgroup_trace(b, SubgroupSpec::axis(0));
    EXPECT_EQ(t.count(), 7u);
    for (int k = -3; k <= 3; ++k) EXPECT_TRUE(t.test(*b.id(b.group->power(b.group->word({1}), k))));
}

TEST(Subgroup, EvenLattice) {
    auto b = support::z_ball(2, 5);
    auto t = subgroup_trace(b, SubgroupSpec::of_words({{1, 1}}));
    EXPECT_TRUE(t == support::select(b, [](const Element& e) { return e[1] == 0 && e[0] % 2 == 0; }));
    EXPECT_EQ(t.count(), 5u);
}

TEST(Subgroup, BadSpecs) {
    auto b = support::f2_ball(2);
    EXPECT_THROW(subgroup_trace(b, SubgroupSpec::lattice(2)), Error);
    EXPECT_THROW(subgroup_trace(b, SubgroupSpec::axis(5)), Error);
    EXPECT_THROW(subgroup_trace(b, SubgroupSpec::of_words({{3}})), Error);
}

TEST(Commensurability, Examples) {
    auto z2 = std::make_shared<FreeAbelian>(2);
    std::vector<int> radii{4, 5, 6, 7, 8, 9, 10};
    auto even = commensurability_probe(z2, SubgroupSpec::axis(0), SubgroupSpec::of_words({{1, 1}}), radii);
    EXPECT_EQ(even.verdict, Trend::bounded);
    for (int d : even.distances) EXPECT_EQ(d, 1);
    auto cross = commensurability_probe(z2, SubgroupSpec::axis(0), SubgroupSpec::axis(1), radii);
    EXPECT_EQ(cross.verdict, Trend::growing);
    EXPECT_EQ(cross.distances, radii);
    auto f = commensurability_probe(std::make_shared<FreeGroup>(2), SubgroupSpec::axis(0),
                                    SubgroupSpec::of_words({{1, 1}}), {3, 4, 5, 6});
    EXPECT_EQ(f.verdict, Trend::bounded);
    EXPECT_EQ(f.distances.back(), 1);
}

TEST(Trend, Classification) {
    EXPECT_EQ(trend_of({1, 2, 2, 2}), Trend::bounded);
    EXPECT_EQ(trend_of({1, 2, 3}), Trend::growing);
    EXPECT_EQ(trend_of({2, 1, 2}), Trend::inconclusive);
    EXPECT_EQ(trend_of({1, 1}), Trend::inconclusive);
}

TEST(Products, FactorSubgroupAndFreeProduct) {
    auto zz = std::make_shared<DirectProduct>(std::vector<GroupPtr>{std::make_shared<FreeAbelian>(1),
                                                                     std::make_shared<FreeAbelian>(1)});
    auto b = build_ball(zz, 4);
    EXPECT_EQ(b.elements.size(), 41u);
    EXPECT_EQ(subgroup_trace(b, SubgroupSpec::factor(0)).count(), 9u);
    auto fp = std::make_shared<FreeProduct>(std::vector<GroupPtr>{std::make_shared<FreeAbelian>(1),
                                                                   std::make_shared<FreeAbelian>(1)});
    EXPECT_EQ(build_ball(fp, 2).elements.size(), support::f2_ball(2).elements.size());
}

TEST(Fixtures, Listing) {
    auto list = list_fixtures();
    EXPECT_TRUE(std::any_of(list.begin(), list.end(), [](const FixtureInfo& f) { return f.name == "fig1_halfplane_flap"; }));
    EXPECT_THROW(grid_fixture("nope", 5), Error);
}

TEST(Fixtures, HalfplaneFlap) {
    auto f = grid_fixture("fig1_halfplane_flap", 8);
    EXPECT_EQ(f.w.count(), 17u);
    for (PointId p : f.components.at("top").ids()) {
        const auto& l = f.space.label(p);
        EXPECT_FALSE(l[0] < 0 && l[1] > 0);
    }
    for (PointId p = 0; p < f.space.size(); ++p) {
        const auto& l = f.space.label(p);
        EXPECT_FALSE(l[0] < 0 && l[1] > 0) << "the quadrant x<0, y>0 is not part of the space";
    }
}

TEST(Fixtures, PlaneFin) {
    auto f = grid_fixture("fig2_plane_fin", 12);
    const auto& top = f.components.at("top");
    for (int z = 1; z <= 5; ++z) EXPECT_TRUE(top.test(*f.space.find({5, 0, z}))) << z;
    EXPECT_FALSE(f.space.find({5, 0, 6}).has_value());
}
