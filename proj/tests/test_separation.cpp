#include <gtest/gtest.h>

#include "coarse/fixtures.hpp"
#include "coarse/separation.hpp"
#include "support.hpp"

using namespace coarse;

namespace {

bool is_b_word(const Element& e) { return !e.empty() && std::abs(e[0]) == 2; }

// Deep components of X - N_A(W) by flood fill on the Floyd matrix.
int oracle_deep(const MetricSpace& x, const Mask& w, int r, int a, int collar) {
    auto dist = oracle::floyd(support::adjacency(x));
    auto dw = x.distances_from(w);
    const auto& depth = x.window().depth;
    int R = x.window().radius, deep = 0;
    for (const auto& c : oracle::flood_fill(dist, [&](std::size_t p) { return dw[p] > a; }, r)) {
        bool reach = false, leave = false;
        for (auto p : c) {
            reach |= depth[p] > R - collar;
            leave |= dw[p] > a;
        }
        if (reach && leave) ++deep;
    }
    return deep;
}

}

TEST(Boundary, Examples) {
    auto b = support::z_ball(1, 10);
    auto c = support::select(b, [](const Element& e) { return e[0] >= 3; });
    auto bd = coarse_boundary(b.space, c, 2);
    EXPECT_TRUE(bd == support::select(b, [](const Element& e) { return e[0] == 1 || e[0] == 2; }));
    EXPECT_TRUE(coarse_boundary(b.space, b.space.none(), 1).empty());
    EXPECT_THROW(coarse_boundary(b.space, c, 0), Error);
}

TEST(Complementary, HalfPlaneAndStrip) {
    auto b = support::z_ball(2, 8);
    auto axis = support::select(b, [](const Element& e) { return e[1] == 0; });
    auto upper = support::select(b, [](const Element& e) { return e[1] > 0; });
    EXPECT_TRUE(is_coarse_complementary(b.space, axis, upper, 1, 0));
    EXPECT_TRUE(is_coarse_complementary(b.space, axis, upper, 3, 2));
    EXPECT_TRUE(is_coarse_complementary(b.space, axis, upper, 3, 1));
    EXPECT_FALSE(is_coarse_complementary(b.space, axis, upper, 3, 0));
    auto quadrant = support::select(b, [](const Element& e) { return e[0] > 0 && e[1] > 0; });
    EXPECT_FALSE(is_coarse_complementary(b.space, axis, quadrant, 1, 1));
}

TEST(Components, AxisSplitsPlane) {
    auto b = support::z_ball(2, 10);
    auto axis = subgroup_trace(b, SubgroupSpec::axis(0));
    auto cs = complement_components(b.space, axis, 1, 2);
    EXPECT_EQ(cs.deep_count(), 2u);
    EXPECT_EQ(static_cast<int>(cs.deep_count()), oracle_deep(b.space, axis, 1, 2, 1));
    for (const auto& c : cs.components) EXPECT_FALSE(c.intersects(thicken(b.space, axis, 2)));
}

TEST(Components, PointSplitsLine) {
    auto b = support::z_ball(1, 10);
    auto origin = Mask::of(b.space.size(), {b.identity_id()});
    auto cs = complement_components(b.space, origin, 1, 0);
    EXPECT_EQ(cs.deep_count(), 2u);
    EXPECT_EQ(oracle_deep(b.space, origin, 1, 0, 1), 2);
}

TEST(Components, PointDoesNotSplitPlane) {
    auto b = support::z_ball(2, 8);
    auto origin = Mask::of(b.space.size(), {b.identity_id()});
    EXPECT_EQ(complement_components(b.space, origin, 1, 1).deep_count(), 1u);
}

TEST(Components, CyclicSubgroupOfFreeGroup) {
    std::vector<std::pair<MetricSpace, Mask>> windows;
    std::vector<int> oracle_counts;
    for (int R : {4, 5, 6}) {
        auto b = support::f2_ball(R);
        auto h = subgroup_trace(b, SubgroupSpec::axis(0));
        oracle_counts.push_back(oracle_deep(b.space, h, 1, 0, 1));
        windows.emplace_back(b.space, h);
    }
    auto rep = coarse_n_separation(windows, 1, 0);
    ASSERT_EQ(rep.windows.size(), 3u);
    for (std::size_t t = 0; t < 3; ++t) {
        EXPECT_GE(rep.windows[t].deep, 3);
        EXPECT_EQ(rep.windows[t].deep, oracle_counts[t]);
    }
    EXPECT_EQ(rep.trend, Trend::growing);
    EXPECT_EQ(rep.e_tilde, rep.windows.back().deep);
}

TEST(Components, StableCountOnPlane) {
    std::vector<std::pair<MetricSpace, Mask>> windows;
    for (int R : {8, 9, 10}) {
        auto b = support::z_ball(2, R);
        windows.emplace_back(b.space, subgroup_trace(b, SubgroupSpec::axis(0)));
    }
    auto rep = coarse_n_separation(windows, 1, 1);
    EXPECT_EQ(rep.trend, Trend::bounded);
    EXPECT_EQ(rep.e_tilde, 2);
}

TEST(Algebra, ClosureOfHalfPlanes) {
    auto b = support::z_ball(2, 8);
    auto axis = support::select(b, [](const Element& e) { return e[1] == 0; });
    auto cs = complement_components(b.space, axis, 1, 0);
    ASSERT_EQ(cs.deep_count(), 2u);
    auto res = component_algebra(cs, cs.components[0], cs.components[1]);
    ASSERT_EQ(res.size(), 4u);
    for (const auto& r : res) EXPECT_TRUE(r.complementary) << r.op;
    EXPECT_TRUE(res[2].mask.empty());
}

TEST(Invariance, PlaneHalvesAreInvariant) {
    auto b = support::z_ball(2, 10);
    auto h = SubgroupSpec::axis(0);
    auto cs = complement_components(b.space, subgroup_trace(b, h), 1, 1);
    auto rep = invariant_components(b, h, cs);
    for (auto v : rep.verdicts) EXPECT_EQ(v, Invariance::invariant);
    EXPECT_EQ(rep.e_count, 2);
}

TEST(Invariance, FreeGroupComponentsMove) {
    auto b = support::f2_ball(5);
    auto h = SubgroupSpec::axis(0);
    auto cs = complement_components(b.space, subgroup_trace(b, h), 1, 0);
    auto rep = invariant_components(b, h, cs);
    for (auto v : rep.verdicts) EXPECT_EQ(v, Invariance::not_invariant);
    // Components a^k b... and a^k b^-1... form two orbit classes.
    EXPECT_EQ(rep.e_count, 2);
    EXPECT_LT(rep.e_count, static_cast<int>(cs.deep_count()));
}

TEST(Invariance, MismatchedSubgroupRejected) {
    auto b = support::z_ball(2, 6);
    auto cs = complement_components(b.space, subgroup_trace(b, SubgroupSpec::axis(0)), 1, 1);
    try {
        invariant_components(b, SubgroupSpec::axis(1), cs);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "parameter-mismatch");
    }
}

TEST(Stabilizer, HalfPlaneStabilizedByAxis) {
    auto b = support::z_ball(2, 10);
    auto up = support::select(b, [](const Element& e) { return e[1] > 0; });
    auto st = stabilizer_trace(b, SubgroupSpec::axis(0), up, 1);
    EXPECT_TRUE(st.trace == st.subgroup);
    EXPECT_EQ(st.hausdorff, 0);
    auto quadrant = support::select(b, [](const Element& e) { return e[0] > 0 && e[1] > 0; });
    auto q = stabilizer_trace(b, SubgroupSpec::axis(0), quadrant, 1);
    EXPECT_LT(q.size, st.size);
    EXPECT_TRUE(q.trace.test(b.identity_id()));
}

TEST(AlmostInvariant, PlaneHalf) {
    auto b = support::z_ball(2, 10);
    auto up = support::select(b, [](const Element& e) { return e[1] > 0; });
    for (int a : {0, 1, 2}) {
        auto rep = almost_invariant_extract(b, SubgroupSpec::axis(0), up, a);
        EXPECT_TRUE(rep.xhat == support::select(b, [&](const Element& e) { return e[1] >= -a; })) << a;
        EXPECT_TRUE(rep.right_invariant);
        EXPECT_TRUE(rep.agrees_off_neighborhood);
        EXPECT_EQ(rep.status, "proper");
    }
}

TEST(AlmostInvariant, FreeGroupBWords) {
    auto b = support::f2_ball(6);
    auto bw = support::select(b, is_b_word);
    auto rep = almost_invariant_extract(b, SubgroupSpec::axis(0), bw, 1);
    auto h = subgroup_trace(b, SubgroupSpec::axis(0));
    auto off = ~b.space.window().collar(b.space.size(), 1);
    EXPECT_TRUE((rep.xhat & off) == ((bw | h) & off));
    EXPECT_TRUE(rep.right_invariant);
    EXPECT_EQ(rep.status, "proper");
}

TEST(AlmostInvariant, ShallowSetIsNotProper) {
    auto b = support::z_ball(2, 10);
    auto blob = support::select(b, [](const Element& e) { return e[1] > 0 && e[1] <= 2 && std::abs(e[0]) <= 2; });
    auto rep = almost_invariant_extract(b, SubgroupSpec::axis(0), blob, 1);
    EXPECT_EQ(rep.status, "not-proper");
}

TEST(ShallowBound, Examples) {
    std::vector<int> grid{0, 1, 2, 3, 4, 5, 6, 7, 8};
    auto b = support::z_ball(2, 10);
    auto axis = subgroup_trace(b, SubgroupSpec::axis(0));
    auto plane = shallow_bound_check(b.space, axis, 1, 2, grid);
    ASSERT_TRUE(plane.bound.has_value());
    EXPECT_EQ(*plane.bound, 2);
    EXPECT_EQ(plane.shallow_components, 0u);

    auto f = support::f2_ball(6);
    auto free = shallow_bound_check(f.space, subgroup_trace(f, SubgroupSpec::axis(0)), 1, 0, grid);
    EXPECT_EQ(free.bound, 0);

    auto pocket = grid_fixture("slit_pocket", 10);
    auto sb = shallow_bound_check(pocket.space, pocket.w, 1, 0, grid);
    EXPECT_EQ(sb.shallow_components, 1u);
    EXPECT_EQ(sb.bound, 3);
    EXPECT_FALSE(shallow_bound_check(pocket.space, pocket.w, 1, 0, {0, 1, 2}).bound.has_value());
}

TEST(NeighborhoodCheck, HalfPlane) {
    auto b = support::z_ball(2, 8);
    auto axis = support::select(b, [](const Element& e) { return e[1] == 0; });
    auto up = support::select(b, [](const Element& e) { return e[1] > 0; });
    EXPECT_TRUE(neighborhood_component_check(b.space, axis, up, 0, 4));
    auto quadrant = support::select(b, [](const Element& e) { return e[0] > 0 && e[1] > 0; });
    EXPECT_FALSE(neighborhood_component_check(b.space, axis, quadrant, 0, 2));
}

TEST(Dichotomy, SimplicesStayOnOneSide) {
    auto b = support::z_ball(2, 6);
    auto axis = support::select(b, [](const Element& e) { return e[1] == 0; });
    auto up = support::select(b, [](const Element& e) { return e[1] > 0; });
    auto k = build_rips(b.space, b.space.all(), 2, 2);
    EXPECT_TRUE(simplex_dichotomy(k, thicken(b.space, axis, 1), up));
    EXPECT_FALSE(simplex_dichotomy(k, thicken(b.space, axis, 0), up));
}
