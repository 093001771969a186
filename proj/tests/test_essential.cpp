#include <gtest/gtest.h>

#include "coarse/essential.hpp"
#include "coarse/fixtures.hpp"
#include "coarse/mobility.hpp"
#include "support.hpp"

using namespace coarse;

namespace {

std::vector<WindowSchedule> paired(int radius) {
    std::vector<WindowSchedule> s;
    for (int S : {4, 5, 6}) s.push_back(paired_schedule(S, 1, radius));
    return s;
}

struct PlaneMV {
    BallModel ball = support::z_ball(2, 10);
    Mask axis = subgroup_trace(ball, SubgroupSpec::axis(0));
    Mask upper = support::select(ball, [](const Element& e) { return e[1] >= 2; });
    MVReport mv = mv_assemble(ball.space, axis, upper, 2, 1, 2, 3);
};

const PlaneMV& plane_mv() {
    static const PlaneMV m;
    return m;
}

}

TEST(AlmostEssential, HalfplaneFlap) {
    auto f = grid_fixture("fig1_halfplane_flap", 12);
    auto bottom = almost_essential_probe(f.space, f.w, f.components.at("bottom"), 0);
    EXPECT_EQ(bottom.b, 1);
    auto top = almost_essential_probe(f.space, f.w, f.components.at("top"), 0);
    EXPECT_FALSE(top.b.has_value());
    EXPECT_GT(top.needed, (12 - 1) / 2);
}

TEST(AlmostEssential, PlaneFinTopNeedsTwo) {
    auto f = grid_fixture("fig2_plane_fin", 10);
    EXPECT_EQ(almost_essential_probe(f.space, f.w, f.components.at("bottom"), 0).b, 1);
    EXPECT_EQ(almost_essential_probe(f.space, f.w, f.components.at("top"), 0).b, 2);
}

TEST(AlmostEssential, HalfPlaneConstantAcrossWindows) {
    for (int R : {8, 9, 10}) {
        auto b = support::z_ball(2, R);
        auto axis = subgroup_trace(b, SubgroupSpec::axis(0));
        auto up = support::select(b, [](const Element& e) { return e[1] > 0; });
        EXPECT_EQ(almost_essential_probe(b.space, axis, up, 0).b, 1) << R;
        EXPECT_FALSE(almost_essential_probe(b.space, axis, up, 0, {0}).b.has_value()) << R;
    }
}

TEST(AlmostEssential, RejectsNonComplementary) {
    auto b = support::z_ball(2, 8);
    auto axis = subgroup_trace(b, SubgroupSpec::axis(0));
    auto quadrant = support::select(b, [](const Element& e) { return e[0] > 0 && e[1] > 0; });
    EXPECT_THROW(almost_essential_probe(b.space, axis, quadrant, 0), Error);
}

TEST(Essential, PairedSchedule) {
    auto s = paired_schedule(6, 1, 12);
    EXPECT_EQ(s.outer_scale, 2);
    EXPECT_EQ(s.outer_excision, 3);
    EXPECT_EQ(paired_schedule(4, 2, 12).outer_excision, 0);
}

TEST(Essential, HalfplaneFlap) {
    auto f = grid_fixture("fig1_halfplane_flap", 12);
    auto bottom = essential_probe(f.space, f.w, f.components.at("bottom"), 1, paired(12));
    EXPECT_EQ(bottom.verdict, EssentialKind::essential);
    for (const auto& sv : bottom.schedules)
        for (const auto& pc : sv.classes) {
            EXPECT_TRUE(pc.dies);
            EXPECT_TRUE(pc.verified);
            EXPECT_FALSE(pc.fill.empty());
        }
    auto top = essential_probe(f.space, f.w, f.components.at("top"), 1, paired(12));
    EXPECT_EQ(top.verdict, EssentialKind::non_essential);
    for (const auto& sv : top.schedules)
        for (const auto& pc : sv.classes) {
            EXPECT_FALSE(pc.dies);
            EXPECT_TRUE(pc.verified);
            EXPECT_FALSE(pc.certificate.empty());
        }
}

TEST(Essential, PlaneFin) {
    auto f = grid_fixture("fig2_plane_fin", 12);
    EXPECT_EQ(essential_probe(f.space, f.w, f.components.at("bottom"), 2, paired(12)).verdict, EssentialKind::essential);
    EXPECT_EQ(essential_probe(f.space, f.w, f.components.at("top"), 2, paired(12)).verdict,
              EssentialKind::non_essential);
}

TEST(Essential, WrongDimensionIsInconclusive) {
    auto f = grid_fixture("fig1_halfplane_flap", 12);
    auto v = essential_probe(f.space, f.w, f.components.at("bottom"), 2, paired(12));
    EXPECT_EQ(v.verdict, EssentialKind::inconclusive);
    EXPECT_FALSE(v.reason.empty());
    auto small = essential_probe(f.space, f.w, f.components.at("bottom"), 1, {paired_schedule(10, 1, 12)});
    EXPECT_EQ(small.verdict, EssentialKind::inconclusive);
}

TEST(MayerVietoris, PlaneAlongAxis) {
    const auto& m = plane_mv();
    const auto& mv = m.mv;
    ASSERT_TRUE(mv.dichotomy);
    for (bool ok : mv.short_exact) EXPECT_TRUE(ok);
    for (const auto& e : mv.exactness) {
        EXPECT_TRUE(e.composite_zero) << e.spot;
        EXPECT_TRUE(e.ranks_match) << e.spot;
    }
    EXPECT_TRUE(mv.exact());
    EXPECT_EQ(mv.w.cohomology[1]->dim(), 1u);
    EXPECT_EQ(mv.x.cohomology[2]->dim(), 1u);
    EXPECT_EQ(mv.left.cohomology[1]->dim(), 0u);
}

TEST(MayerVietoris, ConnectingImageIsNonzeroAndLocal) {
    const auto& mv = plane_mv().mv;
    const Column& rho = mv.w.cohomology[1]->representatives().at(0);
    auto ci = connecting_image(mv, 1, rho);
    EXPECT_TRUE(ci.nonzero);
    EXPECT_TRUE(mv.x.cochains->is_cocycle(2, ci.output));
    auto ls = localized_boundary_support(mv, 1, rho);
    EXPECT_TRUE(ls.within());
    EXPECT_FALSE(ls.support.empty());
}

TEST(MayerVietoris, TranslateHasSameImageClass) {
    const auto& m = plane_mv();
    const auto& mv = m.mv;
    const Column& rho = mv.w.cohomology[1]->representatives().at(0);
    std::optional<Column> moved;
    for (int dx : {5, -5})
        if (!moved) moved = translate_cochain(*mv.w.cochains, 1, rho, left_by(m.ball, Element{dx, 0}));
    ASSERT_TRUE(moved.has_value());
    EXPECT_EQ(mv.w.cohomology[1]->coordinates(*moved), mv.w.cohomology[1]->coordinates(rho));
    EXPECT_EQ(connecting_image(mv, 1, *moved).coordinates, connecting_image(mv, 1, rho).coordinates);
}

TEST(MayerVietoris, CoboundaryInputGivesZero) {
    const auto& mv = plane_mv().mv;
    Column beta{0, 1, 2};
    auto rho = mv.w.cochains->delta(0).apply(beta);
    ASSERT_FALSE(rho.empty());
    EXPECT_FALSE(connecting_image(mv, 1, rho).nonzero);
}

TEST(MayerVietoris, WholeSpaceAsOneSideGivesZero) {
    auto b = support::z_ball(2, 8);
    auto axis = subgroup_trace(b, SubgroupSpec::axis(0));
    auto mv = mv_assemble(b.space, axis, b.space.all(), 2, 1, 2, 3);
    ASSERT_TRUE(mv.dichotomy);
    ASSERT_EQ(mv.w.cohomology[1]->dim(), 1u);
    EXPECT_FALSE(connecting_image(mv, 1, mv.w.cohomology[1]->representatives()[0]).nonzero);
}

TEST(MayerVietoris, RejectsNonComplementary) {
    auto b = support::z_ball(2, 6);
    auto axis = subgroup_trace(b, SubgroupSpec::axis(0));
    auto quadrant = support::select(b, [](const Element& e) { return e[0] > 0 && e[1] > 0; });
    EXPECT_THROW(mv_assemble(b.space, axis, quadrant, 2, 1, 2, 3), Error);
}

TEST(TwoSided, PlaneClassMovesToEitherSide) {
    const auto& m = plane_mv();
    const auto& mv = m.mv;
    auto omega = connecting_image(mv, 1, mv.w.cohomology[1]->representatives()[0]).output;
    auto up = support::select(m.ball, [](const Element& e) { return e[1] > 0; });
    auto down = support::select(m.ball, [](const Element& e) { return e[1] < 0; });
    auto t = two_sided_representability(*mv.x.cochains, 2, m.axis, up, down, omega, 1);
    EXPECT_EQ(t.sides, Sides::both);
    EXPECT_TRUE(t.verified);
    EXPECT_FALSE(t.class_zero);
}

TEST(TwoSided, CoboundaryIsZeroClass) {
    const auto& m = plane_mv();
    const auto& c = *m.mv.x.cochains;
    auto omega = c.delta(1).apply(Column{0, 3, 7});
    auto up = support::select(m.ball, [](const Element& e) { return e[1] > 0; });
    auto down = support::select(m.ball, [](const Element& e) { return e[1] < 0; });
    auto t = two_sided_representability(c, 2, m.axis, up, down, omega, 1);
    EXPECT_EQ(t.sides, Sides::both);
    EXPECT_TRUE(t.class_zero);
    EXPECT_TRUE(t.verified);
}
