#include <gtest/gtest.h>

#include <random>

#include "coarse/gf2.hpp"
#include "coarse/homology.hpp"
#include "coarse/metric.hpp"
#include "coarse/rips.hpp"
#include "support.hpp"

using namespace coarse;
using support::to_bits;
using support::to_dense;
using support::to_sparse;

TEST(Gf2, IdentityRank) { EXPECT_EQ(gf2::rank(gf2::Matrix::identity(3)), 3u); }

TEST(Gf2, ZeroRightHandSideAlwaysSolvable) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto m = to_sparse(oracle::random_sparse(15, 12, 0.3, rng));
        auto x = gf2::solve(m, Column{});
        ASSERT_TRUE(x.has_value());
        EXPECT_TRUE(m.apply(*x).empty());
    }
}

TEST(Gf2, ColumnArithmetic) {
    Column a{1, 3, 5}, b{3, 4};
    EXPECT_EQ(gf2::sum(a, b), (Column{1, 4, 5}));
    EXPECT_TRUE(gf2::dot(a, b));
    EXPECT_FALSE(gf2::dot(a, Column{0, 2}));
    EXPECT_EQ(gf2::from_indices({4, 1, 4, 2}), (Column{1, 2}));
}

TEST(Gf2, RandomRankAgainstDenseElimination) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        auto d = oracle::random_sparse(40, 40, t % 2 ? 0.05 : 0.2, rng);
        EXPECT_EQ(gf2::rank(to_sparse(d)), oracle::rank(d)) << "trial " << t;
    }
}

TEST(Gf2, SolveAgreesWithDense) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        auto d = oracle::random_sparse(30, 25, 0.1, rng);
        auto m = to_sparse(d);
        oracle::Bits b(30);
        std::bernoulli_distribution bit(0.3);
        for (auto& v : b) v = bit(rng);
        auto ref = oracle::solve(d, b);
        auto x = gf2::solve(m, support::to_column(b));
        ASSERT_EQ(ref.has_value(), x.has_value()) << "trial " << t;
        if (x) {
            EXPECT_EQ(oracle::multiply(d, to_bits(*x, 25)), b);
        }
    }
}

TEST(Gf2, KernelSpanMatchesDense) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        auto d = oracle::random_sparse(20, 30, 0.15, rng);
        auto k = gf2::kernel_vectors(to_sparse(d));
        std::vector<oracle::Bits> ours;
        for (auto& v : k) ours.push_back(to_bits(v, 30));
        EXPECT_EQ(oracle::canonical_span(ours, 30), oracle::canonical_span(oracle::kernel(d), 30));
    }
}

TEST(Gf2, ImageBasisSpansColumns) {
    std::mt19937_64 rng(14);
    auto d = oracle::random_sparse(25, 18, 0.2, rng);
    auto m = to_sparse(d);
    auto img = gf2::image_basis(m);
    EXPECT_EQ(img.dim(), oracle::rank(d));
    for (const auto& c : m.columns()) EXPECT_TRUE(img.contains(c));
}

TEST(Gf2, RankOfTransposeAndNullity) {
    std::mt19937_64 rng(15);
    for (int t = 0; t < 20; ++t) {
        auto m = to_sparse(oracle::random_sparse(17, 23, 0.12, rng));
        EXPECT_EQ(gf2::rank(m), gf2::rank(m.transpose()));
        EXPECT_EQ(gf2::rank(m) + gf2::kernel_vectors(m).size(), m.cols());
    }
}

TEST(Gf2, ReducerTagsReproduceInsertedVectors) {
    std::mt19937_64 rng(16);
    auto m = to_sparse(oracle::random_sparse(20, 30, 0.15, rng));
    gf2::Reducer red(20, true);
    for (std::size_t j = 0; j < m.cols(); ++j) red.insert(m.col(j), Column{static_cast<Index>(j)});
    for (std::size_t i = 0; i < red.rank(); ++i) {
        Column combo;
        for (Index j : red.tags()[i]) gf2::add_into(combo, m.col(j));
        EXPECT_EQ(combo, red.basis()[i]);
    }
}

TEST(Gf2, ProductAndTranspose) {
    std::mt19937_64 rng(17);
    auto a = oracle::random_sparse(7, 9, 0.3, rng), b = oracle::random_sparse(9, 5, 0.3, rng);
    auto p = to_dense(to_sparse(a) * to_sparse(b));
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            std::uint8_t s = 0;
            for (std::size_t k = 0; k < 9; ++k) s ^= a.a[i][k] & b.a[k][j];
            EXPECT_EQ(p.a[i][j], s);
        }
    EXPECT_TRUE(to_sparse(a).transpose().transpose() == to_sparse(a));
}

namespace {

MetricSpace lattice_space(int radius) { return support::z_ball(2, radius).space; }

}

TEST(TwoScale, IdentityMapGivesHomologyRank) {
    auto x = lattice_space(3);
    Mask ring(x.size());
    for (PointId p = 0; p < x.size(); ++p)
        if (x.window().depth[p] >= 2) ring.set(p);
    auto k = build_rips(x, ring, 1, 2);
    auto r = gf2::quotient_image_rank(k.boundary(1), k.boundary(2), gf2::Matrix::identity(k.count(1)));
    // The L1 annulus 2 <= |p| <= 3 at scale 1 is a cycle of squares: one hole.
    auto dist = oracle::l1_ball(2, 3);
    auto keep = [&](std::size_t i) { return std::abs(dist.points[i][0]) + std::abs(dist.points[i][1]) >= 2; };
    EXPECT_EQ(r.rank, oracle::reduced_betti(oracle::flag_complex(dist.dist, keep, 1, 2), 1));
    EXPECT_EQ(r.rank, 1u);
}

TEST(TwoScale, FarPointsJoinInConnectedWindow) {
    auto x = lattice_space(4);
    Mask two = Mask::of(x.size(), {*x.find({-4, 0}), *x.find({4, 0})});
    auto inner = build_rips(x, two, 1, 1);
    auto outer = build_rips(x, x.all(), 1, 1);
    auto f = inclusion_matrix(inner, outer, 0);
    EXPECT_EQ(gf2::quotient_image_rank(inner.boundary(0), outer.boundary(1), f).rank, 0u);
    EXPECT_EQ(gf2::quotient_image_rank(inner.boundary(0), inner.boundary(1), gf2::Matrix::identity(2)).rank, 1u);
}

TEST(TwoScale, SquareCyclesDieInBallButHoleSurvivesInAnnulus) {
    const int R = 4;
    auto x = lattice_space(R);
    Mask ring(x.size());
    for (PointId p = 0; p < x.size(); ++p)
        if (x.window().depth[p] >= 2) ring.set(p);
    auto inner = build_rips(x, ring, 1, 1);
    auto ball = build_rips(x, x.all(), 2, 2);
    auto annulus = build_rips(x, ring, 2, 2);
    EXPECT_EQ(gf2::quotient_image_rank(inner.boundary(1), ball.boundary(2), inclusion_matrix(inner, ball, 1)).rank, 0u);
    auto r = gf2::quotient_image_rank(inner.boundary(1), annulus.boundary(2), inclusion_matrix(inner, annulus, 1));
    EXPECT_EQ(r.rank, 1u);

    auto l = oracle::l1_ball(2, R);
    auto keep = [&](std::size_t i) { return std::abs(l.points[i][0]) + std::abs(l.points[i][1]) >= 2; };
    EXPECT_EQ(oracle::reduced_betti(oracle::flag_complex(l.dist, keep, 2, 2), 1), 1u);
    EXPECT_EQ(oracle::reduced_betti(oracle::flag_complex(l.dist, [](std::size_t) { return true; }, 2, 2), 1), 0u);
}
