#include <gtest/gtest.h>

#include <random>

#include "coarse/cochain.hpp"
#include "coarse/homology.hpp"
#include "support.hpp"

using namespace coarse;
using support::to_dense;

namespace {

std::size_t oracle_dim(const CochainComplex& c, int d) {
    std::size_t nullity = c.count(d) - oracle::rank(to_dense(c.delta(d)));
    std::size_t image = d > 0 ? oracle::rank(to_dense(c.delta(d - 1))) : 0;
    return nullity - image;
}

Mask collar(const MetricSpace& x, int width = 1) { return x.window().collar(x.size(), width); }

}

TEST(Cochain, CoboundarySquaresToZero) {
    auto b = support::z_ball(2, 4);
    auto k = build_rips(b.space, b.space.all(), 2, 3);
    CochainComplex c(k, collar(b.space));
    for (int d = 0; d + 1 < c.top(); ++d) EXPECT_TRUE((c.delta(d + 1) * c.delta(d)).is_zero()) << d;
}

TEST(Cochain, RelativeLineHasOneClassInDegreeOne) {
    auto b = support::z_ball(1, 10);
    auto k = build_rips(b.space, b.space.all(), 1, 2);
    CochainComplex c(k, collar(b.space));
    CohomologyBasis h0(c, 0), h1(c, 1);
    EXPECT_EQ(h0.dim(), 0u);
    EXPECT_EQ(h1.dim(), 1u);
    EXPECT_EQ(h1.dim(), oracle_dim(c, 1));
}

TEST(Cochain, RelativePlaneHasOneClassInDegreeTwo) {
    auto b = support::z_ball(2, 6);
    auto k = build_rips(b.space, b.space.all(), 2, 3);
    CochainComplex c(k, collar(b.space));
    CohomologyBasis h1(c, 1), h2(c, 2);
    EXPECT_EQ(h1.dim(), 0u);
    EXPECT_EQ(h2.dim(), 1u);
    EXPECT_EQ(h2.dim(), oracle_dim(c, 2));
}

TEST(Cochain, DimensionsMatchDenseOracleOnRandomGraphs) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 6; ++t) {
        const std::size_t n = 16;
        std::vector<std::vector<PointId>> adj(n);
        std::bernoulli_distribution edge(0.25), fix(0.2);
        for (PointId i = 0; i < n; ++i)
            for (PointId j = i + 1; j < n; ++j)
                if (edge(rng)) {
                    adj[i].push_back(j);
                    adj[j].push_back(i);
                }
        auto x = MetricSpace::from_graph(adj);
        Mask fixed(n);
        for (PointId i = 0; i < n; ++i) fixed.set(i, fix(rng));
        auto k = build_rips(x, x.all(), 1, 3);
        CochainComplex c(k, fixed);
        for (int d = 0; d < 3; ++d) EXPECT_EQ(CohomologyBasis(c, d).dim(), oracle_dim(c, d)) << t << " " << d;
    }
}

TEST(Cochain, CutCochainIsCocycle) {
    auto b = support::z_ball(2, 5);
    auto k = build_rips(b.space, b.space.all(), 2, 2);
    auto upper = support::select(b, [](const Element& e) { return e[1] >= 0; });
    CochainComplex absolute(k, Mask(b.space.size()));
    auto z = cut_cochain(absolute, upper);
    EXPECT_FALSE(z.empty());
    EXPECT_TRUE(absolute.is_cocycle(1, z));
    EXPECT_NO_THROW(make_cocycle(absolute, 1, z));
    EXPECT_THROW(make_cocycle(absolute, 1, Column{0}), Error);
    // Relative to the collar the cut is a cocycle only when it misses the collar.
    CochainComplex relative(k, collar(b.space));
    EXPECT_FALSE(relative.is_cocycle(1, cut_cochain(relative, upper)));
    auto inner = support::select(b, [](const Element& e) { return std::abs(e[0]) + std::abs(e[1]) <= 2; });
    EXPECT_TRUE(relative.is_cocycle(1, cut_cochain(relative, inner)));
}

TEST(Cochain, CutOfCompactSetIsCoboundary) {
    auto b = support::z_ball(1, 10);
    auto k = build_rips(b.space, b.space.all(), 1, 2);
    CochainComplex c(k, collar(b.space));
    auto s = support::select(b, [](const Element& e) { return std::abs(e[0]) <= 3; });
    auto z = cut_cochain(c, s);
    CohomologyBasis h(c, 1);
    EXPECT_TRUE(c.is_coboundary(1, z));
    EXPECT_TRUE(h.is_zero(z));
    auto half = cut_cochain(c, support::select(b, [](const Element& e) { return e[0] >= 0; }));
    EXPECT_FALSE(h.is_zero(half));
    EXPECT_EQ(h.coordinates(half), (Column{0}));
}

TEST(Representation, ShiftsCutIntoRegion) {
    auto b = support::z_ball(1, 10);
    auto k = build_rips(b.space, b.space.all(), 1, 2);
    CochainComplex c(k, collar(b.space));
    auto z = cut_cochain(c, support::select(b, [](const Element& e) { return e[0] >= 0; }));
    auto right = support::select(b, [](const Element& e) { return e[0] >= 4 && e[0] <= 6; });
    auto r = representable_in(c, 1, z, right);
    ASSERT_TRUE(r.has_value());
    EXPECT_TRUE(verify_representation(c, 1, z, *r, right));
    EXPECT_TRUE(r->support.subset_of(right));
    auto tampered = *r;
    tampered.beta.clear();
    EXPECT_FALSE(verify_representation(c, 1, z, tampered, right));
}

TEST(Representation, ClassCannotBeMovedIntoCollar) {
    auto b = support::z_ball(1, 10);
    auto k = build_rips(b.space, b.space.all(), 1, 2);
    CochainComplex c(k, collar(b.space));
    auto z = cut_cochain(c, support::select(b, [](const Element& e) { return e[0] >= 0; }));
    EXPECT_FALSE(representable_in(c, 1, z, Mask(b.space.size())).has_value());
}

TEST(Restriction, ExtensionIsTranspose) {
    auto b = support::z_ball(2, 5);
    auto big = build_rips(b.space, b.space.all(), 2, 2);
    auto inner = b.space.window().ball(b.space.size(), 3);
    auto small = build_rips(b.space, inner, 2, 2);
    CochainComplex cb(big, collar(b.space)), cs(small, Mask(b.space.size()));
    for (int d = 0; d <= 2; ++d) {
        auto r = restriction_matrix(cb, cs, d);
        EXPECT_EQ(r.rows(), cs.count(d));
        EXPECT_TRUE(extension_matrix(cs, cb, d) == r.transpose());
        EXPECT_EQ(gf2::rank(r), cs.count(d));
    }
    EXPECT_THROW(restriction_matrix(cs, cb, 0), Error);
}

TEST(Restriction, CommutesWithCoboundary) {
    auto b = support::z_ball(2, 5);
    auto big = build_rips(b.space, b.space.all(), 2, 2);
    auto small = build_rips(b.space, b.space.window().ball(b.space.size(), 3), 2, 2);
    CochainComplex cb(big, Mask(b.space.size())), cs(small, Mask(b.space.size()));
    for (int d = 0; d < 2; ++d)
        EXPECT_TRUE(restriction_matrix(cb, cs, d + 1) * cb.delta(d) == cs.delta(d) * restriction_matrix(cb, cs, d));
}

TEST(DualCertificate, DetectsNonBoundary) {
    auto b = support::z_ball(2, 4);
    Mask ring = support::select(b, [](const Element& e) { return std::abs(e[0]) + std::abs(e[1]) >= 2; });
    auto k = build_rips(b.space, ring, 2, 2);
    auto h = reduced_homology(k, 1);
    ASSERT_EQ(h.rank, 1u);
    auto phi = dual_certificate(k, 1, h.representatives[0]);
    ASSERT_TRUE(phi.has_value());
    EXPECT_TRUE(verify_dual_certificate(k, 1, h.representatives[0], *phi));
    auto full = build_rips(b.space, b.space.all(), 2, 2);
    auto z = chain_from_simplices(full, chain_simplices(k, 1, h.representatives[0]));
    EXPECT_FALSE(dual_certificate(full, 1, z).has_value());
}
