#ifndef COARSE_MOBILITY_HPP
#define COARSE_MOBILITY_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coarse/cochain.hpp"
#include "coarse/error.hpp"
#include "coarse/gf2.hpp"
#include "coarse/group.hpp"
#include "coarse/metric.hpp"

namespace coarse {

// Membership in the coboundaries B^d of a relative complex, built once.
class CoboundarySpace {
public:
    CoboundarySpace(const CochainComplex& c, int d) : red_(c.count(d)) {
        if (d > 0)
            for (const auto& col : c.delta(d - 1).columns()) red_.insert(col);
    }
    bool contains(const Column& z) const { return red_.in_span(z); }

private:
    gf2::Reducer red_;
};

inline bool collar_safe(const MetricSpace& x, PointId g, int d, int collar) {
    const Window& w = x.window();
    for (auto [p, dist] : x.ball(g, d))
        if (w.depth[p] > w.radius - collar) return false;
    return true;
}

// alpha0 + delta beta supported in N_D(g), or nullopt.
inline std::optional<Representation> local_representability(const CochainComplex& c, int d, const Column& alpha0,
                                                             PointId g, int radius, int collar = 1) {
    const MetricSpace& x = c.complex().space;
    if (!collar_safe(x, g, radius, collar))
        throw Error("collar-violation", "N_D(g) meets the collar for g = " + std::to_string(g));
    return representable_in(c, d, alpha0, neighborhood(x, Mask::of(x.size(), {g}), radius));
}

struct MobilityResult {
    int d = 0;  // D
    Mask centers;    // collar-safe centers tried
    Mask feasible;   // centers with a witness
    Mask mob;        // union of witness supports
    std::map<PointId, Representation> witnesses;
};

inline MobilityResult mobility_set(const CochainComplex& c, int deg, const Column& alpha0, int radius,
                                   std::optional<std::vector<PointId>> centers = std::nullopt, int collar = 1) {
    const MetricSpace& x = c.complex().space;
    MobilityResult m;
    m.d = radius;
    m.centers = x.none();
    m.feasible = x.none();
    m.mob = x.none();
    std::vector<PointId> cs;
    if (centers) {
        cs = *centers;
    } else {
        for (PointId p = 0; p < x.size(); ++p) cs.push_back(p);
    }
    // Each witness is taken at the smallest radius <= D that admits one, so it stays close to g.
    for (PointId g : cs) {
        if (!collar_safe(x, g, radius, collar)) continue;
        m.centers.set(g);
        std::optional<Representation> rep;
        for (int rho = 0; rho <= radius && !rep; ++rho) rep = local_representability(c, deg, alpha0, g, rho, collar);
        if (!rep) continue;
        m.feasible.set(g);
        m.mob |= rep->support;
        m.witnesses.emplace(g, std::move(*rep));
    }
    return m;
}

// A cocycle supported in N_D(center) with nonzero class, for the smallest D up to max_d.
inline std::optional<std::pair<int, Column>> local_class(const CochainComplex& c, int deg, PointId center, int max_d) {
    const MetricSpace& x = c.complex().space;
    CoboundarySpace b(c, deg);
    for (int rad = 0; rad <= max_d; ++rad) {
        Mask u = neighborhood(x, Mask::of(x.size(), {center}), rad);
        auto in = c.inside(deg, u);
        std::vector<Index> cols;
        for (std::size_t i = 0; i < in.size(); ++i)
            if (in[i]) cols.push_back(static_cast<Index>(i));
        gf2::Matrix sub(deg < c.top() ? c.count(deg + 1) : 0, cols.size());
        if (deg < c.top())
            for (std::size_t j = 0; j < cols.size(); ++j) sub.set_col(j, c.delta(deg).col(cols[j]));
        for (const auto& k : gf2::kernel_vectors(sub)) {
            Column z;
            for (Index j : k) z.push_back(cols[j]);
            if (!b.contains(z)) return std::make_pair(rad, z);
        }
    }
    return std::nullopt;
}

// Left translate of a cochain by a group element; nullopt when it leaves the window
// or lands on fixed simplices.
template <class Act>
inline std::optional<Column> translate_cochain(const CochainComplex& c, int d, const Column& z, Act&& act) {
    const RipsComplex& k = c.complex();
    std::vector<Index> out;
    std::vector<PointId> v(d + 1);
    for (Index i : z) {
        auto s = c.vertices(d, i);
        for (int t = 0; t <= d; ++t) {
            std::optional<PointId> img = act(s[t]);
            if (!img) return std::nullopt;
            v[t] = *img;
        }
        std::sort(v.begin(), v.end());
        auto g = k.find(v);
        if (!g) return std::nullopt;
        auto l = c.local(d, *g);
        if (!l) return std::nullopt;
        out.push_back(*l);
    }
    return gf2::from_indices(std::move(out));
}

inline auto left_by(const BallModel& ball, Element g) {
    return [&ball, g = std::move(g)](PointId p) { return ball.id(ball.group->multiply(g, ball.elements[p])); };
}

struct StabMob {
    Mask stab;          // g with g.alpha0 cohomologous to alpha0
    Mask undetermined;  // transport leaves the window
    Mask orbit;         // union of g supp(alpha0) over collar-safe g in stab
    MobilityResult mob;
    int hausdorff = 0;
    int bound_radius = 0;  // replayed radius, see below
    bool within_bound() const { return hausdorff <= bound_radius; }
};

// Stabilizer trace against the mobility set. The replayed radius is the largest
// distance from a witness support (translated back to the identity and deduplicated)
// to supp(alpha0), combined with 2D for the center relaxation of Mob.
inline StabMob stab_mob_comparison(const BallModel& ball, const CochainComplex& c, int deg, const Column& alpha0,
                                   int radius, int collar = 1) {
    const MetricSpace& x = ball.space;
    StabMob out;
    out.stab = x.none();
    out.undetermined = x.none();
    out.orbit = x.none();
    CoboundarySpace b(c, deg);
    Mask supp0 = c.support(deg, alpha0);
    for (PointId g = 0; g < x.size(); ++g) {
        auto t = translate_cochain(c, deg, alpha0, left_by(ball, ball.elements[g]));
        if (!t) {
            out.undetermined.set(g);
            continue;
        }
        if (!b.contains(gf2::sum(*t, alpha0))) continue;
        out.stab.set(g);
        if (collar_safe(x, g, radius, collar)) out.orbit |= c.support(deg, *t);
    }
    out.mob = mobility_set(c, deg, alpha0, radius, std::nullopt, collar);
    if (out.orbit.empty() || out.mob.mob.empty()) return out;
    out.hausdorff = hausdorff_distance(x, out.orbit, out.mob.mob);

    std::map<Column, Mask> q;
    for (const auto& [g, rep] : out.mob.witnesses) {
        auto back = translate_cochain(c, deg, rep.witness, left_by(ball, ball.group->inverse(ball.elements[g])));
        if (!back) continue;
        q.emplace(*back, rep.support);
    }
    int r = 2 * radius;
    for (const auto& [key, sup] : q)
        if (!sup.empty()) r = std::max(r, directed_distance(x, sup, supp0));
    out.bound_radius = r;
    return out;
}

struct DetectorStep {
    int d = 0;
    bool covered = false;
    std::size_t feasible = 0;
    std::size_t mob = 0;
};

struct DetectorResult {
    std::vector<DetectorStep> steps;
    std::string verdict;  // "manifold", "not-manifold" or "inconclusive"
};

// True at D when the window minus the collar lies in N_D(Mob([alpha0], D)).
inline DetectorResult coarse_manifold_detector(const CochainComplex& c, int deg, const Column& alpha0,
                                               const std::vector<int>& schedule, int collar = 1) {
    const MetricSpace& x = c.complex().space;
    if (alpha0.empty() || CoboundarySpace(c, deg).contains(alpha0))
        throw Error("zero-class", "detector needs a nonzero class");
    DetectorResult out;
    Mask interior = ~x.window().collar(x.size(), collar);
    for (int d : schedule) {
        auto m = mobility_set(c, deg, alpha0, d, std::nullopt, collar);
        DetectorStep s;
        s.d = d;
        s.feasible = m.feasible.count();
        s.mob = m.mob.count();
        s.covered = !m.mob.empty() && interior.subset_of(neighborhood(x, m.mob, d));
        out.steps.push_back(s);
    }
    bool seen = false, monotone = true;
    for (const auto& s : out.steps) {
        if (s.covered)
            seen = true;
        else if (seen)
            monotone = false;
    }
    out.verdict = !seen ? "not-manifold" : (monotone ? "manifold" : "inconclusive");
    return out;
}

}

#endif
