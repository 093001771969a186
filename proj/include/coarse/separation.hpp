#ifndef COARSE_SEPARATION_HPP
#define COARSE_SEPARATION_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/group.hpp"
#include "coarse/metric.hpp"
#include "coarse/rips.hpp"

namespace coarse {

// Points outside c within r of c.
inline Mask coarse_boundary(const MetricSpace& x, const Mask& c, int r) {
    if (r < 1) throw Error("bad-parameter", "boundary width must be positive");
    if (c.empty()) return x.none();
    return neighborhood(x, c, r) - c;
}

inline Mask thicken(const MetricSpace& x, const Mask& w, int a) { return w.empty() ? x.none() : neighborhood(x, w, a); }

inline Mask noncollar(const MetricSpace& x, int collar) {
    if (!x.has_window()) return x.all();
    return ~x.window().collar(x.size(), collar);
}

// The containment  boundary_r(C - N_A(W)) within N_A(W), checked off the collar.
inline bool is_coarse_complementary(const MetricSpace& x, const Mask& w, const Mask& c, int r, int a, int collar = 1) {
    if (a < 0) throw Error("bad-parameter", "thickening must be non-negative");
    Mask na = thicken(x, w, a);
    Mask bd = coarse_boundary(x, c - na, r) & noncollar(x, collar);
    return bd.subset_of(na);
}

struct ComponentSet {
    MetricSpace space = MetricSpace::from_graph({});
    Mask w;
    int r = 1;
    int a = 0;
    int rho = 0;
    int collar = 1;
    std::vector<Mask> components;  // sorted by smallest member
    std::vector<bool> deep;
    std::vector<bool> touches_collar;

    std::size_t deep_count() const { return static_cast<std::size_t>(std::count(deep.begin(), deep.end(), true)); }
    Mask union_of(const std::vector<std::size_t>& ids) const {
        Mask m = space.none();
        for (auto i : ids) m |= components[i];
        return m;
    }
};

// Components of the r-adjacency graph off N_A(W). A component is deep when it
// reaches the collar and leaves N_rho(W) (rho defaults to A).
inline ComponentSet complement_components(const MetricSpace& x, const Mask& w, int r, int a, int collar = 1,
                                          std::optional<int> rho = std::nullopt) {
    if (r < 1 || a < 0) throw Error("bad-parameter", "need r >= 1 and A >= 0");
    ComponentSet cs;
    cs.space = x;
    cs.w = w;
    cs.r = r;
    cs.a = a;
    cs.rho = rho.value_or(a);
    cs.collar = collar;
    Mask na = thicken(x, w, a);
    Mask nrho = thicken(x, w, cs.rho);
    Mask col = x.has_window() ? x.window().collar(x.size(), collar) : x.none();
    auto comps = connected_components(x, ~na, r);
    for (std::size_t i = 0; i < comps.count(); ++i) {
        Mask m = comps.mask(i, x.size());
        bool tc = m.intersects(col);
        cs.touches_collar.push_back(tc);
        cs.deep.push_back(tc && !m.subset_of(nrho));
        cs.components.push_back(std::move(m));
    }
    return cs;
}

// Closure of component masks under the boolean operations, each result re-checked.
struct AlgebraResult {
    std::string op;
    Mask mask;
    bool complementary = false;
};

inline std::vector<AlgebraResult> component_algebra(const ComponentSet& cs, const Mask& c, const Mask& d) {
    const MetricSpace& x = cs.space;
    std::vector<AlgebraResult> out;
    auto add = [&](std::string op, Mask m) {
        bool ok = is_coarse_complementary(x, cs.w, m, cs.r, cs.a, cs.collar);
        out.push_back({std::move(op), std::move(m), ok});
    };
    add("complement", ~c);
    add("union", c | d);
    add("intersection", c & d);
    add("symmetric-difference", c ^ d);
    return out;
}

// Largest number of deep, pairwise coarse-disjoint components in one window.
struct SeparationWindow {
    int radius = 0;
    int deep = 0;
    int invariant_classes = -1;  // e side, when a group action is available
};

struct SeparationReport {
    std::vector<SeparationWindow> windows;
    int e_tilde = 0;  // lower bound
    int e = -1;       // lower bound, -1 when not computed
    Trend trend = Trend::inconclusive;
};

inline SeparationReport summarize_separation(std::vector<SeparationWindow> windows) {
    SeparationReport rep;
    rep.windows = std::move(windows);
    std::vector<int> counts;
    for (const auto& w : rep.windows) {
        counts.push_back(w.deep);
        rep.e_tilde = std::max(rep.e_tilde, w.deep);
        if (w.invariant_classes >= 0) rep.e = std::max(rep.e, w.invariant_classes);
    }
    rep.trend = trend_of(counts);
    return rep;
}

// Components within a window are pairwise disjoint, hence pairwise coarse disjoint.
inline SeparationReport coarse_n_separation(const std::vector<std::pair<MetricSpace, Mask>>& windows, int r, int a,
                                            int collar = 1) {
    std::vector<SeparationWindow> out;
    for (const auto& [x, w] : windows) {
        auto cs = complement_components(x, w, r, a, collar);
        out.push_back({x.has_window() ? x.window().radius : 0, static_cast<int>(cs.deep_count()), -1});
    }
    return summarize_separation(std::move(out));
}

enum class Invariance { invariant, not_invariant, undetermined };

inline std::string to_string(Invariance v) {
    switch (v) {
        case Invariance::invariant: return "invariant";
        case Invariance::not_invariant: return "not-invariant";
        default: return "undetermined-at-window";
    }
}

struct InvarianceReport {
    std::vector<Invariance> verdicts;  // per component
    std::vector<int> orbit;            // orbit class per component (partial action)
    int e_count = 0;                   // orbit classes among deep components
};

// Whether each component is preserved by the generators of H (left action), and
// the classes of components identified by the action.
inline InvarianceReport invariant_components(const BallModel& ball, const SubgroupSpec& h, const ComponentSet& cs) {
    Mask trace = subgroup_trace(ball, h);
    if (!(trace == cs.w)) throw Error("parameter-mismatch", "components were not computed for this subgroup");
    const std::size_t n = ball.elements.size();
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < cs.components.size(); ++i)
        for (PointId p : cs.components[i].ids()) owner[p] = static_cast<int>(i);
    Mask col = ball.space.window().collar(n, cs.collar);

    std::vector<int> parent(cs.components.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };

    InvarianceReport rep;
    rep.verdicts.assign(cs.components.size(), Invariance::undetermined);
    std::vector<bool> escaped(cs.components.size(), false), seen(cs.components.size(), false);
    for (const auto& g : subgroup_generators(*ball.group, h))
        for (const auto& s : {g, ball.group->inverse(g)}) {
            auto act = ball.left_action(s);
            for (std::size_t i = 0; i < cs.components.size(); ++i)
                for (PointId p : cs.components[i].ids()) {
                    if (act[p] < 0 || col.test(static_cast<PointId>(act[p]))) continue;
                    int j = owner[act[p]];
                    if (j < 0) continue;
                    seen[i] = true;
                    if (j != static_cast<int>(i)) {
                        escaped[i] = true;
                        parent[find(static_cast<int>(i))] = find(j);
                    }
                }
        }
    for (std::size_t i = 0; i < cs.components.size(); ++i) {
        if (escaped[i])
            rep.verdicts[i] = Invariance::not_invariant;
        else if (seen[i])
            rep.verdicts[i] = Invariance::invariant;
    }
    std::vector<int> classes;
    for (std::size_t i = 0; i < cs.components.size(); ++i) {
        rep.orbit.push_back(find(static_cast<int>(i)));
        if (cs.deep[i]) classes.push_back(rep.orbit.back());
    }
    std::sort(classes.begin(), classes.end());
    rep.e_count = static_cast<int>(std::unique(classes.begin(), classes.end()) - classes.begin());
    return rep;
}

struct StabilizerTrace {
    Mask trace;          // elements of H in the window stabilizing C - N_A(H) where defined
    Mask subgroup;       // H in the window
    int hausdorff = 0;   // between trace and H within the window
    std::size_t size = 0;
};

inline StabilizerTrace stabilizer_trace(const BallModel& ball, const SubgroupSpec& h, const Mask& c, int a) {
    const MetricSpace& x = ball.space;
    Mask hm = subgroup_trace(ball, h);
    Mask d = c - thicken(x, hm, a);
    StabilizerTrace st;
    st.subgroup = hm;
    st.trace = x.none();
    for (PointId g : hm.ids()) {
        auto act = ball.left_action(ball.elements[g]);
        bool ok = true;
        for (PointId p = 0; p < x.size() && ok; ++p)
            if (act[p] >= 0 && d.test(p) != d.test(static_cast<PointId>(act[p]))) ok = false;
        if (ok) st.trace.set(g);
    }
    st.size = st.trace.count();
    st.hausdorff = hausdorff_distance(x, st.trace, hm);
    return st;
}

struct AlmostInvariantReport {
    Mask xhat;
    bool right_invariant = false;        // xhat H = xhat where defined
    bool agrees_off_neighborhood = false;  // xhat and C agree outside N_A(H), off the collar
    bool xhat_deep = false;
    bool complement_deep = false;
    std::string status;  // "proper" or "not-proper"
};

// xhat = { g : gH within the window lies in C u N_A(H) }.
inline AlmostInvariantReport almost_invariant_extract(const BallModel& ball, const SubgroupSpec& h, const Mask& c,
                                                      int a, int collar = 1) {
    const MetricSpace& x = ball.space;
    const std::size_t n = x.size();
    Mask hm = subgroup_trace(ball, h);
    Mask na = thicken(x, hm, a);
    Mask allowed = c | na;
    Mask col = x.window().collar(n, collar);
    AlmostInvariantReport rep;
    rep.xhat = x.all();
    for (PointId k : hm.ids()) {
        auto act = ball.right_action(ball.elements[k]);
        for (PointId g = 0; g < n; ++g)
            if (act[g] >= 0 && !allowed.test(static_cast<PointId>(act[g]))) rep.xhat.set(g, false);
    }
    rep.right_invariant = true;
    for (const auto& s : subgroup_generators(*ball.group, h))
        for (const auto& t : {s, ball.group->inverse(s)}) {
            auto act = ball.right_action(t);
            for (PointId g : (rep.xhat - col).ids())
                if (act[g] >= 0 && !col.test(static_cast<PointId>(act[g])) && !rep.xhat.test(static_cast<PointId>(act[g])))
                    rep.right_invariant = false;
        }
    rep.agrees_off_neighborhood = ((rep.xhat ^ c) - col).subset_of(na);
    Mask far = col - na;
    rep.xhat_deep = rep.xhat.intersects(far);
    rep.complement_deep = (~rep.xhat).intersects(far);
    rep.status = rep.xhat_deep && rep.complement_deep ? "proper" : "not-proper";
    return rep;
}

struct ShallowBound {
    std::optional<int> bound;  // nullopt = exceeds-window
    std::size_t shallow_components = 0;
};

// Smallest R in the grid with every shallow (r, A) component inside N_R(W); R = A when none exist.
inline ShallowBound shallow_bound_check(const MetricSpace& x, const Mask& w, int r, int a, const std::vector<int>& grid,
                                        int collar = 1) {
    auto cs = complement_components(x, w, r, a, collar);
    ShallowBound sb;
    int need = a;
    auto dist = x.distances_from(w);
    for (std::size_t i = 0; i < cs.components.size(); ++i) {
        if (cs.deep[i]) continue;
        ++sb.shallow_components;
        for (PointId p : cs.components[i].ids()) need = std::max(need, dist[p]);
    }
    for (int g : grid)
        if (g >= need) {
            sb.bound = sb.shallow_components ? g : a;
            return sb;
        }
    if (!sb.shallow_components) sb.bound = a;
    return sb;
}

// N_R(C) within C u N_{A+R}(W) for R up to `max_r` (checked off the collar).
inline bool neighborhood_component_check(const MetricSpace& x, const Mask& w, const Mask& c, int a, int max_r,
                                         int collar = 1) {
    Mask off = noncollar(x, collar);
    for (int rr = 0; rr <= max_r; ++rr) {
        Mask lhs = (c.empty() ? x.none() : neighborhood(x, c, rr)) & off;
        if (!lhs.subset_of(c | thicken(x, w, a + rr))) return false;
    }
    return true;
}

// Every simplex of P_s lies in N_A(W) u C or in N_A(W) u (X - C).
inline bool simplex_dichotomy(const RipsComplex& k, const Mask& w_a, const Mask& c) {
    Mask side1 = w_a | c, side2 = w_a | ~c;
    for (int d = 0; d <= k.cap; ++d)
        for (std::size_t i = 0; i < k.count(d); ++i)
            if (!k.all_in(d, i, side1) && !k.all_in(d, i, side2)) return false;
    return true;
}

}

#endif
