#ifndef COARSE_HOMOLOGY_HPP
#define COARSE_HOMOLOGY_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/gf2.hpp"
#include "coarse/group.hpp"
#include "coarse/metric.hpp"
#include "coarse/rips.hpp"

namespace coarse {

struct HomologyResult {
    std::size_t rank = 0;
    std::vector<Column> representatives;  // k-cycles of the complex
};

inline HomologyResult reduced_homology(const RipsComplex& k, int d) {
    if (d < 0 || d + 1 > k.cap) throw Error("bad-parameter", "homology in degree k needs dimension cap k+1");
    auto cycles = gf2::kernel_vectors(k.boundary(d));
    auto id = gf2::Matrix::identity(k.count(d));
    auto r = gf2::image_rank_modulo(cycles, id, k.boundary(d + 1));
    return {r.rank, std::move(r.representatives)};
}

// Nested excision radii and Rips scales for one two-scale computation.
struct WindowSchedule {
    int inner_excision = 0;  // S
    int inner_scale = 1;     // i
    int outer_excision = 0;  // S'
    int outer_scale = 1;     // j
    int radius = 0;          // R
    int collar = 1;          // c

    std::string describe() const {
        return "S=" + std::to_string(inner_excision) + " i=" + std::to_string(inner_scale) +
               " S'=" + std::to_string(outer_excision) + " j=" + std::to_string(outer_scale) +
               " R=" + std::to_string(radius) + " c=" + std::to_string(collar);
    }
};

// Family with outer excision S - j (the largest value allowed).
inline std::vector<WindowSchedule> schedule_family(const std::vector<int>& inner_excisions, int i, int j, int radius,
                                                   int collar = 1) {
    std::vector<WindowSchedule> out;
    for (int s : inner_excisions) out.push_back({s, i, s - j, j, radius, collar});
    return out;
}

inline void validate_schedule(const MetricSpace& x, const WindowSchedule& s) {
    const Window& w = x.window();
    if (s.radius != w.radius)
        throw Error("bad-schedule", "schedule radius " + std::to_string(s.radius) + " differs from window radius " +
                                        std::to_string(w.radius));
    if (s.outer_excision > s.inner_excision || s.outer_scale < s.inner_scale || s.inner_scale < 1 ||
        s.outer_excision < 0 || s.collar < 0)
        throw Error("bad-schedule", "schedule is not nested: " + s.describe());
    if (s.outer_excision + s.outer_scale > s.inner_excision)
        throw Error("bad-schedule", "S' + j must not exceed S: " + s.describe());
    if (s.radius - s.collar <= s.inner_excision + s.inner_scale)
        throw Error("window-too-small", "inner annulus meets the collar: " + s.describe());
}

struct Verdict {
    Trend trend = Trend::inconclusive;  // bounded = stable at the last three schedules
    int value = 0;                      // value at the last schedule

    bool stable() const { return trend == Trend::bounded; }
    std::string describe() const {
        if (trend == Trend::bounded) return "stable " + std::to_string(value);
        return to_string(trend);
    }
};

inline Verdict verdict_of(const std::vector<int>& values) {
    Verdict v;
    v.trend = trend_of(values);
    v.value = values.empty() ? 0 : values.back();
    return v;
}

struct EndsEstimate {
    std::vector<WindowSchedule> schedules;
    std::vector<int> deep_counts;
    Verdict verdict;
};

// Components of the window minus the inner ball (at the inner Rips scale) that reach the collar.
inline EndsEstimate ends_estimate(const MetricSpace& x, const std::vector<WindowSchedule>& schedules) {
    if (schedules.empty()) throw Error("window-too-small", "no admissible schedule");
    EndsEstimate e;
    const Window& w = x.window();
    for (const auto& s : schedules) {
        validate_schedule(x, s);
        Mask annulus(x.size());
        for (PointId p = 0; p < x.size(); ++p)
            if (w.depth[p] > s.inner_excision) annulus.set(p);
        Mask collar = w.collar(x.size(), s.collar);
        auto comps = connected_components(x, annulus, s.inner_scale);
        int deep = 0;
        for (std::size_t i = 0; i < comps.count(); ++i)
            if (comps.mask(i, x.size()).intersects(collar)) ++deep;
        e.schedules.push_back(s);
        e.deep_counts.push_back(deep);
    }
    e.verdict = verdict_of(e.deep_counts);
    return e;
}

// A homology class at an inner scale with its status at the outer scale.
struct TwoScaleClass {
    int degree = 0;
    std::vector<std::vector<PointId>> representative;  // simplices of the inner cycle
    WindowSchedule schedule;
    bool survives = true;
};

inline std::vector<std::vector<PointId>> chain_simplices(const RipsComplex& k, int d, const Column& c) {
    std::vector<std::vector<PointId>> out;
    for (Index i : c) out.push_back(k.simplex_vec(d, i));
    return out;
}

inline Column chain_from_simplices(const RipsComplex& k, const std::vector<std::vector<PointId>>& s) {
    std::vector<Index> idx;
    for (auto& v : s) {
        auto i = k.find(v);
        if (!i) throw Error("not-a-subcomplex", "simplex missing from complex");
        idx.push_back(*i);
    }
    return gf2::from_indices(std::move(idx));
}

struct TwoScaleImage {
    std::size_t rank = 0;
    std::vector<TwoScaleClass> classes;
};

inline Mask annulus_mask(const MetricSpace& x, const Mask& region, int excision) {
    const Window& w = x.window();
    Mask m(x.size());
    for (PointId p : region.ids())
        if (w.depth[p] > excision) m.set(p);
    return m;
}

// Image of H~_q(P_i(region minus N_S)) in H~_q(P_j(region minus N_S')), restricted to
// classes that die in P_j(region) (the finite-scale kernel condition).
inline TwoScaleImage two_scale_image(const MetricSpace& x, const Mask& region, int q, const WindowSchedule& s,
                                     RipsCaps caps = {}) {
    validate_schedule(x, s);
    RipsComplex inner = build_rips(x, annulus_mask(x, region, s.inner_excision), s.inner_scale, q, caps);
    RipsComplex outer = build_rips(x, annulus_mask(x, region, s.outer_excision), s.outer_scale, q + 1, caps);
    RipsComplex global = build_rips(x, region, s.outer_scale, q + 1, caps);
    auto cycles = gf2::kernel_vectors(inner.boundary(q));
    auto f = inclusion_matrix(inner, outer, q);
    auto g = inclusion_matrix(inner, global, q);
    auto r = gf2::image_rank_modulo(cycles, f, outer.boundary(q + 1), &g, &global.boundary(q + 1));
    TwoScaleImage out;
    out.rank = r.rank;
    for (auto& rep : r.representatives) out.classes.push_back({q, chain_simplices(inner, q, rep), s, true});
    return out;
}

struct DimEstimate {
    int degree = 0;  // cohomological degree k; classes live in H~_{k-1}
    std::vector<WindowSchedule> schedules;
    std::vector<int> ranks;
    std::vector<std::vector<TwoScaleClass>> classes;
    Verdict verdict;
};

inline DimEstimate coarse_cohomology_dim_estimate(const MetricSpace& x, int k, const std::vector<WindowSchedule>& schedules,
                                                  RipsCaps caps = {}) {
    if (k < 0) throw Error("bad-parameter", "negative degree");
    if (schedules.empty()) throw Error("window-too-small", "no admissible schedule");
    DimEstimate e;
    e.degree = k;
    for (const auto& s : schedules) {
        e.schedules.push_back(s);
        if (k == 0) {
            // Degree-0 coarse cohomology vanishes.
            e.ranks.push_back(0);
            e.classes.emplace_back();
            continue;
        }
        auto img = two_scale_image(x, x.all(), k - 1, s, caps);
        e.ranks.push_back(static_cast<int>(img.rank));
        e.classes.push_back(std::move(img.classes));
    }
    e.verdict = verdict_of(e.ranks);
    return e;
}

struct AcyclicityEntry {
    int degree = 0;
    int inner_scale = 0;
    std::optional<int> lambda;
    std::vector<int> radii;
    std::vector<int> mu;  // per radius, max over centers at the chosen lambda
};

struct AcyclicityProfile {
    std::vector<PointId> centers;
    int lambda_max = 0;
    int mu_max = 0;
    std::vector<AcyclicityEntry> entries;
    std::vector<std::string> failures;
};

// Whether H~_k(P_i(N_r(x))) -> H~_k(P_lambda(N_mu(x))) is zero.
inline bool kills_homology(const MetricSpace& sp, PointId x, int k, int i, int r, int lambda, int mu, RipsCaps caps = {}) {
    Mask c = Mask::of(sp.size(), {x});
    RipsComplex inner = build_rips(sp, neighborhood(sp, c, r), i, k, caps);
    RipsComplex outer = build_rips(sp, neighborhood(sp, c, mu), lambda, k + 1, caps);
    auto cycles = gf2::kernel_vectors(inner.boundary(k));
    if (cycles.empty()) return true;
    return gf2::image_rank_modulo(cycles, inclusion_matrix(inner, outer, k), outer.boundary(k + 1)).rank == 0;
}

inline AcyclicityProfile uniform_acyclicity_probe(const MetricSpace& sp, int k_max, const std::vector<PointId>& centers,
                                                  const std::vector<int>& inner_scales, const std::vector<int>& radii,
                                                  int lambda_max, int mu_max, RipsCaps caps = {}) {
    AcyclicityProfile p;
    p.centers = centers;
    p.lambda_max = lambda_max;
    p.mu_max = mu_max;
    for (int k = 0; k <= k_max; ++k)
        for (int i : inner_scales) {
            AcyclicityEntry e;
            e.degree = k;
            e.inner_scale = i;
            e.radii = radii;
            for (int lambda = i; lambda <= lambda_max && !e.lambda; ++lambda) {
                std::vector<int> mu(radii.size(), 0);
                bool ok = true;
                for (std::size_t t = 0; t < radii.size() && ok; ++t)
                    for (PointId x : centers) {
                        int found = -1;
                        for (int m = radii[t]; m <= mu_max; ++m)
                            if (kills_homology(sp, x, k, i, radii[t], lambda, m, caps)) {
                                found = m;
                                break;
                            }
                        if (found < 0) {
                            ok = false;
                            break;
                        }
                        mu[t] = std::max(mu[t], found);
                    }
                if (ok) {
                    e.lambda = lambda;
                    e.mu = mu;
                }
            }
            if (!e.lambda)
                p.failures.push_back("k=" + std::to_string(k) + " i=" + std::to_string(i) + ": no lambda <= " +
                                     std::to_string(lambda_max) + " with mu <= " + std::to_string(mu_max));
            p.entries.push_back(std::move(e));
        }
    return p;
}

struct PdSignature {
    int n = 0;
    std::vector<DimEstimate> degrees;  // k = 1..n
    bool pass = false;
    std::string reason;
};

// Checks the pattern dim H^k = 0 for 1 <= k < n and dim H^n = 1, each stable.
inline PdSignature pd_signature_check(const MetricSpace& w, int n, const std::vector<WindowSchedule>& schedules,
                                      RipsCaps caps = {}) {
    if (n < 1) throw Error("bad-parameter", "dimension must be positive");
    PdSignature sig;
    sig.n = n;
    sig.pass = true;
    for (int k = 1; k <= n; ++k) {
        sig.degrees.push_back(coarse_cohomology_dim_estimate(w, k, schedules, caps));
        const auto& v = sig.degrees.back().verdict;
        int want = k == n ? 1 : 0;
        if (sig.pass && !v.stable()) {
            sig.pass = false;
            sig.reason = "degree " + std::to_string(k) + " is " + v.describe();
        } else if (sig.pass && v.value != want) {
            sig.pass = false;
            sig.reason = "degree " + std::to_string(k) + " has dimension " + std::to_string(v.value) + ", expected " +
                         std::to_string(want);
        }
    }
    return sig;
}

}

#endif
