#ifndef COARSE_ESSENTIAL_HPP
#define COARSE_ESSENTIAL_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarse/cochain.hpp"
#include "coarse/error.hpp"
#include "coarse/gf2.hpp"
#include "coarse/homology.hpp"
#include "coarse/metric.hpp"
#include "coarse/rips.hpp"
#include "coarse/separation.hpp"

namespace coarse {

struct AlmostEssential {
    std::optional<int> b;  // nullopt = fails-at-window
    int needed = 0;        // max distance from W (off the collar) to C - N_A(W)
};

// Smallest B in the grid with W (off the collar) inside N_B(C - N_A(W)).
inline AlmostEssential almost_essential_probe(const MetricSpace& x, const Mask& w, const Mask& c, int a,
                                              std::vector<int> grid = {}, int collar = 1) {
    if (!is_coarse_complementary(x, w, c, 1, a, collar))
        throw Error("not-complementary", "component is not (1, A)-coarse complementary to W");
    const Window& win = x.window();
    if (grid.empty())
        for (int b = 0; b <= (win.radius - collar) / 2; ++b) grid.push_back(b);
    AlmostEssential out;
    Mask d = c - thicken(x, w, a);
    if (d.empty()) {
        out.needed = kInf;
        return out;
    }
    auto dist = x.distances_from(d);
    for (PointId p : (w & noncollar(x, collar)).ids()) out.needed = std::max(out.needed, dist[p]);
    for (int b : grid)
        if (b >= out.needed) {
            out.b = b;
            break;
        }
    return out;
}

enum class EssentialKind { essential, non_essential, inconclusive };

inline std::string to_string(EssentialKind k) {
    switch (k) {
        case EssentialKind::essential: return "essential";
        case EssentialKind::non_essential: return "non-essential";
        default: return "inconclusive";
    }
}

struct PushedClass {
    std::vector<std::vector<PointId>> cycle;        // inner representative
    bool dies = false;
    std::vector<std::vector<PointId>> fill;         // when it dies: a chain with boundary the cycle
    std::vector<std::vector<PointId>> certificate;  // when it survives: a cocycle taking value 1 on it
    bool verified = false;
};

struct ScheduleVerdict {
    WindowSchedule schedule;
    std::vector<PushedClass> classes;
    EssentialKind verdict = EssentialKind::inconclusive;
};

struct EssentialVerdict {
    EssentialKind verdict = EssentialKind::inconclusive;
    std::string reason;
    std::vector<ScheduleVerdict> schedules;
};

// Schedule pairing for the essential probe: outer scale 2i and outer excision S/2
// (lowered to S - 2i when needed).
inline WindowSchedule paired_schedule(int s, int i, int radius, int collar = 1) {
    int j = 2 * i;
    return {s, i, std::min(s / 2, s - j), j, radius, collar};
}

// Pushes the surviving H~_{n-1} classes of the W-annuli into the (C u W)-annuli.
inline EssentialVerdict essential_probe(const MetricSpace& x, const Mask& w, const Mask& c, int n,
                                        const std::vector<WindowSchedule>& schedules, RipsCaps caps = {}) {
    EssentialVerdict out;
    if (n < 1) throw Error("bad-parameter", "dimension must be positive");
    try {
        auto pd = pd_signature_check(x.subspace(w), n, schedules, caps);
        if (!pd.pass) {
            out.reason = "W fails the dimension-" + std::to_string(n) + " signature: " + pd.reason;
            return out;
        }
    } catch (const Error& e) {
        out.reason = std::string("schedule incompatible with W: ") + e.what();
        return out;
    }
    const Mask cw = c | w;
    std::vector<EssentialKind> kinds;
    for (const auto& s : schedules) {
        ScheduleVerdict sv;
        sv.schedule = s;
        auto img = two_scale_image(x, w, n - 1, s, caps);
        RipsComplex target = build_rips(x, annulus_mask(x, cw, s.outer_excision), s.outer_scale, n, caps);
        bool any_survive = false;
        for (const auto& cls : img.classes) {
            PushedClass pc;
            pc.cycle = cls.representative;
            Column z = chain_from_simplices(target, cls.representative);
            if (auto fill = fill_cycle(target, n - 1, z)) {
                pc.dies = true;
                pc.fill = chain_simplices(target, n, *fill);
                pc.verified = target.boundary(n).apply(*fill) == z;
            } else {
                any_survive = true;
                auto phi = dual_certificate(target, n - 1, z);
                if (phi) {
                    pc.certificate = chain_simplices(target, n - 1, *phi);
                    pc.verified = verify_dual_certificate(target, n - 1, z, *phi);
                }
            }
            sv.classes.push_back(std::move(pc));
        }
        if (sv.classes.empty())
            sv.verdict = EssentialKind::inconclusive;
        else
            sv.verdict = any_survive ? EssentialKind::non_essential : EssentialKind::essential;
        kinds.push_back(sv.verdict);
        out.schedules.push_back(std::move(sv));
    }
    if (kinds.empty()) {
        out.reason = "no schedule";
    } else if (std::all_of(kinds.begin(), kinds.end(), [&](EssentialKind k) { return k == kinds.front(); })) {
        out.verdict = kinds.front();
        if (out.verdict == EssentialKind::inconclusive) out.reason = "no surviving class of W at any schedule";
    } else {
        out.reason = "verdicts differ across the schedule family";
    }
    return out;
}

// One piece of the Mayer-Vietoris decomposition with its relative cochains.
struct MVPiece {
    std::string name;
    Mask vertices;
    std::shared_ptr<RipsComplex> complex;
    std::shared_ptr<CochainComplex> cochains;
    std::vector<std::shared_ptr<CohomologyBasis>> cohomology;  // degrees 0 .. cap-1
};

struct ExactnessCheck {
    std::string spot;
    bool composite_zero = false;
    bool ranks_match = false;
    bool holds() const { return composite_zero && ranks_match; }
};

struct ConnectingImage {
    Column input;   // cocycle on the W piece
    Column output;  // cocycle on X
    Column coordinates;
    bool nonzero = false;
};

struct MVReport {
    int r = 1, a = 0, scale = 1, degree_cap = 2, collar = 1;
    bool dichotomy = false;
    std::vector<bool> short_exact;  // per cochain degree
    MVPiece x, left, right, w;      // X, C1 u N_A(W), C2 u N_A(W), N_A(W)
    std::vector<gf2::Matrix> connecting;  // degree d: H^d(W piece) -> H^{d+1}(X)
    std::vector<ExactnessCheck> exactness;
    std::vector<ConnectingImage> images;

    bool exact() const {
        for (const auto& e : exactness)
            if (!e.holds()) return false;
        return true;
    }
};

namespace detail {

inline MVPiece make_piece(std::string name, const MetricSpace& x, const Mask& v, int scale, int cap, int collar,
                          RipsCaps caps) {
    MVPiece p;
    p.name = std::move(name);
    p.vertices = v;
    p.complex = std::make_shared<RipsComplex>(build_rips(x, v, scale, cap, caps));
    p.cochains = std::make_shared<CochainComplex>(*p.complex, x.window().collar(x.size(), collar) & v);
    for (int d = 0; d < cap; ++d) p.cohomology.push_back(std::make_shared<CohomologyBasis>(*p.cochains, d));
    return p;
}

inline gf2::Matrix stack(const gf2::Matrix& top, const gf2::Matrix& bottom) {
    gf2::Matrix m(top.rows() + bottom.rows(), top.cols());
    for (std::size_t j = 0; j < top.cols(); ++j) {
        Column c = top.col(j);
        for (Index i : bottom.col(j)) c.push_back(static_cast<Index>(i + top.rows()));
        m.set_col(j, std::move(c));
    }
    return m;
}

inline gf2::Matrix side_by_side(const gf2::Matrix& l, const gf2::Matrix& r) {
    gf2::Matrix m(l.rows(), l.cols() + r.cols());
    for (std::size_t j = 0; j < l.cols(); ++j) m.set_col(j, l.col(j));
    for (std::size_t j = 0; j < r.cols(); ++j) m.set_col(l.cols() + j, r.col(j));
    return m;
}

// Matrix in cohomology coordinates of a cochain-level map.
inline gf2::Matrix on_cohomology(const CohomologyBasis& from, const CohomologyBasis& to, const gf2::Matrix& f) {
    gf2::Matrix m(to.dim(), from.dim());
    for (std::size_t j = 0; j < from.dim(); ++j) m.set_col(j, to.coordinates(f.apply(from.representatives()[j])));
    return m;
}

inline gf2::Matrix direct_sum_coordinates(const CohomologyBasis& l, const CohomologyBasis& r, const gf2::Matrix& fl,
                                          const gf2::Matrix& fr, const CohomologyBasis& from) {
    return stack(on_cohomology(from, l, fl), on_cohomology(from, r, fr));
}

inline ExactnessCheck exact_at(std::string spot, const gf2::Matrix& in, const gf2::Matrix& out, std::size_t dim) {
    ExactnessCheck e;
    e.spot = std::move(spot);
    e.composite_zero = in.rows() == out.cols() && (out * in).is_zero();
    e.ranks_match = gf2::rank(in) + gf2::rank(out) == dim;
    return e;
}

}

// Zero extension of rho to the C1 side, coboundary there, then extension by zero to X.
inline Column connecting_cochain(const MVReport& mv, int d, const Column& rho) {
    const auto& wc = *mv.w.cochains;
    const auto& lc = *mv.left.cochains;
    if (!wc.is_cocycle(d, rho)) throw Error("not-a-cocycle", "input is not a cocycle of the W piece");
    Column ext = extension_matrix(wc, lc, d).apply(rho);
    Column t = lc.delta(d).apply(ext);
    return extension_matrix(lc, *mv.x.cochains, d + 1).apply(t);
}

// Cochain-level short exact sequence, the connecting maps, and exactness of the long
// sequence at every spot inside the degree cap. `classes` are cocycles of degree `class_degree`
// on the W piece.
inline ConnectingImage connecting_image(const MVReport& mv, int d, const Column& rho) {
    ConnectingImage ci;
    ci.input = rho;
    ci.output = connecting_cochain(mv, d, rho);
    if (d + 1 < mv.degree_cap) {
        ci.coordinates = mv.x.cohomology[d + 1]->coordinates(ci.output);
        ci.nonzero = !ci.coordinates.empty();
    } else {
        ci.nonzero = !mv.x.cochains->is_coboundary(d + 1, ci.output);
    }
    return ci;
}

inline MVReport mv_assemble(const MetricSpace& x, const Mask& w, const Mask& c1, int r, int a, int scale,
                            int degree_cap, const std::vector<Column>& classes = {}, int class_degree = 1,
                            int collar = 1, RipsCaps caps = {}) {
    if (!is_coarse_complementary(x, w, c1, r, a, collar))
        throw Error("not-complementary", "C1 is not (r, A)-coarse complementary to W");
    MVReport mv;
    mv.r = r;
    mv.a = a;
    mv.scale = scale;
    mv.degree_cap = degree_cap;
    mv.collar = collar;
    Mask na = thicken(x, w, a);
    Mask c2 = ~c1;
    {
        RipsComplex whole = build_rips(x, x.all(), scale, degree_cap, caps);
        mv.dichotomy = simplex_dichotomy(whole, na, c1);
    }
    if (!mv.dichotomy) return mv;
    mv.x = detail::make_piece("X", x, x.all(), scale, degree_cap, collar, caps);
    mv.left = detail::make_piece("C1+N_A(W)", x, c1 | na, scale, degree_cap, collar, caps);
    mv.right = detail::make_piece("C2+N_A(W)", x, c2 | na, scale, degree_cap, collar, caps);
    mv.w = detail::make_piece("N_A(W)", x, na, scale, degree_cap, collar, caps);
    const auto &X = *mv.x.cochains, &L = *mv.left.cochains, &R = *mv.right.cochains, &W = *mv.w.cochains;

    std::vector<gf2::Matrix> p, q;
    for (int d = 0; d <= degree_cap; ++d) {
        p.push_back(detail::stack(restriction_matrix(X, L, d), restriction_matrix(X, R, d)));
        q.push_back(detail::side_by_side(restriction_matrix(L, W, d), restriction_matrix(R, W, d)));
        std::size_t mid = L.count(d) + R.count(d);
        std::size_t rp = gf2::rank(p[d]), rq = gf2::rank(q[d]);
        bool ok = rp == X.count(d) && rq == W.count(d) && rp + rq == mid && (q[d] * p[d]).is_zero();
        if (d > 0) {
            auto dl = L.delta(d - 1), dr = R.delta(d - 1);
            gf2::Matrix dmid(mid, L.count(d - 1) + R.count(d - 1));
            for (std::size_t j = 0; j < L.count(d - 1); ++j) dmid.set_col(j, dl.col(j));
            for (std::size_t j = 0; j < R.count(d - 1); ++j) {
                Column col;
                for (Index i : dr.col(j)) col.push_back(static_cast<Index>(i + L.count(d)));
                dmid.set_col(L.count(d - 1) + j, std::move(col));
            }
            ok = ok && p[d] * X.delta(d - 1) == dmid * p[d - 1];
            gf2::Matrix dq = W.delta(d - 1) * q[d - 1];
            ok = ok && q[d] * dmid == dq;
        }
        mv.short_exact.push_back(ok);
    }

    // Cohomology-level maps.
    std::vector<gf2::Matrix> hp, hq;
    for (int d = 0; d < degree_cap; ++d) {
        const auto &hx = *mv.x.cohomology[d], &hl = *mv.left.cohomology[d], &hr = *mv.right.cohomology[d],
                   &hw = *mv.w.cohomology[d];
        hp.push_back(detail::direct_sum_coordinates(hl, hr, restriction_matrix(X, L, d), restriction_matrix(X, R, d), hx));
        gf2::Matrix ql(hw.dim(), hl.dim()), qr(hw.dim(), hr.dim());
        auto rl = restriction_matrix(L, W, d), rr = restriction_matrix(R, W, d);
        for (std::size_t j = 0; j < hl.dim(); ++j) ql.set_col(j, hw.coordinates(rl.apply(hl.representatives()[j])));
        for (std::size_t j = 0; j < hr.dim(); ++j) qr.set_col(j, hw.coordinates(rr.apply(hr.representatives()[j])));
        hq.push_back(detail::side_by_side(ql, qr));
    }
    for (int d = 0; d + 1 < degree_cap; ++d) {
        const auto& hw = *mv.w.cohomology[d];
        const auto& hx1 = *mv.x.cohomology[d + 1];
        gf2::Matrix m(hx1.dim(), hw.dim());
        for (std::size_t j = 0; j < hw.dim(); ++j)
            m.set_col(j, hx1.coordinates(connecting_cochain(mv, d, hw.representatives()[j])));
        mv.connecting.push_back(std::move(m));
    }
    auto dim_ab = [&](int d) { return mv.left.cohomology[d]->dim() + mv.right.cohomology[d]->dim(); };
    mv.exactness.push_back({"H^0(X)", true, gf2::rank(hp[0]) == mv.x.cohomology[0]->dim()});
    for (int d = 0; d < degree_cap; ++d) {
        std::string k = std::to_string(d);
        mv.exactness.push_back(detail::exact_at("H^" + k + "(C1)+H^" + k + "(C2)", hp[d], hq[d], dim_ab(d)));
        if (d + 1 < degree_cap) {
            mv.exactness.push_back(
                detail::exact_at("H^" + k + "(W)", hq[d], mv.connecting[d], mv.w.cohomology[d]->dim()));
            mv.exactness.push_back(detail::exact_at("H^" + std::to_string(d + 1) + "(X)", mv.connecting[d], hp[d + 1],
                                                    mv.x.cohomology[d + 1]->dim()));
        }
    }
    for (const auto& rho : classes) mv.images.push_back(connecting_image(mv, class_degree, rho));
    return mv;
}

struct LocalizedSupport {
    Column cocycle;  // representative of the connecting image on X
    Mask support;
    int achieved = 0;  // max distance from the input support
    int bound = 0;     // schedule-derived radius
    bool within() const { return achieved <= bound; }
};

inline LocalizedSupport localized_boundary_support(const MVReport& mv, int d, const Column& rho) {
    LocalizedSupport ls;
    const MetricSpace& x = mv.x.complex->space;
    ls.bound = mv.scale;
    ls.cocycle = connecting_cochain(mv, d, rho);
    ls.support = mv.x.cochains->support(d + 1, ls.cocycle);
    Mask k = mv.w.cochains->support(d, rho);
    if (ls.support.empty()) return ls;
    auto dist = x.distances_from(k);
    for (PointId p : ls.support.ids()) ls.achieved = std::max(ls.achieved, dist[p]);
    return ls;
}

enum class Sides { a_only, b_only, both, neither };

inline std::string to_string(Sides s) {
    switch (s) {
        case Sides::a_only: return "representable-in-a";
        case Sides::b_only: return "representable-in-b";
        case Sides::both: return "both";
        default: return "neither";
    }
}

struct TwoSided {
    Sides sides = Sides::neither;
    std::optional<Representation> in_a, in_b;
    bool verified = true;  // witnesses replayed
    bool class_zero = false;
};

// Whether omega + delta tau can be supported in C_a - N_s(W), and in C_b - N_s(W).
inline TwoSided two_sided_representability(const CochainComplex& c, int d, const Mask& w, const Mask& ca,
                                           const Mask& cb, const Column& omega, int s) {
    const MetricSpace& x = c.complex().space;
    Mask ns = thicken(x, w, s);
    Mask ua = ca - ns, ub = cb - ns;
    TwoSided t;
    t.in_a = representable_in(c, d, omega, ua);
    t.in_b = representable_in(c, d, omega, ub);
    if (t.in_a) t.verified = t.verified && verify_representation(c, d, omega, *t.in_a, ua);
    if (t.in_b) t.verified = t.verified && verify_representation(c, d, omega, *t.in_b, ub);
    if (t.in_a && t.in_b)
        t.sides = Sides::both;
    else if (t.in_a)
        t.sides = Sides::a_only;
    else if (t.in_b)
        t.sides = Sides::b_only;
    t.class_zero = c.is_coboundary(d, omega);
    return t;
}

}

#endif
