#ifndef COARSE_COCHAIN_HPP
#define COARSE_COCHAIN_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/gf2.hpp"
#include "coarse/metric.hpp"
#include "coarse/rips.hpp"

namespace coarse {

// Cochains of K relative to the full subcomplex on `fixed` (normally the collar):
// a cochain is a GF(2) function on the free simplices, those with at least one
// vertex outside `fixed`. These are the compactly supported cochains of the window.
class CochainComplex {
public:
    CochainComplex(const RipsComplex& k, const Mask& fixed) : k_(&k), fixed_(fixed) {
        if (fixed.universe() != k.space.size()) throw Error("shape-mismatch", "relative mask over a different space");
        local_.resize(k.cap + 1);
        free_.resize(k.cap + 1);
        for (int d = 0; d <= k.cap; ++d) {
            local_[d].assign(k.count(d), -1);
            for (std::size_t i = 0; i < k.count(d); ++i)
                if (!k.all_in(d, i, fixed)) {
                    local_[d][i] = static_cast<std::int32_t>(free_[d].size());
                    free_[d].push_back(static_cast<Index>(i));
                }
        }
        delta_.resize(k.cap);
        for (int d = 0; d < k.cap; ++d) {
            // Column sigma of delta^d lists the free cofaces of sigma.
            const auto& b = k.boundary(d + 1);
            std::vector<std::vector<Index>> cols(free_[d].size());
            for (std::size_t t = 0; t < free_[d + 1].size(); ++t)
                for (Index face : b.col(free_[d + 1][t]))
                    if (local_[d][face] >= 0) cols[local_[d][face]].push_back(static_cast<Index>(t));
            gf2::Matrix m(free_[d + 1].size(), free_[d].size());
            for (std::size_t s = 0; s < cols.size(); ++s) m.set_col(s, std::move(cols[s]));
            delta_[d] = std::move(m);
        }
    }

    const RipsComplex& complex() const { return *k_; }
    const Mask& fixed() const { return fixed_; }
    int top() const { return k_->cap; }

    std::size_t count(int d) const { return free_.at(d).size(); }
    // Global simplex index of the free simplex i.
    Index simplex(int d, std::size_t i) const { return free_[d][i]; }
    std::optional<Index> local(int d, Index global) const {
        std::int32_t l = local_.at(d).at(global);
        if (l < 0) return std::nullopt;
        return static_cast<Index>(l);
    }
    std::vector<PointId> vertices(int d, std::size_t i) const { return k_->simplex_vec(d, free_[d][i]); }

    // delta^d : C^d -> C^{d+1}, defined for d < cap.
    const gf2::Matrix& delta(int d) const {
        if (d < 0 || d >= top()) throw Error("bad-parameter", "coboundary needs simplices one dimension up");
        return delta_[d];
    }

    // Vertices met by the support of a cochain.
    Mask support(int d, const Column& c) const {
        Mask m(k_->space.size());
        for (Index i : c) {
            const PointId* s = k_->simplex(d, free_[d][i]);
            for (int t = 0; t <= d; ++t) m.set(s[t]);
        }
        return m;
    }

    bool is_cocycle(int d, const Column& c) const { return d == top() || delta(d).apply(c).empty(); }

    // Some beta with delta beta = c, if c is a coboundary.
    std::optional<Column> coboundary_preimage(int d, const Column& c) const {
        if (c.empty()) return Column{};
        if (d == 0) return std::nullopt;
        return gf2::solve(delta(d - 1), c);
    }
    bool is_coboundary(int d, const Column& c) const { return coboundary_preimage(d, c).has_value(); }

    // Free d-simplices all of whose vertices lie in u.
    std::vector<bool> inside(int d, const Mask& u) const {
        std::vector<bool> in(count(d));
        for (std::size_t i = 0; i < count(d); ++i) in[i] = k_->all_in(d, free_[d][i], u);
        return in;
    }

private:
    const RipsComplex* k_;
    Mask fixed_;
    std::vector<std::vector<std::int32_t>> local_;
    std::vector<std::vector<Index>> free_;
    std::vector<gf2::Matrix> delta_;
};

struct Cocycle {
    int degree = 0;
    Column values;  // over the free simplices of the complex
    Mask support;
    int diameter = 0;
};

inline int mask_diameter(const MetricSpace& x, const Mask& m) {
    int d = 0;
    for (PointId p : m.ids()) {
        auto dist = x.distances_from(Mask::of(x.size(), {p}));
        for (PointId q : m.ids()) d = std::max(d, dist[q]);
    }
    return d;
}

inline Cocycle make_cocycle(const CochainComplex& c, int d, Column values) {
    if (!c.is_cocycle(d, values)) throw Error("not-a-cocycle", "coboundary of the cochain is nonzero");
    Cocycle z;
    z.degree = d;
    z.support = c.support(d, values);
    z.diameter = z.support.empty() ? 0 : mask_diameter(c.complex().space, z.support);
    z.values = std::move(values);
    return z;
}

// The cut cocycle of a vertex set s: 1 on edges with exactly one endpoint in s.
inline Column cut_cochain(const CochainComplex& c, const Mask& s) {
    Column out;
    for (std::size_t i = 0; i < c.count(1); ++i) {
        auto v = c.vertices(1, i);
        if (s.test(v[0]) != s.test(v[1])) out.push_back(static_cast<Index>(i));
    }
    return out;
}

// Indicator cochain of the free d-simplices inside a vertex set.
inline Column indicator_cochain(const CochainComplex& c, int d, const Mask& s) {
    Column out;
    auto in = c.inside(d, s);
    for (std::size_t i = 0; i < in.size(); ++i)
        if (in[i]) out.push_back(static_cast<Index>(i));
    return out;
}

// H^d of the relative complex with coordinates. Needs d < cap.
class CohomologyBasis {
public:
    CohomologyBasis(const CochainComplex& c, int d) : c_(&c), d_(d), red_(c.count(d), true) {
        if (d < 0 || d >= c.top()) throw Error("bad-parameter", "cohomology in degree d needs dimension cap d+1");
        if (d > 0)
            for (const auto& col : c.delta(d - 1).columns()) red_.insert(col);
        image_rank_ = red_.rank();
        for (auto& z : gf2::kernel_vectors(c.delta(d))) {
            if (red_.insert(z, Column{static_cast<Index>(reps_.size())})) reps_.push_back(std::move(z));
        }
    }

    int degree() const { return d_; }
    std::size_t dim() const { return reps_.size(); }
    const std::vector<Column>& representatives() const { return reps_; }
    const CochainComplex& complex() const { return *c_; }

    // Coordinates of the class of a cocycle in the representative basis.
    Column coordinates(const Column& z) const {
        Column v = z, tag;
        red_.reduce(v, &tag);
        if (!v.empty()) throw Error("not-a-cocycle", "cochain is not a cocycle of this complex");
        return tag;
    }
    bool is_zero(const Column& z) const { return coordinates(z).empty(); }

private:
    const CochainComplex* c_;
    int d_;
    gf2::Reducer red_;
    std::size_t image_rank_ = 0;
    std::vector<Column> reps_;
};

struct Representation {
    Column beta;     // (d-1)-cochain
    Column witness;  // z + delta beta
    Mask support;
};

// Some z + delta beta vanishing on every free d-simplex not inside u, if one exists.
inline std::optional<Representation> representable_in(const CochainComplex& c, int d, const Column& z, const Mask& u) {
    auto in = c.inside(d, u);
    auto project = [&](const Column& v) {
        Column out;
        for (Index i : v)
            if (!in[i]) out.push_back(i);
        return out;
    };
    Representation r;
    Column target = project(z);
    if (!target.empty()) {
        if (d == 0) return std::nullopt;
        const auto& dm = c.delta(d - 1);
        gf2::Reducer red(c.count(d), true);
        for (std::size_t j = 0; j < dm.cols(); ++j) red.insert(project(dm.col(j)), Column{static_cast<Index>(j)});
        red.reduce(target, &r.beta);
        if (!target.empty()) return std::nullopt;
    }
    r.witness = z;
    if (!r.beta.empty()) gf2::add_into(r.witness, c.delta(d - 1).apply(r.beta));
    r.support = c.support(d, r.witness);
    return r;
}

// Replays a representation: witness = z + delta beta, supported in u.
inline bool verify_representation(const CochainComplex& c, int d, const Column& z, const Representation& r,
                                  const Mask& u) {
    Column w = z;
    if (!r.beta.empty()) {
        if (d == 0) return false;
        gf2::add_into(w, c.delta(d - 1).apply(r.beta));
    }
    return w == r.witness && c.support(d, w).subset_of(u);
}

// Restriction of cochains from the complex `from` to a complex `to` whose
// vertices and relative mask are contained in those of `from` (same scale).
inline gf2::Matrix restriction_matrix(const CochainComplex& from, const CochainComplex& to, int d) {
    gf2::Matrix m(to.count(d), from.count(d));
    std::vector<std::vector<Index>> cols(from.count(d));
    const RipsComplex& kf = from.complex();
    const RipsComplex& kt = to.complex();
    for (std::size_t i = 0; i < to.count(d); ++i) {
        auto g = kf.find(d, kt.simplex(d, to.simplex(d, i)));
        if (!g) throw Error("not-a-subcomplex", "restriction target has a simplex missing from the source");
        auto l = from.local(d, *g);
        if (!l) throw Error("not-a-subcomplex", "free simplex of the target is fixed in the source");
        cols[*l].push_back(static_cast<Index>(i));
    }
    for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, std::move(cols[j]));
    return m;
}

// Zero extension from a subcomplex `small` into `big`; the transpose of restriction.
inline gf2::Matrix extension_matrix(const CochainComplex& small, const CochainComplex& big, int d) {
    return restriction_matrix(big, small, d).transpose();
}

// A cochain phi with delta phi = 0 and phi(z) = 1, certifying that the cycle z
// of dimension d is not a boundary in k. Needs d < cap.
inline std::optional<Column> dual_certificate(const RipsComplex& k, int d, const Column& z) {
    if (d + 1 > k.cap) throw Error("bad-parameter", "certificate needs simplices one dimension up");
    gf2::Matrix t = k.boundary(d + 1).transpose();
    const Index extra = static_cast<Index>(t.rows());
    gf2::Matrix m(t.rows() + 1, t.cols());
    for (std::size_t j = 0; j < t.cols(); ++j) {
        Column col = t.col(j);
        if (gf2::contains(z, static_cast<Index>(j))) col.push_back(extra);
        m.set_col(j, std::move(col));
    }
    return gf2::solve(m, Column{extra});
}

inline bool verify_dual_certificate(const RipsComplex& k, int d, const Column& z, const Column& phi) {
    return gf2::dot(phi, z) && k.boundary(d + 1).transpose().apply(phi).empty();
}

}

#endif
