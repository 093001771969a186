#ifndef COARSE_RIPS_HPP
#define COARSE_RIPS_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/gf2.hpp"
#include "coarse/metric.hpp"

namespace coarse {

using gf2::Column;
using gf2::Index;

// P_r(V) for a vertex set V of a finite metric space, up to dimension cap m.
// Simplices of each dimension are stored as sorted id tuples in lexicographic order.
class RipsComplex {
public:
    MetricSpace space = MetricSpace::from_graph({});
    Mask vertices;
    int scale = 0;
    int cap = 0;

    std::size_t count(int d) const { return d < 0 || d > cap ? 0 : diam_[d].size(); }
    std::size_t total() const {
        std::size_t t = 0;
        for (int d = 0; d <= cap; ++d) t += count(d);
        return t;
    }

    const PointId* simplex(int d, std::size_t i) const { return flat_[d].data() + i * (d + 1); }
    std::vector<PointId> simplex_vec(int d, std::size_t i) const {
        return std::vector<PointId>(simplex(d, i), simplex(d, i) + d + 1);
    }
    int diameter(int d, std::size_t i) const { return diam_[d][i]; }

    // Index of the simplex with the given sorted vertices, if present.
    std::optional<Index> find(int d, const PointId* v) const {
        if (d < 0 || d > cap) return std::nullopt;
        std::size_t lo = start_[d][v[0]], hi = start_[d][v[0] + 1];
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            const PointId* s = simplex(d, mid);
            int c = 0;
            for (int k = 1; k <= d && c == 0; ++k) c = s[k] < v[k] ? -1 : (s[k] > v[k] ? 1 : 0);
            if (c == 0) return static_cast<Index>(mid);
            if (c < 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        return std::nullopt;
    }
    std::optional<Index> find(const std::vector<PointId>& v) const {
        return find(static_cast<int>(v.size()) - 1, v.data());
    }

    // Range of d-simplices whose smallest vertex is v.
    std::pair<std::size_t, std::size_t> starting_at(int d, PointId v) const { return {start_[d][v], start_[d][v + 1]}; }

    // Boundary C_d -> C_{d-1}; for d = 0 the augmentation row C_0 -> Z_2.
    const gf2::Matrix& boundary(int d) const { return bd_.at(d); }

    bool all_in(int d, std::size_t i, const Mask& m) const {
        const PointId* s = simplex(d, i);
        for (int k = 0; k <= d; ++k)
            if (!m.test(s[k])) return false;
        return true;
    }
    bool any_in(int d, std::size_t i, const Mask& m) const {
        const PointId* s = simplex(d, i);
        for (int k = 0; k <= d; ++k)
            if (m.test(s[k])) return true;
        return false;
    }

    // Vertices met by a chain or cochain.
    Mask support(int d, const Column& c) const {
        Mask m(space.size());
        for (Index i : c) {
            const PointId* s = simplex(d, i);
            for (int k = 0; k <= d; ++k) m.set(s[k]);
        }
        return m;
    }

    // Plain-text export, one sorted tuple per line.
    std::string to_text() const {
        std::ostringstream out;
        for (int d = 0; d <= cap; ++d)
            for (std::size_t i = 0; i < count(d); ++i) {
                const PointId* s = simplex(d, i);
                for (int k = 0; k <= d; ++k) out << (k ? " " : "") << s[k];
                out << "\n";
            }
        return out.str();
    }

    std::vector<std::vector<PointId>> flat_;
    std::vector<std::vector<int>> diam_;
    std::vector<std::vector<std::uint32_t>> start_;
    std::vector<gf2::Matrix> bd_;
};

struct RipsCaps {
    std::size_t max_simplices = 20'000'000;
};

inline RipsComplex build_rips(const MetricSpace& x, const Mask& v, int r, int m, RipsCaps caps = {}) {
    if (r < 0 || m < 0) throw Error("bad-parameter", "scale and dimension cap must be non-negative");
    if (v.universe() != x.size()) throw Error("shape-mismatch", "vertex mask over a different space");
    RipsComplex k;
    k.space = x;
    k.vertices = v;
    k.scale = r;
    k.cap = m;
    const std::size_t n = x.size();
    auto ids = v.ids();

    // Higher neighbors within r, with distances (CSR).
    std::vector<std::uint32_t> off(n + 1, 0);
    std::vector<PointId> nbr;
    std::vector<int> nd;
    {
        std::vector<std::vector<std::pair<PointId, int>>> rows(n);
        for (PointId p : ids)
            for (auto [q, d] : x.ball(p, r))
                if (q > p && v.test(q)) rows[p].emplace_back(q, d);
        for (std::size_t p = 0; p < n; ++p) {
            off[p + 1] = off[p] + static_cast<std::uint32_t>(rows[p].size());
            for (auto [q, d] : rows[p]) {
                nbr.push_back(q);
                nd.push_back(d);
            }
        }
    }
    auto dist_if_adjacent = [&](PointId a, PointId b) -> int {
        auto first = nbr.begin() + off[a], last = nbr.begin() + off[a + 1];
        auto it = std::lower_bound(first, last, b);
        if (it == last || *it != b) return -1;
        return nd[it - nbr.begin()];
    };

    k.flat_.resize(m + 1);
    k.diam_.resize(m + 1);
    k.start_.assign(m + 1, std::vector<std::uint32_t>(n + 1, 0));
    std::size_t total = 0;
    auto too_large = [&](int d) {
        std::string est;
        for (int e = 0; e <= d; ++e) est += (e ? ", " : "") + std::string("dim ") + std::to_string(e) + ": " + std::to_string(k.diam_[e].size());
        throw Error("complex-too-large", "simplex cap " + std::to_string(caps.max_simplices) + " exceeded (" + est + ")");
    };
    for (PointId p : ids) {
        k.flat_[0].push_back(p);
        k.diam_[0].push_back(0);
    }
    total = ids.size();
    if (total > caps.max_simplices) too_large(0);
    for (int d = 1; d <= m; ++d) {
        const auto& prev = k.flat_[d - 1];
        std::size_t np = k.diam_[d - 1].size();
        for (std::size_t i = 0; i < np; ++i) {
            const PointId* s = prev.data() + i * d;
            PointId last = s[d - 1];
            for (std::uint32_t t = off[last]; t < off[last + 1]; ++t) {
                PointId w = nbr[t];
                int diam = std::max(k.diam_[d - 1][i], nd[t]);
                bool ok = true;
                for (int j = 0; j < d - 1 && ok; ++j) {
                    int dj = dist_if_adjacent(s[j], w);
                    if (dj < 0)
                        ok = false;
                    else
                        diam = std::max(diam, dj);
                }
                if (!ok) continue;
                k.flat_[d].insert(k.flat_[d].end(), s, s + d);
                k.flat_[d].push_back(w);
                k.diam_[d].push_back(diam);
                if (++total > caps.max_simplices) too_large(d);
            }
        }
    }
    for (int d = 0; d <= m; ++d) {
        auto& st = k.start_[d];
        for (std::size_t i = 0; i < k.diam_[d].size(); ++i) ++st[k.flat_[d][i * (d + 1)] + 1];
        for (std::size_t p = 0; p < n; ++p) st[p + 1] += st[p];
    }
    k.bd_.resize(m + 1);
    k.bd_[0] = gf2::Matrix(1, k.count(0));
    for (std::size_t i = 0; i < k.count(0); ++i) k.bd_[0].set_col(i, {0});
    for (int d = 1; d <= m; ++d) {
        gf2::Matrix b(k.count(d - 1), k.count(d));
        std::vector<PointId> face(d);
        for (std::size_t i = 0; i < k.count(d); ++i) {
            const PointId* s = k.simplex(d, i);
            Column c;
            for (int drop = 0; drop <= d; ++drop) {
                int t = 0;
                for (int j = 0; j <= d; ++j)
                    if (j != drop) face[t++] = s[j];
                c.push_back(*k.find(d - 1, face.data()));
            }
            std::sort(c.begin(), c.end());
            b.set_col(i, std::move(c));
        }
        k.bd_[d] = std::move(b);
    }
    return k;
}

// Matrix of the inclusion C_d(k) -> C_d(l) for a subcomplex k of l.
inline gf2::Matrix inclusion_matrix(const RipsComplex& k, const RipsComplex& l, int d) {
    gf2::Matrix m(l.count(d), k.count(d));
    for (std::size_t i = 0; i < k.count(d); ++i) {
        auto j = l.find(d, k.simplex(d, i));
        if (!j) throw Error("not-a-subcomplex", "simplex missing from target");
        m.set_col(i, {*j});
    }
    return m;
}

struct ChainMap {
    std::vector<gf2::Matrix> maps;  // maps[d]: C_d(source) -> C_d(target)
    std::vector<int> displacement;  // per dimension
};

// f_{d-1} o boundary_d = boundary_d o f_d in every dimension present, and augmentation is preserved.
inline bool is_chain_map(const RipsComplex& k, const RipsComplex& l, const ChainMap& f) {
    for (std::size_t d = 0; d < f.maps.size(); ++d) {
        if (f.maps[d].cols() != k.count(static_cast<int>(d)) || f.maps[d].rows() != l.count(static_cast<int>(d)))
            return false;
        if (d == 0) {
            if (!(l.boundary(0) * f.maps[0] == k.boundary(0))) return false;
        } else if (!(f.maps[d - 1] * k.boundary(static_cast<int>(d)) == l.boundary(static_cast<int>(d)) * f.maps[d])) {
            return false;
        }
    }
    return true;
}

inline ChainMap inclusion_chain_map(const RipsComplex& k, const RipsComplex& l) {
    if (!k.vertices.subset_of(l.vertices) || k.scale > l.scale || k.cap > l.cap)
        throw Error("not-a-subcomplex", "source complex is not contained in the target");
    ChainMap f;
    for (int d = 0; d <= k.cap; ++d) {
        f.maps.push_back(inclusion_matrix(k, l, d));
        f.displacement.push_back(0);
    }
    return f;
}

// Whether z is a cycle (reduced, for d = 0).
inline bool is_cycle(const RipsComplex& k, int d, const Column& z) { return k.boundary(d).apply(z).empty(); }

struct Locality {
    PointId center;
    int radius;
};

// d-simplices of k with every vertex in m and diameter <= max_diam.
inline std::vector<Index> simplices_within(const RipsComplex& k, int d, const Mask& m, int max_diam = kInf) {
    std::vector<Index> out;
    for (PointId v : (m & k.vertices).ids()) {
        auto [lo, hi] = k.starting_at(d, v);
        for (std::size_t i = lo; i < hi; ++i)
            if (k.diameter(d, i) <= max_diam && k.all_in(d, i, m)) out.push_back(static_cast<Index>(i));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// A (d+1)-chain w with boundary z, using only the allowed (d+1)-simplices.
inline std::optional<Column> fill_with(const RipsComplex& k, int d, const Column& z, const std::vector<Index>& allowed) {
    gf2::Reducer red(k.count(d), true);
    const auto& b = k.boundary(d + 1);
    for (Index i : allowed) red.insert(b.col(i), Column{i});
    Column v = z, tag;
    red.reduce(v, &tag);
    if (!v.empty()) return std::nullopt;
    return tag;
}

inline std::optional<Column> fill_cycle(const RipsComplex& k, int d, const Column& z,
                                        std::optional<Locality> locality = std::nullopt) {
    if (d + 1 > k.cap) throw Error("bad-parameter", "filling needs simplices one dimension up");
    if (!is_cycle(k, d, z)) throw Error("not-a-cycle", "boundary of the input chain is nonzero");
    if (z.empty()) return Column{};
    std::vector<Index> allowed;
    if (locality) {
        allowed = simplices_within(k, d + 1, neighborhood(k.space, Mask::of(k.space.size(), {locality->center}), locality->radius));
    } else {
        allowed.resize(k.count(d + 1));
        for (std::size_t i = 0; i < allowed.size(); ++i) allowed[i] = static_cast<Index>(i);
    }
    return fill_with(k, d, z, allowed);
}

struct InducedMap {
    RipsComplex target;
    ChainMap map;
    CoarseMapProfile profile;
};

// Chain map induced by a point map f (source vertex id -> target point id):
// vertices are relabeled and each higher simplex is sent to a local filling of
// the image of its boundary, at the scale schedule[d] of the target.
inline InducedMap induced_chain_map(const std::vector<PointId>& f, const RipsComplex& k, const MetricSpace& y,
                                    const std::vector<int>& schedule, RipsCaps caps = {}) {
    if (static_cast<int>(schedule.size()) != k.cap + 1)
        throw Error("bad-parameter", "schedule needs one scale per dimension");
    for (std::size_t d = 1; d < schedule.size(); ++d)
        if (schedule[d] < schedule[d - 1]) throw Error("bad-parameter", "scale schedule must be non-decreasing");
    if (f.size() != k.space.size()) throw Error("shape-mismatch", "point map must be defined on the source space");
    InducedMap out;
    out.target = build_rips(y, y.all(), schedule.back(), k.cap, caps);
    const RipsComplex& t = out.target;
    out.profile = coarse_map_profile(k.space, y, f);
    gf2::Matrix f0(t.count(0), k.count(0));
    for (std::size_t i = 0; i < k.count(0); ++i) {
        PointId img = f[*k.simplex(0, i)];
        f0.set_col(i, {*t.find(0, &img)});
    }
    out.map.maps.push_back(std::move(f0));
    out.map.displacement.push_back(0);
    for (int d = 1; d <= k.cap; ++d) {
        gf2::Matrix fd(t.count(d), k.count(d));
        int disp = 0;
        int reach = out.map.displacement.back() + 2 * schedule[d];
        for (std::size_t i = 0; i < k.count(d); ++i) {
            Column z = out.map.maps[d - 1].apply(k.boundary(d).col(i));
            PointId base = f[*k.simplex(d, i)];
            std::optional<Column> w;
            for (int rho = 0; rho <= reach + d * schedule[d] && !w; ++rho) {
                Mask ball = neighborhood(y, Mask::of(y.size(), {base}), rho);
                w = fill_with(t, d - 1, z, simplices_within(t, d, ball, schedule[d]));
            }
            if (!w) {
                std::string name;
                for (PointId p : k.simplex_vec(d, i)) name += (name.empty() ? "" : ",") + std::to_string(p);
                throw Error("schedule-exhausted", "cannot fill the image of the boundary of simplex {" + name + "}");
            }
            Mask sup = t.support(d, *w);
            for (PointId p : sup.ids()) disp = std::max(disp, y.distance(base, p));
            fd.set_col(i, std::move(*w));
        }
        out.map.maps.push_back(std::move(fd));
        out.map.displacement.push_back(disp);
    }
    return out;
}

}

#endif
