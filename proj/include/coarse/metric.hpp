#ifndef COARSE_METRIC_HPP
#define COARSE_METRIC_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarse/error.hpp"

namespace coarse {

using PointId = std::uint32_t;
constexpr int kInf = std::numeric_limits<int>::max();

// Bitset over the point ids of one space.
class Mask {
public:
    Mask() = default;
    explicit Mask(std::size_t n, bool value = false) : n_(n), w_((n + 63) / 64, value ? ~0ULL : 0ULL) {
        trim();
    }

    static Mask of(std::size_t n, const std::vector<PointId>& ids) {
        Mask m(n);
        for (PointId i : ids) m.set(i);
        return m;
    }

    std::size_t universe() const { return n_; }

    bool test(PointId i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
    void set(PointId i, bool v = true) {
        if (i >= n_) throw Error("out-of-range", "point id beyond parent space");
        if (v)
            w_[i >> 6] |= 1ULL << (i & 63);
        else
            w_[i >> 6] &= ~(1ULL << (i & 63));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    bool empty() const {
        for (auto x : w_)
            if (x) return false;
        return true;
    }

    std::vector<PointId> ids() const {
        std::vector<PointId> out;
        for (std::size_t b = 0; b < w_.size(); ++b) {
            std::uint64_t x = w_[b];
            while (x) {
                out.push_back(static_cast<PointId>(b * 64 + std::countr_zero(x)));
                x &= x - 1;
            }
        }
        return out;
    }

    Mask operator~() const {
        Mask m = *this;
        for (auto& x : m.w_) x = ~x;
        m.trim();
        return m;
    }
    Mask& operator|=(const Mask& o) { return combine(o, [](auto a, auto b) { return a | b; }); }
    Mask& operator&=(const Mask& o) { return combine(o, [](auto a, auto b) { return a & b; }); }
    Mask& operator^=(const Mask& o) { return combine(o, [](auto a, auto b) { return a ^ b; }); }
    Mask& operator-=(const Mask& o) { return combine(o, [](auto a, auto b) { return a & ~b; }); }
    friend Mask operator|(Mask a, const Mask& b) { return a |= b; }
    friend Mask operator&(Mask a, const Mask& b) { return a &= b; }
    friend Mask operator^(Mask a, const Mask& b) { return a ^= b; }
    friend Mask operator-(Mask a, const Mask& b) { return a -= b; }
    friend bool operator==(const Mask& a, const Mask& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

    bool subset_of(const Mask& o) const {
        check(o);
        for (std::size_t b = 0; b < w_.size(); ++b)
            if (w_[b] & ~o.w_[b]) return false;
        return true;
    }
    bool intersects(const Mask& o) const {
        check(o);
        for (std::size_t b = 0; b < w_.size(); ++b)
            if (w_[b] & o.w_[b]) return true;
        return false;
    }

private:
    template <class F>
    Mask& combine(const Mask& o, F f) {
        check(o);
        for (std::size_t b = 0; b < w_.size(); ++b) w_[b] = f(w_[b], o.w_[b]);
        return *this;
    }
    void check(const Mask& o) const {
        if (o.n_ != n_) throw Error("shape-mismatch", "masks over different spaces");
    }
    void trim() {
        if (n_ % 64 && !w_.empty()) w_.back() &= (1ULL << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Distinguished center and radius of a finite ball model; depth[x] = d(center, x).
struct Window {
    PointId center = 0;
    int radius = 0;
    std::vector<int> depth;

    Mask collar(std::size_t n, int width) const {
        Mask m(n);
        for (PointId x = 0; x < n; ++x)
            if (depth[x] > radius - width) m.set(x);
        return m;
    }
    Mask ball(std::size_t n, int r) const {
        Mask m(n);
        for (PointId x = 0; x < n; ++x)
            if (depth[x] <= r) m.set(x);
        return m;
    }
};

// Finite metric space. Three backends: a unit-edge graph (path metric),
// an explicit distance table, or a subset of another space with the
// restricted metric. Balls and single-source distances are computed lazily.
class MetricSpace {
public:
    using Label = std::vector<int>;

    static MetricSpace from_graph(std::vector<std::vector<PointId>> adjacency, std::vector<Label> labels = {}) {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::graph;
        impl->n = adjacency.size();
        for (auto& a : adjacency) std::sort(a.begin(), a.end());
        impl->adj = std::move(adjacency);
        impl->labels = std::move(labels);
        return MetricSpace(std::move(impl));
    }

    static MetricSpace from_table(std::vector<std::vector<int>> table, std::vector<Label> labels = {}) {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::table;
        impl->n = table.size();
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (table[i].size() != table.size()) throw Error("bad-metric", "distance table is not square");
            if (table[i][i] != 0) throw Error("bad-metric", "nonzero diagonal");
            for (std::size_t j = 0; j < i; ++j)
                if (table[i][j] != table[j][i] || table[i][j] < 0) throw Error("bad-metric", "asymmetric table");
        }
        impl->table = std::move(table);
        impl->labels = std::move(labels);
        return MetricSpace(std::move(impl));
    }

    // Subspace on `mask` with the ambient metric; ids are renumbered in increasing order.
    MetricSpace subspace(const Mask& mask) const {
        auto impl = std::make_shared<Impl>();
        impl->kind = Kind::sub;
        impl->parent = impl_;
        impl->to_parent = mask.ids();
        impl->n = impl->to_parent.size();
        impl->from_parent.assign(size(), -1);
        for (std::size_t i = 0; i < impl->to_parent.size(); ++i)
            impl->from_parent[impl->to_parent[i]] = static_cast<std::int32_t>(i);
        for (PointId p : impl->to_parent)
            impl->labels.push_back(p < impl_->labels.size() ? impl_->labels[p] : Label{});
        MetricSpace s(std::move(impl));
        if (window_) {
            Window w;
            w.radius = window_->radius;
            auto c = s.from_parent_id(window_->center);
            if (!c) throw Error("bad-window", "subspace does not contain the window center");
            w.center = *c;
            for (PointId p : s.impl_->to_parent) w.depth.push_back(window_->depth[p]);
            s.window_ = std::make_shared<Window>(std::move(w));
        }
        return s;
    }

    std::size_t size() const { return impl_->n; }

    const Label& label(PointId x) const {
        static const Label empty;
        return x < impl_->labels.size() ? impl_->labels[x] : empty;
    }
    bool has_labels() const { return !impl_->labels.empty(); }

    std::optional<PointId> find(const Label& l) const {
        std::call_once(impl_->index_once, [&] {
            for (PointId i = 0; i < impl_->labels.size(); ++i) impl_->label_index.emplace(impl_->labels[i], i);
        });
        auto it = impl_->label_index.find(l);
        if (it == impl_->label_index.end()) return std::nullopt;
        return it->second;
    }

    std::optional<PointId> parent_id(PointId x) const {
        if (impl_->kind != Kind::sub) return std::nullopt;
        return impl_->to_parent[x];
    }
    std::optional<PointId> from_parent_id(PointId p) const {
        if (impl_->kind != Kind::sub || p >= impl_->from_parent.size() || impl_->from_parent[p] < 0)
            return std::nullopt;
        return static_cast<PointId>(impl_->from_parent[p]);
    }

    void set_window(Window w) {
        if (w.depth.size() != size()) throw Error("bad-window", "depth table size mismatch");
        window_ = std::make_shared<Window>(std::move(w));
    }
    // Window whose depth is the distance from `center`.
    void set_window(PointId center, int radius) {
        Window w;
        w.center = center;
        w.radius = radius;
        w.depth = distances_from(Mask::of(size(), {center}));
        window_ = std::make_shared<Window>(std::move(w));
    }
    bool has_window() const { return static_cast<bool>(window_); }
    const Window& window() const {
        if (!window_) throw Error("bad-window", "space has no window");
        return *window_;
    }

    Mask all() const { return Mask(size(), true); }
    Mask none() const { return Mask(size()); }

    // Points within r of x with their distances, sorted by id.
    const std::vector<std::pair<PointId, int>>& ball(PointId x, int r) const {
        std::uint64_t key = (static_cast<std::uint64_t>(x) << 20) | static_cast<std::uint32_t>(r);
        {
            std::lock_guard<std::mutex> lock(impl_->mu);
            auto it = impl_->balls.find(key);
            if (it != impl_->balls.end()) return *it->second;
        }
        auto v = std::make_unique<std::vector<std::pair<PointId, int>>>(compute_ball(x, r));
        std::lock_guard<std::mutex> lock(impl_->mu);
        auto [it, fresh] = impl_->balls.emplace(key, std::move(v));
        return *it->second;
    }

    int distance(PointId x, PointId y) const {
        if (x == y) return 0;
        switch (impl_->kind) {
        case Kind::table:
            return impl_->table[x][y];
        case Kind::sub:
            return MetricSpace(impl_->parent).distance(impl_->to_parent[x], impl_->to_parent[y]);
        case Kind::graph:
            break;
        }
        std::shared_ptr<const std::vector<int>> row;
        {
            std::lock_guard<std::mutex> lock(impl_->mu);
            auto it = impl_->rows.find(x);
            if (it != impl_->rows.end()) row = it->second;
        }
        if (!row) {
            auto full = std::make_shared<std::vector<int>>(distances_from(Mask::of(size(), {x})));
            std::lock_guard<std::mutex> lock(impl_->mu);
            if (impl_->rows.size() >= 512) impl_->rows.clear();
            impl_->rows.emplace(x, full);
            row = full;
        }
        return (*row)[y];
    }

    // d(x, S) for every x (kInf when unreachable); search stops beyond `cap`.
    std::vector<int> distances_from(const Mask& s, int cap = kInf) const {
        std::vector<int> d(size(), kInf);
        switch (impl_->kind) {
        case Kind::graph: {
            std::vector<PointId> frontier = s.ids(), next;
            for (PointId x : frontier) d[x] = 0;
            for (int level = 0; !frontier.empty() && level < cap; ++level) {
                next.clear();
                for (PointId x : frontier)
                    for (PointId y : impl_->adj[x])
                        if (d[y] == kInf) {
                            d[y] = level + 1;
                            next.push_back(y);
                        }
                frontier.swap(next);
            }
            break;
        }
        case Kind::table: {
            auto ids = s.ids();
            for (PointId x = 0; x < size(); ++x)
                for (PointId y : ids) d[x] = std::min(d[x], impl_->table[x][y]);
            if (cap != kInf)
                for (auto& v : d)
                    if (v > cap) v = kInf;
            break;
        }
        case Kind::sub: {
            MetricSpace p(impl_->parent);
            Mask ps(p.size());
            for (PointId x : s.ids()) ps.set(impl_->to_parent[x]);
            auto pd = p.distances_from(ps, cap);
            for (PointId x = 0; x < size(); ++x) d[x] = pd[impl_->to_parent[x]];
            break;
        }
        }
        return d;
    }

    bool is_graph() const { return impl_->kind == Kind::graph; }
    const std::vector<PointId>& graph_neighbors(PointId x) const { return impl_->adj[x]; }

private:
    enum class Kind { graph, table, sub };
    struct Impl {
        Kind kind = Kind::graph;
        std::size_t n = 0;
        std::vector<std::vector<PointId>> adj;
        std::vector<std::vector<int>> table;
        std::shared_ptr<const Impl> parent;
        std::vector<PointId> to_parent;
        std::vector<std::int32_t> from_parent;
        std::vector<Label> labels;
        mutable std::once_flag index_once;
        mutable std::map<Label, PointId> label_index;
        mutable std::mutex mu;
        mutable std::unordered_map<std::uint64_t, std::unique_ptr<std::vector<std::pair<PointId, int>>>> balls;
        mutable std::unordered_map<PointId, std::shared_ptr<const std::vector<int>>> rows;
    };

    explicit MetricSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::vector<std::pair<PointId, int>> compute_ball(PointId x, int r) const {
        std::vector<std::pair<PointId, int>> out;
        switch (impl_->kind) {
        case Kind::graph: {
            // BFS truncated at depth r.
            std::unordered_map<PointId, int> seen{{x, 0}};
            std::vector<PointId> frontier{x}, next;
            out.emplace_back(x, 0);
            for (int level = 0; level < r && !frontier.empty(); ++level) {
                next.clear();
                for (PointId u : frontier)
                    for (PointId v : impl_->adj[u])
                        if (seen.emplace(v, level + 1).second) {
                            next.push_back(v);
                            out.emplace_back(v, level + 1);
                        }
                frontier.swap(next);
            }
            break;
        }
        case Kind::table:
            for (PointId y = 0; y < size(); ++y)
                if (impl_->table[x][y] <= r) out.emplace_back(y, impl_->table[x][y]);
            break;
        case Kind::sub: {
            MetricSpace p(impl_->parent);
            for (auto [y, dy] : p.compute_ball(impl_->to_parent[x], r))
                if (impl_->from_parent[y] >= 0) out.emplace_back(static_cast<PointId>(impl_->from_parent[y]), dy);
            break;
        }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::shared_ptr<const Impl> impl_;
    std::shared_ptr<const Window> window_;
};

inline Mask neighborhood(const MetricSpace& x, const Mask& s, int r) {
    if (s.empty()) throw Error("empty-subset", "neighborhood of an empty set");
    if (r < 0) throw Error("bad-parameter", "negative radius");
    auto d = x.distances_from(s, r);
    Mask out(x.size());
    for (PointId p = 0; p < x.size(); ++p)
        if (d[p] <= r) out.set(p);
    return out;
}

// Largest distance from a point of A to B (kInf if some point of A cannot reach B).
inline int directed_distance(const MetricSpace& x, const Mask& a, const Mask& b) {
    auto d = x.distances_from(b);
    int m = 0;
    for (PointId p : a.ids()) m = std::max(m, d[p]);
    return m;
}

inline int hausdorff_distance(const MetricSpace& x, const Mask& a, const Mask& b) {
    if (a.empty() || b.empty()) throw Error("empty-subset", "Hausdorff distance needs nonempty sets");
    return std::max(directed_distance(x, a, b), directed_distance(x, b, a));
}

// Components of the graph on `m` joining points at distance <= r.
// label[x] = component index (in order of smallest member), -1 outside m.
struct Components {
    std::vector<int> label;
    std::vector<std::vector<PointId>> members;
    std::size_t count() const { return members.size(); }
    Mask mask(std::size_t i, std::size_t n) const { return Mask::of(n, members[i]); }
};

inline Components connected_components(const MetricSpace& x, const Mask& m, int r) {
    Components c;
    c.label.assign(x.size(), -1);
    for (PointId s : m.ids()) {
        if (c.label[s] >= 0) continue;
        int id = static_cast<int>(c.members.size());
        c.members.emplace_back();
        std::vector<PointId> stack{s};
        c.label[s] = id;
        while (!stack.empty()) {
            PointId u = stack.back();
            stack.pop_back();
            c.members[id].push_back(u);
            for (auto [v, dv] : x.ball(u, r))
                if (m.test(v) && c.label[v] < 0) {
                    c.label[v] = id;
                    stack.push_back(v);
                }
        }
        std::sort(c.members[id].begin(), c.members[id].end());
    }
    return c;
}

inline std::size_t max_ball_size(const MetricSpace& x, int r) {
    std::size_t m = 0;
    for (PointId p = 0; p < x.size(); ++p) m = std::max(m, x.ball(p, r).size());
    return m;
}

// Minimal t-chain lengths from each source; kInf marks "unreachable".
struct ChainProfile {
    int t = 1;
    std::vector<std::vector<int>> lengths;  // lengths[i][y] for sources[i]
    std::vector<PointId> sources;
    int max_finite = 0;
    std::size_t unreachable_pairs = 0;
    // eta[d] = longest minimal chain among sampled pairs at distance d.
    std::vector<int> eta;
};

inline std::vector<int> chain_lengths_from(const MetricSpace& x, PointId s, int t) {
    std::vector<int> len(x.size(), kInf);
    std::vector<PointId> frontier{s}, next;
    len[s] = 0;
    for (int level = 0; !frontier.empty(); ++level) {
        next.clear();
        for (PointId u : frontier)
            for (auto [v, dv] : x.ball(u, t))
                if (len[v] == kInf) {
                    len[v] = level + 1;
                    next.push_back(v);
                }
        frontier.swap(next);
    }
    return len;
}

inline ChainProfile chain_profile(const MetricSpace& x, int t, std::vector<PointId> sources = {}) {
    if (t < 1) throw Error("bad-parameter", "t-chains need t >= 1");
    if (sources.empty()) {
        sources.resize(x.size());
        std::iota(sources.begin(), sources.end(), 0);
    }
    ChainProfile p;
    p.t = t;
    p.sources = sources;
    for (PointId s : sources) {
        auto len = chain_lengths_from(x, s, t);
        for (PointId y = 0; y < x.size(); ++y) {
            if (len[y] == kInf) {
                ++p.unreachable_pairs;
                continue;
            }
            p.max_finite = std::max(p.max_finite, len[y]);
            int d = x.distance(s, y);
            if (static_cast<std::size_t>(d) >= p.eta.size()) p.eta.resize(d + 1, 0);
            p.eta[d] = std::max(p.eta[d], len[y]);
        }
        p.lengths.push_back(std::move(len));
    }
    return p;
}

// Sampled distortion of a point map f: X -> Y.
struct CoarseMapProfile {
    std::vector<int> eta;  // eta[d]: lower bound on d_Y over sampled pairs with d_X >= d
    std::vector<int> phi;  // phi[d]: upper bound on d_Y over sampled pairs with d_X <= d
    int density = 0;       // max over Y of d(y, f(X))

    bool consistent(int dx, int dy) const {
        if (dx >= static_cast<int>(phi.size())) return true;
        return eta[dx] <= dy && dy <= phi[dx];
    }
};

inline CoarseMapProfile coarse_map_profile(const MetricSpace& x, const MetricSpace& y, const std::vector<PointId>& f,
                                           std::size_t max_pairs = 20000, std::uint64_t seed = 1) {
    if (f.size() != x.size()) throw Error("shape-mismatch", "point map must cover every source point");
    std::vector<std::pair<int, int>> samples;
    std::size_t n = x.size();
    if (n * n <= max_pairs) {
        for (PointId a = 0; a < n; ++a)
            for (PointId b = a; b < n; ++b) samples.emplace_back(x.distance(a, b), y.distance(f[a], f[b]));
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<PointId> pick(0, static_cast<PointId>(n - 1));
        for (std::size_t i = 0; i < max_pairs; ++i) {
            PointId a = pick(rng), b = pick(rng);
            samples.emplace_back(x.distance(a, b), y.distance(f[a], f[b]));
        }
    }
    int dmax = 0;
    for (auto [dx, dy] : samples)
        if (dx != kInf) dmax = std::max(dmax, dx);
    CoarseMapProfile p;
    p.phi.assign(dmax + 1, 0);
    p.eta.assign(dmax + 1, kInf);
    for (auto [dx, dy] : samples) {
        if (dx == kInf) continue;
        p.phi[dx] = std::max(p.phi[dx], dy);
        p.eta[dx] = std::min(p.eta[dx], dy);
    }
    for (int d = 1; d <= dmax; ++d) p.phi[d] = std::max(p.phi[d], p.phi[d - 1]);
    for (int d = dmax - 1; d >= 0; --d) p.eta[d] = std::min(p.eta[d], p.eta[d + 1]);
    Mask image(y.size());
    for (PointId v : f) image.set(v);
    p.density = directed_distance(y, y.all(), image);
    return p;
}

}

#endif
