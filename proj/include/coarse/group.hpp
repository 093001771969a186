#ifndef COARSE_GROUP_HPP
#define COARSE_GROUP_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/metric.hpp"

namespace coarse {

using Element = std::vector<int>;

struct ElementHash {
    std::size_t operator()(const Element& e) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (int v : e) {
            h ^= static_cast<std::uint32_t>(v);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h ^ e.size());
    }
};

// A group with a solvable word problem through canonical normal forms.
// Elements are opaque integer codes; each family defines its own encoding.
class GroupModel {
public:
    virtual ~GroupModel() = default;
    virtual std::string family() const = 0;
    virtual std::string describe() const = 0;
    virtual Element identity() const = 0;
    virtual Element multiply(const Element& a, const Element& b) const = 0;
    virtual Element inverse(const Element& a) const = 0;
    virtual std::vector<Element> generators() const = 0;
    virtual std::vector<std::string> generator_names() const = 0;
    // Word length with respect to generators(); closed form per family.
    virtual int length(const Element& a) const = 0;
    virtual std::string format(const Element& a) const = 0;
    // Number of elements of length <= r when a closed form is known.
    virtual std::optional<std::size_t> ball_size(int) const { return std::nullopt; }

    Element power(const Element& g, int k) const {
        Element out = identity();
        Element base = k < 0 ? inverse(g) : g;
        for (int i = 0; i < std::abs(k); ++i) out = multiply(out, base);
        return out;
    }

    // Signed 1-based generator indices, e.g. {1, -2} = a b^-1.
    Element word(const std::vector<int>& letters) const {
        auto gens = generators();
        Element out = identity();
        for (int l : letters) {
            if (l == 0 || std::abs(l) > static_cast<int>(gens.size()))
                throw Error("bad-subgroup-spec", "generator index out of range");
            const Element& g = gens[std::abs(l) - 1];
            out = multiply(out, l > 0 ? g : inverse(g));
        }
        return out;
    }
};

using GroupPtr = std::shared_ptr<const GroupModel>;

namespace detail {

inline std::string letter_name(int index) {
    static const char* names = "abcdefghijklmnopqrstuvwxyz";
    return index < 26 ? std::string(1, names[index]) : "g" + std::to_string(index);
}

inline std::string format_letters(const std::vector<int>& w, const std::vector<std::string>& names) {
    if (w.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        if (!out.empty()) out += " ";
        out += names[std::abs(w[i]) - 1];
        int p = static_cast<int>(j - i) * (w[i] > 0 ? 1 : -1);
        if (p != 1) out += "^" + std::to_string(p);
        i = j;
    }
    return out;
}

inline std::vector<int> free_reduce(std::vector<int> w) {
    std::vector<int> out;
    for (int l : w) {
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

}

class FreeAbelian : public GroupModel {
public:
    explicit FreeAbelian(int n) : n_(n) {
        if (n < 1) throw Error("bad-group", "rank must be positive");
    }
    std::string family() const override { return "free_abelian"; }
    std::string describe() const override { return "Z^" + std::to_string(n_); }
    Element identity() const override { return Element(n_, 0); }
    Element multiply(const Element& a, const Element& b) const override {
        Element c(n_);
        for (int i = 0; i < n_; ++i) c[i] = a[i] + b[i];
        return c;
    }
    Element inverse(const Element& a) const override {
        Element c(n_);
        for (int i = 0; i < n_; ++i) c[i] = -a[i];
        return c;
    }
    std::vector<Element> generators() const override {
        std::vector<Element> g;
        for (int i = 0; i < n_; ++i) {
            Element e(n_, 0);
            e[i] = 1;
            g.push_back(e);
        }
        return g;
    }
    std::vector<std::string> generator_names() const override {
        std::vector<std::string> out;
        for (int i = 0; i < n_; ++i) out.push_back(detail::letter_name(i));
        return out;
    }
    int length(const Element& a) const override {
        int s = 0;
        for (int v : a) s += std::abs(v);
        return s;
    }
    std::string format(const Element& a) const override {
        std::string out = "(";
        for (int i = 0; i < n_; ++i) out += (i ? "," : "") + std::to_string(a[i]);
        return out + ")";
    }
    std::optional<std::size_t> ball_size(int r) const override {
        // |B(n, r)| = sum_k 2^k C(n,k) C(r,k)
        std::size_t total = 0;
        for (int k = 0; k <= std::min(n_, r); ++k) total += (std::size_t{1} << k) * binom(n_, k) * binom(r, k);
        return total;
    }
    int rank() const { return n_; }

private:
    static std::size_t binom(int n, int k) {
        std::size_t r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }
    int n_;
};

class FreeGroup : public GroupModel {
public:
    explicit FreeGroup(int k) : k_(k) {
        if (k < 1) throw Error("bad-group", "rank must be positive");
    }
    std::string family() const override { return "free"; }
    std::string describe() const override { return "F_" + std::to_string(k_); }
    Element identity() const override { return {}; }
    Element multiply(const Element& a, const Element& b) const override {
        Element c = a;
        for (int l : b) {
            if (!c.empty() && c.back() == -l)
                c.pop_back();
            else
                c.push_back(l);
        }
        return c;
    }
    Element inverse(const Element& a) const override {
        Element c(a.rbegin(), a.rend());
        for (int& l : c) l = -l;
        return c;
    }
    std::vector<Element> generators() const override {
        std::vector<Element> g;
        for (int i = 1; i <= k_; ++i) g.push_back({i});
        return g;
    }
    std::vector<std::string> generator_names() const override {
        std::vector<std::string> out;
        for (int i = 0; i < k_; ++i) out.push_back(detail::letter_name(i));
        return out;
    }
    int length(const Element& a) const override { return static_cast<int>(a.size()); }
    std::string format(const Element& a) const override { return detail::format_letters(a, generator_names()); }
    std::optional<std::size_t> ball_size(int r) const override {
        if (k_ == 1) return 2 * static_cast<std::size_t>(r) + 1;
        std::size_t total = 1, sphere = 2 * k_;
        for (int i = 1; i <= r; ++i) {
            total += sphere;
            sphere *= 2 * k_ - 1;
        }
        return total;
    }

private:
    int k_;
};

// Direct product; element = concatenation of [length, code...] blocks.
class DirectProduct : public GroupModel {
public:
    explicit DirectProduct(std::vector<GroupPtr> factors) : f_(std::move(factors)) {
        if (f_.size() < 2) throw Error("bad-group", "product needs at least two factors");
    }
    std::string family() const override { return "product"; }
    std::string describe() const override {
        std::string out;
        for (std::size_t i = 0; i < f_.size(); ++i) out += (i ? " x " : "") + f_[i]->describe();
        return out;
    }
    Element identity() const override {
        std::vector<Element> parts;
        for (auto& f : f_) parts.push_back(f->identity());
        return pack(parts);
    }
    Element multiply(const Element& a, const Element& b) const override {
        auto pa = unpack(a), pb = unpack(b);
        for (std::size_t i = 0; i < f_.size(); ++i) pa[i] = f_[i]->multiply(pa[i], pb[i]);
        return pack(pa);
    }
    Element inverse(const Element& a) const override {
        auto pa = unpack(a);
        for (std::size_t i = 0; i < f_.size(); ++i) pa[i] = f_[i]->inverse(pa[i]);
        return pack(pa);
    }
    std::vector<Element> generators() const override {
        std::vector<Element> out;
        for (std::size_t i = 0; i < f_.size(); ++i)
            for (auto& g : f_[i]->generators()) out.push_back(embed(i, g));
        return out;
    }
    std::vector<std::string> generator_names() const override {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < f_.size(); ++i)
            for (auto& n : f_[i]->generator_names()) out.push_back(n + std::to_string(i + 1));
        return out;
    }
    int length(const Element& a) const override {
        auto pa = unpack(a);
        int s = 0;
        for (std::size_t i = 0; i < f_.size(); ++i) s += f_[i]->length(pa[i]);
        return s;
    }
    std::string format(const Element& a) const override {
        auto pa = unpack(a);
        std::string out = "<";
        for (std::size_t i = 0; i < f_.size(); ++i) out += (i ? " | " : "") + f_[i]->format(pa[i]);
        return out + ">";
    }
    Element embed(std::size_t i, const Element& g) const {
        std::vector<Element> parts;
        for (std::size_t j = 0; j < f_.size(); ++j) parts.push_back(j == i ? g : f_[j]->identity());
        return pack(parts);
    }
    const std::vector<GroupPtr>& factors() const { return f_; }
    std::vector<Element> unpack(const Element& a) const {
        std::vector<Element> out;
        std::size_t p = 0;
        for (std::size_t i = 0; i < f_.size(); ++i) {
            int len = a.at(p++);
            out.emplace_back(a.begin() + p, a.begin() + p + len);
            p += len;
        }
        return out;
    }

private:
    static Element pack(const std::vector<Element>& parts) {
        Element out;
        for (auto& p : parts) {
            out.push_back(static_cast<int>(p.size()));
            out.insert(out.end(), p.begin(), p.end());
        }
        return out;
    }
    std::vector<GroupPtr> f_;
};

// Free product; element = alternating syllables [factor, length, code...].
class FreeProduct : public GroupModel {
public:
    explicit FreeProduct(std::vector<GroupPtr> factors) : f_(std::move(factors)) {
        if (f_.size() < 2) throw Error("bad-group", "free product needs at least two factors");
    }
    std::string family() const override { return "free_product"; }
    std::string describe() const override {
        std::string out;
        for (std::size_t i = 0; i < f_.size(); ++i) out += (i ? " * " : "") + f_[i]->describe();
        return out;
    }
    Element identity() const override { return {}; }
    Element multiply(const Element& a, const Element& b) const override {
        auto sa = split(a), sb = split(b);
        for (auto& s : sb) {
            if (!sa.empty() && sa.back().first == s.first) {
                Element m = f_[s.first]->multiply(sa.back().second, s.second);
                if (m == f_[s.first]->identity())
                    sa.pop_back();
                else
                    sa.back().second = std::move(m);
            } else {
                sa.push_back(s);
            }
        }
        return join(sa);
    }
    Element inverse(const Element& a) const override {
        auto sa = split(a);
        std::reverse(sa.begin(), sa.end());
        for (auto& s : sa) s.second = f_[s.first]->inverse(s.second);
        return join(sa);
    }
    std::vector<Element> generators() const override {
        std::vector<Element> out;
        for (std::size_t i = 0; i < f_.size(); ++i)
            for (auto& g : f_[i]->generators()) out.push_back(join({{static_cast<int>(i), g}}));
        return out;
    }
    std::vector<std::string> generator_names() const override {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < f_.size(); ++i)
            for (auto& n : f_[i]->generator_names()) out.push_back(n + std::to_string(i + 1));
        return out;
    }
    int length(const Element& a) const override {
        int s = 0;
        for (auto& sy : split(a)) s += f_[sy.first]->length(sy.second);
        return s;
    }
    std::string format(const Element& a) const override {
        auto sa = split(a);
        if (sa.empty()) return "e";
        std::string out;
        for (auto& s : sa) out += (out.empty() ? "" : " . ") + f_[s.first]->format(s.second) + "_" + std::to_string(s.first + 1);
        return out;
    }

private:
    using Syllable = std::pair<int, Element>;
    static std::vector<Syllable> split(const Element& a) {
        std::vector<Syllable> out;
        for (std::size_t p = 0; p < a.size();) {
            int f = a[p], len = a[p + 1];
            out.emplace_back(f, Element(a.begin() + p + 2, a.begin() + p + 2 + len));
            p += 2 + len;
        }
        return out;
    }
    static Element join(const std::vector<Syllable>& s) {
        Element out;
        for (auto& [f, e] : s) {
            out.push_back(f);
            out.push_back(static_cast<int>(e.size()));
            out.insert(out.end(), e.begin(), e.end());
        }
        return out;
    }
    std::vector<GroupPtr> f_;
};

// <a,b | [a,b]> *_<a> <a,c | [a,c]>. The amalgamated generator a is central,
// so the coset-representative normal form is (power of a, reduced word in b, c).
class AmalgamZ2 : public GroupModel {
public:
    std::string family() const override { return "amalgam_z2_z_z2"; }
    std::string describe() const override { return "Z^2 *_Z Z^2"; }
    Element identity() const override { return {0}; }
    Element multiply(const Element& x, const Element& y) const override {
        Element out{x[0] + y[0]};
        std::vector<int> w(x.begin() + 1, x.end());
        w.insert(w.end(), y.begin() + 1, y.end());
        w = detail::free_reduce(std::move(w));
        out.insert(out.end(), w.begin(), w.end());
        return out;
    }
    Element inverse(const Element& x) const override {
        Element out{-x[0]};
        for (std::size_t i = x.size(); i > 1; --i) out.push_back(-x[i - 1]);
        return out;
    }
    std::vector<Element> generators() const override { return {{1}, {0, 1}, {0, 2}}; }
    std::vector<std::string> generator_names() const override { return {"a", "b", "c"}; }
    int length(const Element& x) const override { return std::abs(x[0]) + static_cast<int>(x.size()) - 1; }
    std::string format(const Element& x) const override {
        std::vector<int> w(x.begin() + 1, x.end());
        std::string s = x[0] ? "a^" + std::to_string(x[0]) : "";
        if (!w.empty()) s += (s.empty() ? "" : " ") + detail::format_letters(w, {"b", "c"});
        return s.empty() ? "e" : s;
    }
};

// Z_2 wr Z with generators t (shift) and a (toggle at cursor);
// element = [cursor, lit positions in increasing order...].
class Lamplighter : public GroupModel {
public:
    std::string family() const override { return "lamplighter"; }
    std::string describe() const override { return "Z_2 wr Z"; }
    Element identity() const override { return {0}; }
    Element multiply(const Element& x, const Element& y) const override {
        std::vector<int> lit(x.begin() + 1, x.end());
        for (std::size_t i = 1; i < y.size(); ++i) lit.push_back(y[i] + x[0]);
        std::vector<int> norm;
        std::sort(lit.begin(), lit.end());
        for (std::size_t i = 0; i < lit.size();) {
            std::size_t j = i;
            while (j < lit.size() && lit[j] == lit[i]) ++j;
            if ((j - i) % 2) norm.push_back(lit[i]);
            i = j;
        }
        Element out{x[0] + y[0]};
        out.insert(out.end(), norm.begin(), norm.end());
        return out;
    }
    Element inverse(const Element& x) const override {
        Element out{-x[0]};
        for (std::size_t i = 1; i < x.size(); ++i) out.push_back(x[i] - x[0]);
        return out;
    }
    std::vector<Element> generators() const override { return {{1}, {0, 0}}; }
    std::vector<std::string> generator_names() const override { return {"t", "a"}; }
    int length(const Element& x) const override {
        int p = x[0], lo = std::min(0, p), hi = std::max(0, p);
        for (std::size_t i = 1; i < x.size(); ++i) {
            lo = std::min(lo, x[i]);
            hi = std::max(hi, x[i]);
        }
        int left_first = -lo + (hi - lo) + (hi - p);
        int right_first = hi + (hi - lo) + (p - lo);
        return static_cast<int>(x.size()) - 1 + std::min(left_first, right_first);
    }
    std::string format(const Element& x) const override {
        std::string s = "[cursor " + std::to_string(x[0]) + "; lit {";
        for (std::size_t i = 1; i < x.size(); ++i) s += (i > 1 ? "," : "") + std::to_string(x[i]);
        return s + "}]";
    }
};

// All elements of word length <= R, with the Cayley-graph path metric.
class BallModel {
public:
    GroupPtr group;
    int radius = 0;
    MetricSpace space = MetricSpace::from_graph({});
    std::vector<Element> elements;
    std::vector<int> word_length;

    std::optional<PointId> id(const Element& g) const {
        auto it = index_.find(g);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    PointId identity_id() const { return *id(group->identity()); }

    // Global word metric |x^-1 y| (may exceed the path metric inside the ball near its edge).
    int word_distance(PointId x, PointId y) const {
        return group->length(group->multiply(group->inverse(elements[x]), elements[y]));
    }

    // Left multiplication by g; -1 where the image leaves the ball.
    std::vector<std::int32_t> left_action(const Element& g) const {
        std::vector<std::int32_t> out(elements.size(), -1);
        for (PointId x = 0; x < elements.size(); ++x) {
            auto y = id(group->multiply(g, elements[x]));
            if (y) out[x] = static_cast<std::int32_t>(*y);
        }
        return out;
    }

    std::vector<std::int32_t> right_action(const Element& g) const {
        std::vector<std::int32_t> out(elements.size(), -1);
        for (PointId x = 0; x < elements.size(); ++x) {
            auto y = id(group->multiply(elements[x], g));
            if (y) out[x] = static_cast<std::int32_t>(*y);
        }
        return out;
    }

    std::unordered_map<Element, PointId, ElementHash> index_;
};

inline BallModel build_ball(GroupPtr group, int radius, std::size_t cap = 2'000'000) {
    if (radius < 1) throw Error("bad-parameter", "ball radius must be positive");
    if (auto est = group->ball_size(radius); est && *est > cap)
        throw Error("window-too-large", "ball of radius " + std::to_string(radius) + " has " + std::to_string(*est) +
                                            " elements (cap " + std::to_string(cap) + ")");
    BallModel b;
    b.group = group;
    b.radius = radius;
    auto gens = group->generators();
    std::vector<Element> steps;
    for (auto& g : gens) {
        steps.push_back(g);
        steps.push_back(group->inverse(g));
    }
    b.elements.push_back(group->identity());
    b.word_length.push_back(0);
    b.index_.emplace(group->identity(), 0);
    std::vector<std::vector<PointId>> adj(1);
    std::size_t head = 0;
    while (head < b.elements.size()) {
        PointId x = static_cast<PointId>(head++);
        for (auto& s : steps) {
            Element y = group->multiply(b.elements[x], s);
            auto it = b.index_.find(y);
            PointId yid;
            if (it == b.index_.end()) {
                if (b.word_length[x] >= radius) continue;
                if (b.elements.size() >= cap)
                    throw Error("window-too-large", "ball of radius " + std::to_string(radius) + " exceeds " +
                                                        std::to_string(cap) + " elements");
                yid = static_cast<PointId>(b.elements.size());
                b.elements.push_back(y);
                b.word_length.push_back(b.word_length[x] + 1);
                b.index_.emplace(std::move(y), yid);
                adj.emplace_back();
            } else {
                yid = it->second;
            }
            if (yid != x && std::find(adj[x].begin(), adj[x].end(), yid) == adj[x].end()) {
                adj[x].push_back(yid);
                adj[yid].push_back(x);
            }
        }
    }
    std::vector<MetricSpace::Label> labels(b.elements.begin(), b.elements.end());
    b.space = MetricSpace::from_graph(std::move(adj), std::move(labels));
    Window w;
    w.center = 0;
    w.radius = radius;
    w.depth = b.word_length;
    b.space.set_window(std::move(w));
    return b;
}

// Subgroup descriptions: explicit generators (as words), or a named standard subgroup.
struct SubgroupSpec {
    enum class Kind { generators, axis, lattice, factor };
    Kind kind = Kind::generators;
    std::vector<std::vector<int>> words;  // signed 1-based generator indices
    int index = 0;                        // axis / factor index (0-based)
    int multiple = 1;                     // sublattice kZ^n

    static SubgroupSpec of_words(std::vector<std::vector<int>> w) {
        SubgroupSpec s;
        s.words = std::move(w);
        return s;
    }
    static SubgroupSpec axis(int i) {
        SubgroupSpec s;
        s.kind = Kind::axis;
        s.index = i;
        return s;
    }
    static SubgroupSpec lattice(int k) {
        SubgroupSpec s;
        s.kind = Kind::lattice;
        s.multiple = k;
        return s;
    }
    static SubgroupSpec factor(int i) {
        SubgroupSpec s;
        s.kind = Kind::factor;
        s.index = i;
        return s;
    }
};

inline std::vector<Element> subgroup_generators(const GroupModel& g, const SubgroupSpec& spec) {
    auto gens = g.generators();
    switch (spec.kind) {
    case SubgroupSpec::Kind::generators: {
        if (spec.words.empty()) throw Error("bad-subgroup-spec", "no generators given");
        std::vector<Element> out;
        for (auto& w : spec.words) out.push_back(g.word(w));
        return out;
    }
    case SubgroupSpec::Kind::axis:
        if (spec.index < 0 || spec.index >= static_cast<int>(gens.size()))
            throw Error("bad-subgroup-spec", "axis index out of range");
        return {gens[spec.index]};
    case SubgroupSpec::Kind::lattice: {
        if (g.family() != "free_abelian" || spec.multiple < 1)
            throw Error("bad-subgroup-spec", "sublattice kZ^n needs a free abelian group and k >= 1");
        std::vector<Element> out;
        for (auto& e : gens) out.push_back(g.power(e, spec.multiple));
        return out;
    }
    case SubgroupSpec::Kind::factor: {
        auto* p = dynamic_cast<const DirectProduct*>(&g);
        if (!p || spec.index < 0 || spec.index >= static_cast<int>(p->factors().size()))
            throw Error("bad-subgroup-spec", "factor subgroup needs a direct product and a valid index");
        std::vector<Element> out;
        for (auto& e : p->factors()[spec.index]->generators()) out.push_back(p->embed(spec.index, e));
        return out;
    }
    }
    throw Error("bad-subgroup-spec", "unknown kind");
}

// Mask of ball elements lying in the subgroup. Subgroup elements are found by
// breadth-first search over the subgroup generators, bounded in word length by 2R + max generator length.
inline Mask subgroup_trace(const BallModel& ball, const SubgroupSpec& spec) {
    const GroupModel& g = *ball.group;
    auto gens = subgroup_generators(g, spec);
    std::vector<Element> steps;
    int longest = 0;
    for (auto& h : gens) {
        steps.push_back(h);
        steps.push_back(g.inverse(h));
        longest = std::max(longest, g.length(h));
    }
    int bound = 2 * ball.radius + longest;
    Mask out(ball.elements.size());
    std::unordered_map<Element, char, ElementHash> seen;
    std::vector<Element> frontier{g.identity()};
    seen.emplace(g.identity(), 1);
    while (!frontier.empty()) {
        std::vector<Element> next;
        for (auto& x : frontier) {
            if (auto id = ball.id(x)) out.set(*id);
            for (auto& s : steps) {
                Element y = g.multiply(x, s);
                if (g.length(y) > bound) continue;
                if (seen.emplace(y, 1).second) next.push_back(std::move(y));
            }
        }
        frontier.swap(next);
    }
    return out;
}

enum class Trend { bounded, growing, inconclusive };

inline std::string to_string(Trend t) {
    switch (t) {
    case Trend::bounded:
        return "bounded";
    case Trend::growing:
        return "growing";
    default:
        return "inconclusive";
    }
}

// bounded: constant over the last three values; growing: strictly increasing over them.
inline Trend trend_of(const std::vector<int>& v) {
    if (v.size() < 3) return Trend::inconclusive;
    int a = v[v.size() - 3], b = v[v.size() - 2], c = v[v.size() - 1];
    if (a == b && b == c) return Trend::bounded;
    if (a < b && b < c) return Trend::growing;
    return Trend::inconclusive;
}

struct CommensurabilityReport {
    std::vector<int> radii;
    std::vector<int> distances;
    Trend verdict = Trend::inconclusive;
};

inline CommensurabilityReport commensurability_probe(GroupPtr g, const SubgroupSpec& h, const SubgroupSpec& k,
                                                     const std::vector<int>& radii) {
    CommensurabilityReport rep;
    for (int r : radii) {
        BallModel b = build_ball(g, r);
        rep.radii.push_back(r);
        rep.distances.push_back(hausdorff_distance(b.space, subgroup_trace(b, h), subgroup_trace(b, k)));
    }
    rep.verdict = trend_of(rep.distances);
    return rep;
}

}

#endif
