#ifndef COARSE_GF2_HPP
#define COARSE_GF2_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/error.hpp"

namespace coarse::gf2 {

using Index = std::uint32_t;

// A sparse GF(2) vector: strictly increasing list of nonzero coordinates.
using Column = std::vector<Index>;

// a <- a + b
inline void add_into(Column& a, const Column& b) {
    if (b.empty()) return;
    if (a.empty()) {
        a = b;
        return;
    }
    thread_local Column out;
    out.clear();
    out.reserve(a.size() + b.size());
    auto i = a.cbegin();
    auto j = b.cbegin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            out.push_back(*i++);
        } else if (*j < *i) {
            out.push_back(*j++);
        } else {
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), i, a.cend());
    out.insert(out.end(), j, b.end());
    a.swap(out);
}

inline Column sum(Column a, const Column& b) {
    add_into(a, b);
    return a;
}

inline bool contains(const Column& c, Index i) { return std::binary_search(c.begin(), c.end(), i); }

// Parity of the overlap; the standard pairing of a cochain with a chain.
inline bool dot(const Column& a, const Column& b) {
    bool p = false;
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            p = !p;
            ++i;
            ++j;
        }
    }
    return p;
}

// Normalizes an arbitrary index list (duplicates cancel in pairs).
inline Column from_indices(std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    Column out;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(v[i]);
        i = j;
    }
    return out;
}

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols, Column{}) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_.size(); }

    const Column& col(std::size_t j) const { return cols_[j]; }
    Column& col(std::size_t j) { return cols_[j]; }
    const std::vector<Column>& columns() const { return cols_; }

    void set_col(std::size_t j, Column c) { cols_[j] = std::move(c); }
    void push_col(Column c) { cols_.push_back(std::move(c)); }

    bool get(std::size_t i, std::size_t j) const { return contains(cols_[j], static_cast<Index>(i)); }

    void toggle(std::size_t i, std::size_t j) { add_into(cols_[j], Column{static_cast<Index>(i)}); }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& c : cols_) n += c.size();
        return n;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.cols_[i] = {static_cast<Index>(i)};
        return m;
    }

    Matrix transpose() const {
        std::vector<std::vector<Index>> rows(rows_);
        for (std::size_t j = 0; j < cols_.size(); ++j)
            for (Index i : cols_[j]) rows[i].push_back(static_cast<Index>(j));
        Matrix t(cols_.size(), rows_);
        for (std::size_t i = 0; i < rows_; ++i) t.cols_[i] = std::move(rows[i]);
        return t;
    }

    // y = A x
    Column apply(const Column& x) const {
        std::vector<Index> acc;
        for (Index j : x) {
            if (j >= cols_.size()) throw Error("shape-mismatch", "vector index beyond column count");
            acc.insert(acc.end(), cols_[j].begin(), cols_[j].end());
        }
        return from_indices(std::move(acc));
    }

    Matrix operator*(const Matrix& b) const {
        if (cols() != b.rows()) throw Error("shape-mismatch", "product of incompatible matrices");
        Matrix out(rows_, b.cols());
        for (std::size_t j = 0; j < b.cols(); ++j) out.cols_[j] = apply(b.cols_[j]);
        return out;
    }

    bool is_zero() const {
        for (const auto& c : cols_)
            if (!c.empty()) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::vector<Column> cols_;
};

// Incremental column reduction. Pivot of a column is its largest row index;
// every stored column has a distinct pivot. Optional tags record which input
// columns were summed to produce each stored column.
class Reducer {
public:
    explicit Reducer(std::size_t rows, bool track = false)
        : pivot_(rows, -1), track_(track) {}

    std::size_t rows() const { return pivot_.size(); }
    std::size_t rank() const { return basis_.size(); }
    const std::vector<Column>& basis() const { return basis_; }
    const std::vector<Column>& tags() const { return tags_; }

    // Reduces v in place; tag accumulates the tags of the basis columns used.
    void reduce(Column& v, Column* tag = nullptr) const {
        while (!v.empty()) {
            std::int32_t p = pivot_[v.back()];
            if (p < 0) return;
            add_into(v, basis_[p]);
            if (tag && track_) add_into(*tag, tags_[p]);
        }
    }

    // Like reduce, but stops once the pivot drops below `floor`.
    void reduce_above(Column& v, Index floor, Column* tag = nullptr) const {
        while (!v.empty() && v.back() >= floor) {
            std::int32_t p = pivot_[v.back()];
            if (p < 0) return;
            add_into(v, basis_[p]);
            if (tag && track_) add_into(*tag, tags_[p]);
        }
    }

    // Returns true if v was independent of the stored columns (and is now stored).
    // On false, `tag` (when tracking) holds a combination summing to zero.
    bool insert(Column v, Column tag = {}) {
        for (Index i : v)
            if (i >= pivot_.size()) throw Error("shape-mismatch", "row index beyond reducer height");
        reduce(v, &tag);
        if (v.empty()) {
            last_dependency_ = std::move(tag);
            return false;
        }
        pivot_[v.back()] = static_cast<std::int32_t>(basis_.size());
        basis_.push_back(std::move(v));
        if (track_) tags_.push_back(std::move(tag));
        return true;
    }

    const Column& last_dependency() const { return last_dependency_; }

    bool in_span(Column v) const {
        reduce(v);
        return v.empty();
    }

    bool is_pivot(Index row) const { return pivot_[row] >= 0; }

private:
    std::vector<std::int32_t> pivot_;
    std::vector<Column> basis_;
    std::vector<Column> tags_;
    Column last_dependency_;
    bool track_;
};

// Span of a list of vectors, stored in column-echelon form.
class Subspace {
public:
    explicit Subspace(std::size_t ambient) : ambient_(ambient), red_(ambient) {}

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return red_.rank(); }
    const std::vector<Column>& basis() const { return red_.basis(); }

    bool add(Column v) { return red_.insert(std::move(v)); }
    bool contains(const Column& v) const { return red_.in_span(v); }

private:
    std::size_t ambient_;
    Reducer red_;
};

inline std::size_t rank(const Matrix& a) {
    Reducer r(a.rows());
    for (const auto& c : a.columns()) r.insert(c);
    return r.rank();
}

// Any x with A x = b, or nullopt when inconsistent.
inline std::optional<Column> solve(const Matrix& a, const Column& b) {
    for (Index i : b)
        if (i >= a.rows()) throw Error("shape-mismatch", "right-hand side longer than row count");
    Reducer r(a.rows(), true);
    for (std::size_t j = 0; j < a.cols(); ++j) r.insert(a.col(j), Column{static_cast<Index>(j)});
    Column v = b, tag;
    r.reduce(v, &tag);
    if (!v.empty()) return std::nullopt;
    return tag;
}

inline Subspace kernel_basis(const Matrix& a) {
    Subspace k(a.cols());
    Reducer r(a.rows(), true);
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (!r.insert(a.col(j), Column{static_cast<Index>(j)})) k.add(r.last_dependency());
    return k;
}

// Kernel vectors as plain columns (not echelonized), in discovery order.
inline std::vector<Column> kernel_vectors(const Matrix& a) {
    std::vector<Column> out;
    Reducer r(a.rows(), true);
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (!r.insert(a.col(j), Column{static_cast<Index>(j)})) out.push_back(r.last_dependency());
    return out;
}

inline Subspace image_basis(const Matrix& a) {
    Subspace s(a.rows());
    for (const auto& c : a.columns()) s.add(c);
    return s;
}

struct ImageRank {
    std::size_t rank = 0;
    // Inner cycles (in inner coordinates) whose images form a basis of the image.
    std::vector<Column> representatives;
};

// Rank of (f(Z) + B) / B, where Z is spanned by `cycles` (inner coordinates),
// f maps inner chains to outer chains and B is the column space of `outer_boundary`.
// When `kill_boundary` and `kill_map` are given, only the part of Z whose image
// under kill_map is a boundary of kill_boundary is considered.
inline ImageRank image_rank_modulo(const std::vector<Column>& cycles, const Matrix& f,
                                   const Matrix& outer_boundary,
                                   const Matrix* kill_map = nullptr,
                                   const Matrix* kill_boundary = nullptr) {
    if (f.rows() != outer_boundary.rows())
        throw Error("shape-mismatch", "chain map target differs from outer chain group");
    std::vector<Column> z = cycles;
    if (kill_map && kill_boundary) {
        Reducer kb(kill_boundary->rows());
        for (const auto& c : kill_boundary->columns()) kb.insert(c);
        Reducer dep(kill_boundary->rows(), true);
        std::vector<Column> keep;
        for (std::size_t t = 0; t < z.size(); ++t) {
            Column img = kill_map->apply(z[t]);
            kb.reduce(img);
            if (!dep.insert(img, Column{static_cast<Index>(t)})) {
                Column combo;
                for (Index u : dep.last_dependency()) add_into(combo, z[u]);
                keep.push_back(std::move(combo));
            }
        }
        z = std::move(keep);
    }
    Reducer b(outer_boundary.rows());
    for (const auto& c : outer_boundary.columns()) b.insert(c);
    Reducer img(outer_boundary.rows(), true);
    ImageRank out;
    for (std::size_t t = 0; t < z.size(); ++t) {
        Column v = f.apply(z[t]);
        b.reduce(v);
        Column tag{static_cast<Index>(t)};
        if (img.insert(std::move(v), tag)) {
            const Column& used = img.tags().back();
            Column rep;
            for (Index u : used) add_into(rep, z[u]);
            out.representatives.push_back(std::move(rep));
        }
    }
    out.rank = img.rank();
    return out;
}

// Rank of the image of the map on H_k induced by f, given the inner k-th
// boundary (whose kernel is Z_k; pass the augmentation row for k = 0),
// the outer (k+1)-th boundary, and f_k.
inline ImageRank quotient_image_rank(const Matrix& inner_boundary_k, const Matrix& outer_boundary_k1,
                                     const Matrix& f_k) {
    if (f_k.cols() != inner_boundary_k.cols())
        throw Error("shape-mismatch", "chain map source differs from inner chain group");
    return image_rank_modulo(kernel_vectors(inner_boundary_k), f_k, outer_boundary_k1);
}

}

#endif
