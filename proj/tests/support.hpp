#ifndef COARSE_TEST_SUPPORT_HPP
#define COARSE_TEST_SUPPORT_HPP

#include <memory>
#include <vector>

#include "coarse/gf2.hpp"
#include "coarse/group.hpp"
#include "coarse/metric.hpp"
#include "oracles.hpp"

namespace support {

using namespace coarse;
using gf2::Column;
using gf2::Index;

inline oracle::Dense to_dense(const gf2::Matrix& m) {
    oracle::Dense d(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (Index i : m.col(j)) d.a[i][j] = 1;
    return d;
}

inline gf2::Matrix to_sparse(const oracle::Dense& d) {
    gf2::Matrix m(d.rows, d.cols);
    for (std::size_t j = 0; j < d.cols; ++j) {
        Column c;
        for (std::size_t i = 0; i < d.rows; ++i)
            if (d.a[i][j]) c.push_back(static_cast<Index>(i));
        m.set_col(j, std::move(c));
    }
    return m;
}

inline oracle::Bits to_bits(const Column& c, std::size_t n) {
    oracle::Bits b(n, 0);
    for (Index i : c) b[i] = 1;
    return b;
}

inline Column to_column(const oracle::Bits& b) {
    Column c;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i]) c.push_back(static_cast<Index>(i));
    return c;
}

inline std::vector<std::vector<std::uint32_t>> adjacency(const MetricSpace& x) {
    std::vector<std::vector<std::uint32_t>> adj(x.size());
    for (PointId p = 0; p < x.size(); ++p)
        for (auto [q, d] : x.ball(p, 1))
            if (d == 1) adj[p].push_back(q);
    return adj;
}

inline BallModel z_ball(int n, int radius) { return build_ball(std::make_shared<FreeAbelian>(n), radius); }
inline BallModel f2_ball(int radius) { return build_ball(std::make_shared<FreeGroup>(2), radius); }

template <class Pred>
inline Mask select(const BallModel& b, Pred pred) {
    Mask m(b.elements.size());
    for (PointId p = 0; p < b.elements.size(); ++p)
        if (pred(b.elements[p])) m.set(p);
    return m;
}

}

#endif
