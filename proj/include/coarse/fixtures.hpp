#ifndef COARSE_FIXTURES_HPP
#define COARSE_FIXTURES_HPP

#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/metric.hpp"

namespace coarse {

// Induced subgraph of a lattice Z^d on a region, clipped to an L1 window.
struct Fixture {
    std::string name;
    MetricSpace space = MetricSpace::from_graph({});
    Mask w;
    std::map<std::string, Mask> components;
};

struct FixtureInfo {
    std::string name;
    std::string description;
};

inline std::vector<FixtureInfo> list_fixtures() {
    return {
        {"fig1_halfplane_flap", "Z^2 on {y<=0} u {x>=0,y>=0}; W = x-axis; components bottom {y<0}, top {x>=0,y>0}"},
        {"fig2_plane_fin", "Z^3 on {z<=0} u {1<=z<=max(|x|,|y|)}; W = {z=0}; components bottom {z<0}, top (the fin)"},
        {"line_in_plane", "Z^2 with W the x-axis; components upper {y>0}, lower {y<0}"},
        {"plane_in_space", "Z^3 with W the plane z=0; components upper {z>0}, lower {z<0}"},
        {"slit_pocket", "Z^2 with W the x-axis and a removed wall enclosing a pocket {3..5}x{1..3} above W"},
    };
}

namespace detail {

using Point = std::vector<int>;

inline int l1(const Point& p) {
    int s = 0;
    for (int v : p) s += std::abs(v);
    return s;
}

inline Fixture lattice_region(const std::string& name, int dim, int radius, const std::function<bool(const Point&)>& inside) {
    std::vector<Point> pts;
    Point p(dim, -radius);
    while (true) {
        if (l1(p) <= radius && inside(p)) pts.push_back(p);
        int i = 0;
        while (i < dim && p[i] == radius) p[i++] = -radius;
        if (i == dim) break;
        ++p[i];
    }
    std::map<Point, PointId> index;
    for (PointId i = 0; i < pts.size(); ++i) index.emplace(pts[i], i);
    std::vector<std::vector<PointId>> adj(pts.size());
    for (PointId i = 0; i < pts.size(); ++i)
        for (int a = 0; a < dim; ++a)
            for (int s : {-1, 1}) {
                Point q = pts[i];
                q[a] += s;
                auto it = index.find(q);
                if (it != index.end()) adj[i].push_back(it->second);
            }
    Fixture f;
    f.name = name;
    f.space = MetricSpace::from_graph(std::move(adj), pts);
    auto origin = f.space.find(Point(dim, 0));
    if (!origin) throw Error("bad-fixture", "origin missing from fixture");
    f.space.set_window(*origin, radius);
    f.w = Mask(pts.size());
    return f;
}

inline Mask select(const MetricSpace& x, const std::function<bool(const Point&)>& pred) {
    Mask m(x.size());
    for (PointId i = 0; i < x.size(); ++i)
        if (pred(x.label(i))) m.set(i);
    return m;
}

}

inline Fixture grid_fixture(const std::string& name, int radius) {
    using detail::Point;
    if (radius < 1) throw Error("bad-parameter", "window radius must be positive");
    Fixture f;
    if (name == "fig1_halfplane_flap") {
        f = detail::lattice_region(name, 2, radius, [](const Point& p) { return p[1] <= 0 || p[0] >= 0; });
        f.w = detail::select(f.space, [](const Point& p) { return p[1] == 0; });
        f.components["bottom"] = detail::select(f.space, [](const Point& p) { return p[1] < 0; });
        f.components["top"] = detail::select(f.space, [](const Point& p) { return p[0] >= 0 && p[1] > 0; });
    } else if (name == "fig2_plane_fin") {
        f = detail::lattice_region(name, 3, radius, [](const Point& p) {
            return p[2] <= 0 || p[2] <= std::max(std::abs(p[0]), std::abs(p[1]));
        });
        f.w = detail::select(f.space, [](const Point& p) { return p[2] == 0; });
        f.components["bottom"] = detail::select(f.space, [](const Point& p) { return p[2] < 0; });
        f.components["top"] = detail::select(f.space, [](const Point& p) { return p[2] > 0; });
    } else if (name == "line_in_plane") {
        f = detail::lattice_region(name, 2, radius, [](const Point&) { return true; });
        f.w = detail::select(f.space, [](const Point& p) { return p[1] == 0; });
        f.components["upper"] = detail::select(f.space, [](const Point& p) { return p[1] > 0; });
        f.components["lower"] = detail::select(f.space, [](const Point& p) { return p[1] < 0; });
    } else if (name == "plane_in_space") {
        f = detail::lattice_region(name, 3, radius, [](const Point&) { return true; });
        f.w = detail::select(f.space, [](const Point& p) { return p[2] == 0; });
        f.components["upper"] = detail::select(f.space, [](const Point& p) { return p[2] > 0; });
        f.components["lower"] = detail::select(f.space, [](const Point& p) { return p[2] < 0; });
    } else if (name == "slit_pocket") {
        if (radius < 8) throw Error("bad-parameter", "slit_pocket needs window radius >= 8");
        auto wall = [](const Point& p) {
            bool side = (p[0] == 2 || p[0] == 6) && p[1] >= 1 && p[1] <= 4;
            bool lid = p[1] == 4 && p[0] >= 2 && p[0] <= 6;
            return side || lid;
        };
        f = detail::lattice_region(name, 2, radius, [&](const Point& p) { return !wall(p); });
        f.w = detail::select(f.space, [](const Point& p) { return p[1] == 0; });
        f.components["pocket"] = detail::select(f.space, [](const Point& p) {
            return p[0] >= 3 && p[0] <= 5 && p[1] >= 1 && p[1] <= 3;
        });
        f.components["upper"] = detail::select(f.space, [](const Point& p) { return p[1] > 0; }) - f.components["pocket"];
        f.components["lower"] = detail::select(f.space, [](const Point& p) { return p[1] < 0; });
    } else {
        throw Error("unknown-fixture", name);
    }
    f.name = name;
    return f;
}

}

#endif
