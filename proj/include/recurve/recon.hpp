#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <recurve/compat.hpp>
#include <recurve/delaunay.hpp>
#include <recurve/graph.hpp>
#include <recurve/kdtree.hpp>
#include <recurve/sample.hpp>

// Curve reconstruction from point samples. Every vertex gets an edge to its
// nearest neighbor and an edge to the nearest neighbor that is compatible
// with that first edge (or, for the baseline, that makes an obtuse angle).
// On a valid sample the union of these edges is the polygonal reconstruction.

namespace recurve {

namespace detail {

inline void check_recon_input(const PointList& pts, const char* who) {
    if (pts.size() < 3)
        throw std::invalid_argument(std::string(who) + ": need at least 3 points");
    const int dim = pts[0].dim;
    for (const Point& p : pts)
        if (p.dim != dim)
            throw std::invalid_argument(std::string(who) + ": mixed point dimensions");
    std::vector<int> order(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        for (int k = 0; k < dim; ++k) {
            if (pts[i][k] != pts[j][k]) return pts[i][k] < pts[j][k];
        }
        return i < j;
    });
    for (size_t k = 1; k < order.size(); ++k) {
        if (pts[order[k - 1]] == pts[order[k]])
            throw std::invalid_argument(std::string(who) + ": duplicate points at indices " +
                                        std::to_string(order[k - 1]) + " and " +
                                        std::to_string(order[k]));
    }
}

// Nearest y to x among candidates for which accept(y) holds; candidates must
// be in ascending index order so distance ties resolve to the lowest index.
template <typename Range, typename Accept>
int nearest_accepted(const PointList& pts, int x, const Range& candidates, Accept&& accept) {
    double best = std::numeric_limits<double>::infinity();
    int bestIdx = -1;
    for (int y : candidates) {
        if (y == x) continue;
        double d2 = squared_distance(pts[x], pts[y]);
        if (d2 < best && accept(y)) {
            best = d2;
            bestIdx = y;
        }
    }
    return bestIdx;
}

struct IndexRange {
    int n;
    struct It {
        int v;
        int operator*() const { return v; }
        It& operator++() {
            ++v;
            return *this;
        }
        bool operator!=(const It& o) const { return v != o.v; }
    };
    It begin() const { return {0}; }
    It end() const { return {n}; }
};

}  // namespace detail

// Reconstruction in any dimension: nearest neighbor plus nearest compatible
// neighbor, each vertex scanned against the whole sample.
inline ReconGraph nn_compatible(const SampleSet& sample, const CompatParams& params = CompatParams()) {
    const PointList& pts = sample.points;
    detail::check_recon_input(pts, "nn_compatible");
    const int n = static_cast<int>(pts.size());
    KdTree tree;
    tree.build(pts);
    ReconGraph g(n);
    for (int x = 0; x < n; ++x) {
        int closest = tree.nearest(pts[x], x).first;
        g.add_edge(x, closest);
        int clComp = detail::nearest_accepted(pts, x, detail::IndexRange{n}, [&](int y) {
            return y != closest && is_compatible(pts[closest], pts[x], pts[y], params);
        });
        if (clComp >= 0) {
            g.add_edge(x, clComp);
        } else {
            g.flagged = true;
            g.flagged_vertices.push_back(x);
        }
    }
    return g;
}

// Planar reconstruction with candidates restricted to Delaunay neighbors.
inline ReconGraph compatible_crust(const SampleSet& sample, const CompatParams& params = CompatParams()) {
    const PointList& pts = sample.points;
    detail::check_recon_input(pts, "compatible_crust");
    for (const Point& p : pts)
        if (p.dim != 2)
            throw std::invalid_argument("compatible_crust: requires 2-D points");
    Triangulation2D tri = triangulate(pts);
    std::vector<std::vector<int>> adj = tri.neighbors();
    const int n = static_cast<int>(pts.size());
    ReconGraph g(n);
    for (int x = 0; x < n; ++x) {
        const std::vector<int>& neigh = adj[x];
        int closest = detail::nearest_accepted(pts, x, neigh, [](int) { return true; });
        g.add_edge(x, closest);
        int clComp = detail::nearest_accepted(pts, x, neigh, [&](int y) {
            return y != closest && is_compatible(pts[closest], pts[x], pts[y], params);
        });
        if (clComp >= 0) {
            g.add_edge(x, clComp);
        } else {
            g.flagged = true;
            g.flagged_vertices.push_back(x);
        }
    }
    return g;
}

// Prior-work baseline: nearest neighbor plus the nearest point making an
// obtuse angle with that edge. Correct only for much denser samples.
inline ReconGraph nn_crust_baseline(const SampleSet& sample) {
    const PointList& pts = sample.points;
    detail::check_recon_input(pts, "nn_crust_baseline");
    const int n = static_cast<int>(pts.size());
    KdTree tree;
    tree.build(pts);
    ReconGraph g(n);
    for (int x = 0; x < n; ++x) {
        int closest = tree.nearest(pts[x], x).first;
        g.add_edge(x, closest);
        Point dir = pts[closest] - pts[x];
        int clObtuse = detail::nearest_accepted(pts, x, detail::IndexRange{n}, [&](int y) {
            return y != closest && dot(pts[y] - pts[x], dir) < 0.0;
        });
        if (clObtuse >= 0) {
            g.add_edge(x, clObtuse);
        } else {
            g.flagged = true;
            g.flagged_vertices.push_back(x);
        }
    }
    return g;
}

}  // namespace recurve
