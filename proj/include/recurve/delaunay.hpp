#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <recurve/geometry.hpp>
#include <recurve/predicates.hpp>

// Planar Delaunay triangulation via incremental insertion (Bowyer-Watson)
// with a single ghost vertex closing the hull. Cocircular ties are resolved
// by the index-keyed symbolic perturbation of the incircle predicate, so the
// triangulation is unique and deterministic even for grids and circles.

namespace recurve {

struct Triangulation2D {
    PointList points;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise index triples
    std::set<std::pair<int, int>> edges;        // the 1-skeleton

    std::vector<std::vector<int>> neighbors() const {
        std::vector<std::vector<int>> adj(points.size());
        for (const auto& e : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        for (auto& v : adj) std::sort(v.begin(), v.end());
        return adj;
    }
};

namespace detail {

class DelaunayBuilder {
  public:
    explicit DelaunayBuilder(const PointList& pts) : pts_(pts) {}

    Triangulation2D run() {
        const int n = static_cast<int>(pts_.size());
        if (n < 3) throw std::invalid_argument("triangulate: need at least 3 points");
        for (const Point& p : pts_)
            if (p.dim != 2) throw std::invalid_argument("triangulate: points must be 2-D");
        check_duplicates();
        std::vector<int> order = morton_order();
        seed(order);
        for (int idx : order)
            if (!inserted_[idx]) insert_point(idx);
        return finish();
    }

  private:
    static constexpr int kGhost = -1;

    struct Tri {
        std::array<int, 3> v{};
        std::array<int, 3> nbr{-1, -1, -1};  // neighbor across the edge opposite v[k]
        bool alive = true;
        uint32_t visit = 0;
        uint32_t cav = 0;
        bool conflict_cache = false;
    };

    const PointList& pts_;
    std::vector<Tri> tris_;
    std::vector<char> inserted_;
    int last_ = 0;
    uint32_t stamp_ = 0;

    void check_duplicates() const {
        std::vector<int> byCoord(pts_.size());
        for (size_t i = 0; i < pts_.size(); ++i) byCoord[i] = static_cast<int>(i);
        std::sort(byCoord.begin(), byCoord.end(), [&](int i, int j) {
            if (pts_[i].x() != pts_[j].x()) return pts_[i].x() < pts_[j].x();
            if (pts_[i].y() != pts_[j].y()) return pts_[i].y() < pts_[j].y();
            return i < j;
        });
        for (size_t k = 1; k < byCoord.size(); ++k) {
            int i = byCoord[k - 1], j = byCoord[k];
            if (pts_[i].x() == pts_[j].x() && pts_[i].y() == pts_[j].y())
                throw std::invalid_argument("triangulate: duplicate points at indices " +
                                            std::to_string(i) + " and " + std::to_string(j));
        }
    }

    std::vector<int> morton_order() const {
        double lox = pts_[0].x(), hix = lox, loy = pts_[0].y(), hiy = loy;
        for (const Point& p : pts_) {
            lox = std::min(lox, p.x());
            hix = std::max(hix, p.x());
            loy = std::min(loy, p.y());
            hiy = std::max(hiy, p.y());
        }
        double sx = hix > lox ? 65535.0 / (hix - lox) : 0.0;
        double sy = hiy > loy ? 65535.0 / (hiy - loy) : 0.0;
        auto code = [&](const Point& p) {
            uint32_t x = static_cast<uint32_t>((p.x() - lox) * sx);
            uint32_t y = static_cast<uint32_t>((p.y() - loy) * sy);
            uint64_t m = 0;
            for (int b = 0; b < 16; ++b) {
                m |= static_cast<uint64_t>((x >> b) & 1u) << (2 * b);
                m |= static_cast<uint64_t>((y >> b) & 1u) << (2 * b + 1);
            }
            return m;
        };
        std::vector<std::pair<uint64_t, int>> keyed(pts_.size());
        for (size_t i = 0; i < pts_.size(); ++i) keyed[i] = {code(pts_[i]), static_cast<int>(i)};
        std::sort(keyed.begin(), keyed.end());
        std::vector<int> order(pts_.size());
        for (size_t i = 0; i < pts_.size(); ++i) order[i] = keyed[i].second;
        return order;
    }

    bool collinear_between(const Point& u, const Point& v, const Point& p) const {
        // Precondition: u, v, p collinear (orient2d == 0), u != v.
        if (u.x() != v.x()) {
            double lo = std::min(u.x(), v.x()), hi = std::max(u.x(), v.x());
            return lo < p.x() && p.x() < hi;
        }
        double lo = std::min(u.y(), v.y()), hi = std::max(u.y(), v.y());
        return lo < p.y() && p.y() < hi;
    }

    bool conflicts(int ti, const Point& p, int pi) {
        Tri& t = tris_[ti];
        if (t.visit == stamp_) return t.conflict_cache;
        bool res;
        if (t.v[2] == kGhost) {
            const Point& u = pts_[t.v[0]];
            const Point& v = pts_[t.v[1]];
            int o = orient2d(u, v, p);
            // Ghost (u,v,g) stores the hull edge directed with the interior
            // on its right, so a point strictly to the left lies outside the
            // hull beyond this edge. A point on the supporting line conflicts
            // only when it splits the edge itself.
            res = o > 0 || (o == 0 && collinear_between(u, v, p));
        } else {
            res = incircle_sos(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p, t.v[0], t.v[1],
                               t.v[2], pi) > 0;
        }
        t.visit = stamp_;
        t.conflict_cache = res;
        return res;
    }

    int make_tri(int a, int b, int c) {
        Tri t;
        t.v = {a, b, c};
        tris_.push_back(t);
        return static_cast<int>(tris_.size()) - 1;
    }

    static int edge_slot(const Tri& t, int a, int b) {
        for (int k = 0; k < 3; ++k) {
            int x = t.v[(k + 1) % 3], y = t.v[(k + 2) % 3];
            if ((x == a && y == b) || (x == b && y == a)) return k;
        }
        throw std::logic_error("triangulate: adjacency bookkeeping is inconsistent");
    }

    void seed(const std::vector<int>& order) {
        const int n = static_cast<int>(pts_.size());
        inserted_.assign(n, 0);
        int i0 = order[0];
        int i1 = -1, i2 = -1;
        for (int k = 1; k < n && i2 < 0; ++k) {
            int cand = order[k];
            if (i1 < 0) {
                i1 = cand;
                continue;
            }
            if (orient2d(pts_[i0], pts_[i1], pts_[cand]) != 0) i2 = cand;
        }
        if (i2 < 0) throw std::invalid_argument("triangulate: degenerate point set");
        if (orient2d(pts_[i0], pts_[i1], pts_[i2]) < 0) std::swap(i1, i2);
        int t = make_tri(i0, i1, i2);
        int gab = make_tri(i1, i0, kGhost);
        int gbc = make_tri(i2, i1, kGhost);
        int gca = make_tri(i0, i2, kGhost);
        // Finite edge k is opposite v[k]; ghosts pair with the matching edge.
        tris_[t].nbr = {gbc, gca, gab};
        tris_[gab].nbr = {gca, gbc, t};  // edges (i0,g), (g,i1), (i1,i0)
        tris_[gbc].nbr = {gab, gca, t};
        tris_[gca].nbr = {gbc, gab, t};
        inserted_[i0] = inserted_[i1] = inserted_[i2] = 1;
        last_ = t;
    }

    int locate_conflict(const Point& p, int pi) {
        const int cap = 4 * static_cast<int>(tris_.size()) + 64;
        int cur = last_;
        for (int step = 0; step < cap; ++step) {
            if (!tris_[cur].alive) break;
            if (tris_[cur].v[2] == kGhost) {
                if (conflicts(cur, p, pi)) return cur;
                const Point& u = pts_[tris_[cur].v[0]];
                const Point& v = pts_[tris_[cur].v[1]];
                if (orient2d(u, v, p) == 0) {
                    // Collinear beyond the hull edge: walk around the hull
                    // toward p. Neighbor 0 shares v, neighbor 1 shares u.
                    Point dir = v - u;
                    bool beyondV = dot(p - v, dir) > 0.0;
                    cur = beyondV ? tris_[cur].nbr[0] : tris_[cur].nbr[1];
                } else {
                    cur = tris_[cur].nbr[2];  // back inside the hull
                }
                continue;
            }
            const Tri& t = tris_[cur];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                const Point& x = pts_[t.v[(k + 1) % 3]];
                const Point& y = pts_[t.v[(k + 2) % 3]];
                if (orient2d(x, y, p) < 0) {
                    next = t.nbr[k];
                    break;
                }
            }
            if (next < 0) return cur;  // p inside or on this triangle
            cur = next;
        }
        // Degenerate walk: fall back to scanning everything.
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti)
            if (tris_[ti].alive && conflicts(ti, p, pi)) return ti;
        throw std::logic_error("triangulate: no conflicting triangle found");
    }

    void insert_point(int pi) {
        const Point& p = pts_[pi];
        ++stamp_;
        int seedTri = locate_conflict(p, pi);
        if (!conflicts(seedTri, p, pi)) {
            // The walk landed on a triangle containing p on its boundary; in
            // that case the adjacent triangle must conflict.
            bool found = false;
            for (int k = 0; k < 3 && !found; ++k) {
                int nb = tris_[seedTri].nbr[k];
                if (nb >= 0 && conflicts(nb, p, pi)) {
                    seedTri = nb;
                    found = true;
                }
            }
            if (!found) throw std::logic_error("triangulate: seed triangle does not conflict");
        }

        // Flood the cavity of conflicting triangles.
        std::vector<int> cavity;
        std::vector<int> stack{seedTri};
        tris_[seedTri].cav = stamp_;
        while (!stack.empty()) {
            int ti = stack.back();
            stack.pop_back();
            cavity.push_back(ti);
            for (int k = 0; k < 3; ++k) {
                int nb = tris_[ti].nbr[k];
                if (nb >= 0 && tris_[nb].cav != stamp_ && conflicts(nb, p, pi)) {
                    tris_[nb].cav = stamp_;
                    stack.push_back(nb);
                }
            }
        }

        // Boundary edges, directed as stored in the removed triangle.
        struct BEdge {
            int x, y, outside;
        };
        std::vector<BEdge> boundary;
        for (int ti : cavity) {
            const Tri& t = tris_[ti];
            for (int k = 0; k < 3; ++k) {
                int nb = t.nbr[k];
                bool nbIn = nb >= 0 && tris_[nb].cav == stamp_;
                if (!nbIn) boundary.push_back({t.v[(k + 1) % 3], t.v[(k + 2) % 3], nb});
            }
        }
        for (int ti : cavity) tris_[ti].alive = false;

        // Star the cavity from p: one new triangle per boundary edge, ghost
        // vertex normalized to slot 2.
        std::unordered_map<int64_t, std::pair<int, int>> open_edges;  // directed (from,to) -> (tri, slot)
        auto key = [](int a, int b) {
            return (static_cast<int64_t>(a + 1) << 32) | static_cast<uint32_t>(b + 1);
        };
        int firstNew = -1;
        for (const BEdge& be : boundary) {
            std::array<int, 3> tv{be.x, be.y, pi};
            // Rotate so any ghost lands in slot 2.
            if (tv[0] == kGhost) tv = {tv[1], tv[2], tv[0]};
            else if (tv[1] == kGhost) tv = {tv[2], tv[0], tv[1]};
            int nt = make_tri(tv[0], tv[1], tv[2]);
            if (firstNew < 0) firstNew = nt;
            // Wire the surviving outside neighbor across (x,y).
            int slotXY = edge_slot(tris_[nt], be.x, be.y);
            tris_[nt].nbr[slotXY] = be.outside;
            if (be.outside >= 0) {
                int os = edge_slot(tris_[be.outside], be.x, be.y);
                tris_[be.outside].nbr[os] = nt;
            }
            // The two p-incident edges pair up with sibling new triangles.
            for (int k = 0; k < 3; ++k) {
                if (k == slotXY) continue;
                int a = tris_[nt].v[(k + 1) % 3], b = tris_[nt].v[(k + 2) % 3];
                auto it = open_edges.find(key(b, a));
                if (it != open_edges.end()) {
                    tris_[nt].nbr[k] = it->second.first;
                    tris_[it->second.first].nbr[it->second.second] = nt;
                    open_edges.erase(it);
                } else {
                    open_edges[key(a, b)] = {nt, k};
                }
            }
        }
        if (!open_edges.empty())
            throw std::logic_error("triangulate: cavity boundary did not close");
        inserted_[pi] = 1;
        last_ = firstNew;
    }

    Triangulation2D finish() const {
        Triangulation2D out;
        out.points = pts_;
        for (const Tri& t : tris_) {
            if (!t.alive || t.v[2] == kGhost) continue;
            out.triangles.push_back(t.v);
            for (int k = 0; k < 3; ++k) {
                int a = t.v[k], b = t.v[(k + 1) % 3];
                out.edges.insert({std::min(a, b), std::max(a, b)});
            }
        }
        return out;
    }
};

}  // namespace detail

inline Triangulation2D triangulate(const PointList& pts) {
    return detail::DelaunayBuilder(pts).run();
}

}  // namespace recurve
