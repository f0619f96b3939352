#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <recurve/curve.hpp>
#include <recurve/geometry.hpp>
#include <recurve/kdtree.hpp>

namespace recurve {

// Numeric medial-axis approximation for planar curve models. The curve is
// discretized at a fixed arc-length step; for every discretization point the
// maximal empty ball tangent to the curve is found on both sides by the
// shrinking-ball iteration, and the ball centers form a point cloud that
// samples the medial axis. Local feature size queries reduce to a nearest
// neighbor search in that cloud.
class MedialCloud {
public:
    MedialCloud(const CurveModel& curve, double density) : density_(density) {
        if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
        if (curve.components.empty()) throw std::invalid_argument("curve model has no components");
        discretize(curve);
        disc_tree_ = KdTree(disc_);
        shrink_all();
        if (centers_.empty())
            throw std::invalid_argument("medial approximation found no tangent balls");
        center_tree_ = KdTree(centers_);
    }

    double density() const { return density_; }
    const PointList& curve_points() const { return disc_; }
    const PointList& centers() const { return centers_; }

    double lfs(const Point& p) const {
        return std::sqrt(center_tree_.nearest(p).second);
    }

    double nearest_curve_distance(const Point& p) const {
        return std::sqrt(disc_tree_.nearest(p).second);
    }

private:
    double density_ = 0.0;
    double big_radius_ = 0.0;
    PointList disc_;
    PointList normals_;
    KdTree disc_tree_;
    PointList centers_;
    KdTree center_tree_;

    void discretize(const CurveModel& curve) {
        double lo_x = std::numeric_limits<double>::max(), lo_y = lo_x;
        double hi_x = -lo_x, hi_y = -lo_x;
        for (const auto& comp : curve.components) {
            const double len = comp.length();
            const int n = std::max(8, int(std::ceil(len / density_)));
            const int count = comp.closed() ? n : n + 1;
            const double step = len / n;
            for (int i = 0; i < count; ++i) {
                const double s = std::min(i * step, len);
                const Point p = comp.point_at(s);
                if (p.dim != 2)
                    throw std::invalid_argument("medial approximation requires 2-D curves");
                disc_.push_back(p);
                normals_.push_back(perp2(comp.tangent_at(s)));
                lo_x = std::min(lo_x, p[0]);
                hi_x = std::max(hi_x, p[0]);
                lo_y = std::min(lo_y, p[1]);
                hi_y = std::max(hi_y, p[1]);
            }
        }
        big_radius_ = 2.0 * std::hypot(hi_x - lo_x, hi_y - lo_y) + 1.0;
    }

    void shrink_all() {
        centers_.reserve(2 * disc_.size());
        for (std::size_t i = 0; i < disc_.size(); ++i) {
            shrink_one(int(i), normals_[i]);
            shrink_one(int(i), -1.0 * normals_[i]);
        }
    }

    // Shrinking-ball iteration: keep the ball tangent at q with outward
    // direction n, replacing the radius with that of the tangent ball through
    // the nearest point whenever the current ball is not empty.
    void shrink_one(int qi, const Point& n) {
        const Point q = disc_[std::size_t(qi)];
        double r = big_radius_;
        for (int iter = 0; iter < 100; ++iter) {
            const Point c = q + r * n;
            const auto [pj, d2] = disc_tree_.nearest(c, qi);
            if (pj < 0) return;
            const double d = std::sqrt(d2);
            if (d >= r * (1.0 - 1e-12)) break;
            const Point w = disc_[std::size_t(pj)] - q;
            const double denom = 2.0 * dot(w, n);
            if (denom <= 0.0) return;
            const double rn = dot(w, w) / denom;
            if (!(rn > 0.0) || !std::isfinite(rn)) return;
            if (rn >= r * (1.0 - 1e-12)) break;
            r = rn;
        }
        centers_.push_back(q + r * n);
    }
};

// One-shot local feature size at a single curve point. Builds the cloud for
// each call; reuse MedialCloud directly when querying many points.
inline double lfs_numeric(const CurveModel& curve, const Point& p, double density) {
    const MedialCloud cloud(curve, density);
    if (cloud.nearest_curve_distance(p) > density)
        throw std::invalid_argument("point is not on the curve");
    return cloud.lfs(p);
}

// Local feature size oracle that evaluates maximal tangent balls on demand
// instead of precomputing a full medial cloud. A probe is projected onto the
// discretized curve to recover an exact foot point and normal, then the
// shrinking-ball iteration runs on both sides of the curve. The fixed point
// of that iteration is the minimum of |w-q|^2 / (2<w-q,n>) over contact
// points w, a plain minimum over the discretization, so oracles built over
// disjoint pieces of one model combine by taking the smaller shrink result
// for the same foot point and normal.
class TangentBallOracle {
public:
    TangentBallOracle(const CurveModel& curve, double density) : density_(density) {
        if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
        if (curve.components.empty()) throw std::invalid_argument("curve model has no components");
        comps_ = curve.components;
        double lo_x = std::numeric_limits<double>::max(), lo_y = lo_x;
        double hi_x = -lo_x, hi_y = -lo_x;
        for (std::size_t ci = 0; ci < comps_.size(); ++ci) {
            const auto& comp = comps_[ci];
            const double len = comp.length();
            const int n = std::max(8, int(std::ceil(len / density)));
            const int count = comp.closed() ? n : n + 1;
            const double step = len / n;
            steps_.push_back(step);
            for (int i = 0; i < count; ++i) {
                const double s = std::min(i * step, len);
                const Point p = comp.point_at(s);
                if (p.dim != 2)
                    throw std::invalid_argument("tangent ball oracle requires 2-D curves");
                pts_.push_back(p);
                locs_.push_back({int(ci), s});
                lo_x = std::min(lo_x, p[0]);
                hi_x = std::max(hi_x, p[0]);
                lo_y = std::min(lo_y, p[1]);
                hi_y = std::max(hi_y, p[1]);
            }
        }
        big_radius_ = 2.0 * std::hypot(hi_x - lo_x, hi_y - lo_y) + 1.0;
        coincide2_ = 1e-18 * (1.0 + big_radius_ * big_radius_);
        tree_ = KdTree(pts_);
    }

    double density() const { return density_; }
    double max_radius() const { return big_radius_; }

    double curve_distance(const Point& p) const {
        return std::sqrt(tree_.nearest(p).second);
    }

    // Projects p onto the curve near its closest discretization point and
    // returns the foot point together with the unit normal there.
    std::pair<Point, Point> foot(const Point& p) const {
        const auto [qi, d2] = tree_.nearest(p);
        if (qi < 0 || std::sqrt(d2) > 2.0 * density_)
            throw std::invalid_argument("point is not on the curve");
        const auto [ci, si] = locs_[std::size_t(qi)];
        const auto& comp = comps_[std::size_t(ci)];
        const double len = comp.length();
        auto eval = [&](double s) {
            if (comp.closed()) {
                s = std::fmod(s, len);
                if (s < 0.0) s += len;
            } else {
                s = std::clamp(s, 0.0, len);
            }
            return comp.point_at(s);
        };
        double lo = si - steps_[std::size_t(ci)], hi = si + steps_[std::size_t(ci)];
        if (!comp.closed()) {
            lo = std::max(lo, 0.0);
            hi = std::min(hi, len);
        }
        for (int it = 0; it < 60; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (squared_distance(eval(m1), p) < squared_distance(eval(m2), p)) hi = m2;
            else lo = m1;
        }
        double s = 0.5 * (lo + hi);
        if (comp.closed()) {
            s = std::fmod(s, len);
            if (s < 0.0) s += len;
        }
        return {comp.point_at(s), perp2(comp.tangent_at(s))};
    }

    // Smallest tangent-ball radius from the on-curve point q along direction
    // n, measured against this oracle's pieces only.
    double shrink(const Point& q, const Point& n) const {
        double r = big_radius_;
        for (int iter = 0; iter < 100; ++iter) {
            const Point c = q + r * n;
            auto hit = tree_.nearest(c);
            if (hit.first >= 0 && squared_distance(pts_[std::size_t(hit.first)], q) < coincide2_)
                hit = tree_.nearest(c, hit.first);
            if (hit.first < 0) break;
            const double d = std::sqrt(hit.second);
            if (d >= r * (1.0 - 1e-12)) break;
            const Point w = pts_[std::size_t(hit.first)] - q;
            const double denom = 2.0 * dot(w, n);
            if (denom <= 0.0) break;
            const double rn = dot(w, w) / denom;
            if (!(rn > 0.0) || !std::isfinite(rn)) break;
            if (rn >= r * (1.0 - 1e-12)) break;
            r = rn;
        }
        return r;
    }

    double lfs(const Point& p) const {
        const auto [q, n] = foot(p);
        return std::min(shrink(q, n), shrink(q, -1.0 * n));
    }

private:
    double density_ = 0.0;
    double big_radius_ = 0.0;
    double coincide2_ = 0.0;
    std::vector<CurveComponent> comps_;
    std::vector<double> steps_;
    PointList pts_;
    std::vector<std::pair<int, double>> locs_;
    KdTree tree_;
};

// Combines tangent-ball oracles built over disjoint pieces of one curve
// model. The probe is projected by the piece it lies on; every piece then
// contributes contacts through its own shrink.
inline double combined_lfs(const std::vector<const TangentBallOracle*>& pieces, const Point& p) {
    if (pieces.empty()) throw std::invalid_argument("no oracle pieces");
    const TangentBallOracle* own = nullptr;
    double best = std::numeric_limits<double>::max();
    for (const auto* o : pieces) {
        const double d = o->curve_distance(p);
        if (d < best) {
            best = d;
            own = o;
        }
    }
    const auto [q, n] = own->foot(p);
    double r = std::numeric_limits<double>::max();
    for (const auto* o : pieces) {
        r = std::min(r, o->shrink(q, n));
        r = std::min(r, o->shrink(q, -1.0 * n));
    }
    return r;
}

}  // namespace recurve
