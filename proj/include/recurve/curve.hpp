#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <recurve/geometry.hpp>

namespace recurve {

struct LineSeg {
    Point a;
    Point b;
};

struct CircArc {
    Point center;
    double radius = 0.0;
    double angle0 = 0.0;
    double angle1 = 0.0;
};

struct EllipseArc {
    Point center;
    double rx = 0.0;
    double ry = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
};

// Image of a flat segment under the wrap (x, y) -> ((R + s*y) cos(x/R), (R + s*y) sin(x/R)).
// The line y = 0 is mapped isometrically onto the circle of radius R.
struct BentArc {
    std::variant<LineSeg, CircArc> flat;
    double bend_radius = 0.0;
    double radial_sign = -1.0;
};

using Segment = std::variant<LineSeg, CircArc, EllipseArc, BentArc>;

namespace curvedetail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline std::string fmt_gap(double g) {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(3);
    os << g;
    return os.str();
}

inline void require_planar(const Point& p, const char* what) {
    if (p.dim != 2) throw std::invalid_argument(std::string(what) + ": points must be 2-D");
}

struct FlatInfo {
    double len = 0.0;
    double ymin = 0.0;
    double ymax = 0.0;
};

inline FlatInfo flat_info(const LineSeg& s) {
    require_planar(s.a, "segment");
    require_planar(s.b, "segment");
    FlatInfo f;
    f.len = distance(s.a, s.b);
    if (f.len <= 0.0) throw std::invalid_argument("segment has zero length");
    f.ymin = std::min(s.a[1], s.b[1]);
    f.ymax = std::max(s.a[1], s.b[1]);
    return f;
}

inline FlatInfo flat_info(const CircArc& c) {
    require_planar(c.center, "arc");
    if (!(c.radius > 0.0)) throw std::invalid_argument("arc radius must be positive");
    const double sweep = c.angle1 - c.angle0;
    if (sweep == 0.0) throw std::invalid_argument("arc has zero sweep");
    if (std::abs(sweep) > kTwoPi + 1e-9) throw std::invalid_argument("arc sweep exceeds a full turn");
    FlatInfo f;
    f.len = c.radius * std::abs(sweep);
    const double lo = std::min(c.angle0, c.angle1), hi = std::max(c.angle0, c.angle1);
    double smin = std::min(std::sin(c.angle0), std::sin(c.angle1));
    double smax = std::max(std::sin(c.angle0), std::sin(c.angle1));
    for (double q = std::ceil(lo / std::numbers::pi - 0.5); ; q += 1.0) {
        const double theta = (q + 0.5) * std::numbers::pi;
        if (theta > hi) break;
        smin = std::min(smin, std::sin(theta));
        smax = std::max(smax, std::sin(theta));
    }
    f.ymin = c.center[1] + c.radius * smin;
    f.ymax = c.center[1] + c.radius * smax;
    return f;
}

// Point and unit tangent of a flat segment at arc length u, measured from its start.
inline void flat_eval(const LineSeg& s, double len, double u, double& x, double& y, double& tx, double& ty) {
    const double inv = 1.0 / len;
    tx = (s.b[0] - s.a[0]) * inv;
    ty = (s.b[1] - s.a[1]) * inv;
    x = s.a[0] + tx * u;
    y = s.a[1] + ty * u;
}

inline void flat_eval(const CircArc& c, double /*len*/, double u, double& x, double& y, double& tx, double& ty) {
    const double dir = c.angle1 >= c.angle0 ? 1.0 : -1.0;
    const double theta = c.angle0 + dir * u / c.radius;
    const double ct = std::cos(theta), st = std::sin(theta);
    x = c.center[0] + c.radius * ct;
    y = c.center[1] + c.radius * st;
    tx = -st * dir;
    ty = ct * dir;
}

// Geometry of one segment with a local arc-length parameterization. Curved
// pieces without a closed-form length (ellipse, bent arcs) carry a cumulative
// length table; evaluation points always lie exactly on the segment, the
// arc-length label is accurate to the table's interpolation error.
class SegGeom {
public:
    explicit SegGeom(Segment seg) : seg_(std::move(seg)) {
        std::visit([this](const auto& s) { init(s); }, seg_);
    }

    double length() const { return len_; }
    const Segment& segment() const { return seg_; }

    Point point_at(double s) const {
        const double t = param_at(std::clamp(s, 0.0, len_));
        Point p = Point(0.0, 0.0), tan = Point(0.0, 0.0);
        eval(t, p, tan);
        return p;
    }

    Point tangent_at(double s) const {
        const double t = param_at(std::clamp(s, 0.0, len_));
        Point p = Point(0.0, 0.0), tan = Point(0.0, 0.0);
        eval(t, p, tan);
        return tan;
    }

    Point start_point() const { return point_at(0.0); }
    Point end_point() const { return point_at(len_); }
    Point start_tangent() const { return tangent_at(0.0); }
    Point end_tangent() const { return tangent_at(len_); }

private:
    Segment seg_;
    double len_ = 0.0;
    // parameter range [t0_, t1_]; empty table means the parameter is arc length
    double t0_ = 0.0, t1_ = 0.0;
    std::vector<double> cum_;

    void init(const LineSeg& s) {
        len_ = flat_info(s).len;
        t0_ = 0.0;
        t1_ = len_;
    }

    void init(const CircArc& c) {
        len_ = flat_info(c).len;
        t0_ = 0.0;
        t1_ = len_;
    }

    void init(const EllipseArc& e) {
        require_planar(e.center, "ellipse arc");
        if (!(e.rx > 0.0) || !(e.ry > 0.0)) throw std::invalid_argument("ellipse radii must be positive");
        const double sweep = e.t1 - e.t0;
        if (sweep == 0.0) throw std::invalid_argument("ellipse arc has zero sweep");
        if (std::abs(sweep) > kTwoPi + 1e-9) throw std::invalid_argument("ellipse arc sweep exceeds a full turn");
        t0_ = e.t0;
        t1_ = e.t1;
        const double scale = std::max(e.rx, e.ry);
        const int n = std::clamp(int(std::ceil(std::abs(sweep) * scale / 0.002)), 64, 1 << 21);
        build_table(n);
    }

    void init(const BentArc& b) {
        if (!(b.bend_radius > 0.0)) throw std::invalid_argument("bend radius must be positive");
        if (std::abs(std::abs(b.radial_sign) - 1.0) > 1e-12)
            throw std::invalid_argument("radial sign must be +1 or -1");
        const FlatInfo f = std::visit([](const auto& s) { return flat_info(s); }, b.flat);
        const double rlo = b.bend_radius + b.radial_sign * (b.radial_sign > 0 ? f.ymin : f.ymax);
        if (!(rlo > 0.0)) throw std::invalid_argument("bent arc folds through the center");
        t0_ = 0.0;
        t1_ = f.len;
        const int n = std::clamp(int(std::ceil(f.len / 0.02)), 8, 1 << 21);
        build_table(n);
    }

    double speed(double t) const {
        return std::visit(
            [&](const auto& s) -> double { return speed_impl(s, t); }, seg_);
    }

    double speed_impl(const LineSeg&, double) const { return 1.0; }
    double speed_impl(const CircArc&, double) const { return 1.0; }
    double speed_impl(const EllipseArc& e, double t) const {
        return std::hypot(e.rx * std::sin(t), e.ry * std::cos(t));
    }
    double speed_impl(const BentArc& b, double u) const {
        const double flen = t1_;
        double x, y, tx, ty;
        std::visit([&](const auto& s) { flat_eval(s, flen, u, x, y, tx, ty); }, b.flat);
        const double rho = b.bend_radius + b.radial_sign * y;
        const double sx = rho / b.bend_radius * tx;
        return std::hypot(sx, ty);
    }

    void build_table(int n) {
        cum_.assign(std::size_t(n) + 1, 0.0);
        const double h = (t1_ - t0_) / n;
        const double off = 0.5 * std::numbers::inv_sqrt3;  // Gauss nodes at tm +- h/(2 sqrt 3)
        for (int i = 0; i < n; ++i) {
            const double tm = t0_ + (i + 0.5) * h;
            const double d = off * h;
            const double a = speed(tm - d) + speed(tm + d);
            cum_[std::size_t(i) + 1] = cum_[std::size_t(i)] + 0.5 * std::abs(h) * a;
        }
        len_ = cum_.back();
    }

    double param_at(double s) const {
        if (cum_.empty()) return t0_ + (t1_ >= t0_ ? s : -s);
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        std::size_t i = it == cum_.begin() ? 0 : std::size_t(it - cum_.begin()) - 1;
        i = std::min(i, cum_.size() - 2);
        const double seg = cum_[i + 1] - cum_[i];
        const double frac = seg > 0.0 ? (s - cum_[i]) / seg : 0.0;
        const double h = (t1_ - t0_) / double(cum_.size() - 1);
        return t0_ + (double(i) + std::clamp(frac, 0.0, 1.0)) * h;
    }

    void eval(double t, Point& p, Point& tan) const {
        std::visit([&](const auto& s) { eval_impl(s, t, p, tan); }, seg_);
    }

    void eval_impl(const LineSeg& s, double t, Point& p, Point& tan) const {
        double x, y, tx, ty;
        flat_eval(s, len_, t, x, y, tx, ty);
        p = Point(x, y);
        tan = Point(tx, ty);
    }

    void eval_impl(const CircArc& c, double t, Point& p, Point& tan) const {
        double x, y, tx, ty;
        flat_eval(c, len_, t, x, y, tx, ty);
        p = Point(x, y);
        tan = Point(tx, ty);
    }

    void eval_impl(const EllipseArc& e, double t, Point& p, Point& tan) const {
        const double dir = e.t1 >= e.t0 ? 1.0 : -1.0;
        const double ct = std::cos(t), st = std::sin(t);
        p = Point(e.center[0] + e.rx * ct, e.center[1] + e.ry * st);
        const double vx = -e.rx * st * dir, vy = e.ry * ct * dir;
        const double n = std::hypot(vx, vy);
        tan = Point(vx / n, vy / n);
    }

    void eval_impl(const BentArc& b, double u, Point& p, Point& tan) const {
        const double flen = t1_;
        double x, y, tx, ty;
        std::visit([&](const auto& s) { flat_eval(s, flen, u, x, y, tx, ty); }, b.flat);
        const double rho = b.bend_radius + b.radial_sign * y;
        const double phi = x / b.bend_radius;
        const double cp = std::cos(phi), sp = std::sin(phi);
        p = Point(rho * cp, rho * sp);
        const double ax = rho / b.bend_radius * tx;
        const double ay = b.radial_sign * ty;
        const double vx = -sp * ax + cp * ay;
        const double vy = cp * ax + sp * ay;
        const double n = std::hypot(vx, vy);
        tan = Point(vx / n, vy / n);
    }
};

}  // namespace curvedetail

// One connected piece of a curve model: a chain of segments with validated
// joins. Closed components wrap around; open components clamp at their ends.
class CurveComponent {
public:
    CurveComponent(std::vector<Segment> segs, bool closed, bool allow_corners = false)
        : closed_(closed) {
        if (segs.empty()) throw std::invalid_argument("component needs at least one segment");
        geoms_.reserve(segs.size());
        for (auto& s : segs) geoms_.emplace_back(std::move(s));
        cum_.assign(geoms_.size() + 1, 0.0);
        for (std::size_t i = 0; i < geoms_.size(); ++i) cum_[i + 1] = cum_[i] + geoms_[i].length();
        len_ = cum_.back();

        const std::size_t joins = closed_ ? geoms_.size() : geoms_.size() - 1;
        for (std::size_t i = 0; i < joins; ++i) {
            const std::size_t j = (i + 1) % geoms_.size();
            const Point pe = geoms_[i].end_point();
            const Point qs = geoms_[j].start_point();
            const double gap = distance(pe, qs);
            const double scale = std::max({1.0, std::abs(pe[0]), std::abs(pe[1]),
                                           std::abs(qs[0]), std::abs(qs[1])});
            if (gap > 1e-12 * scale) {
                std::ostringstream os;
                if (closed_ && j == 0)
                    os << "component does not close; gap " << curvedetail::fmt_gap(gap);
                else
                    os << "segments " << i << " and " << j << " meet with gap "
                       << curvedetail::fmt_gap(gap);
                throw std::invalid_argument(os.str());
            }
            max_join_gap_ = std::max(max_join_gap_, gap);
            const Point te = geoms_[i].end_tangent();
            const Point ts = geoms_[j].start_tangent();
            const double tgap = distance(te, ts);
            max_tangent_gap_ = std::max(max_tangent_gap_, tgap);
            if (tgap > 1e-9 && !allow_corners) {
                std::ostringstream os;
                os << "segments " << i << " and " << j << " meet with tangent break "
                   << curvedetail::fmt_gap(tgap);
                throw std::invalid_argument(os.str());
            }
        }
    }

    double length() const { return len_; }
    bool closed() const { return closed_; }
    std::size_t segment_count() const { return geoms_.size(); }
    const Segment& segment(std::size_t i) const { return geoms_.at(i).segment(); }
    double max_join_gap() const { return max_join_gap_; }
    double max_tangent_gap() const { return max_tangent_gap_; }

    Point point_at(double s) const {
        const auto [i, local] = locate(s);
        return geoms_[i].point_at(local);
    }

    Point tangent_at(double s) const {
        const auto [i, local] = locate(s);
        return geoms_[i].tangent_at(local);
    }

private:
    std::vector<curvedetail::SegGeom> geoms_;
    std::vector<double> cum_;
    double len_ = 0.0;
    bool closed_ = false;
    double max_join_gap_ = 0.0;
    double max_tangent_gap_ = 0.0;

    std::pair<std::size_t, double> locate(double s) const {
        if (closed_) {
            s = std::fmod(s, len_);
            if (s < 0.0) s += len_;
        } else {
            s = std::clamp(s, 0.0, len_);
        }
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        std::size_t i = it == cum_.begin() ? 0 : std::size_t(it - cum_.begin()) - 1;
        i = std::min(i, geoms_.size() - 1);
        return {i, s - cum_[i]};
    }
};

// A curve plus an optional closed-form local feature size. When lfs is empty
// the numeric medial-axis machinery supplies it.
struct CurveModel {
    std::vector<CurveComponent> components;
    std::function<double(const Point&)> lfs;

    double total_length() const {
        double t = 0.0;
        for (const auto& c : components) t += c.length();
        return t;
    }

    bool all_closed() const {
        for (const auto& c : components)
            if (!c.closed()) return false;
        return true;
    }
};

inline CurveModel make_circle(double radius, const Point& center = Point(0.0, 0.0)) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
    curvedetail::require_planar(center, "circle");
    std::vector<Segment> segs{CircArc{center, radius, 0.0, curvedetail::kTwoPi}};
    CurveModel m;
    m.components.emplace_back(std::move(segs), true);
    m.lfs = [center](const Point& p) { return distance(p, center); };
    return m;
}

inline CurveModel make_ellipse(const Point& center, double rx, double ry) {
    if (!(rx > 0.0) || !(ry > 0.0)) throw std::invalid_argument("ellipse radii must be positive");
    curvedetail::require_planar(center, "ellipse");
    std::vector<Segment> segs{EllipseArc{center, rx, ry, 0.0, curvedetail::kTwoPi}};
    CurveModel m;
    m.components.emplace_back(std::move(segs), true);
    if (rx == ry) {
        m.lfs = [center](const Point& p) { return distance(p, center); };
        return m;
    }
    // The medial axis is the major-axis segment between the two centers of
    // curvature at the vertices.
    const bool wide = rx > ry;
    const double e = wide ? (rx * rx - ry * ry) / rx : (ry * ry - rx * rx) / ry;
    const Point m0 = wide ? Point(center[0] - e, center[1]) : Point(center[0], center[1] - e);
    const Point m1 = wide ? Point(center[0] + e, center[1]) : Point(center[0], center[1] + e);
    m.lfs = [m0, m1](const Point& p) { return segment_distance(p, m0, m1); };
    return m;
}

inline CurveModel make_concentric_circles(double r1, double r2,
                                          const Point& center = Point(0.0, 0.0)) {
    if (!(r1 > 0.0) || !(r2 > r1)) throw std::invalid_argument("radii must satisfy 0 < r1 < r2");
    curvedetail::require_planar(center, "concentric circles");
    CurveModel m;
    {
        std::vector<Segment> segs{CircArc{center, r1, 0.0, curvedetail::kTwoPi}};
        m.components.emplace_back(std::move(segs), true);
    }
    {
        std::vector<Segment> segs{CircArc{center, r2, 0.0, curvedetail::kTwoPi}};
        m.components.emplace_back(std::move(segs), true);
    }
    // The medial axis is the mid circle together with the shared center.
    const double rm = 0.5 * (r1 + r2);
    m.lfs = [center, rm](const Point& p) {
        const double d = distance(p, center);
        return std::min(std::abs(d - rm), d);
    };
    return m;
}

// Stem from (0,0) to (1,0) with a small arc hooked below the far end. Open by
// construction; carries the idealized lfs(p) = d(p, (1,0)) of the writeup it
// reproduces.
inline CurveModel make_hook(double h = 0.05) {
    if (!(h > 0.0) || !(h < 0.5)) throw std::invalid_argument("hook scale must lie in (0, 0.5)");
    const Point b = Point(1.0, 0.0);
    std::vector<Segment> segs{LineSeg{Point(0.0, 0.0), b},
                              CircArc{Point(1.0, -h), h,
                                      std::numbers::pi / 2.0, std::numbers::pi * 50.0 / 180.0}};
    CurveModel m;
    m.components.emplace_back(std::move(segs), false);
    m.lfs = [b](const Point& p) { return distance(p, b); };
    return m;
}

inline CurveModel make_arc_chain(std::vector<Segment> segs, bool closed = true,
                                 bool allow_corners = false) {
    CurveModel m;
    m.components.emplace_back(std::move(segs), closed, allow_corners);
    return m;
}

}  // namespace recurve
