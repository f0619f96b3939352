#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace recurve {

// Points carry a runtime dimension (2 to 5) in a fixed inline buffer so the
// heavy spatial-search paths stay allocation free. Unused coordinates are
// zero, which lets distance code loop over the full buffer unconditionally.
constexpr int kMaxDim = 5;

struct Point {
    std::array<double, 5> c{0.0, 0.0, 0.0, 0.0, 0.0};
    int dim = 2;

    Point() = default;
    Point(double x, double y) : c{x, y, 0.0, 0.0, 0.0}, dim(2) {}
    Point(double x, double y, double z) : c{x, y, z, 0.0, 0.0}, dim(3) {}
    Point(double x, double y, double z, double w) : c{x, y, z, w, 0.0}, dim(4) {}
    Point(double x, double y, double z, double w, double v) : c{x, y, z, w, v}, dim(5) {}

    static Point from_coords(const std::vector<double>& v) {
        if (v.size() < 2 || v.size() > kMaxDim)
            throw std::invalid_argument("point dimension must be between 2 and 5");
        Point p;
        p.dim = static_cast<int>(v.size());
        std::copy(v.begin(), v.end(), p.c.begin());
        return p;
    }

    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double x() const { return c[0]; }
    double y() const { return c[1]; }

    bool operator==(const Point& o) const { return c == o.c && dim == o.dim; }
};

inline Point operator+(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < 5; ++i) r.c[static_cast<size_t>(i)] += b.c[static_cast<size_t>(i)];
    r.dim = std::max(a.dim, b.dim);
    return r;
}

inline Point operator-(const Point& a, const Point& b) {
    Point r = a;
    for (int i = 0; i < 5; ++i) r.c[static_cast<size_t>(i)] -= b.c[static_cast<size_t>(i)];
    r.dim = std::max(a.dim, b.dim);
    return r;
}

inline Point operator*(double s, const Point& a) {
    Point r = a;
    for (auto& v : r.c) v *= s;
    return r;
}

inline double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(i)];
    return s;
}

inline double squared_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
        double d = a.c[static_cast<size_t>(i)] - b.c[static_cast<size_t>(i)];
        s += d * d;
    }
    return s;
}

inline double distance(const Point& a, const Point& b) {
    if (a.dim != b.dim) throw std::invalid_argument("distance: dimension mismatch");
    return std::sqrt(squared_distance(a, b));
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point normalized(const Point& a) {
    double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return (1.0 / n) * a;
}

inline Point midpoint(const Point& a, const Point& b) { return 0.5 * (a + b); }

inline Point lerp(const Point& a, const Point& b, double t) { return a + t * (b - a); }

// Interior angle at vertex b of the polyline a-b-c, in radians within [0, pi].
// Uses the half-angle arctangent form, which stays accurate near 0 and pi
// where the arccos-of-dot form loses digits. Degenerate spokes are rejected.
inline double angle_rad(const Point& a, const Point& b, const Point& c) {
    Point u = a - b;
    Point v = c - b;
    double nu = norm(u);
    double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("angle at coincident points is undefined");
    Point uh = (1.0 / nu) * u;
    Point vh = (1.0 / nv) * v;
    return 2.0 * std::atan2(norm(uh - vh), norm(uh + vh));
}

inline double angle_deg(const Point& a, const Point& b, const Point& c) {
    return angle_rad(a, b, c) * 180.0 / std::numbers::pi;
}

inline double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

// 2D helpers used by the planar constructions.
inline double cross2(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

inline Point rotate2(const Point& p, double angle) {
    double cs = std::cos(angle), sn = std::sin(angle);
    return Point(cs * p.x() - sn * p.y(), sn * p.x() + cs * p.y());
}

inline Point perp2(const Point& p) { return Point(-p.y(), p.x()); }

// Reflection of p through the center point q.
inline Point point_reflect(const Point& p, const Point& q) { return 2.0 * q - p; }

// Center of the circle through three non-collinear 2D points.
inline Point circumcenter2(const Point& a, const Point& b, const Point& c) {
    double abx = b.x() - a.x(), aby = b.y() - a.y();
    double acx = c.x() - a.x(), acy = c.y() - a.y();
    double d = 2.0 * (abx * acy - aby * acx);
    if (d == 0.0) throw std::invalid_argument("circumcenter of collinear points is undefined");
    double ab2 = abx * abx + aby * aby;
    double ac2 = acx * acx + acy * acy;
    double ux = (acy * ab2 - aby * ac2) / d;
    double uy = (abx * ac2 - acx * ab2) / d;
    return Point(a.x() + ux, a.y() + uy);
}

// Distance from p to the segment [a, b].
inline double segment_distance(const Point& p, const Point& a, const Point& b) {
    Point ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

// Angle of the 2D vector p measured from the positive x axis, in [0, 2*pi).
inline double polar_angle(const Point& p) {
    double a = std::atan2(p.y(), p.x());
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

inline Point unit_dir(double angle) { return Point(std::cos(angle), std::sin(angle)); }

using PointList = std::vector<Point>;

}  // namespace recurve
