#pragma once

#include <cmath>
#include <stdexcept>

#include <recurve/geometry.hpp>

// The local adjacency criterion: two points a, c can both be curve-neighbors
// of b only if the angle at b clears a threshold derived from the sampling
// parameter. The closed form is checked against a brute-force witness-ball
// oracle in the tests.

namespace recurve {

struct CompatParams {
    double epsilon = 0.66;
    double k = 0.0;  // cosine threshold eps*sqrt(4-eps^2)/2, always derived from epsilon

    explicit CompatParams(double eps = 0.66) : epsilon(eps) {
        if (!(eps > 0.0) || !(eps <= std::numbers::sqrt2))
            throw std::invalid_argument("epsilon must lie in (0, sqrt(2)]");
        k = eps * std::sqrt(4.0 - eps * eps) / 2.0;
    }
};

// Common radius of the witness sphere X(a,b): every witness point is
// equidistant from a and b at this distance.
inline double xab_radius(const Point& a, const Point& b, const CompatParams& params) {
    double d = distance(a, b);
    if (d == 0.0) throw std::invalid_argument("xab_radius: a and b coincide");
    return d / (2.0 * params.k);
}

namespace detail {

// Unit vector from m toward c, orthogonal to dir, inside the plane spanned
// by dir and (c - m). Returns false when c is collinear with the dir line.
inline bool plane_normal_toward(const Point& m, const Point& dir, const Point& c, Point& out) {
    Point v = c - m;
    Point w = v - dot(v, dir) * dir;
    double n = norm(w);
    if (n == 0.0) return false;
    out = (1.0 / n) * w;
    out.dim = std::max({m.dim, dir.dim, c.dim});
    return true;
}

// Some unit vector orthogonal to both u1 and u2 (themselves orthonormal).
inline Point orthogonal_direction(const Point& u1, const Point& u2, int dim) {
    for (int axis = 0; axis < dim; ++axis) {
        Point e;
        e.dim = dim;
        e[axis] = 1.0;
        Point w = e - dot(e, u1) * u1 - dot(e, u2) * u2;
        w.dim = dim;
        double n = norm(w);
        if (n > 1e-9) {
            Point r = (1.0 / n) * w;
            r.dim = dim;
            return r;
        }
    }
    throw std::logic_error("no orthogonal direction found");
}

}  // namespace detail

// The witness point of X(a,b) inside the plane of a, b, c on c's side of the
// line through a and b.
inline Point xab_witness(const Point& a, const Point& b, const Point& c,
                         const CompatParams& params) {
    if (squared_distance(a, b) == 0.0 || squared_distance(b, c) == 0.0 ||
        squared_distance(a, c) == 0.0)
        throw std::invalid_argument("xab_witness: points must be pairwise distinct");
    double d = distance(a, b);
    double radius = xab_radius(a, b, params);
    Point m = midpoint(a, b);
    Point e1 = (1.0 / d) * (b - a);
    Point u;
    if (!detail::plane_normal_toward(m, e1, c, u))
        throw std::invalid_argument("xab_witness: collinear input");
    double h = std::sqrt(std::max(0.0, radius * radius - 0.25 * d * d));
    Point w = m + h * u;
    w.dim = std::max({a.dim, b.dim, c.dim});
    return w;
}

// Closed-form compatibility test. The angle at b must clear
// arccos(k) + arccos(k*ratio) for both length ratios; an arccos argument
// above 1 means the corresponding witness balls cannot reach the third point
// at all, so that half of the condition is vacuously satisfied. Exact ties
// count as not compatible. Collinear triples resolve through the angle
// itself: 180 degrees (b between a and c) passes, 0 degrees fails.
inline bool is_compatible(const Point& a, const Point& b, const Point& c,
                          const CompatParams& params) {
    if (squared_distance(a, b) == 0.0 || squared_distance(b, c) == 0.0 ||
        squared_distance(a, c) == 0.0)
        throw std::invalid_argument("is_compatible: points must be pairwise distinct");
    double dab = distance(a, b);
    double dcb = distance(c, b);
    double theta = angle_rad(a, b, c);
    double base = std::acos(params.k);
    auto clamped_acos = [](double x) { return x > 1.0 ? 0.0 : std::acos(x); };
    double t1 = base + clamped_acos(params.k * dcb / dab);
    double t2 = base + clamped_acos(params.k * dab / dcb);
    return theta > t1 && theta > t2;
}

// Brute-force form of the same predicate: discretizes the witness spheres
// X(a,b) and X(b,c) and requires the third point to escape every ball
// B_x(d(x,b)). In the plane the witness set is two points; in higher
// dimension n_witness points are placed on the witness circle spanned by the
// plane of a, b, c plus one extra orthogonal direction. Test oracle only.
inline bool is_compatible_oracle(const Point& a, const Point& b, const Point& c,
                                 const CompatParams& params, int n_witness) {
    if (n_witness < 2) throw std::invalid_argument("is_compatible_oracle: n_witness >= 2");
    int dim = std::max({a.dim, b.dim, c.dim});
    auto escapes_all = [&](const Point& u, const Point& v, const Point& probe) {
        // Witness sphere of X(u,v), probe must stay outside all balls.
        double d = distance(u, v);
        double radius = xab_radius(u, v, params);
        Point m = midpoint(u, v);
        Point e1 = (1.0 / d) * (v - u);
        Point u1;
        if (!detail::plane_normal_toward(m, e1, probe, u1))
            throw std::invalid_argument("is_compatible_oracle: collinear input");
        double h = std::sqrt(std::max(0.0, radius * radius - 0.25 * d * d));
        if (dim == 2) {
            Point x1 = m + h * u1;
            Point x2 = m - h * u1;
            return distance(probe, x1) > radius && distance(probe, x2) > radius;
        }
        Point u2 = detail::orthogonal_direction(e1, u1, dim);
        for (int j = 0; j < n_witness; ++j) {
            double t = 2.0 * std::numbers::pi * j / n_witness;
            Point x = m + (h * std::cos(t)) * u1 + (h * std::sin(t)) * u2;
            if (!(distance(probe, x) > radius)) return false;
        }
        return true;
    };
    return escapes_all(a, b, c) && escapes_all(c, b, a);
}

}  // namespace recurve
