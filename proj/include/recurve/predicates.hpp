#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <recurve/geometry.hpp>

// Robust sign predicates for planar Delaunay: a floating-point filter with a
// forward error bound, falling back to exact expansion arithmetic. The
// expansion algorithms (error-free transforms, merge-sum, scaling) follow the
// classic adaptive-precision predicate construction.

namespace recurve {
namespace detail {

constexpr double kHalfUlp = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kCcwErrBound = (3.0 + 16.0 * kHalfUlp) * kHalfUlp;
constexpr double kIncErrBound = (10.0 + 96.0 * kHalfUlp) * kHalfUlp;

inline void two_sum(double a, double b, double& hi, double& lo) {
    hi = a + b;
    double bv = hi - a;
    double av = hi - bv;
    lo = (a - av) + (b - bv);
}

// Requires |a| >= |b| or a == 0.
inline void fast_two_sum(double a, double b, double& hi, double& lo) {
    hi = a + b;
    lo = b - (hi - a);
}

inline void two_diff(double a, double b, double& hi, double& lo) {
    hi = a - b;
    double bv = a - hi;
    double av = hi + bv;
    lo = (a - av) + (bv - b);
}

inline void two_prod(double a, double b, double& hi, double& lo) {
    hi = a * b;
    lo = std::fma(a, b, -hi);
}

// Merges two nonoverlapping expansions (components by increasing magnitude)
// into one, dropping zero components. Returns the output length; h needs
// capacity elen + flen (at least 1).
inline int expansion_sum(int elen, const double* e, int flen, const double* f, double* h) {
    double Q, Qnew, hh;
    int eindex = 0, findex = 0, hindex = 0;
    double enow = e[0], fnow = f[0];
    if ((fnow > enow) == (fnow > -enow)) {
        Q = enow;
        if (++eindex < elen) enow = e[eindex];
    } else {
        Q = fnow;
        if (++findex < flen) fnow = f[findex];
    }
    if (eindex < elen && findex < flen) {
        if ((fnow > enow) == (fnow > -enow)) {
            fast_two_sum(enow, Q, Qnew, hh);
            if (++eindex < elen) enow = e[eindex];
        } else {
            fast_two_sum(fnow, Q, Qnew, hh);
            if (++findex < flen) fnow = f[findex];
        }
        Q = Qnew;
        if (hh != 0.0) h[hindex++] = hh;
        while (eindex < elen && findex < flen) {
            if ((fnow > enow) == (fnow > -enow)) {
                two_sum(Q, enow, Qnew, hh);
                if (++eindex < elen) enow = e[eindex];
            } else {
                two_sum(Q, fnow, Qnew, hh);
                if (++findex < flen) fnow = f[findex];
            }
            Q = Qnew;
            if (hh != 0.0) h[hindex++] = hh;
        }
    }
    while (eindex < elen) {
        two_sum(Q, enow, Qnew, hh);
        if (++eindex < elen) enow = e[eindex];
        Q = Qnew;
        if (hh != 0.0) h[hindex++] = hh;
    }
    while (findex < flen) {
        two_sum(Q, fnow, Qnew, hh);
        if (++findex < flen) fnow = f[findex];
        Q = Qnew;
        if (hh != 0.0) h[hindex++] = hh;
    }
    if (Q != 0.0 || hindex == 0) h[hindex++] = Q;
    return hindex;
}

// h needs capacity 2 * elen.
inline int expansion_scale(int elen, const double* e, double b, double* h) {
    double Q, sum, hh, p1, p0;
    int hindex = 0;
    two_prod(e[0], b, Q, hh);
    if (hh != 0.0) h[hindex++] = hh;
    for (int i = 1; i < elen; ++i) {
        two_prod(e[i], b, p1, p0);
        two_sum(Q, p0, sum, hh);
        if (hh != 0.0) h[hindex++] = hh;
        fast_two_sum(p1, sum, Q, hh);
        if (hh != 0.0) h[hindex++] = hh;
    }
    if (Q != 0.0 || hindex == 0) h[hindex++] = Q;
    return hindex;
}

inline int expansion_sign(int len, const double* h) {
    double v = h[len - 1];
    return (v > 0.0) - (v < 0.0);
}

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

inline int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
    // Signed area doubled: ax(by - cy) + bx(cy - ay) + cx(ay - by),
    // accumulated as six exact products.
    double t[6][2];
    two_prod(ax, by, t[0][1], t[0][0]);
    two_prod(-ax, cy, t[1][1], t[1][0]);
    two_prod(bx, cy, t[2][1], t[2][0]);
    two_prod(-bx, ay, t[3][1], t[3][0]);
    two_prod(cx, ay, t[4][1], t[4][0]);
    two_prod(-cx, by, t[5][1], t[5][0]);
    double buf1[16], buf2[16];
    int n = expansion_sum(2, t[0], 2, t[1], buf1);
    n = expansion_sum(n, buf1, 2, t[2], buf2);
    n = expansion_sum(n, buf2, 2, t[3], buf1);
    n = expansion_sum(n, buf1, 2, t[4], buf2);
    n = expansion_sum(n, buf2, 2, t[5], buf1);
    return expansion_sign(n, buf1);
}

// Product of two short expansions; h needs capacity 2 * elen * flen and the
// scratch buffers the same.
inline int expansion_mul(int elen, const double* e, int flen, const double* f, double* h,
                         double* s1, double* s2) {
    int hlen = expansion_scale(elen, e, f[0], h);
    for (int i = 1; i < flen; ++i) {
        int plen = expansion_scale(elen, e, f[i], s1);
        int nlen = expansion_sum(hlen, h, plen, s1, s2);
        std::copy(s2, s2 + nlen, h);
        hlen = nlen;
    }
    return hlen;
}

inline int incircle_exact(double ax, double ay, double bx, double by, double cx, double cy,
                          double px, double py) {
    // Exact evaluation of the translated 3x3 lifted determinant
    //   | adx  ady  adx^2+ady^2 |
    //   | bdx  bdy  bdx^2+bdy^2 |
    //   | cdx  cdy  cdx^2+cdy^2 |
    // where the differences (a - p etc.) are exact two-term expansions.
    double adx[2], ady[2], bdx[2], bdy[2], cdx[2], cdy[2];
    two_diff(ax, px, adx[1], adx[0]);
    two_diff(ay, py, ady[1], ady[0]);
    two_diff(bx, px, bdx[1], bdx[0]);
    two_diff(by, py, bdy[1], bdy[0]);
    two_diff(cx, px, cdx[1], cdx[0]);
    two_diff(cy, py, cdy[1], cdy[0]);

    double s1[64], s2[64];
    auto mul22 = [&](const double* u, const double* v, double* out) {
        return expansion_mul(2, u, 2, v, out, s1, s2);
    };
    auto sub = [&](int ulen, double* u, int vlen, double* v, double* out) {
        for (int i = 0; i < vlen; ++i) v[i] = -v[i];
        return expansion_sum(ulen, u, vlen, v, out);
    };

    double p1[8], p2[8], minor_bc[16], minor_ca[16], minor_ab[16];
    int n1 = mul22(bdx, cdy, p1);
    int n2 = mul22(cdx, bdy, p2);
    int nbc = sub(n1, p1, n2, p2, minor_bc);
    n1 = mul22(cdx, ady, p1);
    n2 = mul22(adx, cdy, p2);
    int nca = sub(n1, p1, n2, p2, minor_ca);
    n1 = mul22(adx, bdy, p1);
    n2 = mul22(bdx, ady, p2);
    int nab = sub(n1, p1, n2, p2, minor_ab);

    double q1[8], q2[8], alift[16], blift[16], clift[16];
    int m1 = mul22(adx, adx, q1);
    int m2 = mul22(ady, ady, q2);
    int na = expansion_sum(m1, q1, m2, q2, alift);
    m1 = mul22(bdx, bdx, q1);
    m2 = mul22(bdy, bdy, q2);
    int nb = expansion_sum(m1, q1, m2, q2, blift);
    m1 = mul22(cdx, cdx, q1);
    m2 = mul22(cdy, cdy, q2);
    int nc = expansion_sum(m1, q1, m2, q2, clift);

    static thread_local double ta[600], tb[600], tc[600], ms1[600], ms2[600], tmp[1200],
        total[1800];
    int nta = expansion_mul(na, alift, nbc, minor_bc, ta, ms1, ms2);
    int ntb = expansion_mul(nb, blift, nca, minor_ca, tb, ms1, ms2);
    int ntc = expansion_mul(nc, clift, nab, minor_ab, tc, ms1, ms2);
    int nt = expansion_sum(nta, ta, ntb, tb, tmp);
    nt = expansion_sum(nt, tmp, ntc, tc, total);
    return expansion_sign(nt, total);
}

inline int incircle_filtered(double ax, double ay, double bx, double by, double cx, double cy,
                             double px, double py) {
    double adx = ax - px, ady = ay - py;
    double bdx = bx - px, bdy = by - py;
    double cdx = cx - px, cdy = cy - py;

    double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    double alift = adx * adx + ady * ady;
    double cdxady = cdx * ady, adxcdy = adx * cdy;
    double blift = bdx * bdx + bdy * bdy;
    double adxbdy = adx * bdy, bdxady = bdx * ady;
    double clift = cdx * cdx + cdy * cdy;

    double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                       (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                       (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
    double errbound = kIncErrBound * permanent;
    if (det > errbound || -det > errbound) return sgn(det);
    return incircle_exact(ax, ay, bx, by, cx, cy, px, py);
}

}  // namespace detail

// Sign of the doubled signed area of abc: +1 counterclockwise, -1 clockwise,
// 0 collinear. Exact.
inline int orient2d(const Point& a, const Point& b, const Point& c) {
    double ax = a.x(), ay = a.y(), bx = b.x(), by = b.y(), cx = c.x(), cy = c.y();
    double detleft = (ax - cx) * (by - cy);
    double detright = (ay - cy) * (bx - cx);
    double det = detleft - detright;
    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return detail::sgn(det);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return detail::sgn(det);
        detsum = -detleft - detright;
    } else {
        // detleft is exactly zero (a rounded product vanishes only when a
        // factor does, barring underflow far below this geometry's scale),
        // and the sign of detright is exact.
        return -detail::sgn(detright);
    }
    double errbound = detail::kCcwErrBound * detsum;
    if (det >= errbound || -det >= errbound) return detail::sgn(det);
    return detail::orient2d_exact(ax, ay, bx, by, cx, cy);
}

// Sign of the incircle determinant without the orientation precondition
// check: +1 iff p lies strictly inside the circumcircle of the
// counterclockwise triangle abc. Exact.
inline int incircle_unchecked(const Point& a, const Point& b, const Point& c, const Point& p) {
    return detail::incircle_filtered(a.x(), a.y(), b.x(), b.y(), c.x(), c.y(), p.x(), p.y());
}

// Checked variant: requires abc strictly counterclockwise.
inline int incircle(const Point& a, const Point& b, const Point& c, const Point& p) {
    int o = orient2d(a, b, c);
    if (o == 0) throw std::invalid_argument("incircle: triangle is degenerate (collinear)");
    if (o < 0) throw std::invalid_argument("incircle: triangle must be counterclockwise");
    return incircle_unchecked(a, b, c, p);
}

// Incircle with symbolic perturbation: cocircular ties are resolved by
// perturbing the lifted height of each point by an infinitesimal that
// decreases with the point's global index, so the result is never 0 and is
// consistent across all queries that use the same index assignment. abc must
// be counterclockwise and the four indices pairwise distinct.
inline int incircle_sos(const Point& a, const Point& b, const Point& c, const Point& p, int ia,
                        int ib, int ic, int ip) {
    int s = incircle_unchecked(a, b, c, p);
    if (s != 0) return s;
    struct Entry {
        int index;
        int row;
    };
    std::array<Entry, 4> order{{{ia, 0}, {ib, 1}, {ic, 2}, {ip, 3}}};
    std::sort(order.begin(), order.end(),
              [](const Entry& l, const Entry& r) { return l.index < r.index; });
    for (const Entry& e : order) {
        int cof;
        switch (e.row) {
            case 0: cof = orient2d(b, c, p); break;
            case 1: cof = -orient2d(a, c, p); break;
            case 2: cof = orient2d(a, b, p); break;
            default: cof = -orient2d(a, b, c); break;
        }
        if (cof != 0) return cof;
    }
    return 0;  // unreachable: the last cofactor is -orient2d(a,b,c) != 0
}

}  // namespace recurve
