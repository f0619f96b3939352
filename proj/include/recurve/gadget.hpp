#pragma once

// Counterexample constructions built around a two-arc tangency column. The
// base gadget is a pair of curves that interpolate one eight-point sample set
// at a distance-to-feature-size ratio just below 0.72. The column extends
// downward with equal tangent circles, stacks into periodic strips with two
// strand pairings, bends into annuli, and finally ties two concentric annuli
// together so that four pairing variants of one point set differ even in
// their component counts. verify_gadget reports midpoint clearance margins
// and a dense-grid ratio check; revolve lifts a planar sample set to 3-D.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <recurve/curve.hpp>
#include <recurve/geometry.hpp>
#include <recurve/graph.hpp>
#include <recurve/kdtree.hpp>
#include <recurve/medial.hpp>
#include <recurve/sample.hpp>
#include <recurve/sampling.hpp>

namespace recurve {

struct NamedCircle {
    std::string name;
    Point center = Point(0.0, 0.0);
    double radius = 0.0;
};

struct NamedPoint {
    std::string name;
    Point p = Point(0.0, 0.0);
};

struct NamedValue {
    std::string name;
    double value = 0.0;
};

// Separator line between two facing construction circles of equal radius.
// Only valid as a clearance bound for probes whose y coordinate (in the flat
// strip frame) lies inside [band_lo, band_hi], the junction band where the
// facing arcs actually live.
struct BisectorLine {
    Point through = Point(0.0, 0.0);
    Point normal = Point(0.0, 0.0);
    double band_lo = 0.0;
    double band_hi = 0.0;
};

struct ConstructionLog {
    std::vector<NamedCircle> circles;
    std::vector<NamedPoint> points;
    std::vector<NamedValue> values;
    std::vector<std::string> notes;

    double value(const std::string& name) const {
        for (const NamedValue& v : values)
            if (v.name == name) return v.value;
        throw std::out_of_range("no logged value named " + name);
    }
    const NamedCircle& circle(const std::string& name) const {
        for (const NamedCircle& c : circles)
            if (c.name == name) return c;
        throw std::out_of_range("no logged circle named " + name);
    }
    const Point& named_point(const std::string& name) const {
        for (const NamedPoint& p : points)
            if (p.name == name) return p.p;
        throw std::out_of_range("no logged point named " + name);
    }
};

struct Gadget {
    SampleSet points;                 // shared point set, untagged
    std::vector<CurveModel> variants;
    std::vector<SampleSet> tagged;    // per variant, same point order as points
    ConstructionLog construction_log;

    // analytic medial anchors per variant; empty for bent gadgets, whose
    // clearances come from the numeric feature-size callback instead
    std::vector<std::vector<Point>> branch_points;
    std::vector<std::vector<BisectorLine>> branch_lines;
};

struct MidpointMargin {
    int variant = 0;
    int component = 0;
    Point t = Point(0.0, 0.0);
    double d_t = 0.0;
    double required = 0.0;
    double clearance = 0.0;
    double margin = 0.0;
};

struct GadgetReport {
    std::vector<MidpointMargin> margins;
    std::vector<double> eps_star;  // dense grid plus midpoint probes, per variant
    double min_margin = std::numeric_limits<double>::infinity();
    double max_eps_star = 0.0;
    bool ok = false;
};

namespace gadgetdetail {

inline constexpr double kCexEps = 0.72;
inline constexpr double kHalfPeriod = 1.008;
inline constexpr double kPeriod = 2.016;
inline constexpr double kGPi = std::numbers::pi;
inline constexpr double kTopY = 3.614;   // junction height 0.614 plus column height 3
inline constexpr double kStripTop = kTopY + kHalfPeriod;
inline constexpr double kTieGap = 4.0;
inline constexpr int kTieSpacing = 4;    // unit steps between tied rings
// Height of the line in the flat strip that bending maps to the nominal
// radius.  Chords whose endpoint heights average to this value keep their
// length to first order in 1/radius.  Scanning this knob shows the measured
// ratio is insensitive to it (the excess over the flat strip comes from the
// curvature the bend adds to the contact arcs, not from chord stretch), with
// zero the measured optimum.
inline constexpr double kBendCenterY = 0.0;
// Minimal column-pair count for which the bent strip with inward tips stays
// below ratio 0.72; found once by a doubling search (see the hidden search
// test) and fixed here.
inline constexpr int kAnnulusMinCopies = 416;

struct Mark {
    int idx = -1;
    double s = 0.0;
};

struct Piece {
    std::vector<Segment> segs;
    std::vector<double> lens;
    std::vector<Mark> marks;

    double len() const {
        double t = 0.0;
        for (double l : lens) t += l;
        return t;
    }
};

inline double seg_len(const Segment& s) { return curvedetail::SegGeom(s).length(); }

inline Segment translated_seg(const Segment& s, const Point& d) {
    if (const auto* l = std::get_if<LineSeg>(&s)) return LineSeg{l->a + d, l->b + d};
    if (const auto* c = std::get_if<CircArc>(&s))
        return CircArc{c->center + d, c->radius, c->angle0, c->angle1};
    throw std::invalid_argument("translation supports line and circular arc segments only");
}

inline Segment mirrored_x_seg(const Segment& s, double x0) {
    const auto mp = [x0](const Point& p) { return Point(2.0 * x0 - p.x(), p.y()); };
    if (const auto* l = std::get_if<LineSeg>(&s)) return LineSeg{mp(l->a), mp(l->b)};
    if (const auto* c = std::get_if<CircArc>(&s))
        return CircArc{mp(c->center), c->radius, kGPi - c->angle0, kGPi - c->angle1};
    throw std::invalid_argument("mirroring supports line and circular arc segments only");
}

inline Segment reflected_seg(const Segment& s, const Point& q) {
    if (const auto* l = std::get_if<LineSeg>(&s))
        return LineSeg{point_reflect(l->a, q), point_reflect(l->b, q)};
    if (const auto* c = std::get_if<CircArc>(&s))
        return CircArc{point_reflect(c->center, q), c->radius, c->angle0 + kGPi,
                       c->angle1 + kGPi};
    throw std::invalid_argument("point reflection supports line and circular arc segments only");
}

inline Segment reversed_seg(const Segment& s) {
    if (const auto* l = std::get_if<LineSeg>(&s)) return LineSeg{l->b, l->a};
    if (const auto* c = std::get_if<CircArc>(&s))
        return CircArc{c->center, c->radius, c->angle1, c->angle0};
    if (const auto* b = std::get_if<BentArc>(&s)) {
        BentArc out = *b;
        if (const auto* fl = std::get_if<LineSeg>(&b->flat))
            out.flat = LineSeg{fl->b, fl->a};
        else {
            const CircArc& fc = std::get<CircArc>(b->flat);
            out.flat = CircArc{fc.center, fc.radius, fc.angle1, fc.angle0};
        }
        return out;
    }
    throw std::invalid_argument("cannot reverse this segment kind");
}

inline Segment scaled_seg(const Segment& s, double f) {
    if (const auto* l = std::get_if<LineSeg>(&s)) return LineSeg{f * l->a, f * l->b};
    if (const auto* c = std::get_if<CircArc>(&s))
        return CircArc{f * c->center, f * c->radius, c->angle0, c->angle1};
    if (const auto* b = std::get_if<BentArc>(&s)) {
        BentArc out = *b;
        out.bend_radius = f * b->bend_radius;
        if (const auto* fl = std::get_if<LineSeg>(&b->flat))
            out.flat = LineSeg{f * fl->a, f * fl->b};
        else {
            const CircArc& fc = std::get<CircArc>(b->flat);
            out.flat = CircArc{f * fc.center, f * fc.radius, fc.angle0, fc.angle1};
        }
        return out;
    }
    throw std::invalid_argument("cannot scale this segment kind");
}

inline Segment bent_seg(const Segment& s, double radius, double sign) {
    if (const auto* l = std::get_if<LineSeg>(&s)) return BentArc{*l, radius, sign};
    if (const auto* c = std::get_if<CircArc>(&s)) return BentArc{*c, radius, sign};
    throw std::invalid_argument("cannot bend an already bent segment");
}

inline Piece translated(const Piece& p, const Point& d) {
    Piece out = p;
    for (Segment& s : out.segs) s = translated_seg(s, d);
    return out;
}

inline Piece mirrored_x(const Piece& p, double x0) {
    Piece out = p;
    for (Segment& s : out.segs) s = mirrored_x_seg(s, x0);
    return out;
}

inline Piece reflected(const Piece& p, const Point& q) {
    Piece out = p;
    for (Segment& s : out.segs) s = reflected_seg(s, q);
    return out;
}

inline Piece reversed(const Piece& p) {
    Piece out;
    out.segs.reserve(p.segs.size());
    out.lens.reserve(p.lens.size());
    for (auto it = p.segs.rbegin(); it != p.segs.rend(); ++it)
        out.segs.push_back(reversed_seg(*it));
    for (auto it = p.lens.rbegin(); it != p.lens.rend(); ++it) out.lens.push_back(*it);
    const double total = p.len();
    out.marks.reserve(p.marks.size());
    for (const Mark& m : p.marks) out.marks.push_back({m.idx, total - m.s});
    return out;
}

inline Piece scaled(const Piece& p, double f) {
    Piece out = p;
    for (Segment& s : out.segs) s = scaled_seg(s, f);
    for (double& l : out.lens) l *= f;
    for (Mark& m : out.marks) m.s *= f;
    return out;
}

inline Piece bent(const Piece& p, double radius, double sign) {
    Piece out;
    out.segs.reserve(p.segs.size());
    out.lens.reserve(p.lens.size());
    std::vector<double> old_cum{0.0}, new_cum{0.0};
    for (std::size_t i = 0; i < p.segs.size(); ++i) {
        out.segs.push_back(bent_seg(p.segs[i], radius, sign));
        out.lens.push_back(seg_len(out.segs.back()));
        old_cum.push_back(old_cum.back() + p.lens[i]);
        new_cum.push_back(new_cum.back() + out.lens.back());
    }
    out.marks.reserve(p.marks.size());
    for (const Mark& m : p.marks) {
        auto it = std::upper_bound(old_cum.begin(), old_cum.end(), m.s);
        std::size_t i = it == old_cum.begin() ? 0 : std::size_t(it - old_cum.begin()) - 1;
        i = std::min(i, p.segs.size() - 1);
        const double u = (m.s - old_cum[i]) / p.lens[i];
        out.marks.push_back({m.idx, new_cum[i] + u * out.lens[i]});
    }
    return out;
}

inline Piece concat(const std::vector<Piece>& parts) {
    Piece out;
    double base = 0.0;
    for (const Piece& p : parts) {
        for (const Segment& s : p.segs) out.segs.push_back(s);
        for (double l : p.lens) out.lens.push_back(l);
        for (const Mark& m : p.marks) out.marks.push_back({m.idx, base + m.s});
        base += p.len();
    }
    return out;
}

inline Piece with_offset_marks(Piece p, int offset) {
    for (Mark& m : p.marks) m.idx += offset;
    return p;
}

// Arc from one point to another around a center, taking the shorter way.
inline CircArc short_arc(const Point& center, const Point& from, const Point& to) {
    const double r = distance(center, from);
    const Point u = from - center, v = to - center;
    const double a0 = std::atan2(u.y(), u.x());
    const double a1 = std::atan2(v.y(), v.x());
    double d = a1 - a0;
    while (d > kGPi) d -= 2.0 * kGPi;
    while (d <= -kGPi) d += 2.0 * kGPi;
    return CircArc{center, r, a0, a0 + d};
}

// Arc-length position of a point known to lie on the arc.
inline double arc_param(const CircArc& arc, const Point& p) {
    const double sweep = arc.angle1 - arc.angle0;
    const Point u = p - arc.center;
    double d = std::atan2(u.y(), u.x()) - arc.angle0;
    d = std::fmod(d, 2.0 * kGPi);
    if (sweep >= 0.0 && d < 0.0) d += 2.0 * kGPi;
    if (sweep < 0.0 && d > 0.0) d -= 2.0 * kGPi;
    return arc.radius * std::abs(d);
}

// One tangency column in its local frame: samples b = (0,0), a = (0,-1),
// e_low = (0,-2), f_low = (0,-3) on a C^1 path from f_low up to the junction
// q = (-0.504, 0.307). The path climbs a vertical line and three equal
// tangent circles of radius d_r / 0.72, then the junction arc of radius r1.
struct Chain {
    std::vector<Segment> segs;
    std::vector<double> lens;
    double at_e = 0.0, at_a = 0.0, at_b = 0.0, len = 0.0;  // f_low sits at 0
    Point a, b, c, q, p;
    Point s1, s3, s4, s5;
    double r1 = 0.0, rho = 0.0, d_p = 0.0, d_q = 0.0;
};

inline Chain make_chain() {
    Chain ch;
    ch.a = Point(0.0, -1.0);
    ch.b = Point(0.0, 0.0);
    ch.c = Point(-kHalfPeriod, 0.614);
    ch.q = midpoint(ch.b, ch.c);
    ch.s1 = circumcenter2(ch.a, ch.b, ch.q);
    ch.r1 = distance(ch.s1, ch.a);
    ch.p = Point(ch.s1.x() + ch.r1, -0.5);
    ch.d_p = distance(ch.p, ch.a);
    ch.d_q = distance(ch.q, ch.b);
    ch.rho = ch.d_p / kCexEps;

    const Point e(0.0, -2.0);
    const Point f(0.0, -3.0);
    ch.s3 = ch.a + (ch.rho / ch.r1) * (ch.a - ch.s1);

    // center tangent to the circle about s3 (distance 2 rho) and passing at
    // distance rho from e; take the left crossing of the two loci
    const double d0 = distance(ch.s3, e);
    const double t = (d0 * d0 + 3.0 * ch.rho * ch.rho) / (2.0 * d0);
    const double h2 = 4.0 * ch.rho * ch.rho - t * t;
    if (h2 <= 0.0)
        throw std::runtime_error(
            "tangency system unsolvable for the chosen free parameters; residual " +
            std::to_string(-h2));
    const Point axis = (1.0 / d0) * (e - ch.s3);
    const Point base = ch.s3 + t * axis;
    const Point off = std::sqrt(h2) * perp2(axis);
    const Point cand1 = base + off, cand2 = base - off;
    ch.s4 = cand1.x() < cand2.x() ? cand1 : cand2;

    // equal circle below, tangent to the one about s4, centered on x = rho so
    // that its left rim runs vertically down to the f tip
    const double disc = 4.0 * ch.rho * ch.rho - (ch.rho - ch.s4.x()) * (ch.rho - ch.s4.x());
    if (disc <= 0.0)
        throw std::runtime_error(
            "tangency system unsolvable for the chosen free parameters; residual " +
            std::to_string(-disc));
    ch.s5 = Point(ch.rho, ch.s4.y() - std::sqrt(disc));
    if (ch.s5.y() <= f.y())
        throw std::runtime_error(
            "tangency system unsolvable for the chosen free parameters; residual " +
            std::to_string(f.y() - ch.s5.y()));

    const Point v2(0.0, ch.s5.y());
    const Point infl = midpoint(ch.s4, ch.s5);
    const Point t34 = midpoint(ch.s3, ch.s4);
    ch.segs = {LineSeg{f, v2}, short_arc(ch.s5, v2, infl), short_arc(ch.s4, infl, t34),
               short_arc(ch.s3, t34, ch.a), short_arc(ch.s1, ch.a, ch.q)};
    for (const Segment& s : ch.segs) ch.lens.push_back(seg_len(s));
    ch.at_e = ch.lens[0] + ch.lens[1] + arc_param(std::get<CircArc>(ch.segs[2]), e);
    ch.at_a = ch.lens[0] + ch.lens[1] + ch.lens[2] + ch.lens[3];
    ch.at_b = ch.at_a + arc_param(std::get<CircArc>(ch.segs[4]), ch.b);
    ch.len = ch.at_a + ch.lens[4];
    return ch;
}

// Sample index layout of a strip with `columns` = 2k column pairs: eight
// extended-column samples per column, then three semicircle samples per pair.
struct StripIndex {
    int columns = 0;

    int pa(int m) const { return 8 * m + 0; }
    int pb(int m) const { return 8 * m + 1; }
    int pc(int m) const { return 8 * m + 2; }
    int pd(int m) const { return 8 * m + 3; }
    int pe(int m) const { return 8 * m + 4; }
    int pf(int m) const { return 8 * m + 5; }
    int pel(int m) const { return 8 * m + 6; }
    int pfl(int m) const { return 8 * m + 7; }
    int psemi(int j, int t) const { return 8 * columns + 3 * j + t; }
    int total() const { return 8 * columns + 3 * (columns / 2); }
};

inline double col_x(int m) { return kPeriod * m; }

inline PointList strip_points(const StripIndex& si) {
    PointList pts(std::size_t(si.total()), Point(0.0, 0.0));
    for (int m = 0; m < si.columns; ++m) {
        const double x = col_x(m);
        pts[std::size_t(si.pa(m))] = Point(x, -1.0);
        pts[std::size_t(si.pb(m))] = Point(x, 0.0);
        pts[std::size_t(si.pc(m))] = Point(x - kHalfPeriod, 0.614);
        pts[std::size_t(si.pd(m))] = Point(x - kHalfPeriod, 1.614);
        pts[std::size_t(si.pe(m))] = Point(x - kHalfPeriod, 2.614);
        pts[std::size_t(si.pf(m))] = Point(x - kHalfPeriod, kTopY);
        pts[std::size_t(si.pel(m))] = Point(x, -2.0);
        pts[std::size_t(si.pfl(m))] = Point(x, -3.0);
    }
    for (int j = 0; j < si.columns / 2; ++j) {
        const Point center(col_x(2 * j), kTopY);
        pts[std::size_t(si.psemi(j, 0))] = center + kHalfPeriod * unit_dir(0.75 * kGPi);
        pts[std::size_t(si.psemi(j, 1))] = center + kHalfPeriod * unit_dir(0.5 * kGPi);
        pts[std::size_t(si.psemi(j, 2))] = center + kHalfPeriod * unit_dir(0.25 * kGPi);
    }
    return pts;
}

// Column piece of a strip. Bottoms run f_low -> q, tops run q -> f_top when
// rev is false. idx order: bottoms (b, a, e_low, f_low), tops (c, d, e, f).
// Red columns are the mirror pairing: their junction points right, so the
// top stacked above bottom column m is column m+1's top.
inline Piece column_piece(const Chain& ch, double xm, bool red, bool top,
                          const std::array<int, 4>& idx, bool rev) {
    Piece pc;
    pc.segs = ch.segs;
    pc.lens = ch.lens;
    pc.marks = {{idx[0], ch.at_b}, {idx[1], ch.at_a}, {idx[2], ch.at_e}, {idx[3], 0.0}};
    if (red) pc = mirrored_x(pc, 0.0);
    pc = translated(pc, Point(xm, 0.0));
    if (top) {
        const double qx = red ? xm - ch.q.x() : xm + ch.q.x();
        pc = reversed(reflected(pc, Point(qx, ch.q.y())));
    }
    if (rev) pc = reversed(pc);
    return pc;
}

// Top semicircle joining the f_top tips of the column pair around x = xc,
// sampled a quarter turn apart.
inline Piece semi_piece(double xc, const std::array<int, 3>& idx, bool rev) {
    Piece pc;
    pc.segs = {CircArc{Point(xc, kTopY), kHalfPeriod, kGPi, 0.0}};
    pc.lens = {kGPi * kHalfPeriod};
    pc.marks = {{idx[0], kHalfPeriod * kGPi * 0.25},
                {idx[1], kHalfPeriod * kGPi * 0.5},
                {idx[2], kHalfPeriod * kGPi * 0.75}};
    if (rev) pc = reversed(pc);
    return pc;
}

// Strand pairing even columns: f(B_2j) up, over the semicircle, down to
// f(B_2j+1).
inline Piece blue_strand(const Chain& ch, const StripIndex& si, int j) {
    const int m0 = 2 * j, m1 = 2 * j + 1;
    return concat({
        column_piece(ch, col_x(m0), false, false,
                     {si.pb(m0), si.pa(m0), si.pel(m0), si.pfl(m0)}, false),
        column_piece(ch, col_x(m0), false, true, {si.pc(m0), si.pd(m0), si.pe(m0), si.pf(m0)},
                     false),
        semi_piece(col_x(m0), {si.psemi(j, 0), si.psemi(j, 1), si.psemi(j, 2)}, false),
        column_piece(ch, col_x(m1), false, true, {si.pc(m1), si.pd(m1), si.pe(m1), si.pf(m1)},
                     true),
        column_piece(ch, col_x(m1), false, false,
                     {si.pb(m1), si.pa(m1), si.pel(m1), si.pfl(m1)}, true),
    });
}

// Strand pairing odd columns: f(B_2j-1) up, over the same semicircle, down to
// f(B_2j). For j = 0 the left bottom is column -1; its sample indices wrap to
// column 2k-1, which only matches geometrically after bending into an
// annulus.
inline Piece red_strand(const Chain& ch, const StripIndex& si, int j) {
    const int m1 = 2 * j;
    const int m0r = ((2 * j - 1) % si.columns + si.columns) % si.columns;
    const double x0 = col_x(2 * j - 1);
    return concat({
        column_piece(ch, x0, true, false, {si.pb(m0r), si.pa(m0r), si.pel(m0r), si.pfl(m0r)},
                     false),
        column_piece(ch, x0, true, true, {si.pc(m1), si.pd(m1), si.pe(m1), si.pf(m1)}, false),
        semi_piece(col_x(m1), {si.psemi(j, 0), si.psemi(j, 1), si.psemi(j, 2)}, false),
        column_piece(ch, col_x(m1), true, true,
                     {si.pc(m1 + 1), si.pd(m1 + 1), si.pe(m1 + 1), si.pf(m1 + 1)}, true),
        column_piece(ch, col_x(m1), true, false,
                     {si.pb(m1), si.pa(m1), si.pel(m1), si.pfl(m1)}, true),
    });
}

// Odd pairing on a flat strip leaves two loose ends. The left dangler starts
// at the open junction of column pair 0, the right dangler is the bare bottom
// column 2k-1 ending at its open junction.
inline Piece red_left_dangler(const Chain& ch, const StripIndex& si) {
    const double x0 = col_x(-1);
    return concat({
        column_piece(ch, x0, true, true, {si.pc(0), si.pd(0), si.pe(0), si.pf(0)}, false),
        semi_piece(col_x(0), {si.psemi(0, 0), si.psemi(0, 1), si.psemi(0, 2)}, false),
        column_piece(ch, col_x(0), true, true, {si.pc(1), si.pd(1), si.pe(1), si.pf(1)}, true),
        column_piece(ch, col_x(0), true, false, {si.pb(0), si.pa(0), si.pel(0), si.pfl(0)},
                     true),
    });
}

inline Piece red_right_dangler(const Chain& ch, const StripIndex& si) {
    const int m = si.columns - 1;
    return column_piece(ch, col_x(m), true, false,
                        {si.pb(m), si.pa(m), si.pel(m), si.pfl(m)}, false);
}

// Arc-length position of a marked sample on the built component, recovered by
// minimizing the squared distance inside a window around the estimate. The
// window stays well under the smallest curvature radius, so the objective is
// unimodal there.
inline double refine_param(const CurveComponent& comp, double est, const Point& target,
                           double window) {
    double lo = est - window, hi = est + window;
    if (!comp.closed()) {
        lo = std::max(0.0, lo);
        hi = std::min(comp.length(), hi);
    }
    for (int it = 0; it < 96; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (squared_distance(comp.point_at(m1), target) <
            squared_distance(comp.point_at(m2), target))
            hi = m2;
        else
            lo = m1;
    }
    double s = 0.5 * (lo + hi);
    if (comp.closed()) {
        s = std::fmod(s, comp.length());
        if (s < 0.0) s += comp.length();
    }
    return std::clamp(s, 0.0, comp.length());
}

inline void append_component(std::vector<CurveComponent>& comps, std::vector<SampleTag>& tags,
                             const Piece& pc, bool closed, const PointList& pts,
                             double window) {
    CurveComponent comp(pc.segs, closed);
    const int ci = static_cast<int>(comps.size());
    for (const Mark& m : pc.marks) {
        const double s = refine_param(comp, m.s, pts[std::size_t(m.idx)], window);
        tags[std::size_t(m.idx)] = SampleTag{ci, s};
    }
    comps.push_back(std::move(comp));
}

inline void check_tags_assigned(const std::vector<SampleTag>& tags) {
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i].component < 0)
            throw std::logic_error("sample " + std::to_string(i) +
                                   " was not placed on any component");
}

inline void attach_oracle(CurveModel& model, double density) {
    auto oracle = std::make_shared<TangentBallOracle>(model, density);
    model.lfs = [oracle](const Point& p) { return oracle->lfs(p); };
}

inline BisectorLine bisector(const Point& c0, const Point& c1, double band_lo,
                             double band_hi) {
    return BisectorLine{midpoint(c0, c1), normalized(c1 - c0), band_lo, band_hi};
}

// Chain circle centers of one column in strip placement, bottom image plus
// the point-reflected top image.
inline void column_centers(const Chain& ch, double xm, bool red, std::vector<Point>& out) {
    const Point jq(red ? xm - ch.q.x() : xm + ch.q.x(), ch.q.y());
    for (const Point& c : {ch.s1, ch.s3, ch.s4, ch.s5}) {
        const Point img(red ? xm - c.x() : xm + c.x(), c.y());
        out.push_back(img);
        out.push_back(point_reflect(img, jq));
    }
}

// Junction-arc centers used by the separator lines: the circle through b of
// bottom column m and the circle through c of the top stacked at x_m + 1.008.
inline Point b_arc_center(const Chain& ch, double xm, bool red) {
    return Point(red ? xm - ch.s1.x() : xm + ch.s1.x(), ch.s1.y());
}

inline Point c_arc_center(const Chain& ch, double xm_of_top_minus_one, bool red) {
    // for the blue pairing the top above gap column x_m belongs to bottom
    // m+1; for red it belongs to bottom m, so the caller passes the owning
    // bottom column position
    const Point s1img = b_arc_center(ch, xm_of_top_minus_one, red);
    const Point jq(red ? xm_of_top_minus_one - ch.q.x() : xm_of_top_minus_one + ch.q.x(),
                   ch.q.y());
    return point_reflect(s1img, jq);
}

inline void strip_branches(const Chain& ch, const StripIndex& si, bool red,
                           std::vector<Point>& pts_out, std::vector<BisectorLine>& lines_out) {
    for (int m = 0; m < si.columns; ++m) column_centers(ch, col_x(m), red, pts_out);
    for (int j = 0; j < si.columns / 2; ++j) pts_out.push_back(Point(col_x(2 * j), kTopY));
    // separator between the bottom stack at x_m and the unrelated top stack
    // at x_m + 1.008, valid in the junction band
    for (int m = 0; m + 1 < si.columns; ++m) {
        if (!red)
            lines_out.push_back(bisector(b_arc_center(ch, col_x(m), false),
                                         c_arc_center(ch, col_x(m + 1), false), -1.0, 1.614));
        else
            lines_out.push_back(bisector(c_arc_center(ch, col_x(m), true),
                                         b_arc_center(ch, col_x(m + 1), true), -1.0, 1.614));
    }
}

inline Point bend_point(const Point& p, double radius, double sign) {
    const double r = radius + sign * p.y();
    if (r <= 0.0) throw std::invalid_argument("bent arc folds through the center");
    return Point(r * std::cos(p.x() / radius), r * std::sin(p.x() / radius));
}

}  // namespace gadgetdetail

// Two curves through one eight-point sample set: each curve is a pair of
// equal tangent arcs through four samples, and the second copy is translated
// so both junction distances agree.
inline Gadget base_gadget() {
    using namespace gadgetdetail;
    const Chain ch = make_chain();
    const Point dpt = point_reflect(ch.a, ch.q);
    const Point s2 = point_reflect(ch.s1, ch.q);

    Gadget g;
    PointList pts(8, Point(0.0, 0.0));
    const std::array<Point, 4> local{ch.a, ch.b, ch.c, dpt};
    for (int copy = 0; copy < 2; ++copy)
        for (int i = 0; i < 4; ++i)
            pts[std::size_t(4 * copy + i)] = local[std::size_t(i)] + Point(kPeriod * copy, 0.0);

    std::vector<CurveComponent> comps;
    std::vector<SampleTag> tags(8, SampleTag{-1, 0.0});
    for (int copy = 0; copy < 2; ++copy) {
        const Point off(kPeriod * copy, 0.0);
        std::vector<Segment> segs{
            translated_seg(short_arc(ch.s1, ch.a, ch.q), off),
            translated_seg(short_arc(s2, ch.q, dpt), off),
        };
        const double l0 = seg_len(segs[0]);
        CurveComponent comp(std::move(segs), false);
        tags[std::size_t(4 * copy + 0)] = SampleTag{copy, 0.0};
        tags[std::size_t(4 * copy + 1)] = SampleTag{
            copy, arc_param(std::get<CircArc>(comp.segment(0)), pts[std::size_t(4 * copy + 1)])};
        tags[std::size_t(4 * copy + 2)] = SampleTag{
            copy,
            l0 + arc_param(std::get<CircArc>(comp.segment(1)), pts[std::size_t(4 * copy + 2)])};
        tags[std::size_t(4 * copy + 3)] = SampleTag{copy, comp.length()};
        comps.push_back(std::move(comp));
    }

    CurveModel model;
    model.components = std::move(comps);
    attach_oracle(model, 0.002);
    g.variants.push_back(std::move(model));
    g.tagged.push_back(SampleSet(pts, tags));
    g.points = SampleSet(std::move(pts));

    ConstructionLog& log = g.construction_log;
    for (int copy = 0; copy < 2; ++copy) {
        const Point off(kPeriod * copy, 0.0);
        const std::string tag = "@" + std::to_string(copy);
        log.circles.push_back({"s1" + tag, ch.s1 + off, ch.r1});
        log.circles.push_back({"s2" + tag, s2 + off, ch.r1});
        log.points.push_back({"a" + tag, ch.a + off});
        log.points.push_back({"b" + tag, ch.b + off});
        log.points.push_back({"c" + tag, ch.c + off});
        log.points.push_back({"d" + tag, dpt + off});
        log.points.push_back({"q" + tag, ch.q + off});
        log.points.push_back({"p" + tag, ch.p + off});
        log.points.push_back({"r" + tag, point_reflect(ch.p, ch.q) + off});
    }
    log.values.push_back({"d_bc", distance(ch.b, ch.c)});
    log.values.push_back({"d_q", ch.d_q});
    log.values.push_back({"d_p", ch.d_p});
    log.values.push_back({"r1", ch.r1});
    log.values.push_back({"translate_dx", kPeriod});
    log.notes.push_back(
        "second copy translated by exactly 2.016 so that d(b,c') = d(b,c); the drawing "
        "label rounds this to 2.015");

    g.branch_points.push_back({ch.s1, s2, ch.s1 + Point(kPeriod, 0.0), s2 + Point(kPeriod, 0.0)});
    g.branch_lines.push_back({bisector(ch.s1, s2 + Point(kPeriod, 0.0), -1.0, 1.614)});
    return g;
}

// Extends both base curves downward: two more samples per column on a
// vertical tail joined through three equal tangent circles, keeping the path
// C^1 with a vertical tangent at the tip.
inline Gadget extend_gadget(const Gadget& base) {
    using namespace gadgetdetail;
    if (base.points.size() != 8 || base.variants.size() != 1 ||
        base.variants[0].components.size() != 2)
        throw std::invalid_argument("extend_gadget expects the base gadget");
    const Chain ch = make_chain();

    Gadget g;
    StripIndex si{2};
    PointList pts(16, Point(0.0, 0.0));
    {
        const PointList strip = strip_points(si);
        for (int i = 0; i < 16; ++i) pts[std::size_t(i)] = strip[std::size_t(i)];
    }

    std::vector<CurveComponent> comps;
    std::vector<SampleTag> tags(16, SampleTag{-1, 0.0});
    for (int m = 0; m < 2; ++m) {
        const Piece pc = concat({
            column_piece(ch, col_x(m), false, false,
                         {si.pb(m), si.pa(m), si.pel(m), si.pfl(m)}, false),
            column_piece(ch, col_x(m), false, true, {si.pc(m), si.pd(m), si.pe(m), si.pf(m)},
                         false),
        });
        append_component(comps, tags, pc, false, pts, 0.25);
    }
    check_tags_assigned(tags);

    CurveModel model;
    model.components = std::move(comps);
    attach_oracle(model, 0.002);
    g.variants.push_back(std::move(model));
    g.tagged.push_back(SampleSet(pts, tags));
    g.points = SampleSet(std::move(pts));

    ConstructionLog& log = g.construction_log;
    for (int m = 0; m < 2; ++m) {
        const std::string tag = "@" + std::to_string(m);
        const Point off(col_x(m), 0.0);
        const Point jq = ch.q + off;
        log.circles.push_back({"s1" + tag, ch.s1 + off, ch.r1});
        log.circles.push_back({"s2" + tag, point_reflect(ch.s1 + off, jq), ch.r1});
        log.circles.push_back({"s3" + tag, ch.s3 + off, ch.rho});
        log.circles.push_back({"s4" + tag, ch.s4 + off, ch.rho});
        log.circles.push_back({"s5" + tag, ch.s5 + off, ch.rho});
        log.circles.push_back({"s3t" + tag, point_reflect(ch.s3 + off, jq), ch.rho});
        log.circles.push_back({"s4t" + tag, point_reflect(ch.s4 + off, jq), ch.rho});
        log.circles.push_back({"s5t" + tag, point_reflect(ch.s5 + off, jq), ch.rho});
    }
    log.values.push_back({"d_r", ch.d_p});
    log.values.push_back({"rho", ch.rho});
    log.values.push_back({"d_q", ch.d_q});
    log.values.push_back({"r1", ch.r1});

    std::vector<Point> branches;
    std::vector<BisectorLine> lines;
    strip_branches(ch, si, false, branches, lines);
    // the two-column strip helper also lists the semicircle center; the
    // extended gadget has no semicircle, so rebuild without it
    branches.clear();
    lines.clear();
    for (int m = 0; m < 2; ++m) column_centers(ch, col_x(m), false, branches);
    lines.push_back(bisector(b_arc_center(ch, col_x(0), false),
                             c_arc_center(ch, col_x(1), false), -1.0, 1.614));
    g.branch_points.push_back(std::move(branches));
    g.branch_lines.push_back(std::move(lines));
    return g;
}

// Periodic strip of 2k extended columns with two interpolating variants: the
// even strand pairing and the odd strand pairing (which leaves two loose ends
// on a flat strip). Both variants share one sample set of 19k points.
inline Gadget strip(int k) {
    using namespace gadgetdetail;
    if (k < 1) throw std::invalid_argument("strip needs k >= 1");
    const Chain ch = make_chain();
    const StripIndex si{2 * k};
    PointList pts = strip_points(si);

    Gadget g;
    std::vector<CurveComponent> blue;
    std::vector<SampleTag> blue_tags(pts.size(), SampleTag{-1, 0.0});
    for (int j = 0; j < k; ++j)
        append_component(blue, blue_tags, blue_strand(ch, si, j), false, pts, 0.25);
    check_tags_assigned(blue_tags);

    std::vector<CurveComponent> red;
    std::vector<SampleTag> red_tags(pts.size(), SampleTag{-1, 0.0});
    append_component(red, red_tags, red_left_dangler(ch, si), false, pts, 0.25);
    for (int j = 1; j < k; ++j)
        append_component(red, red_tags, red_strand(ch, si, j), false, pts, 0.25);
    append_component(red, red_tags, red_right_dangler(ch, si), false, pts, 0.25);
    check_tags_assigned(red_tags);

    CurveModel bm;
    bm.components = std::move(blue);
    attach_oracle(bm, 0.005);
    CurveModel rm;
    rm.components = std::move(red);
    attach_oracle(rm, 0.005);
    g.variants.push_back(std::move(bm));
    g.variants.push_back(std::move(rm));
    g.tagged.push_back(SampleSet(pts, blue_tags));
    g.tagged.push_back(SampleSet(pts, red_tags));
    g.points = SampleSet(std::move(pts));

    ConstructionLog& log = g.construction_log;
    log.values.push_back({"column_pairs", double(k)});
    log.values.push_back({"columns", double(si.columns)});
    log.values.push_back({"point_count", double(si.total())});
    log.values.push_back({"period", kPeriod});
    log.notes.push_back("odd pairing leaves one open junction at each strip end");

    for (bool red_variant : {false, true}) {
        std::vector<Point> branches;
        std::vector<BisectorLine> lines;
        strip_branches(ch, si, red_variant, branches, lines);
        g.branch_points.push_back(std::move(branches));
        g.branch_lines.push_back(std::move(lines));
    }
    return g;
}

// Even-pairing strip closed into a single loop by semicircular caps below the
// bottom tips: k strands, k-1 unit caps and one wide wrap cap.
inline CurveModel strip_loop(int k = 1) {
    using namespace gadgetdetail;
    if (k < 1) throw std::invalid_argument("strip_loop needs k >= 1");
    const Chain ch = make_chain();
    const StripIndex si{2 * k};

    std::vector<Piece> parts;
    for (int j = 0; j < k; ++j) {
        parts.push_back(blue_strand(ch, si, j));
        if (j + 1 < k) {
            const double xc = 0.5 * (col_x(2 * j + 1) + col_x(2 * j + 2));
            Piece cap;
            cap.segs = {CircArc{Point(xc, -3.0), kHalfPeriod, kGPi, 2.0 * kGPi}};
            cap.lens = {kGPi * kHalfPeriod};
            parts.push_back(cap);
        }
    }
    const double xr = col_x(2 * k - 1);
    Piece wrap;
    wrap.segs = {CircArc{Point(0.5 * xr, -3.0), 0.5 * xr, 0.0, -kGPi}};
    wrap.lens = {kGPi * 0.5 * xr};
    parts.push_back(wrap);

    CurveModel model;
    model.components.push_back(CurveComponent(concat(parts).segs, true));
    attach_oracle(model, 0.005);
    return model;
}

inline int annulus_min_copies() { return gadgetdetail::kAnnulusMinCopies; }

namespace gadgetdetail {

struct AnnulusBuild {
    Gadget gadget;
    double eps1 = 0.0, eps2 = 0.0;
};

// Measured sample ratio of the even-pairing annulus alone, used by the
// one-off search for the minimal workable copy count. The odd pairing is the
// mirror image of the even one, so it reaches the same ratio.
inline double annulus_probe_eps(int k, double measure_density, double oracle_delta,
                                double center_y = kBendCenterY) {
    const Chain ch = make_chain();
    const StripIndex si{2 * k};
    const double radius = kPeriod * double(2 * k) / (2.0 * kGPi);
    const Point shift(0.0, -center_y);
    const PointList flat = strip_points(si);
    PointList pts(flat.size(), Point(0.0, 0.0));
    for (std::size_t i = 0; i < flat.size(); ++i)
        pts[i] = bend_point(flat[i] + shift, radius, 1.0);
    std::vector<CurveComponent> comps;
    std::vector<SampleTag> tags(pts.size(), SampleTag{-1, 0.0});
    for (int j = 0; j < k; ++j)
        append_component(comps, tags,
                         bent(translated(blue_strand(ch, si, j), shift), radius, 1.0), false,
                         pts, 0.25);
    check_tags_assigned(tags);
    CurveModel m;
    m.components = std::move(comps);
    attach_oracle(m, oracle_delta);
    return epsilon_star(m, SampleSet(pts, tags), measure_density).eps_star;
}

inline AnnulusBuild build_annulus(int k, double measure_density, bool measure_both) {
    if (k < 1) throw std::invalid_argument("annulus needs k >= 1");
    const Chain ch = make_chain();
    const StripIndex si{2 * k};
    const double radius = kPeriod * double(2 * k) / (2.0 * kGPi);

    AnnulusBuild out;
    Gadget& g = out.gadget;
    const Point shift(0.0, -kBendCenterY);
    const PointList flat = strip_points(si);
    PointList pts(flat.size(), Point(0.0, 0.0));
    for (std::size_t i = 0; i < flat.size(); ++i)
        pts[i] = bend_point(flat[i] + shift, radius, 1.0);

    std::vector<CurveComponent> blue;
    std::vector<SampleTag> blue_tags(pts.size(), SampleTag{-1, 0.0});
    for (int j = 0; j < k; ++j)
        append_component(blue, blue_tags,
                         bent(translated(blue_strand(ch, si, j), shift), radius, 1.0), false,
                         pts, 0.25);
    check_tags_assigned(blue_tags);

    std::vector<CurveComponent> red;
    std::vector<SampleTag> red_tags(pts.size(), SampleTag{-1, 0.0});
    for (int j = 0; j < k; ++j)
        append_component(red, red_tags,
                         bent(translated(red_strand(ch, si, j), shift), radius, 1.0), false,
                         pts, 0.25);
    check_tags_assigned(red_tags);

    CurveModel bm;
    bm.components = std::move(blue);
    attach_oracle(bm, 0.0125);
    CurveModel rm;
    rm.components = std::move(red);
    attach_oracle(rm, 0.0125);
    g.variants.push_back(std::move(bm));
    g.variants.push_back(std::move(rm));
    g.tagged.push_back(SampleSet(pts, blue_tags));
    g.tagged.push_back(SampleSet(pts, red_tags));
    g.points = SampleSet(std::move(pts));

    out.eps1 = epsilon_star(g.variants[0], g.tagged[0], measure_density).eps_star;
    out.eps2 = measure_both
                   ? epsilon_star(g.variants[1], g.tagged[1], measure_density).eps_star
                   : out.eps1;

    ConstructionLog& log = g.construction_log;
    log.values.push_back({"column_pairs", double(k)});
    log.values.push_back({"radius", radius});
    log.values.push_back({"eps_star_v1", out.eps1});
    log.values.push_back({"eps_star_v2", out.eps2});
    log.notes.push_back("columns map to spokes: x becomes the polar angle x / radius, y the "
                        "offset from the bend radius; sample tips point inward");
    g.branch_points.resize(2);
    g.branch_lines.resize(2);
    return out;
}

}  // namespace gadgetdetail

// Strip bent into an annulus of circumference 2k * 2.016, tips pointing
// inward. Fails for k below the workable minimum, reporting the measured
// ratio.
inline Gadget annulus_gadget(int k) {
    using namespace gadgetdetail;
    AnnulusBuild built = [&] {
        try {
            return build_annulus(k, 0.25, true);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("annulus infeasible at k=" + std::to_string(k) + ": " +
                                     e.what() + "; minimal workable k found so far is " +
                                     std::to_string(kAnnulusMinCopies));
        }
    }();
    const double worst = std::max(built.eps1, built.eps2);
    if (worst > kCexEps) {
        std::ostringstream msg;
        msg << "annulus infeasible at k=" << k << ": measured eps_star=" << worst
            << "; minimal workable k found so far is " << kAnnulusMinCopies;
        throw std::runtime_error(msg.str());
    }
    return std::move(built.gadget);
}

inline std::pair<SampleSet, CurveModel> annulus(int k, int variant) {
    if (variant != 1 && variant != 2)
        throw std::invalid_argument("annulus variant must be 1 or 2");
    Gadget g = annulus_gadget(k);
    return {std::move(g.tagged[std::size_t(variant - 1)]),
            std::move(g.variants[std::size_t(variant - 1)])};
}

namespace gadgetdetail {

// Strand lookup inside one ring: pairing 0 joins tips (2j, 2j+1), pairing 1
// joins tips (2j-1 mod 2k, 2j).
inline std::pair<int, bool> strand_at_tip(int pairing, int m, int k) {
    if (pairing == 0) return {m / 2, m % 2 == 0};
    if (m % 2 == 1) return {((m + 1) / 2) % k, true};
    return {m / 2, false};
}

inline int other_tip(int pairing, int m, int k, int strand) {
    if (pairing == 0) return m % 2 == 0 ? m + 1 : m - 1;
    if (m % 2 == 1) return 2 * strand;
    return ((2 * strand - 1) % (2 * k) + 2 * k) % (2 * k);
}

inline Gadget build_tied_annuli() {
    const int k = kAnnulusMinCopies;
    const Chain ch = make_chain();
    const StripIndex si{2 * k};
    const double radius1 = kPeriod * double(2 * k) / (2.0 * kGPi);
    const double y0 = kBendCenterY;
    const double mu = (radius1 + 3.0 + y0 + kTieGap) / (radius1 - 3.0 - y0);
    const double radius2 = mu * radius1;
    const double lam = 2.0 / (radius2 + mu * (kStripTop - y0));
    const double r_in = radius1 + 3.0 + y0;
    const double r_out = radius2 - (3.0 + y0) * mu;
    const int strip_total = si.total();
    const int tie_interior = kTieSpacing - 1;

    // strands per ring and pairing, bent and scaled to the output size
    std::array<std::array<std::vector<Piece>, 2>, 2> strands;
    for (int pairing = 0; pairing < 2; ++pairing) {
        strands[0][std::size_t(pairing)].reserve(std::size_t(k));
        strands[1][std::size_t(pairing)].reserve(std::size_t(k));
        for (int j = 0; j < k; ++j) {
            const Piece flat = pairing == 0 ? blue_strand(ch, si, j) : red_strand(ch, si, j);
            strands[0][std::size_t(pairing)].push_back(scaled(
                bent(translated(flat, Point(0.0, -y0)), radius1, -1.0), lam));
            strands[1][std::size_t(pairing)].push_back(with_offset_marks(
                scaled(bent(translated(scaled(flat, mu), Point(0.0, -mu * y0)), radius2, 1.0),
                       lam),
                strip_total));
        }
    }

    PointList pts;
    pts.reserve(std::size_t(2 * strip_total + tie_interior * si.columns));
    const PointList flat = strip_points(si);
    for (const Point& p : flat)
        pts.push_back(lam * bend_point(p + Point(0.0, -y0), radius1, -1.0));
    for (const Point& p : flat)
        pts.push_back(lam * bend_point(mu * p + Point(0.0, -mu * y0), radius2, 1.0));
    const auto tie_idx = [&](int m, int j) {
        return 2 * strip_total + tie_interior * m + (j - 1);
    };
    for (int m = 0; m < si.columns; ++m) {
        const Point u = unit_dir(col_x(m) / radius1);
        for (int j = 1; j <= tie_interior; ++j)
            pts.push_back(lam * ((r_in + double(j)) * u));
    }

    std::vector<Piece> ties;
    ties.reserve(std::size_t(si.columns));
    for (int m = 0; m < si.columns; ++m) {
        const Point u = unit_dir(col_x(m) / radius1);
        Piece tie;
        tie.segs = {LineSeg{lam * (r_in * u), lam * (r_out * u)}};
        tie.lens = {lam * kTieGap};
        for (int j = 1; j <= tie_interior; ++j)
            tie.marks.push_back({tie_idx(m, j), lam * double(j)});
        ties.push_back(std::move(tie));
    }

    Gadget g;
    const std::array<std::pair<int, int>, 4> pairings{{{0, 1}, {1, 0}, {0, 0}, {1, 1}}};
    for (const auto& [p1, p2] : pairings) {
        std::vector<CurveComponent> comps;
        std::vector<SampleTag> tags(pts.size(), SampleTag{-1, 0.0});
        std::vector<char> seen(std::size_t(si.columns), 0);
        for (int m0 = 0; m0 < si.columns; ++m0) {
            if (seen[std::size_t(m0)]) continue;
            std::vector<Piece> walk;
            int ring = 0, m = m0;
            do {
                const int pairing = ring == 0 ? p1 : p2;
                const auto [j, at_left] = strand_at_tip(pairing, m, k);
                const Piece& s = strands[std::size_t(ring)][std::size_t(pairing)][std::size_t(j)];
                walk.push_back(at_left ? s : reversed(s));
                m = other_tip(pairing, m, k, j);
                if (ring == 0) seen[std::size_t(m)] = seen[std::size_t(m0)] = 1;
                walk.push_back(ring == 0 ? ties[std::size_t(m)]
                                         : reversed(ties[std::size_t(m)]));
                ring = 1 - ring;
            } while (!(ring == 0 && m == m0));
            append_component(comps, tags, concat(walk), true, pts, 0.25 * lam);
        }
        check_tags_assigned(tags);

        CurveModel model;
        model.components = std::move(comps);
        g.variants.push_back(std::move(model));
        g.tagged.push_back(SampleSet(pts, tags));
    }
    g.points = SampleSet(pts);

    // feature size shared through piece oracles: the binding contacts of any
    // probe lie on its own ring pairing or on the ties, and the tangent ball
    // shrink takes a minimum over all pieces
    const double delta = 0.0125 * lam;
    std::array<std::array<std::shared_ptr<TangentBallOracle>, 2>, 2> ring_oracles;
    for (int ring = 0; ring < 2; ++ring)
        for (int pairing = 0; pairing < 2; ++pairing) {
            CurveModel m;
            for (const Piece& s : strands[std::size_t(ring)][std::size_t(pairing)])
                m.components.push_back(CurveComponent(s.segs, false));
            ring_oracles[std::size_t(ring)][std::size_t(pairing)] =
                std::make_shared<TangentBallOracle>(m, delta);
        }
    std::shared_ptr<TangentBallOracle> tie_oracle;
    {
        CurveModel m;
        for (const Piece& t : ties) m.components.push_back(CurveComponent(t.segs, false));
        tie_oracle = std::make_shared<TangentBallOracle>(m, delta);
    }
    for (std::size_t v = 0; v < 4; ++v) {
        const auto o1 = ring_oracles[0][std::size_t(pairings[v].first)];
        const auto o2 = ring_oracles[1][std::size_t(pairings[v].second)];
        g.variants[v].lfs = [o1, o2, tie_oracle](const Point& p) {
            return combined_lfs({o1.get(), o2.get(), tie_oracle.get()}, p);
        };
    }

    ConstructionLog& log = g.construction_log;
    log.values.push_back({"column_pairs", double(k)});
    log.values.push_back({"radius_inner_ring", radius1});
    log.values.push_back({"radius_outer_ring", radius2});
    log.values.push_back({"ring_scale", mu});
    log.values.push_back({"output_scale", lam});
    log.values.push_back({"tie_gap", kTieGap});
    log.values.push_back({"bend_center_y", y0});
    log.values.push_back({"revolve_m", 10000.0});
    log.values.push_back({"revolve_R", 3.0});
    log.notes.push_back("variant pairings (inner,outer): 1=(even,odd) 2=(odd,even) "
                        "3=(even,even) 4=(odd,odd); equal pairings fall apart into one "
                        "loop per tie pair");
    g.branch_points.resize(4);
    g.branch_lines.resize(4);
    return g;
}

}  // namespace gadgetdetail

// Two concentric annuli joined by radial ties at every column, sharing one
// sample set across four pairing variants. Variants 1 and 2 are single
// closed curves; variants 3 and 4 fall apart into one loop per column pair.
inline const Gadget& tied_annuli_gadget() {
    static const Gadget g = gadgetdetail::build_tied_annuli();
    return g;
}

inline std::pair<SampleSet, CurveModel> tied_annuli(int variant) {
    if (variant < 1 || variant > 4)
        throw std::invalid_argument("tied_annuli variant must be 1..4");
    const Gadget& g = tied_annuli_gadget();
    return {g.tagged[std::size_t(variant - 1)], g.variants[std::size_t(variant - 1)]};
}

namespace gadgetdetail {

inline double analytic_clearance(const Gadget& g, std::size_t v, const Point& t) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& c : g.branch_points[v]) best = std::min(best, distance(t, c));
    for (const BisectorLine& l : g.branch_lines[v])
        if (t.y() >= l.band_lo && t.y() <= l.band_hi)
            best = std::min(best, std::abs(dot(t - l.through, l.normal)));
    return best;
}

}  // namespace gadgetdetail

// Midpoint clearance margins for every consecutive sample pair of every
// variant, plus a dense-grid largest-ratio check. Clearances come from the
// analytic medial anchors when the gadget records them and from the model's
// feature-size callback otherwise. Grid points whose ratio is certified
// below eps by the 1-Lipschitz bound around the nearest sample are skipped.
inline GadgetReport verify_gadget(const Gadget& g, double eps = 0.72,
                                  double grid_density = 1e-3) {
    using namespace gadgetdetail;
    if (eps <= 0.0 || grid_density <= 0.0)
        throw std::invalid_argument("verify_gadget needs positive eps and grid density");
    GadgetReport rep;
    for (std::size_t v = 0; v < g.variants.size(); ++v) {
        const CurveModel& model = g.variants[v];
        const SampleSet& tg = g.tagged[v];
        if (!model.lfs)
            throw std::invalid_argument("verify_gadget needs a feature-size callback");
        const samplingdetail::TaggedSamples groups = samplingdetail::group_tags(model, tg, true);
        const bool analytic = v < g.branch_points.size() &&
                              (!g.branch_points[v].empty() ||
                               (v < g.branch_lines.size() && !g.branch_lines[v].empty()));

        const KdTree stree(tg.points);
        std::vector<double> sample_lfs(tg.points.size(), 0.0);
        for (std::size_t i = 0; i < tg.points.size(); ++i)
            sample_lfs[i] = model.lfs(tg.points[i]);

        double eps_v = 0.0;
        for (std::size_t c = 0; c < model.components.size(); ++c) {
            const CurveComponent& comp = model.components[c];
            const auto& pc = groups.per_comp[c];
            if (pc.size() < 2) continue;
            const std::size_t pair_count = comp.closed() ? pc.size() : pc.size() - 1;
            for (std::size_t i = 0; i < pair_count; ++i) {
                const auto& [sa, ia] = pc[i];
                const auto& [sb_raw, ib] = pc[(i + 1) % pc.size()];
                const double arc =
                    i + 1 < pc.size() ? sb_raw - sa : comp.length() - sa + sb_raw;
                const double st = samplingdetail::arc_tie_param(
                    comp, sa, arc, tg.points[std::size_t(ia)], tg.points[std::size_t(ib)]);
                const Point t = comp.point_at(st);
                const double d_t = distance(t, tg.points[std::size_t(ia)]);
                const double lf = model.lfs(t);
                eps_v = std::max(eps_v, d_t / lf);
                MidpointMargin entry;
                entry.variant = static_cast<int>(v);
                entry.component = static_cast<int>(c);
                entry.t = t;
                entry.d_t = d_t;
                entry.required = d_t / eps;
                entry.clearance = analytic ? analytic_clearance(g, v, t) : lf;
                entry.margin = entry.clearance - entry.required;
                rep.margins.push_back(entry);
            }
        }

        for (const CurveComponent& comp : model.components) {
            const int n = std::max(1, int(std::ceil(comp.length() / grid_density)));
            const int last = comp.closed() ? n - 1 : n;
            for (int i = 0; i <= last; ++i) {
                const Point p = comp.point_at(comp.length() * double(i) / double(n));
                const auto [ni, d2] = stree.nearest(p);
                const double d = std::sqrt(d2);
                if (d * (1.0 + eps) <= eps * sample_lfs[std::size_t(ni)]) continue;
                eps_v = std::max(eps_v, d / model.lfs(p));
            }
        }
        rep.eps_star.push_back(eps_v);
        rep.max_eps_star = std::max(rep.max_eps_star, eps_v);
    }
    for (const MidpointMargin& m : rep.margins) rep.min_margin = std::min(rep.min_margin, m.margin);
    rep.ok = rep.min_margin > 0.0 && rep.max_eps_star <= eps;
    return rep;
}

// Rotates a planar sample set around the y axis after shifting x by R: m
// copies at equal angles, output dimension 3.
inline SampleSet revolve(const SampleSet& in, int m, double R) {
    using namespace gadgetdetail;
    if (m < 3) throw std::invalid_argument("revolve needs at least 3 rotation steps");
    for (const Point& p : in.points) {
        if (p.dim != 2) throw std::invalid_argument("revolve expects planar points");
        if (p.x() + R <= 0.0) throw std::invalid_argument("nonpositive revolved radius");
    }
    PointList out;
    out.reserve(in.points.size() * std::size_t(m));
    for (int j = 0; j < m; ++j) {
        const double theta = 2.0 * kGPi * double(j) / double(m);
        const double cs = std::cos(theta), sn = std::sin(theta);
        for (const Point& p : in.points)
            out.push_back(Point((p.x() + R) * cs, (p.x() + R) * sn, p.y()));
    }
    return SampleSet(std::move(out));
}

// Largest gap one rotation step can open between adjacent copies of a sample;
// the conservative 3-D validity check compares this against eps times the
// smallest 2-D clearance.
inline double revolve_step_gap(const SampleSet& in, int m, double R) {
    using namespace gadgetdetail;
    if (m < 3) throw std::invalid_argument("revolve needs at least 3 rotation steps");
    double xmax = -std::numeric_limits<double>::infinity();
    for (const Point& p : in.points) xmax = std::max(xmax, p.x());
    return 2.0 * (xmax + R) * std::sin(kGPi / double(m));
}

}  // namespace recurve
