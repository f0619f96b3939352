#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <recurve/curve.hpp>

#include "testutil.hpp"

using namespace recurve;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("circle component evaluates on the circle and wraps") {
    const CurveModel m = make_circle(2.5, Point(1.0, -3.0));
    REQUIRE(m.components.size() == 1);
    const CurveComponent& c = m.components[0];
    REQUIRE(c.closed());
    REQUIRE(c.length() == Catch::Approx(2.0 * kPi * 2.5).epsilon(1e-14));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double s = std::uniform_real_distribution<double>(-30.0, 30.0)(rng);
        const Point p = c.point_at(s);
        REQUIRE(distance(p, Point(1.0, -3.0)) == Catch::Approx(2.5).margin(1e-12));
        const Point t = c.tangent_at(s);
        REQUIRE(norm(t) == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(std::abs(dot(t, p - Point(1.0, -3.0))) < 1e-9);
    }
    const Point a = c.point_at(0.3);
    const Point b = c.point_at(0.3 + c.length());
    REQUIRE(distance(a, b) < 1e-9);
    REQUIRE(m.lfs(c.point_at(1.7)) == Catch::Approx(2.5).margin(1e-12));
}

TEST_CASE("stadium chain has exact length and smooth joins") {
    // Two horizontal sides y = +-1 and two semicircular caps of radius 1.
    std::vector<Segment> segs{
        LineSeg{Point(-1.0, -1.0), Point(1.0, -1.0)},
        CircArc{Point(1.0, 0.0), 1.0, -kPi / 2.0, kPi / 2.0},
        LineSeg{Point(1.0, 1.0), Point(-1.0, 1.0)},
        CircArc{Point(-1.0, 0.0), 1.0, kPi / 2.0, 3.0 * kPi / 2.0},
    };
    const CurveModel m = make_arc_chain(std::move(segs), true);
    const CurveComponent& c = m.components[0];
    REQUIRE(c.length() == Catch::Approx(4.0 + 2.0 * kPi).epsilon(1e-14));
    REQUIRE(c.max_join_gap() < 1e-15);
    REQUIRE(c.max_tangent_gap() < 1e-15);
    REQUIRE(c.segment_count() == 4);

    const Point start = c.point_at(0.0);
    REQUIRE(distance(start, Point(-1.0, -1.0)) < 1e-12);
    const Point after_side = c.point_at(2.0);
    REQUIRE(distance(after_side, Point(1.0, -1.0)) < 1e-12);
    const Point cap_mid = c.point_at(2.0 + kPi / 2.0);
    REQUIRE(distance(cap_mid, Point(2.0, 0.0)) < 1e-12);
}

TEST_CASE("join and closure validation report gap magnitudes") {
    std::vector<Segment> gapped{
        LineSeg{Point(0.0, 0.0), Point(1.0, 0.0)},
        LineSeg{Point(1.0, 1e-6), Point(0.0, 1e-6)},
    };
    REQUIRE_THROWS_WITH(make_arc_chain(std::move(gapped), false),
                        Catch::Matchers::ContainsSubstring("gap"));

    std::vector<Segment> open_ring{CircArc{Point(0.0, 0.0), 1.0, 0.0, kPi / 2.0}};
    REQUIRE_THROWS_WITH(make_arc_chain(std::move(open_ring), true),
                        Catch::Matchers::ContainsSubstring("does not close"));

    std::vector<Segment> corner{
        LineSeg{Point(0.0, 0.0), Point(1.0, 0.0)},
        LineSeg{Point(1.0, 0.0), Point(1.0, 1.0)},
    };
    REQUIRE_THROWS_WITH(make_arc_chain(std::move(corner), false),
                        Catch::Matchers::ContainsSubstring("tangent break"));

    std::vector<Segment> corner_ok{
        LineSeg{Point(0.0, 0.0), Point(1.0, 0.0)},
        LineSeg{Point(1.0, 0.0), Point(1.0, 1.0)},
    };
    const CurveModel m = make_arc_chain(std::move(corner_ok), false, true);
    REQUIRE(m.components[0].max_tangent_gap() == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("invalid segment parameters are rejected") {
    REQUIRE_THROWS_AS(make_arc_chain({LineSeg{Point(0.0, 0.0), Point(0.0, 0.0)}}, false),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_arc_chain({CircArc{Point(0.0, 0.0), 0.0, 0.0, 1.0}}, false),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_arc_chain({CircArc{Point(0.0, 0.0), 1.0, 1.0, 1.0}}, false),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_arc_chain({CircArc{Point(0.0, 0.0), 1.0, 0.0, 7.0}}, false),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_arc_chain({LineSeg{Point(0.0, 0.0, 0.0), Point(1.0, 0.0, 0.0)}}, false),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_arc_chain({EllipseArc{Point(0.0, 0.0), 1.0, 0.0, 0.0, 1.0}}, false),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_arc_chain({}, false), std::invalid_argument);
    REQUIRE_THROWS_AS(make_circle(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_ellipse(Point(0.0, 0.0), -1.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_concentric_circles(2.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_hook(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_hook(0.75), std::invalid_argument);
}

TEST_CASE("ellipse arc length matches an independent integration") {
    const double rx = 2.0, ry = 1.0;
    const CurveModel m = make_ellipse(Point(0.5, 0.25), rx, ry);
    const CurveComponent& c = m.components[0];
    const double oracle = simpson(
        [&](double t) { return std::hypot(rx * std::sin(t), ry * std::cos(t)); }, 0.0,
        2.0 * kPi, 200000);
    REQUIRE(c.length() == Catch::Approx(oracle).margin(1e-9));

    for (int i = 0; i <= 500; ++i) {
        const double s = c.length() * i / 500.0;
        const Point p = c.point_at(s);
        const double u = (p[0] - 0.5) / rx, v = (p[1] - 0.25) / ry;
        REQUIRE(u * u + v * v == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(norm(c.tangent_at(s)) == Catch::Approx(1.0).margin(1e-12));
    }

    // Walking forward in arc length advances by nearly the step.
    double prev_angle = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double s = c.length() * i / 64.0;
        const double step = 1e-4;
        REQUIRE(distance(c.point_at(s), c.point_at(s + step)) ==
                Catch::Approx(step).epsilon(1e-3));
        const double ang = polar_angle(c.point_at(s + 1e-9) - Point(0.5, 0.25));
        if (i > 0) REQUIRE(ang > prev_angle - 1e-6);
        prev_angle = ang;
    }
}

TEST_CASE("ellipse local feature size uses the focal medial segment") {
    const double rx = 2.0, ry = 1.0;
    const CurveModel m = make_ellipse(Point(0.0, 0.0), rx, ry);
    REQUIRE(m.lfs(Point(rx, 0.0)) == Catch::Approx(ry * ry / rx).margin(1e-12));
    REQUIRE(m.lfs(Point(-rx, 0.0)) == Catch::Approx(ry * ry / rx).margin(1e-12));
    REQUIRE(m.lfs(Point(0.0, ry)) == Catch::Approx(ry).margin(1e-12));

    const CurveModel tall = make_ellipse(Point(0.0, 0.0), 1.0, 3.0);
    REQUIRE(tall.lfs(Point(0.0, 3.0)) == Catch::Approx(1.0 / 3.0).margin(1e-12));
    REQUIRE(tall.lfs(Point(1.0, 0.0)) == Catch::Approx(1.0).margin(1e-12));

    const CurveModel round = make_ellipse(Point(0.0, 0.0), 2.0, 2.0);
    REQUIRE(round.lfs(Point(2.0, 0.0)) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("concentric circles expose the shared medial structure") {
    const CurveModel m = make_concentric_circles(1.0, 3.0);
    REQUIRE(m.components.size() == 2);
    REQUIRE(m.total_length() == Catch::Approx(2.0 * kPi * 4.0).epsilon(1e-14));
    REQUIRE(m.all_closed());
    REQUIRE(m.lfs(m.components[0].point_at(0.4)) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(m.lfs(m.components[1].point_at(2.9)) == Catch::Approx(1.0).margin(1e-12));

    const CurveModel desk = make_concentric_circles(100.0, 102.0);
    REQUIRE(desk.lfs(desk.components[0].point_at(13.0)) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(desk.lfs(desk.components[1].point_at(55.0)) == Catch::Approx(1.0).margin(1e-9));

    const CurveModel thin = make_concentric_circles(0.5, 3.5);
    REQUIRE(thin.lfs(thin.components[0].point_at(0.0)) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(thin.lfs(thin.components[1].point_at(0.0)) == Catch::Approx(1.5).margin(1e-12));
}

TEST_CASE("hook model is open, smooth, and carries the idealized lfs") {
    const CurveModel m = make_hook(0.05);
    const CurveComponent& c = m.components[0];
    REQUIRE_FALSE(c.closed());
    REQUIRE_FALSE(m.all_closed());
    REQUIRE(c.max_tangent_gap() < 1e-12);
    REQUIRE(distance(c.point_at(0.0), Point(0.0, 0.0)) < 1e-12);
    REQUIRE(distance(c.point_at(1.0), Point(1.0, 0.0)) < 1e-12);
    REQUIRE(c.length() == Catch::Approx(1.0 + 0.05 * deg_to_rad(40.0)).epsilon(1e-12));
    REQUIRE(distance(c.point_at(-5.0), c.point_at(0.0)) < 1e-12);
    REQUIRE(distance(c.point_at(c.length() + 5.0), c.point_at(c.length())) < 1e-12);
    REQUIRE(m.lfs(Point(0.25, 0.0)) == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("bent vertical segment becomes an exact radial segment") {
    const double R = 4.0;
    std::vector<Segment> segs{
        BentArc{LineSeg{Point(1.2, -0.5), Point(1.2, 1.5)}, R, -1.0}};
    const CurveModel m = make_arc_chain(std::move(segs), false);
    const CurveComponent& c = m.components[0];
    REQUIRE(c.length() == Catch::Approx(2.0).margin(1e-12));
    for (int i = 0; i <= 20; ++i) {
        const double s = 2.0 * i / 20.0;
        const double y = -0.5 + s;
        const double rho = R - y;
        const double phi = 1.2 / R;
        const Point want(rho * std::cos(phi), rho * std::sin(phi));
        REQUIRE(distance(c.point_at(s), want) < 1e-9);
        const Point t = c.tangent_at(s);
        REQUIRE(std::abs(std::abs(dot(t, unit_dir(phi))) - 1.0) < 1e-9);
    }
}

TEST_CASE("bent horizontal segment becomes a concentric arc") {
    const double R = 4.0, h = 0.75;
    std::vector<Segment> segs{
        BentArc{LineSeg{Point(-2.0, h), Point(3.0, h)}, R, -1.0}};
    const CurveModel m = make_arc_chain(std::move(segs), false);
    const CurveComponent& c = m.components[0];
    const double rho = R - h;
    REQUIRE(c.length() == Catch::Approx(5.0 * rho / R).margin(1e-9));
    for (int i = 0; i <= 40; ++i) {
        const double s = c.length() * i / 40.0;
        REQUIRE(norm(c.point_at(s)) == Catch::Approx(rho).margin(1e-9));
    }
    // lands exactly at the wrapped endpoint of the flat segment
    const Point end = c.point_at(c.length());
    const double phi_end = 3.0 / R;
    REQUIRE(distance(end, Point(rho * std::cos(phi_end), rho * std::sin(phi_end))) < 1e-9);
}

TEST_CASE("bent circular arc matches an independent speed integration") {
    const double R = 6.0;
    const CircArc flat{Point(0.5, 0.25), 1.1, 0.3, 2.4};
    std::vector<Segment> segs{BentArc{flat, R, -1.0}};
    const CurveModel m = make_arc_chain(std::move(segs), false);
    const CurveComponent& c = m.components[0];

    const double oracle = simpson(
        [&](double theta) {
            const double y = flat.center[1] + flat.radius * std::sin(theta);
            const double tx = -std::sin(theta), ty = std::cos(theta);
            const double rho = R - y;
            return flat.radius * std::hypot(rho / R * tx, ty);
        },
        flat.angle0, flat.angle1, 200000);
    REQUIRE(c.length() == Catch::Approx(oracle).margin(1e-8));

    // Unbending any evaluated point recovers a point of the flat arc.
    for (int i = 0; i <= 60; ++i) {
        const double s = c.length() * i / 60.0;
        const Point p = c.point_at(s);
        const double rho = norm(p);
        const double phi = std::atan2(p[1], p[0]);
        const Point flat_pt(phi * R, -(rho - R));
        REQUIRE(distance(flat_pt, flat.center) == Catch::Approx(flat.radius).margin(1e-9));
    }
}

TEST_CASE("bending preserves smooth joins") {
    const double R = 8.0;
    std::vector<Segment> segs{
        BentArc{LineSeg{Point(0.0, 1.0), Point(0.0, 0.0)}, R, -1.0},
        BentArc{CircArc{Point(1.0, 0.0), 1.0, kPi, 3.0 * kPi / 2.0}, R, -1.0},
        BentArc{LineSeg{Point(1.0, -1.0), Point(2.0, -1.0)}, R, -1.0},
    };
    const CurveModel m = make_arc_chain(std::move(segs), false);
    REQUIRE(m.components[0].max_join_gap() < 1e-12);
    REQUIRE(m.components[0].max_tangent_gap() < 1e-9);
}

TEST_CASE("bent arcs reject folds and bad radial signs") {
    REQUIRE_THROWS_WITH(
        make_arc_chain({BentArc{LineSeg{Point(0.0, 0.0), Point(0.0, 3.0)}, 2.0, -1.0}}, false),
        Catch::Matchers::ContainsSubstring("folds"));
    REQUIRE_THROWS_AS(
        make_arc_chain({BentArc{LineSeg{Point(0.0, 0.0), Point(1.0, 0.0)}, 2.0, 0.5}}, false),
        std::invalid_argument);
    REQUIRE_NOTHROW(
        make_arc_chain({BentArc{LineSeg{Point(0.0, 0.0), Point(0.0, 3.0)}, 2.0, 1.0}}, false));
}

TEST_CASE("arc length labels stay consistent across segment boundaries") {
    std::vector<Segment> segs{
        LineSeg{Point(0.0, 0.0), Point(2.0, 0.0)},
        CircArc{Point(2.0, 1.0), 1.0, -kPi / 2.0, 0.0},
        LineSeg{Point(3.0, 1.0), Point(3.0, 2.0)},
    };
    const CurveModel m = make_arc_chain(std::move(segs), false);
    const CurveComponent& c = m.components[0];
    REQUIRE(c.length() == Catch::Approx(3.0 + kPi / 2.0).epsilon(1e-14));
    REQUIRE(distance(c.point_at(2.0), Point(2.0, 0.0)) < 1e-12);
    REQUIRE(distance(c.point_at(2.0 + kPi / 2.0), Point(3.0, 1.0)) < 1e-12);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const double s = std::uniform_real_distribution<double>(0.0, c.length() - 1e-4)(rng);
        REQUIRE(distance(c.point_at(s), c.point_at(s + 1e-4)) ==
                Catch::Approx(1e-4).epsilon(1e-3));
    }
}
