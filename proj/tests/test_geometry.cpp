#include <catch2/catch_amalgamated.hpp>

#include <recurve/geometry.hpp>

using namespace recurve;
using Catch::Approx;

TEST_CASE("distance basics") {
    CHECK(distance(Point(0, 0), Point(3, 4)) == 5.0);
    Point p(0.37, -1.2, 5.5);
    CHECK(distance(p, p) == 0.0);
    CHECK(distance(Point(1, 2, 3), Point(1, 2, 3)) == 0.0);
    CHECK(distance(Point(0, 0, 0), Point(1, 2, 2)) == 3.0);
    CHECK_THROWS_AS(distance(Point(0, 0), Point(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("distance frozen values") {
    // Values frozen from an independent high-precision evaluation.
    CHECK(distance(Point(0, 0), Point(-1.008, 0.614)) == Approx(1.18027962788485).margin(1e-12));
    CHECK(distance(Point(0, -1), Point(-1.008, 0.614)) == Approx(1.9029083004706244).margin(1e-12));
    CHECK(distance(Point(0, 0), Point(-1.008, 0.614)) == Approx(1.18029).margin(2e-5));
}

TEST_CASE("angle_deg basics") {
    CHECK(angle_deg(Point(0, 0), Point(1, 0), Point(2, 0)) == Approx(180.0).margin(1e-12));
    CHECK(angle_deg(Point(0, 0), Point(1, 0), Point(1, 1)) == Approx(90.0).margin(1e-12));
    CHECK(angle_deg(Point(0, -1), Point(0, 0), Point(1.777, 0.9173)) ==
          Approx(117.30310372555068).margin(1e-9));
    CHECK(angle_deg(Point(0, -1), Point(0, 0), Point(1.777, 0.9173)) == Approx(117.3).margin(0.1));
    CHECK_THROWS_AS(angle_deg(Point(1, 1), Point(1, 1), Point(2, 0)), std::invalid_argument);
    CHECK_THROWS_AS(angle_deg(Point(0, 0), Point(1, 1), Point(1, 1)), std::invalid_argument);
}

TEST_CASE("angle is accurate near zero") {
    double a = angle_rad(Point(1, 0), Point(0, 0), Point(1, 1e-16));
    CHECK(a == Approx(1e-16).epsilon(1e-6));
    double b = angle_rad(Point(1, 0), Point(0, 0), Point(-1, 1e-16));
    CHECK(b == Approx(std::numbers::pi - 1e-16).epsilon(1e-12));
}

TEST_CASE("angle works in higher dimensions") {
    CHECK(angle_deg(Point(1, 0, 0), Point(0, 0, 0), Point(0, 0, 1)) == Approx(90.0).margin(1e-12));
    CHECK(angle_deg(Point(1, 1, 1, 1), Point(0, 0, 0, 0), Point(-2, -2, -2, -2)) ==
          Approx(180.0).margin(1e-12));
}

TEST_CASE("circumcenter of a right triangle") {
    Point cc = circumcenter2(Point(0, 0), Point(1, 0), Point(0, 1));
    CHECK(cc.x() == Approx(0.5).margin(1e-15));
    CHECK(cc.y() == Approx(0.5).margin(1e-15));
    CHECK_THROWS_AS(circumcenter2(Point(0, 0), Point(1, 1), Point(2, 2)), std::invalid_argument);
}

TEST_CASE("circumcenter frozen tangency fixture") {
    // Center of the circle through (0,-1), (0,0) and the midpoint of (0,0)
    // and (-1.008, 0.614); frozen from an independent evaluation.
    Point q = midpoint(Point(0, 0), Point(-1.008, 0.614));
    CHECK(q.x() == Approx(-0.504).margin(1e-15));
    CHECK(q.y() == Approx(0.307).margin(1e-15));
    Point s1 = circumcenter2(Point(0, -1), Point(0, 0), q);
    CHECK(s1.x() == Approx(-0.6500644841269841).margin(1e-12));
    CHECK(s1.y() == Approx(-0.5).margin(1e-12));
    double r1 = distance(s1, Point(0, 0));
    CHECK(r1 == Approx(0.8201120859512326).margin(1e-12));
    CHECK(distance(s1, Point(0, -1)) == Approx(r1).margin(1e-12));
    CHECK(distance(s1, q) == Approx(r1).margin(1e-12));
}

TEST_CASE("segment distance") {
    CHECK(segment_distance(Point(0.5, 1), Point(0, 0), Point(1, 0)) == Approx(1.0));
    CHECK(segment_distance(Point(2, 0), Point(0, 0), Point(1, 0)) == Approx(1.0));
    CHECK(segment_distance(Point(-3, 4), Point(0, 0), Point(0, 0)) == Approx(5.0));
    CHECK(segment_distance(Point(0.25, 0), Point(0, 0), Point(1, 0)) == Approx(0.0).margin(1e-15));
}

TEST_CASE("planar helpers") {
    Point r = rotate2(Point(1, 0), std::numbers::pi / 2);
    CHECK(r.x() == Approx(0.0).margin(1e-15));
    CHECK(r.y() == Approx(1.0).margin(1e-15));
    Point pp = perp2(Point(3, 4));
    CHECK(pp.x() == -4.0);
    CHECK(pp.y() == 3.0);
    Point refl = point_reflect(Point(1, 2), Point(0.5, 0.5));
    CHECK(refl.x() == Approx(0.0).margin(1e-15));
    CHECK(refl.y() == Approx(-1.0).margin(1e-15));
    CHECK(polar_angle(Point(0, -1)) == Approx(1.5 * std::numbers::pi));
    CHECK(cross2(Point(1, 0), Point(0, 1)) == 1.0);
    Point m = lerp(Point(0, 0), Point(2, 4), 0.25);
    CHECK(m.x() == Approx(0.5));
    CHECK(m.y() == Approx(1.0));
}
