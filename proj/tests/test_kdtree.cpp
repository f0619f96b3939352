#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <recurve/kdtree.hpp>

#include "testutil.hpp"

using namespace recurve;

namespace {

std::pair<int, double> brute_nearest(const PointList& pts, const Point& q, int exclude = -1) {
    int best = -1;
    double bestD2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < (int)pts.size(); ++i) {
        if (i == exclude) continue;
        double d2 = squared_distance(pts[i], q);
        if (d2 < bestD2) {
            bestD2 = d2;
            best = i;
        }
    }
    return {best, bestD2};
}

}  // namespace

TEST_CASE("kdtree matches brute force on random point sets") {
    std::mt19937_64 rng(301);
    for (int dim : {2, 3, 5}) {
        for (int n : {1, 2, 7, 8, 9, 50, 500, 3000}) {
            PointList pts;
            for (int i = 0; i < n; ++i) pts.push_back(testutil::random_point(dim, rng, 5.0));
            // Clustered tail to stress unbalanced splits.
            for (int i = 0; i < n / 4; ++i) {
                Point p = testutil::random_point(dim, rng, 0.01);
                p[0] += 3.0;
                pts.push_back(p);
            }
            KdTree tree(pts);
            for (int t = 0; t < 200; ++t) {
                Point q = testutil::random_point(dim, rng, 4.0);
                auto got = tree.nearest(q);
                auto want = brute_nearest(pts, q);
                REQUIRE(got.first == want.first);
                REQUIRE(got.second == want.second);
                int ex = t % (int)pts.size();
                auto gotEx = tree.nearest(q, ex);
                auto wantEx = brute_nearest(pts, q, ex);
                REQUIRE(gotEx.first == wantEx.first);
                REQUIRE(gotEx.second == wantEx.second);
            }
        }
    }
}

TEST_CASE("kdtree breaks exact ties by lowest index") {
    // Integer grid: queries at cell centers are equidistant from 4 corners.
    PointList pts;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) pts.emplace_back(double(x), double(y));
    KdTree tree(pts);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x) {
            Point q(x + 0.5, y + 0.5);
            auto got = tree.nearest(q);
            auto want = brute_nearest(pts, q);
            REQUIRE(got.first == want.first);
            REQUIRE(got.first == y * 10 + x);  // lowest index corner
            REQUIRE(got.second == want.second);
        }
    // Duplicate coordinates: lowest index must win.
    PointList dup(5, Point(1.0, 2.0));
    KdTree tdup(dup);
    CHECK(tdup.nearest(Point(0, 0)).first == 0);
    CHECK(tdup.nearest(Point(0, 0), 0).first == 1);
}

TEST_CASE("kdtree edge cases") {
    KdTree empty;
    CHECK(empty.nearest(Point(0, 0)).first == -1);
    KdTree one(PointList{Point(1, 1)});
    CHECK(one.nearest(Point(0, 0)).first == 0);
    CHECK(one.nearest(Point(0, 0), 0).first == -1);
    PointList mixed{Point(0, 0), Point(1, 1, 1)};
    CHECK_THROWS_AS(KdTree(mixed), std::invalid_argument);
}

TEST_CASE("kdtree radius query matches brute force") {
    std::mt19937_64 rng(302);
    PointList pts;
    for (int i = 0; i < 800; ++i) pts.push_back(testutil::random_point(2, rng, 2.0));
    KdTree tree(pts);
    std::vector<int> got;
    for (int t = 0; t < 100; ++t) {
        Point q = testutil::random_point(2, rng, 2.0);
        double r2 = 0.3 * 0.3;
        tree.within(q, r2, got);
        std::sort(got.begin(), got.end());
        std::vector<int> want;
        for (int i = 0; i < (int)pts.size(); ++i)
            if (squared_distance(pts[i], q) <= r2) want.push_back(i);
        REQUIRE(got == want);
    }
}
