#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <recurve/compat.hpp>
#include <recurve/curve.hpp>
#include <recurve/kdtree.hpp>
#include <recurve/sampling.hpp>

using namespace recurve;

namespace {

constexpr double kPi = std::numbers::pi;

void append_equally_spaced(const CurveModel& m, int comp, int count, SampleSet& out) {
    const CurveComponent& c = m.components[std::size_t(comp)];
    for (int k = 0; k < count; ++k) {
        const double s = c.length() * k / count;
        out.points.push_back(c.point_at(s));
        out.tags.push_back(SampleTag{comp, s});
    }
}

SampleSet equally_spaced(const CurveModel& m, int comp, int count) {
    SampleSet s;
    append_equally_spaced(m, comp, count, s);
    return s;
}

// Sorted arc-length gaps between consecutive samples of one component.
std::vector<double> component_gaps(const CurveModel& m, const SampleSet& s, int comp) {
    std::vector<double> params;
    for (int i = 0; i < s.size(); ++i)
        if (s.tags[std::size_t(i)].component == comp)
            params.push_back(s.tags[std::size_t(i)].param);
    std::sort(params.begin(), params.end());
    std::vector<double> gaps;
    for (std::size_t j = 1; j < params.size(); ++j) gaps.push_back(params[j] - params[j - 1]);
    if (m.components[std::size_t(comp)].closed())
        gaps.push_back(m.components[std::size_t(comp)].length() - params.back() + params.front());
    return gaps;
}

}  // namespace

TEST_CASE("five equally spaced circle samples sit just past the 0.618 gap") {
    const CurveModel m = make_circle(1.0);
    const SampleSet s = equally_spaced(m, 0, 5);
    const SamplingReport rep = epsilon_star(m, s, 1e-3);

    REQUIRE(rep.eps_star == Catch::Approx(2.0 * std::sin(kPi / 10.0)).margin(1e-4));
    REQUIRE(rep.eps_star == Catch::Approx(0.61803).margin(1e-4));
    REQUIRE(rep.verdict(0.66));
    REQUIRE_FALSE(rep.verdict(0.61));

    REQUIRE(norm(rep.witness) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(rep.witness_component == 0);
    const Point back = m.components[0].point_at(rep.witness_param);
    REQUIRE(distance(back, rep.witness) < 1e-9);

    REQUIRE(rep.eps_star_corrected >= rep.eps_star);
    REQUIRE(rep.eps_star_corrected - rep.eps_star < 5e-3);
    REQUIRE(rep.density == 1e-3);
}

TEST_CASE("four equally spaced circle samples fail the 0.66 verdict") {
    const CurveModel m = make_circle(1.0);
    const SampleSet s = equally_spaced(m, 0, 4);
    const SamplingReport rep = epsilon_star(m, s, 1e-3);

    REQUIRE(rep.eps_star == Catch::Approx(2.0 * std::sin(kPi / 8.0)).margin(1e-4));
    REQUIRE(rep.eps_star == Catch::Approx(0.76537).margin(1e-4));
    REQUIRE_FALSE(rep.verdict(0.66));
    REQUIRE(rep.verdict(0.8));
}

TEST_CASE("epsilon_star halving the density moves the estimate at most linearly") {
    const CurveModel m = make_circle(1.0);
    const SampleSet s = equally_spaced(m, 0, 4);
    // both d(.,S) and lfs are 1-Lipschitz in arc length, so with lfs = 1 the
    // grid maximum can move by at most (1 + eps) per unit of grid step
    const double c = 2.0;
    for (double d : {8e-3, 4e-3, 2e-3}) {
        const double coarse = epsilon_star(m, s, d).eps_star;
        const double fine = epsilon_star(m, s, d / 2.0).eps_star;
        REQUIRE(std::abs(coarse - fine) <= c * d);
        REQUIRE(epsilon_star(m, s, d).eps_star_corrected >= fine);
    }
}

TEST_CASE("epsilon_star falls back to the medial cloud when no closed-form lfs is set") {
    CurveModel chain = make_arc_chain({CircArc{Point(0.0, 0.0), 1.0, 0.0, 2.0 * kPi}});
    REQUIRE_FALSE(static_cast<bool>(chain.lfs));
    const SampleSet s = equally_spaced(chain, 0, 5);
    const SamplingReport rep = epsilon_star(chain, s, 2e-3);
    REQUIRE(rep.eps_star == Catch::Approx(2.0 * std::sin(kPi / 10.0)).margin(5e-3));
}

TEST_CASE("epsilon_star input validation") {
    const CurveModel m = make_circle(1.0);
    const SampleSet good = equally_spaced(m, 0, 5);

    REQUIRE_THROWS_WITH(epsilon_star(m, SampleSet{}, 1e-3), "empty sample");
    REQUIRE_THROWS_WITH(epsilon_star(m, good, 0.0), "density must be positive");
    REQUIRE_THROWS_WITH(epsilon_star(m, good, -1.0), "density must be positive");
    REQUIRE_THROWS_WITH(epsilon_star(CurveModel{}, good, 1e-3), "curve model has no components");

    SampleSet off = good;
    off.points[2] = Point(0.5, 0.5);
    off.tags.clear();
    REQUIRE_THROWS_WITH(epsilon_star(m, off, 1e-3), "sample point 2 is not on the curve");

    SampleSet flat = good;
    flat.points[1] = Point(0.0, 1.0, 0.0);
    REQUIRE_THROWS_WITH(epsilon_star(m, flat, 1e-3), "sample points must be 2-D");
}

TEST_CASE("rho_star matches epsilon_star on constant-lfs concentric circles") {
    const CurveModel m = make_concentric_circles(1.0, 3.0);
    SampleSet s;
    append_equally_spaced(m, 0, 12, s);
    append_equally_spaced(m, 1, 24, s);

    const SamplingReport eps = epsilon_star(m, s, 1e-3);
    const SamplingReport rho = rho_star(m, s, 1e-3);
    REQUIRE(std::abs(rho.eps_star - eps.eps_star) <= 1e-6);
    REQUIRE(rho.eps_star_corrected >= rho.eps_star);

    const CurveComponent& comp = m.components[std::size_t(rho.witness_component)];
    REQUIRE(distance(comp.point_at(rho.witness_param), rho.witness) < 1e-9);

    SampleSet untagged(s.points);
    REQUIRE_THROWS_WITH(rho_star(m, untagged, 1e-3), "sample parameter tags are required");

    SampleSet sparse;
    append_equally_spaced(m, 0, 12, sparse);
    sparse.points.push_back(m.components[1].point_at(0.0));
    sparse.tags.push_back(SampleTag{1, 0.0});
    REQUIRE_THROWS_WITH(rho_star(m, sparse, 1e-3),
                        "component 1 needs at least 2 tagged samples");
}

TEST_CASE("hook examples: the 0.66 midpoint condition and the 0.9 reach condition") {
    const CurveModel hook = make_hook(0.05);
    REQUIRE_FALSE(hook.all_closed());

    const auto eps_condition_holds = [&](double x) {
        const Point p(x, 0.0);
        const Point q(0.5 * x, 0.0);
        return distance(q, p) < 0.66 * hook.lfs(q);
    };
    REQUIRE(eps_condition_holds(0.79));
    REQUIRE_FALSE(eps_condition_holds(0.80));

    // reach of the arc from (0,0) to (x,0) under the idealized lfs is 1 - x
    const auto rho_condition_fails = [&](double x) {
        const Point p(x, 0.0);
        const Point q(0.5 * x, 0.0);
        return distance(q, p) > 0.9 * (1.0 - x);
    };
    REQUIRE(rho_condition_fails(0.65));
    REQUIRE_FALSE(rho_condition_fails(0.63));
}

TEST_CASE("hook thresholds located by bisection match the closed forms") {
    const CurveModel hook = make_hook(0.05);

    double lo = 0.5, hi = 0.9;
    for (int it = 0; it < 60; ++it) {
        const double x = 0.5 * (lo + hi);
        const Point q(0.5 * x, 0.0);
        if (0.5 * x < 0.66 * hook.lfs(q))
            lo = x;
        else
            hi = x;
    }
    REQUIRE(0.5 * (lo + hi) == Catch::Approx(1.32 / 1.66).margin(1e-4));

    // stem-only open model so the reach-based validator sees exactly one arc
    CurveModel stem = make_arc_chain({LineSeg{Point(0.0, 0.0), Point(1.0, 0.0)}}, false);
    stem.lfs = [](const Point& p) { return distance(p, Point(1.0, 0.0)); };

    const auto rho_of = [&](double x) {
        SampleSet s(PointList{Point(0.0, 0.0), Point(x, 0.0)},
                    {SampleTag{0, 0.0}, SampleTag{0, x}});
        return rho_star(stem, s, 1e-4).eps_star;
    };
    lo = 0.5;
    hi = 0.8;
    for (int it = 0; it < 40; ++it) {
        const double x = 0.5 * (lo + hi);
        if (rho_of(x) < 0.9)
            lo = x;
        else
            hi = x;
    }
    REQUIRE(0.5 * (lo + hi) == Catch::Approx(1.8 / 2.8).margin(1e-4));
}

TEST_CASE("ground truth graph builds per-component cycles") {
    const CurveModel circle = make_circle(1.0);
    const SampleSet five = equally_spaced(circle, 0, 5);
    const ReconGraph cycle = ground_truth_graph(circle, five);
    REQUIRE(cycle.n == 5);
    REQUIRE(cycle.edges.size() == 5);
    REQUIRE(cycle.is_cycle_union());
    REQUIRE(cycle.component_count() == 1);
    for (int i = 0; i < 5; ++i) REQUIRE(cycle.has_edge(i, (i + 1) % 5));

    const CurveModel two = make_concentric_circles(1.0, 3.0);
    SampleSet s;
    append_equally_spaced(two, 0, 4, s);
    append_equally_spaced(two, 1, 6, s);
    const ReconGraph pair = ground_truth_graph(two, s);
    REQUIRE(pair.n == 10);
    REQUIRE(pair.edges.size() == 10);
    REQUIRE(pair.is_cycle_union());
    REQUIRE(pair.component_count() == 2);
    for (int i = 0; i < 4; ++i) REQUIRE(pair.has_edge(i, (i + 1) % 4));
    for (int i = 0; i < 6; ++i) REQUIRE(pair.has_edge(4 + i, 4 + (i + 1) % 6));
}

TEST_CASE("ground truth graph rejects malformed tag data") {
    const CurveModel circle = make_circle(1.0);

    SampleSet two = equally_spaced(circle, 0, 2);
    REQUIRE_THROWS_WITH(ground_truth_graph(circle, two), "component 0 has fewer than 3 samples");

    SampleSet untagged(equally_spaced(circle, 0, 5).points);
    REQUIRE_THROWS_WITH(ground_truth_graph(circle, untagged),
                        "sample parameter tags are required");

    SampleSet bad_comp = equally_spaced(circle, 0, 5);
    bad_comp.tags[3].component = 2;
    REQUIRE_THROWS_WITH(ground_truth_graph(circle, bad_comp),
                        "tag references missing component 2");

    SampleSet bad_param = equally_spaced(circle, 0, 5);
    bad_param.tags[1].param = 100.0;
    REQUIRE_THROWS_WITH(ground_truth_graph(circle, bad_param),
                        "tag parameter out of range for sample 1");

    SampleSet dup = equally_spaced(circle, 0, 5);
    dup.tags[2].param = dup.tags[1].param;
    REQUIRE_THROWS(ground_truth_graph(circle, dup));

    SampleSet moved = equally_spaced(circle, 0, 5);
    moved.points[4] = Point(0.0, -1.0);
    REQUIRE_THROWS_WITH(ground_truth_graph(circle, moved),
                        "tag of sample 4 does not match its point");
}

TEST_CASE("greedy circle sampling hits the analytic 5 to 7 point window") {
    const CurveModel circle = make_circle(1.0);
    const SampleSet s = greedy_sample(circle, 0.66, 7, 0.95);
    REQUIRE(s.size() >= 5);
    REQUIRE(s.size() <= 7);
    REQUIRE(s.has_tags());
    for (int i = 1; i < s.size(); ++i)
        REQUIRE(s.tags[std::size_t(i)].param > s.tags[std::size_t(i - 1)].param);
    for (int i = 0; i < s.size(); ++i)
        REQUIRE(norm(s.points[std::size_t(i)]) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(epsilon_star(circle, s, 1e-3).eps_star < 0.66);
}

TEST_CASE("greedy sampling is deterministic in the seed") {
    const CurveModel circle = make_circle(1.0);
    const SampleSet a = greedy_sample(circle, 0.66, 42, 0.9);
    const SampleSet b = greedy_sample(circle, 0.66, 42, 0.9);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) {
        REQUIRE(a.points[std::size_t(i)] == b.points[std::size_t(i)]);
        REQUIRE(a.tags[std::size_t(i)] == b.tags[std::size_t(i)]);
    }
    const SampleSet c = greedy_sample(circle, 0.66, 43, 0.9);
    REQUIRE(a.tags[0].param != c.tags[0].param);
}

TEST_CASE("greedy sampling concentrates points near the ellipse ends") {
    const CurveModel ell = make_ellipse(Point(0.0, 0.0), 2.0, 1.0);
    const SampleSet s = greedy_sample(ell, 0.4, 11, 0.9);
    REQUIRE(epsilon_star(ell, s, 1e-3 * ell.total_length()).eps_star < 0.4);
    const std::vector<double> gaps = component_gaps(ell, s, 0);
    const auto [lo, hi] = std::minmax_element(gaps.begin(), gaps.end());
    REQUIRE(*hi / *lo > 1.5);
}

TEST_CASE("greedy sampling rejects bad inputs and unreachable targets") {
    const CurveModel circle = make_circle(1.0);
    REQUIRE_THROWS_WITH(greedy_sample(circle, 0.0, 1, 0.9), "target eps must be positive");
    REQUIRE_THROWS_WITH(greedy_sample(circle, 0.66, 1, 0.0),
                        "safety factor must lie in (0, 1)");
    REQUIRE_THROWS_WITH(greedy_sample(circle, 0.66, 1, 1.0),
                        "safety factor must lie in (0, 1)");
    REQUIRE_THROWS_WITH(greedy_sample(CurveModel{}, 0.66, 1, 0.9),
                        "curve model has no components");
    REQUIRE_THROWS_WITH(greedy_sample(circle, 1e-4, 1, 0.9),
                        Catch::Matchers::StartsWith("sampling target infeasible"));
}

TEST_CASE("valid samples obey the nearest-sample dichotomy and witness-ball containment") {
    const CompatParams params(0.66);
    std::vector<CurveModel> models;
    models.push_back(make_circle(1.0));
    models.push_back(make_ellipse(Point(0.0, 0.0), 2.0, 1.0));
    models.push_back(make_concentric_circles(1.0, 3.0));

    int arcs_checked = 0;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const CurveModel& m = models[mi];
        const SampleSet s = greedy_sample(m, 0.66, 100 + std::uint64_t(mi), 0.9);
        REQUIRE(epsilon_star(m, s, 1e-3 * m.total_length()).eps_star < 0.66);

        const KdTree tree(s.points);
        const auto groups = samplingdetail::group_tags(m, s, true);
        for (std::size_t ci = 0; ci < groups.per_comp.size(); ++ci) {
            const auto& v = groups.per_comp[ci];
            const CurveComponent& comp = m.components[ci];
            for (std::size_t j = 0; j < v.size(); ++j) {
                const auto [sa, ia] = v[j];
                const auto [sb_raw, ib] = v[(j + 1) % v.size()];
                const double arc =
                    j + 1 < v.size() ? sb_raw - sa : comp.length() - sa + sb_raw;
                const Point a = s.points[std::size_t(ia)];
                const Point b = s.points[std::size_t(ib)];

                // dichotomy: interior arc points are closest to an arc endpoint
                for (int t = 1; t < 64; ++t) {
                    const Point p = comp.point_at(sa + arc * t / 64.0);
                    const int nearest = tree.nearest(p).first;
                    REQUIRE((nearest == ia || nearest == ib));
                }

                // containment: arc points stay inside every discretized
                // equidistant-witness ball of the pair (a, b)
                const double d = distance(a, b);
                const double radius = xab_radius(a, b, params);
                const double h = std::sqrt(radius * radius - 0.25 * d * d);
                const Point mid = midpoint(a, b);
                const Point u = normalized(perp2(b - a));
                for (int w = 0; w < 256; ++w) {
                    const Point x = mid + h * std::cos(2.0 * kPi * w / 256.0) * u;
                    const double reach = distance(x, a);
                    for (int t = 0; t <= 32; ++t) {
                        const Point p = comp.point_at(sa + arc * t / 32.0);
                        REQUIRE(distance(x, p) <= reach + 1e-9);
                    }
                }
                ++arcs_checked;
            }
        }
    }
    REQUIRE(arcs_checked > 20);
}
