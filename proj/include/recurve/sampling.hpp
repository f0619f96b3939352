#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <recurve/curve.hpp>
#include <recurve/geometry.hpp>
#include <recurve/graph.hpp>
#include <recurve/kdtree.hpp>
#include <recurve/medial.hpp>
#include <recurve/sample.hpp>

namespace recurve {

// Result of an epsilon-sample or reach-sample scan: the largest observed
// ratio, the grid point where it occurred, and a Lipschitz upper bound that
// also covers the gaps between grid points.
struct SamplingReport {
    double eps_star = 0.0;
    double eps_star_corrected = 0.0;
    Point witness;
    int witness_component = 0;
    double witness_param = 0.0;
    double density = 0.0;

    bool verdict(double eps) const { return eps_star < eps; }
};

namespace samplingdetail {

struct LfsProvider {
    std::function<double(const Point&)> fn;
    std::shared_ptr<MedialCloud> cloud;

    double operator()(const Point& p) const { return fn(p); }
};

inline LfsProvider make_lfs(const CurveModel& curve, double density) {
    LfsProvider out;
    if (curve.lfs) {
        out.fn = curve.lfs;
        return out;
    }
    out.cloud = std::make_shared<MedialCloud>(curve, density);
    auto cloud = out.cloud;
    out.fn = [cloud](const Point& p) { return cloud->lfs(p); };
    return out;
}

// Walks curve probes and marks every sample within reach of one, so the cost
// stays near-linear in the probe count even for very large inputs.
inline void require_samples_on_curve(const CurveModel& curve, const SampleSet& sample,
                                     double density) {
    for (int i = 0; i < sample.size(); ++i)
        if (sample.points[std::size_t(i)].dim != 2)
            throw std::invalid_argument("sample points must be 2-D");
    const KdTree tree(sample.points);
    std::vector<char> seen(std::size_t(sample.size()), 0);
    std::vector<int> hits;
    for (const auto& comp : curve.components) {
        const double len = comp.length();
        const int n = std::clamp(int(std::ceil(len / density)), 64, 200000);
        const double tol = std::max({2.0 * density, 2.0 * len / n, 1e-7});
        const int count = comp.closed() ? n : n + 1;
        for (int j = 0; j < count; ++j) {
            tree.within(comp.point_at(len * j / n), tol * tol, hits);
            for (int idx : hits) seen[std::size_t(idx)] = 1;
        }
    }
    for (int i = 0; i < sample.size(); ++i)
        if (!seen[std::size_t(i)])
            throw std::invalid_argument("sample point " + std::to_string(i) +
                                        " is not on the curve");
}

// Tags grouped per component and sorted by parameter.
struct TaggedSamples {
    // per component: (param, sample index) ascending
    std::vector<std::vector<std::pair<double, int>>> per_comp;
};

inline TaggedSamples group_tags(const CurveModel& curve, const SampleSet& sample,
                                bool verify_positions) {
    if (!sample.has_tags())
        throw std::invalid_argument("sample parameter tags are required");
    TaggedSamples out;
    out.per_comp.resize(curve.components.size());
    for (int i = 0; i < sample.size(); ++i) {
        const SampleTag& t = sample.tags[std::size_t(i)];
        if (t.component < 0 || std::size_t(t.component) >= curve.components.size())
            throw std::invalid_argument("tag references missing component " +
                                        std::to_string(t.component));
        const CurveComponent& comp = curve.components[std::size_t(t.component)];
        if (t.param < 0.0 || t.param > comp.length())
            throw std::invalid_argument("tag parameter out of range for sample " +
                                        std::to_string(i));
        out.per_comp[std::size_t(t.component)].push_back({t.param, i});
    }
    for (std::size_t c = 0; c < out.per_comp.size(); ++c) {
        auto& v = out.per_comp[c];
        std::sort(v.begin(), v.end());
        for (std::size_t j = 1; j < v.size(); ++j)
            if (v[j].first == v[j - 1].first)
                throw std::invalid_argument("duplicate parameter tags on component " +
                                            std::to_string(c));
        if (verify_positions) {
            const CurveComponent& comp = curve.components[c];
            for (const auto& [param, idx] : v) {
                if (distance(comp.point_at(param), sample.points[std::size_t(idx)]) > 1e-9)
                    throw std::invalid_argument("tag of sample " + std::to_string(idx) +
                                                " does not match its point");
            }
        }
    }
    return out;
}

// Parameter in [sa, sa+arc] where the distances to the two arc endpoint
// samples tie; d(.,S) peaks there whenever the nearest sample to every arc
// point is one of the two endpoints.
inline double arc_tie_param(const CurveComponent& comp, double sa, double arc,
                            const Point& a, const Point& b) {
    double lo = sa, hi = sa + arc;
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Point p = comp.point_at(mid);
        if (distance(p, a) < distance(p, b))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace samplingdetail

// Largest d(p,S)/lfs(p) over a uniform arc-length grid of step <= density on
// every component, plus the per-arc distance-tie points when the sample is
// tagged. The corrected value bounds the ratio between grid points using the
// 1-Lipschitz dependence of both d(.,S) and lfs on arc length.
inline SamplingReport epsilon_star(const CurveModel& curve, const SampleSet& sample,
                                   double density) {
    if (sample.size() == 0) throw std::invalid_argument("empty sample");
    if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
    if (curve.components.empty()) throw std::invalid_argument("curve model has no components");
    samplingdetail::require_samples_on_curve(curve, sample, density);
    samplingdetail::TaggedSamples groups;
    if (sample.has_tags()) groups = samplingdetail::group_tags(curve, sample, true);

    const samplingdetail::LfsProvider lfs = samplingdetail::make_lfs(curve, density);
    const KdTree tree(sample.points);

    SamplingReport rep;
    rep.density = density;
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const CurveComponent& comp = curve.components[ci];
        const int n = std::max(4, int(std::ceil(comp.length() / density)));
        const double h = comp.length() / n;
        const int count = comp.closed() ? n : n + 1;
        double prev_r = 0.0, prev_l = 0.0, first_r = 0.0, first_l = 0.0;
        for (int i = 0; i < count; ++i) {
            const double s = std::min(i * h, comp.length());
            const Point p = comp.point_at(s);
            const double r = std::sqrt(tree.nearest(p).second);
            const double l = lfs(p);
            if (!(l > 0.0)) throw std::runtime_error("nonpositive local feature size encountered");
            const double f = r / l;
            if (f > rep.eps_star) {
                rep.eps_star = f;
                rep.witness = p;
                rep.witness_component = int(ci);
                rep.witness_param = s;
            }
            if (i > 0) {
                const double b0 = prev_l > h ? (prev_r + h) / (prev_l - h)
                                             : std::numeric_limits<double>::infinity();
                const double b1 =
                    l > h ? (r + h) / (l - h) : std::numeric_limits<double>::infinity();
                rep.eps_star_corrected = std::max(rep.eps_star_corrected, std::min(b0, b1));
            } else {
                first_r = r;
                first_l = l;
            }
            prev_r = r;
            prev_l = l;
        }
        if (comp.closed()) {
            const double b0 = prev_l > h ? (prev_r + h) / (prev_l - h)
                                         : std::numeric_limits<double>::infinity();
            const double b1 = first_l > h ? (first_r + h) / (first_l - h)
                                          : std::numeric_limits<double>::infinity();
            rep.eps_star_corrected = std::max(rep.eps_star_corrected, std::min(b0, b1));
        }

        // extremal probes between consecutive tagged samples
        if (sample.has_tags() && groups.per_comp[ci].size() >= 2) {
            const auto& v = groups.per_comp[ci];
            const std::size_t m = v.size();
            const std::size_t arcs = comp.closed() ? m : m - 1;
            for (std::size_t j = 0; j < arcs; ++j) {
                const double sa = v[j].first;
                const double sb = v[(j + 1) % m].first;
                const double arc = j + 1 < m ? sb - sa : comp.length() - sa + sb;
                if (!(arc > 0.0)) continue;
                const Point& a = sample.points[std::size_t(v[j].second)];
                const Point& b = sample.points[std::size_t(v[(j + 1) % m].second)];
                const double st = samplingdetail::arc_tie_param(comp, sa, arc, a, b);
                const Point p = comp.point_at(st);
                const double r = std::sqrt(tree.nearest(p).second);
                const double l = lfs(p);
                if (!(l > 0.0))
                    throw std::runtime_error("nonpositive local feature size encountered");
                const double f = r / l;
                if (f > rep.eps_star) {
                    rep.eps_star = f;
                    rep.witness = p;
                    rep.witness_component = int(ci);
                    rep.witness_param = std::fmod(st, comp.length());
                }
            }
        }
    }
    rep.eps_star_corrected = std::max(rep.eps_star_corrected, rep.eps_star);
    return rep;
}

// Largest d(p,S)/reach([a,b]) over consecutive tagged pairs a -> b, where the
// reach is the smallest lfs along the arc between them. Scans the same global
// grid as epsilon_star and assigns each grid point to its containing arc, so
// the two measures coincide whenever lfs is constant along a component.
inline SamplingReport rho_star(const CurveModel& curve, const SampleSet& sample,
                               double density) {
    if (sample.size() == 0) throw std::invalid_argument("empty sample");
    if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
    const samplingdetail::TaggedSamples groups =
        samplingdetail::group_tags(curve, sample, true);

    const samplingdetail::LfsProvider lfs = samplingdetail::make_lfs(curve, density);
    const KdTree tree(sample.points);

    SamplingReport rep;
    rep.density = density;
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const auto& v = groups.per_comp[ci];
        if (v.size() < 2)
            throw std::invalid_argument("component " + std::to_string(ci) +
                                        " needs at least 2 tagged samples");
        const CurveComponent& comp = curve.components[ci];
        const double len = comp.length();
        const std::size_t m = v.size();
        const std::size_t arcs = comp.closed() ? m : m - 1;

        // seed every arc's reach with the lfs at its two sample endpoints
        std::vector<double> min_l(arcs), max_r(arcs, 0.0), worst_s(arcs);
        std::vector<Point> worst_p(arcs);
        std::vector<double> end_l(m);
        for (std::size_t j = 0; j < m; ++j) end_l[j] = lfs(comp.point_at(v[j].first));
        for (std::size_t j = 0; j < arcs; ++j) {
            min_l[j] = std::min(end_l[j], end_l[(j + 1) % m]);
            worst_s[j] = v[j].first;
            worst_p[j] = comp.point_at(v[j].first);
        }

        const int n = std::max(4, int(std::ceil(len / density)));
        const double h = len / n;
        const int count = comp.closed() ? n : n + 1;
        std::size_t at = 0;  // samples passed so far; grid params only increase
        for (int i = 0; i < count; ++i) {
            const double s = std::min(i * h, len);
            while (at < m && v[at].first <= s) ++at;
            std::size_t j;
            if (at == 0 || at == m) {
                if (!comp.closed()) continue;  // outside every arc of an open curve
                j = m - 1;                     // the wrap arc
            } else {
                j = at - 1;
            }
            const Point p = comp.point_at(s);
            const double r = std::sqrt(tree.nearest(p).second);
            const double l = lfs(p);
            if (!(l > 0.0)) throw std::runtime_error("nonpositive local feature size encountered");
            min_l[j] = std::min(min_l[j], l);
            if (r > max_r[j]) {
                max_r[j] = r;
                worst_s[j] = s;
                worst_p[j] = p;
            }
        }

        // the same extremal probes epsilon_star uses on tagged samples
        for (std::size_t j = 0; j < arcs; ++j) {
            const double sa = v[j].first;
            const double sb = v[(j + 1) % m].first;
            const double arc = j + 1 < m ? sb - sa : len - sa + sb;
            if (!(arc > 0.0)) continue;
            const Point& a = sample.points[std::size_t(v[j].second)];
            const Point& b = sample.points[std::size_t(v[(j + 1) % m].second)];
            const double st = samplingdetail::arc_tie_param(comp, sa, arc, a, b);
            const Point p = comp.point_at(st);
            const double r = std::sqrt(tree.nearest(p).second);
            const double l = lfs(p);
            if (!(l > 0.0))
                throw std::runtime_error("nonpositive local feature size encountered");
            min_l[j] = std::min(min_l[j], l);
            if (r > max_r[j]) {
                max_r[j] = r;
                worst_s[j] = std::fmod(st, len);
                worst_p[j] = p;
            }
        }

        for (std::size_t j = 0; j < arcs; ++j) {
            if (!(min_l[j] > 0.0)) throw std::runtime_error("nonpositive reach encountered");
            const double f = max_r[j] / min_l[j];
            if (f > rep.eps_star) {
                rep.eps_star = f;
                rep.witness = worst_p[j];
                rep.witness_component = int(ci);
                rep.witness_param = worst_s[j];
            }
            const double b = min_l[j] > h ? (max_r[j] + h) / (min_l[j] - h)
                                          : std::numeric_limits<double>::infinity();
            rep.eps_star_corrected = std::max(rep.eps_star_corrected, b);
        }
    }
    rep.eps_star_corrected = std::max(rep.eps_star_corrected, rep.eps_star);
    return rep;
}

// Graph with an edge between parameter-consecutive samples on every component,
// wrapping around on closed components.
inline ReconGraph ground_truth_graph(const CurveModel& curve, const SampleSet& sample) {
    const samplingdetail::TaggedSamples groups =
        samplingdetail::group_tags(curve, sample, true);
    for (std::size_t ci = 0; ci < groups.per_comp.size(); ++ci)
        if (groups.per_comp[ci].size() < 3)
            throw std::invalid_argument("component " + std::to_string(ci) +
                                        " has fewer than 3 samples");
    ReconGraph g(sample.size());
    for (std::size_t ci = 0; ci < groups.per_comp.size(); ++ci) {
        const auto& v = groups.per_comp[ci];
        const std::size_t pairs = curve.components[ci].closed() ? v.size() : v.size() - 1;
        for (std::size_t j = 0; j < pairs; ++j)
            g.add_edge(v[j].second, v[(j + 1) % v.size()].second);
    }
    return g;
}

// Walks each component from a seeded start and keeps every gap's midpoint
// ratio under safety * target_eps, checking against the two gap endpoints
// only (a lower bound for d(p,S), hence conservative). The result is verified
// with epsilon_star before it is returned.
inline SampleSet greedy_sample(const CurveModel& curve, double target_eps, std::uint64_t seed,
                               double safety = 0.9) {
    if (!(target_eps > 0.0)) throw std::invalid_argument("target eps must be positive");
    if (!(safety > 0.0) || !(safety < 1.0))
        throw std::invalid_argument("safety factor must lie in (0, 1)");
    if (curve.components.empty()) throw std::invalid_argument("curve model has no components");

    const double total = curve.total_length();
    const double lfs_density = 1e-3 * total;
    const samplingdetail::LfsProvider lfs = samplingdetail::make_lfs(curve, lfs_density);

    std::mt19937_64 rng(seed);
    SampleSet out;
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const CurveComponent& comp = curve.components[ci];
        const double len = comp.length();
        const int grid = 1000;
        const double h = len / grid;
        const double u0 =
            comp.closed() ? len * (double(rng()) / double(std::uint64_t(-1))) : 0.0;

        PointList pts(std::size_t(grid) + 1);
        std::vector<double> thr(std::size_t(grid) + 1);
        for (int i = 0; i <= grid; ++i) {
            const double s = comp.closed() ? u0 + i * h : std::min(i * h, len);
            pts[std::size_t(i)] = comp.point_at(s);
            const double l = lfs(pts[std::size_t(i)]);
            if (!(l > 0.0)) throw std::runtime_error("nonpositive local feature size encountered");
            thr[std::size_t(i)] = safety * target_eps * l;
        }

        // Pair condition: every grid point strictly between two candidate
        // sample positions stays within threshold of the nearer endpoint.
        const auto gap_ok = [&](int a, int b) {
            for (int k = a + 1; k < b; ++k) {
                const double d = std::min(distance(pts[std::size_t(k)], pts[std::size_t(a)]),
                                          distance(pts[std::size_t(k)], pts[std::size_t(b)]));
                if (d >= thr[std::size_t(k)]) return false;
            }
            return true;
        };

        std::vector<int> placed{0};
        while (true) {
            const int last = placed.back();
            if (last >= grid) break;
            int next = last + 1;
            while (next < grid && gap_ok(last, next + 1)) ++next;
            if (next >= grid) {
                // closing gap: for closed components grid index `grid` is the
                // start again; for open ones it is the far endpoint
                next = grid;
            }
            placed.push_back(next);
        }
        if (comp.closed()) placed.pop_back();  // index `grid` duplicates index 0

        // Repair pass: subdivide any gap (including the wrap) that fails the
        // pair condition; infeasible when a gap shrinks to adjacent indices.
        std::vector<int> work;
        for (std::size_t j = 0; j < placed.size(); ++j) {
            const int a = placed[j];
            const int b = j + 1 < placed.size() ? placed[j + 1]
                                                : (comp.closed() ? grid : placed[j]);
            work.push_back(a);
            std::vector<std::pair<int, int>> stack{{a, b}};
            std::vector<int> inserted;
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                if (y - x <= 1 || gap_ok(x, y)) continue;
                const int mid = (x + y) / 2;
                if (mid == x || mid == y)
                    throw std::runtime_error("sampling target infeasible at this density");
                inserted.push_back(mid);
                stack.push_back({x, mid});
                stack.push_back({mid, y});
            }
            std::sort(inserted.begin(), inserted.end());
            for (int m : inserted) work.push_back(m);
        }
        placed = std::move(work);

        // Closed components need at least 3 samples for a meaningful cycle.
        while (comp.closed() && placed.size() < 3) {
            std::vector<int> denser;
            for (std::size_t j = 0; j < placed.size(); ++j) {
                const int a = placed[j];
                const int b = j + 1 < placed.size() ? placed[j + 1] : grid;
                denser.push_back(a);
                if (b - a > 1) denser.push_back((a + b) / 2);
            }
            placed = std::move(denser);
        }

        std::vector<std::pair<double, int>> params;
        for (int idx : placed) {
            double s = comp.closed() ? std::fmod(u0 + idx * h, len) : std::min(idx * h, len);
            params.push_back({s, idx});
        }
        std::sort(params.begin(), params.end());
        for (const auto& [s, idx] : params) {
            out.points.push_back(comp.point_at(s));
            out.tags.push_back(SampleTag{int(ci), s});
        }
    }

    const SamplingReport rep = epsilon_star(curve, out, 1e-3 * total);
    if (!(rep.eps_star < target_eps)) {
        std::ostringstream os;
        os << "sampling target infeasible at this density: eps_star=" << rep.eps_star;
        throw std::runtime_error(os.str());
    }
    return out;
}

}  // namespace recurve
