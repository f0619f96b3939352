#pragma once

#include <stdexcept>
#include <vector>

#include <recurve/geometry.hpp>

namespace recurve {

// A (component id, arc-length parameter) tag locating a sample on its curve.
struct SampleTag {
    int component = 0;
    double param = 0.0;

    bool operator==(const SampleTag&) const = default;
};

struct SampleSet {
    PointList points;
    std::vector<SampleTag> tags;  // empty, or one tag per point

    SampleSet() = default;
    explicit SampleSet(PointList pts) : points(std::move(pts)) {}
    SampleSet(PointList pts, std::vector<SampleTag> t) : points(std::move(pts)), tags(std::move(t)) {
        if (!tags.empty() && tags.size() != points.size())
            throw std::invalid_argument("SampleSet: tag count does not match point count");
    }

    int size() const { return static_cast<int>(points.size()); }
    bool has_tags() const { return !tags.empty(); }
};

}  // namespace recurve
