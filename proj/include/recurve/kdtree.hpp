#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <recurve/geometry.hpp>

// Exact nearest-neighbor search: results are bit-identical to a brute-force
// scan, with equidistant ties resolved toward the lowest original index.

namespace recurve {

class KdTree {
  public:
    static constexpr int kLeafSize = 8;

    KdTree() = default;
    explicit KdTree(const PointList& pts) { build(pts); }

    void build(const PointList& pts) {
        n_ = static_cast<int>(pts.size());
        nodes_.clear();
        flat_.clear();
        orig_.clear();
        root_ = -1;
        if (n_ == 0) return;
        dim_ = pts[0].dim;
        for (const Point& p : pts)
            if (p.dim != dim_) throw std::invalid_argument("KdTree: mixed point dimensions");
        std::vector<int> perm(n_);
        std::iota(perm.begin(), perm.end(), 0);
        nodes_.reserve(2 * n_ / kLeafSize + 4);
        root_ = build_rec(perm, pts, 0, n_);
        flat_.resize(static_cast<size_t>(n_) * dim_);
        orig_.resize(n_);
        for (int i = 0; i < n_; ++i) {
            orig_[i] = perm[i];
            for (int k = 0; k < dim_; ++k) flat_[static_cast<size_t>(i) * dim_ + k] = pts[perm[i]][k];
        }
    }

    int size() const { return n_; }
    int dim() const { return dim_; }

    // Returns {original index, squared distance}; {-1, inf} when empty or
    // everything is excluded.
    std::pair<int, double> nearest(const Point& q, int exclude = -1) const {
        double bestD2 = std::numeric_limits<double>::infinity();
        int bestIdx = -1;
        if (root_ >= 0) search(root_, q, exclude, bestD2, bestIdx);
        return {bestIdx, bestD2};
    }

    double nearest_dist2(const Point& q) const { return nearest(q).second; }

    // All original indices with squared distance <= r2 from q.
    void within(const Point& q, double r2, std::vector<int>& out) const {
        out.clear();
        if (root_ >= 0) collect(root_, q, r2, out);
    }

  private:
    struct Node {
        double split = 0.0;
        int axis = 0;
        int left = -1, right = -1;
        int begin = 0, end = 0;
    };

    int dim_ = 2;
    int n_ = 0;
    int root_ = -1;
    std::vector<Node> nodes_;
    std::vector<double> flat_;
    std::vector<int> orig_;

    int build_rec(std::vector<int>& perm, const PointList& pts, int b, int e) {
        Node nd;
        nd.begin = b;
        nd.end = e;
        if (e - b <= kLeafSize) {
            nodes_.push_back(nd);
            return static_cast<int>(nodes_.size()) - 1;
        }
        int axis = 0;
        double widest = -1.0;
        for (int k = 0; k < dim_; ++k) {
            double lo = pts[perm[b]][k], hi = lo;
            for (int i = b + 1; i < e; ++i) {
                double v = pts[perm[i]][k];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > widest) {
                widest = hi - lo;
                axis = k;
            }
        }
        int mid = (b + e) / 2;
        std::nth_element(perm.begin() + b, perm.begin() + mid, perm.begin() + e,
                         [&](int i, int j) {
                             double u = pts[i][axis], v = pts[j][axis];
                             return u < v || (u == v && i < j);
                         });
        nd.axis = axis;
        nd.split = pts[perm[mid]][axis];
        int li = build_rec(perm, pts, b, mid);
        int ri = build_rec(perm, pts, mid, e);
        nd.left = li;
        nd.right = ri;
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }

    void search(int ni, const Point& q, int exclude, double& bestD2, int& bestIdx) const {
        const Node& nd = nodes_[ni];
        if (nd.left < 0) {
            for (int i = nd.begin; i < nd.end; ++i) {
                const double* p = &flat_[static_cast<size_t>(i) * dim_];
                double d2 = 0.0;
                for (int k = 0; k < dim_; ++k) {
                    double d = p[k] - q[k];
                    d2 += d * d;
                }
                int oi = orig_[i];
                if (oi == exclude) continue;
                if (d2 < bestD2 || (d2 == bestD2 && oi < bestIdx)) {
                    bestD2 = d2;
                    bestIdx = oi;
                }
            }
            return;
        }
        double diff = q[nd.axis] - nd.split;
        int first = diff < 0.0 ? nd.left : nd.right;
        int second = diff < 0.0 ? nd.right : nd.left;
        search(first, q, exclude, bestD2, bestIdx);
        // An equal offset can still hide an equidistant lower-index tie.
        if (diff * diff <= bestD2) search(second, q, exclude, bestD2, bestIdx);
    }

    void collect(int ni, const Point& q, double r2, std::vector<int>& out) const {
        const Node& nd = nodes_[ni];
        if (nd.left < 0) {
            for (int i = nd.begin; i < nd.end; ++i) {
                const double* p = &flat_[static_cast<size_t>(i) * dim_];
                double d2 = 0.0;
                for (int k = 0; k < dim_; ++k) {
                    double d = p[k] - q[k];
                    d2 += d * d;
                }
                if (d2 <= r2) out.push_back(orig_[i]);
            }
            return;
        }
        double diff = q[nd.axis] - nd.split;
        if (diff < 0.0) {
            collect(nd.left, q, r2, out);
            if (diff * diff <= r2) collect(nd.right, q, r2, out);
        } else {
            collect(nd.right, q, r2, out);
            if (diff * diff <= r2) collect(nd.left, q, r2, out);
        }
    }
};

}  // namespace recurve
