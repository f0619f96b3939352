#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Undirected graphs on sample indices: reconstruction outputs and ground
// truths, with the set operations the counterexample comparisons need.

namespace recurve {

struct ReconGraph {
    int n = 0;
    std::set<std::pair<int, int>> edges;
    bool flagged = false;                // some vertex had no compatible neighbor
    std::vector<int> flagged_vertices;   // which ones

    ReconGraph() = default;
    explicit ReconGraph(int vertices) : n(vertices) {}

    void add_edge(int i, int j) {
        if (i == j) throw std::invalid_argument("ReconGraph: self-loop");
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("ReconGraph: vertex index out of range");
        edges.insert({std::min(i, j), std::max(i, j)});
    }

    bool has_edge(int i, int j) const {
        return edges.count({std::min(i, j), std::max(i, j)}) > 0;
    }

    std::vector<int> degrees() const {
        std::vector<int> deg(n, 0);
        for (const auto& e : edges) {
            ++deg[e.first];
            ++deg[e.second];
        }
        return deg;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n);
        for (const auto& e : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        return adj;
    }

    int component_count() const {
        auto adj = adjacency();
        std::vector<char> seen(n, 0);
        std::vector<int> stack;
        int comps = 0;
        for (int s = 0; s < n; ++s) {
            if (seen[s]) continue;
            ++comps;
            seen[s] = 1;
            stack.push_back(s);
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int w : adj[v])
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
            }
        }
        return comps;
    }

    // True when every vertex has degree exactly 2 (a disjoint union of cycles).
    bool is_cycle_union() const {
        for (int d : degrees())
            if (d != 2) return false;
        return true;
    }
};

inline void require_same_order(const ReconGraph& g1, const ReconGraph& g2) {
    if (g1.n != g2.n) throw std::invalid_argument("graphs have different vertex counts");
}

inline bool graph_equal(const ReconGraph& g1, const ReconGraph& g2) {
    require_same_order(g1, g2);
    return g1.edges == g2.edges;
}

struct GraphDiff {
    std::vector<std::pair<int, int>> only_in_1;
    std::vector<std::pair<int, int>> only_in_2;
    bool empty() const { return only_in_1.empty() && only_in_2.empty(); }
};

inline GraphDiff graph_diff(const ReconGraph& g1, const ReconGraph& g2) {
    require_same_order(g1, g2);
    GraphDiff d;
    std::set_difference(g1.edges.begin(), g1.edges.end(), g2.edges.begin(), g2.edges.end(),
                        std::back_inserter(d.only_in_1));
    std::set_difference(g2.edges.begin(), g2.edges.end(), g1.edges.begin(), g1.edges.end(),
                        std::back_inserter(d.only_in_2));
    return d;
}

}  // namespace recurve
