#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace graphbandit {

// Sorted set of action indices. Kept as a sorted unique vector so iteration
// order is deterministic and set algebra stays cheap at desk scale.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<int> members);

    // {0, 1, ..., n-1}
    static VertexSet range(int n);

    void insert(int v);
    bool contains(int v) const;
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    const std::vector<int>& members() const { return members_; }

    std::vector<int>::const_iterator begin() const { return members_.begin(); }
    std::vector<int>::const_iterator end() const { return members_.end(); }

    bool operator==(const VertexSet&) const = default;

private:
    std::vector<int> members_;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);

// Directed feedback graph over n actions with dense adjacency. Self-loops are
// mandatory (playing an action always reveals its own loss) and are added by
// the constructor whether or not the edge list mentions them.
class FeedbackGraph {
public:
    FeedbackGraph(int n, const std::vector<std::pair<int, int>>& edges);

    int num_actions() const { return n_; }
    bool has_edge(int from, int to) const { return adj_[static_cast<std::size_t>(from) * n_ + to] != 0; }

    // Row-major n*n adjacency, adjacency()[i*n + j] == 1 iff edge (i, j).
    const std::vector<std::uint8_t>& adjacency() const { return adj_; }
    const std::uint8_t* row(int i) const { return adj_.data() + static_cast<std::size_t>(i) * n_; }

    // Actions whose loss is revealed when playing i (always contains i).
    VertexSet out_neighborhood(int i) const;
    // Actions whose play reveals the loss of i (always contains i).
    VertexSet in_neighborhood(int i) const;

    // Edges excluding self-loops, sorted lexicographically.
    std::vector<std::pair<int, int>> edge_list() const;

private:
    int n_ = 0;
    std::vector<std::uint8_t> adj_;
};

FeedbackGraph gen_star(int n);     // hub is index n-1, edges hub -> each leaf
FeedbackGraph gen_edgeless(int n); // self-loops only
// One star per (leaves, multiplicity) block; within a block each star lays out
// its leaves first and its hub last.
FeedbackGraph gen_union_of_stars(const std::vector<std::pair<int, int>>& blocks);
// Each ordered pair (i, j), i != j, is an edge independently with probability p.
FeedbackGraph gen_random(int n, double p, std::uint64_t seed);

// JSON format: {"n": <int>, "edges": [[i, j], ...]} with self-loops implied;
// explicit self-loops in the input are tolerated and never emitted.
FeedbackGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const FeedbackGraph& g);
FeedbackGraph load_graph(const std::string& path);
void save_graph(const FeedbackGraph& g, const std::string& path);

} // namespace graphbandit
