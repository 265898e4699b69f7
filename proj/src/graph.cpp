#include "graphbandit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "graphbandit/errors.hpp"
#include "graphbandit/rng.hpp"

namespace graphbandit {

VertexSet::VertexSet(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet VertexSet::range(int n) {
    std::vector<int> m(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
    VertexSet s;
    s.members_ = std::move(m);
    return s;
}

void VertexSet::insert(int v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
}

bool VertexSet::contains(int v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

FeedbackGraph::FeedbackGraph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
    if (n <= 0) throw std::invalid_argument("graph must have at least one action");
    adj_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) adj_[static_cast<std::size_t>(i) * n + i] = 1;
    for (const auto& [from, to] : edges) {
        if (from < 0 || from >= n || to < 0 || to >= n)
            throw std::out_of_range("edge endpoint out of range");
        adj_[static_cast<std::size_t>(from) * n + to] = 1;
    }
}

VertexSet FeedbackGraph::out_neighborhood(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("action index out of range");
    std::vector<int> out;
    const std::uint8_t* r = row(i);
    for (int j = 0; j < n_; ++j)
        if (r[j]) out.push_back(j);
    return VertexSet(std::move(out));
}

VertexSet FeedbackGraph::in_neighborhood(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("action index out of range");
    std::vector<int> out;
    for (int j = 0; j < n_; ++j)
        if (adj_[static_cast<std::size_t>(j) * n_ + i]) out.push_back(j);
    return VertexSet(std::move(out));
}

std::vector<std::pair<int, int>> FeedbackGraph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j && adj_[static_cast<std::size_t>(i) * n_ + j]) out.emplace_back(i, j);
    return out;
}

FeedbackGraph gen_star(int n) {
    if (n <= 0) throw std::invalid_argument("gen_star: n must be positive");
    std::vector<std::pair<int, int>> edges;
    for (int leaf = 0; leaf + 1 < n; ++leaf) edges.emplace_back(n - 1, leaf);
    return FeedbackGraph(n, edges);
}

FeedbackGraph gen_edgeless(int n) { return FeedbackGraph(n, {}); }

FeedbackGraph gen_union_of_stars(const std::vector<std::pair<int, int>>& blocks) {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    for (const auto& [leaves, multiplicity] : blocks) {
        if (leaves < 0 || multiplicity <= 0)
            throw std::invalid_argument("gen_union_of_stars: bad block");
        for (int rep = 0; rep < multiplicity; ++rep) {
            int hub = n + leaves;
            for (int leaf = n; leaf < hub; ++leaf) edges.emplace_back(hub, leaf);
            n = hub + 1;
        }
    }
    if (n == 0) throw std::invalid_argument("gen_union_of_stars: no blocks");
    return FeedbackGraph(n, edges);
}

FeedbackGraph gen_random(int n, double p, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("gen_random: n must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_random: p must be in [0, 1]");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng::uniform01(seed, static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(j)) < p)
                edges.emplace_back(i, j);
    return FeedbackGraph(n, edges);
}

FeedbackGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw ConfigError("graph json: expected object with integer field 'n'");
    int n = j["n"].get<int>();
    std::vector<std::pair<int, int>> edges;
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw ConfigError("graph json: 'edges' must be an array");
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                !e[1].is_number_integer())
                throw ConfigError("graph json: each edge must be a pair of integers");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
    }
    try {
        return FeedbackGraph(n, edges);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("graph json: ") + e.what());
    }
}

nlohmann::json graph_to_json(const FeedbackGraph& g) {
    nlohmann::json j;
    j["n"] = g.num_actions();
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [from, to] : g.edge_list()) edges.push_back({from, to});
    j["edges"] = std::move(edges);
    return j;
}

FeedbackGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("graph file " + path + " is not valid json: " + e.what());
    }
    return graph_from_json(j);
}

void save_graph(const FeedbackGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write graph file: " + path);
    out << graph_to_json(g).dump(2) << "\n";
}

} // namespace graphbandit
