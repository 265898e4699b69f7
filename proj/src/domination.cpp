#include "graphbandit/domination.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "graphbandit/errors.hpp"
#include "graphbandit/rng.hpp"

namespace graphbandit {

namespace {

// Bitmask over positions of B (not vertex ids) covered by v's out-neighborhood.
std::vector<std::uint64_t> cover_masks(const FeedbackGraph& g, const VertexSet& A,
                                       const VertexSet& B) {
    std::vector<std::uint64_t> covers;
    covers.reserve(A.size());
    for (int v : A) {
        std::uint64_t m = 0;
        const std::uint8_t* r = g.row(v);
        for (std::size_t pos = 0; pos < B.size(); ++pos)
            if (r[B.members()[pos]]) m |= 1ull << pos;
        covers.push_back(m);
    }
    return covers;
}

} // namespace

bool dominates(const FeedbackGraph& g, const VertexSet& D, const VertexSet& B) {
    for (int b : B) {
        bool covered = false;
        for (int v : D)
            if (g.has_edge(v, b)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

VertexSet greedy_dominating_set(const FeedbackGraph& g, const VertexSet& A, const VertexSet& B) {
    const std::size_t words = (B.size() + 63) / 64;
    std::vector<std::uint64_t> remaining(words, 0);
    for (std::size_t pos = 0; pos < B.size(); ++pos) remaining[pos / 64] |= 1ull << (pos % 64);

    // Per-candidate cover masks over B positions, in 64-bit blocks.
    std::vector<std::vector<std::uint64_t>> covers(A.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t a = 0; a < A.size(); ++a) {
        const std::uint8_t* r = g.row(A.members()[a]);
        for (std::size_t pos = 0; pos < B.size(); ++pos)
            if (r[B.members()[pos]]) covers[a][pos / 64] |= 1ull << (pos % 64);
    }

    std::vector<int> picked;
    std::size_t uncovered = B.size();
    while (uncovered > 0) {
        std::size_t best = 0;
        int best_gain = -1;
        for (std::size_t a = 0; a < A.size(); ++a) {
            int gain = 0;
            for (std::size_t w = 0; w < words; ++w)
                gain += std::popcount(covers[a][w] & remaining[w]);
            if (gain > best_gain) {
                best_gain = gain;
                best = a;
            }
        }
        if (best_gain <= 0) throw DominationError("candidate set cannot dominate target set");
        picked.push_back(A.members()[best]);
        for (std::size_t w = 0; w < words; ++w) remaining[w] &= ~covers[best][w];
        uncovered -= static_cast<std::size_t>(best_gain);
    }
    return VertexSet(std::move(picked));
}

std::optional<int> exact_dominating_number(const FeedbackGraph& g, const VertexSet& A,
                                           const VertexSet& B, int guard) {
    if (B.empty()) return 0;
    if (static_cast<int>(A.size()) > guard)
        throw SizeGuardError("exact_dominating_number: |A| exceeds size guard");
    if (B.size() > 64) throw SizeGuardError("exact_dominating_number: |B| exceeds 64");

    const std::vector<std::uint64_t> covers = cover_masks(g, A, B);
    const std::uint64_t full = B.size() == 64 ? ~0ull : (1ull << B.size()) - 1;
    std::uint64_t reachable = 0;
    for (std::uint64_t c : covers) reachable |= c;
    if (reachable != full) return std::nullopt;

    // Per-position candidate lists, so the search always branches on the
    // element with the fewest covering candidates.
    std::vector<std::vector<std::size_t>> candidates(B.size());
    for (std::size_t a = 0; a < covers.size(); ++a)
        for (std::size_t pos = 0; pos < B.size(); ++pos)
            if (covers[a] & (1ull << pos)) candidates[pos].push_back(a);

    std::unordered_map<std::uint64_t, int> memo;
    auto solve = [&](auto&& self, std::uint64_t mask) -> int {
        if (mask == 0) return 0;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        std::size_t pick = 0;
        std::size_t fewest = SIZE_MAX;
        for (std::uint64_t m = mask; m;) {
            auto pos = static_cast<std::size_t>(std::countr_zero(m));
            m &= m - 1;
            if (candidates[pos].size() < fewest) {
                fewest = candidates[pos].size();
                pick = pos;
            }
        }
        int best = static_cast<int>(A.size()) + 1;
        for (std::size_t a : candidates[pick])
            best = std::min(best, 1 + self(self, mask & ~covers[a]));
        memo.emplace(mask, best);
        return best;
    };
    return solve(solve, full);
}

int exact_independence_number(const FeedbackGraph& g, int guard) {
    const int n = g.num_actions();
    if (n > guard) throw SizeGuardError("exact_independence_number: n exceeds size guard");

    // Undirected skeleton: i and j conflict if either directed edge exists.
    std::vector<std::uint64_t> nb(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (g.has_edge(i, j) || g.has_edge(j, i)))
                nb[static_cast<std::size_t>(i)] |= 1ull << j;

    std::unordered_map<std::uint64_t, int> memo;
    auto solve = [&](auto&& self, std::uint64_t open) -> int {
        if (open == 0) return 0;
        auto it = memo.find(open);
        if (it != memo.end()) return it->second;
        // Branch on the open vertex with the most open conflicts.
        int pick = -1, max_deg = -1;
        for (std::uint64_t m = open; m;) {
            int v = std::countr_zero(m);
            m &= m - 1;
            int deg = std::popcount(nb[static_cast<std::size_t>(v)] & open);
            if (deg > max_deg) {
                max_deg = deg;
                pick = v;
            }
        }
        if (max_deg == 0) {
            // All remaining vertices are pairwise independent.
            int result = std::popcount(open);
            memo.emplace(open, result);
            return result;
        }
        std::uint64_t bit = 1ull << pick;
        int with = 1 + self(self, open & ~(bit | nb[static_cast<std::size_t>(pick)]));
        int without = self(self, open & ~bit);
        int best = std::max(with, without);
        memo.emplace(open, best);
        return best;
    };
    return solve(solve, n == 64 ? ~0ull : (1ull << n) - 1);
}

namespace {

VertexSet greedy_independent_in_order(const FeedbackGraph& g, const std::vector<int>& order) {
    std::vector<int> picked;
    std::vector<char> blocked(static_cast<std::size_t>(g.num_actions()), 0);
    for (int v : order) {
        if (blocked[static_cast<std::size_t>(v)]) continue;
        picked.push_back(v);
        blocked[static_cast<std::size_t>(v)] = 1;
        for (int j = 0; j < g.num_actions(); ++j)
            if (g.has_edge(v, j) || g.has_edge(j, v)) blocked[static_cast<std::size_t>(j)] = 1;
    }
    return VertexSet(std::move(picked));
}

} // namespace

VertexSet greedy_independent_set(const FeedbackGraph& g) {
    std::vector<int> order(static_cast<std::size_t>(g.num_actions()));
    for (int i = 0; i < g.num_actions(); ++i) order[static_cast<std::size_t>(i)] = i;
    return greedy_independent_in_order(g, order);
}

VertexSet greedy_independent_set(const FeedbackGraph& g, std::uint64_t seed) {
    std::vector<int> order(static_cast<std::size_t>(g.num_actions()));
    for (int i = 0; i < g.num_actions(); ++i) order[static_cast<std::size_t>(i)] = i;
    // Fisher-Yates driven by the counter rng so the order is a pure function
    // of the seed.
    for (std::size_t i = order.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng::uniform01(seed, 0x1d5, i) * static_cast<double>(i));
        if (j >= i) j = i - 1;
        std::swap(order[i - 1], order[j]);
    }
    return greedy_independent_in_order(g, order);
}

} // namespace graphbandit
