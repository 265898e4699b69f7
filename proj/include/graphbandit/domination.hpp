#pragma once

#include <cstdint>
#include <optional>

#include "graphbandit/graph.hpp"

namespace graphbandit {

// True iff every b in B has an in-neighbor in D (i.e. B is covered by the
// out-neighborhoods of D).
bool dominates(const FeedbackGraph& g, const VertexSet& D, const VertexSet& B);

// Greedy cover: repeatedly pick the v in A whose out-neighborhood covers the
// most not-yet-covered members of B, ties broken toward the smallest index.
// Throws DominationError if A cannot dominate B.
VertexSet greedy_dominating_set(const FeedbackGraph& g, const VertexSet& A, const VertexSet& B);

// Minimum size of a subset of A dominating B, via memoized set-cover search
// over subsets of A. Returns nullopt when no dominating subset exists.
// Guards: |A| <= guard (default 20) and |B| <= 64.
std::optional<int> exact_dominating_number(const FeedbackGraph& g, const VertexSet& A,
                                           const VertexSet& B, int guard = 20);

// Maximum independent set size of the undirected skeleton: i != j are
// independent iff neither edge (i, j) nor (j, i) exists. Guard: n <= guard.
int exact_independence_number(const FeedbackGraph& g, int guard = 24);

// Greedy independent set on the undirected skeleton, scanning vertices in
// ascending index order (seeded overload scans in a shuffled order). The
// result is a lower bound on the independence number.
VertexSet greedy_independent_set(const FeedbackGraph& g);
VertexSet greedy_independent_set(const FeedbackGraph& g, std::uint64_t seed);

} // namespace graphbandit
