#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "graphbandit/graph.hpp"

namespace graphbandit {

// How a target set I splits into arms worth observing from inside I versus
// arms cheaper to observe from anywhere, with greedy dominating sets for each
// side and the stationary sub-distribution that induced the split.
struct SplitResult {
    VertexSet inside_targets;      // arms of I explored via dominators inside I
    VertexSet outside_targets;     // the rest of I, explored via dominators in V
    VertexSet inside_dominators;   // subset of I covering inside_targets
    VertexSet outside_dominators;  // subset of V covering outside_targets
    double gap = 0.0;              // grid gap value the split was chosen at
    std::vector<double> pi;        // minimizing sub-distribution (may sum < 1)
    double criterion_value = 0.0;  // max{ sqrt(|Din| T), |Dout|^(1/3) T^(2/3) }
};

double split_criterion(std::size_t inside_dominators, std::size_t outside_dominators,
                       std::int64_t T);

// min{ |Din|^(-1/2) T^(-1/2), |Dout|^(-1/3) T^(-2/3) }, empty sides ignored.
double exploration_rate(const SplitResult& split, std::int64_t T);

struct QFixedResult {
    double value = 0.0;
    std::vector<double> pi; // zero vector when the program is infeasible
    bool feasible = false;
};

// Cheapest observation budget for separating gap-delta arms inside I: the
// covering program min T*(delta*sum_I pi + sum_notI pi) subject to
// T*(G^T pi)_j >= 1/delta^2 for j in I and sum pi <= 1, capped at T*delta.
// eps <= 0 selects the default tolerance delta^2/(n^4 T^2), floored at 1e-12.
QFixedResult q_complexity_fixed_delta(const FeedbackGraph& g, const VertexSet& I, double delta,
                                      std::int64_t T, double eps = 0.0);

// Geometric gap grid {2^-1, ..., 2^-(floor(log2(n T)) + 1)}.
std::vector<double> delta_grid(int n, std::int64_t T);

// Maximum of q_complexity_fixed_delta over the gap grid.
double q_complexity(const FeedbackGraph& g, const VertexSet& I, std::int64_t T, double eps = 0.0);

struct RSetResult {
    double value = 0.0;
    VertexSet argmin; // a subset J of I attaining the value
};

// min over J subseteq I of max{ sqrt(delta_I(J) T), delta_V(I\J)^(1/3) T^(2/3) }
// with delta(empty) = 0; branches with no dominating set are skipped.
RSetResult r_complexity_set(const FeedbackGraph& g, const VertexSet& I, std::int64_t T,
                            int guard = 10);

// max over I subseteq V of r_complexity_set. The parallel kernel and the
// serial reference compute identical values.
double r_complexity(const FeedbackGraph& g, std::int64_t T, int guard = 10);
double r_complexity_serial(const FeedbackGraph& g, std::int64_t T, int guard = 10);

// max over nonempty I subseteq V of q_complexity (same guard as r_complexity).
double q_complexity_max(const FeedbackGraph& g, std::int64_t T, double eps = 0.0, int guard = 10);
double q_complexity_max_serial(const FeedbackGraph& g, std::int64_t T, double eps = 0.0,
                               int guard = 10);

// Scans the gap grid, splits I at each feasible gap by comparing in-set
// observation mass against total observation mass, and keeps the gap whose
// greedy dominating sets minimize the criterion (ties go to the larger gap).
// If every grid point is infeasible the whole of I is explored from inside.
SplitResult split_proxies(const FeedbackGraph& g, const VertexSet& I, std::int64_t T,
                          double eps = 0.0);

enum class Regime { LargeT, SmallT };

struct ComplexityReport {
    int alpha = 0;        // independence number (exact or greedy lower bound)
    int delta = 0;        // dominating number of V (exact or greedy upper bound)
    double q_star = 0.0;
    double r_star = 0.0;
    Regime regime = Regime::SmallT; // LargeT iff T >= alpha^3
    bool exact = true;
};

struct AnalyzeOptions {
    bool approximate = false; // force sampling mode regardless of size
    int samples = 8;          // independent-set seeds tried in approximate mode
    std::uint64_t seed = 0;
    int exact_guard = 10;     // exact enumeration allowed up to this many actions
};

ComplexityReport analyze(const FeedbackGraph& g, std::int64_t T, const AnalyzeOptions& opts = {});

nlohmann::json report_to_json(const ComplexityReport& report);

} // namespace graphbandit
