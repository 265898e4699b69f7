#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphbandit/graph.hpp"

namespace graphbandit {

// Oblivious loss sequence: T rounds by N arms, entries in [0, 1]. Either a
// fully materialized matrix or Bernoulli draws generated on demand from a
// counter-based generator keyed by (seed, round, arm), so the matrix is
// identical no matter which policy reads it or in what order.
class LossMatrix {
public:
    static LossMatrix fixed(std::vector<std::vector<double>> values);
    static LossMatrix bernoulli(std::vector<double> means, std::int64_t T, std::uint64_t seed);

    std::int64_t horizon() const { return horizon_; }
    int num_actions() const { return n_; }

    // Loss of `arm` in round `t` (0-based round index).
    double at(std::int64_t t, int arm) const;
    std::vector<double> row(std::int64_t t) const;

    // Per-arm means when the matrix is stochastic; empty for fixed matrices.
    const std::optional<std::vector<double>>& means() const { return means_; }

private:
    LossMatrix() = default;

    std::int64_t horizon_ = 0;
    int n_ = 0;
    bool lazy_ = false;
    std::uint64_t seed_ = 0;
    std::vector<std::vector<double>> values_;
    std::optional<std::vector<double>> means_;
};

// A stochastic instance that is hard to learn without targeted exploration:
// one optimal arm inside a near-optimal target set, the rest of the set a gap
// behind it, and everything outside the set far worse.
struct HardInstanceSpec {
    VertexSet targets;            // near-optimal set, nonempty
    int optimal_arm = 0;          // must belong to targets
    double gap = 0.25;            // in (0, 1/2]
    std::uint64_t seed = 0;
};

// Bernoulli losses with means: optimal_arm -> 1/2 - gap, other targets -> 1/2,
// arms outside targets -> 1.
LossMatrix gen_hard_instance(const FeedbackGraph& g, const HardInstanceSpec& spec, std::int64_t T);

LossMatrix gen_fixed(std::vector<std::vector<double>> values);

// CSV with T rows and N comma-separated columns; an optional first header line
// (any line whose cells do not all parse as numbers) is skipped.
LossMatrix load_loss_csv(const std::string& path);

// One round of a finished run: the chosen arm and the full loss row of that
// round (all arms, not just the observed ones).
struct TraceStep {
    int chosen = 0;
    std::vector<double> losses;
};

enum class RegretKind { Realized, Pseudo };

struct RegretMode {
    RegretKind kind = RegretKind::Realized;
    std::vector<double> means; // required iff kind == Pseudo

    static RegretMode realized() { return {RegretKind::Realized, {}}; }
    static RegretMode pseudo_with_means(std::vector<double> m) {
        return {RegretKind::Pseudo, std::move(m)};
    }
};

// Final regret of the trace. Realized: cumulative chosen loss minus the best
// fixed arm's cumulative loss in hindsight. Pseudo: cumulative mean of the
// chosen arms minus horizon times the best mean.
double compute_regret(const std::vector<TraceStep>& trace, const RegretMode& mode);

} // namespace graphbandit
