#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "graphbandit/complexity.hpp"
#include "graphbandit/distribution.hpp"
#include "graphbandit/graph.hpp"

namespace graphbandit {

// One round of feedback: the loss of every action revealed by playing
// `chosen`, i.e. exactly the out-neighborhood of the chosen action.
struct Feedback {
    int chosen = 0;
    std::vector<std::pair<int, double>> observed; // (action, loss), ascending by action
};

// Dyadic two-level bucketing of the action set: actions are grouped by the
// dyadic level of their probability, each level is then subdivided by the
// dyadic level of the action's degree within that level (degrees are taken
// on the whole level before subdividing). Probabilities at or below 2^-K
// fall into the tail bucket.
struct Partition {
    int K = 1; // probability levels
    int L = 1; // degree sublevels
    std::vector<VertexSet> buckets; // K*L entries, index (k-1)*L + (l-1)
    VertexSet tail;

    int bucket_index(int k, int l) const { return (k - 1) * L + (l - 1); }
};

Partition partition_actions(const ActionDistribution& q, const FeedbackGraph& g);

// Mixture of per-bucket exploration: uniform over the bucket's outside
// dominators when it has any, uniform over all actions for empty buckets or
// buckets whose split needs no outside dominators, plus one uniform component;
// all KL+1 components weighted equally. proxies[i] pairs with buckets[i] and
// must be non-null for every nonempty bucket.
ActionDistribution exploration_distribution(const Partition& partition,
                                            const std::vector<const SplitResult*>& proxies, int n);

// P_i = sum of p_j over in-neighbors j of i, for every action i.
std::vector<double> observation_probabilities(const FeedbackGraph& g, const ActionDistribution& p);

// Smallest integer at or above T^(2/3), computed exactly.
std::int64_t ceil_two_thirds_power(std::int64_t T);

class Policy {
public:
    virtual ~Policy() = default;
    // Distribution to sample the next action from. Must be called exactly once
    // per round, before update().
    virtual ActionDistribution next_distribution() = 0;
    // Feeds back the observed losses together with the distribution actually
    // used for sampling this round.
    virtual void update(const Feedback& fb, const ActionDistribution& p_used) = 0;
};

// Exponential weights over importance-weighted loss estimates with an
// adaptive learning rate and an explicit exploration mixture driven by
// per-bucket dominating-set splits. The learning rate is the running minimum
// of per-bucket rates (seeded with T^-1/2); each round buckets are formed
// with the provisional rate, the round's bucket rates then finalize it, and
// the mixing weight is gamma = min(1/(eta T), 1/2).
class Exp3Ex : public Policy {
public:
    struct Options {
        bool cache_splits = true;
        double lp_eps = 0.0; // <= 0 selects the per-gap default
    };

    // Diagnostics for the most recent round.
    struct Round {
        ActionDistribution q, u, p;
        double eta = 0.0;
        double gamma = 0.0;
        Partition partition;
    };

    Exp3Ex(const FeedbackGraph& g, std::int64_t T);
    Exp3Ex(const FeedbackGraph& g, std::int64_t T, Options opts);

    ActionDistribution next_distribution() override;
    void update(const Feedback& fb, const ActionDistribution& p_used) override;

    const Round& last_round() const { return round_; }
    double eta() const { return eta_; }
    std::int64_t round_number() const { return t_; }
    const std::vector<double>& cumulative_loss_estimates() const { return cum_loss_est_; }

private:
    FeedbackGraph g_; // by value: policies outlive the graphs they are built from
    std::int64_t horizon_;
    Options opts_;
    std::int64_t t_ = 1;
    std::vector<double> cum_loss_est_;
    double eta_;
    Round round_;
    std::map<std::vector<int>, SplitResult> split_cache_;
};

// Exponential weights with the same importance-weighted estimator but no
// exploration mixture, at the fixed rate sqrt(ln(n) / (alpha T)) where alpha
// is the independence number (exact when small, greedy lower bound otherwise).
class Exp3Set : public Policy {
public:
    Exp3Set(const FeedbackGraph& g, std::int64_t T);

    ActionDistribution next_distribution() override;
    void update(const Feedback& fb, const ActionDistribution& p_used) override;

    double learning_rate() const { return eta_; }

private:
    FeedbackGraph g_;
    std::vector<double> cum_loss_est_;
    double eta_;
};

// Plays a hub whose out-neighborhood is the whole action set for ceil(T^(2/3))
// rounds, then commits to the smallest-index action with the lowest empirical
// mean of the losses observed during exploration.
class EtcHub : public Policy {
public:
    EtcHub(const FeedbackGraph& g, std::int64_t T, int hub);

    ActionDistribution next_distribution() override;
    void update(const Feedback& fb, const ActionDistribution& p_used) override;

    std::int64_t exploration_rounds() const { return explore_rounds_; }
    std::optional<int> committed_arm() const { return committed_; }

private:
    FeedbackGraph g_;
    int hub_;
    std::int64_t explore_rounds_;
    std::int64_t t_ = 1;
    std::vector<double> loss_sums_;
    std::vector<std::int64_t> loss_counts_;
    std::optional<int> committed_;
};

} // namespace graphbandit
