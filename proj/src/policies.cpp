#include "graphbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphbandit/domination.hpp"

namespace graphbandit {

namespace {

// Smallest k with 2^k >= n^power, exactly.
int ceil_log2_power(int n, int power) {
    unsigned __int128 target = 1;
    for (int e = 0; e < power; ++e) target *= static_cast<unsigned>(n);
    int k = 0;
    unsigned __int128 value = 1;
    while (value < target) {
        value <<= 1;
        ++k;
    }
    return k;
}

ActionDistribution weights_distribution(const std::vector<double>& cum_loss, double eta) {
    // Exponential weights exp(-eta * L_i) normalized; shifting by the minimum
    // keeps every exponent at or below zero. The uniform prior factor cancels.
    const double shift = *std::min_element(cum_loss.begin(), cum_loss.end());
    ActionDistribution q;
    q.probs.resize(cum_loss.size());
    double total = 0.0;
    for (std::size_t i = 0; i < cum_loss.size(); ++i) {
        q.probs[i] = std::exp(-eta * (cum_loss[i] - shift));
        total += q.probs[i];
    }
    for (double& p : q.probs) p /= total;
    return q;
}

void validate_feedback(const FeedbackGraph& g, const Feedback& fb) {
    const int n = g.num_actions();
    if (fb.chosen < 0 || fb.chosen >= n) throw std::out_of_range("feedback: chosen out of range");
    const std::uint8_t* row = g.row(fb.chosen);
    std::size_t pos = 0;
    for (int j = 0; j < n; ++j) {
        if (!row[j]) continue;
        if (pos >= fb.observed.size() || fb.observed[pos].first != j)
            throw std::invalid_argument("feedback: observed set must equal the out-neighborhood");
        const double loss = fb.observed[pos].second;
        if (!(loss >= 0.0 && loss <= 1.0))
            throw std::invalid_argument("feedback: loss outside [0, 1]");
        ++pos;
    }
    if (pos != fb.observed.size())
        throw std::invalid_argument("feedback: observed set must equal the out-neighborhood");
}

} // namespace

Partition partition_actions(const ActionDistribution& q, const FeedbackGraph& g) {
    const int n = g.num_actions();
    if (q.size() != n) throw std::invalid_argument("partition: distribution size mismatch");
    if (!is_full_distribution(q)) throw std::invalid_argument("partition: q is not a distribution");

    Partition part;
    part.K = std::max(1, ceil_log2_power(n, 5));
    part.L = std::max(1, ceil_log2_power(n, 1));
    part.buckets.assign(static_cast<std::size_t>(part.K) * part.L, VertexSet{});

    // Probability levels: level k collects q_i in (2^-k, 2^-k+1]; anything at
    // or below 2^-K is tail.
    std::vector<std::vector<int>> levels(static_cast<std::size_t>(part.K) + 1);
    std::vector<int> tail;
    for (int i = 0; i < n; ++i) {
        const double qi = q.probs[static_cast<std::size_t>(i)];
        int level = 0;
        for (int k = 1; k <= part.K; ++k)
            if (qi > std::ldexp(1.0, -k)) {
                level = k;
                break;
            }
        if (level == 0)
            tail.push_back(i);
        else
            levels[static_cast<std::size_t>(level)].push_back(i);
    }
    part.tail = VertexSet(std::move(tail));

    // Degree sublevels, computed against the whole probability level: sublevel
    // l collects degrees in [n 2^-l, n 2^-l+1), with degree n kept in l = 1.
    for (int k = 1; k <= part.K; ++k) {
        const std::vector<int>& level = levels[static_cast<std::size_t>(k)];
        if (level.empty()) continue;
        std::vector<std::vector<int>> sublevels(static_cast<std::size_t>(part.L) + 1);
        for (int i : level) {
            const std::uint8_t* row = g.row(i);
            std::int64_t deg = 0;
            for (int j : level) deg += row[j];
            int l = part.L;
            for (int cand = 1; cand <= part.L; ++cand)
                if ((deg << cand) >= n) {
                    l = cand;
                    break;
                }
            sublevels[static_cast<std::size_t>(l)].push_back(i);
        }
        for (int l = 1; l <= part.L; ++l)
            if (!sublevels[static_cast<std::size_t>(l)].empty())
                part.buckets[static_cast<std::size_t>(part.bucket_index(k, l))] =
                    VertexSet(std::move(sublevels[static_cast<std::size_t>(l)]));
    }
    return part;
}

ActionDistribution exploration_distribution(const Partition& partition,
                                            const std::vector<const SplitResult*>& proxies,
                                            int n) {
    if (proxies.size() != partition.buckets.size())
        throw std::invalid_argument("exploration: proxies must align with buckets");
    const double component = 1.0 / (static_cast<double>(partition.K) * partition.L + 1.0);
    ActionDistribution u;
    u.probs.assign(static_cast<std::size_t>(n), component / n);
    for (std::size_t b = 0; b < partition.buckets.size(); ++b) {
        const VertexSet& bucket = partition.buckets[b];
        if (bucket.empty()) {
            for (double& p : u.probs) p += component / n;
            continue;
        }
        if (proxies[b] == nullptr)
            throw std::invalid_argument("exploration: missing split for nonempty bucket");
        const VertexSet& targets = proxies[b]->outside_dominators;
        if (targets.empty()) {
            for (double& p : u.probs) p += component / n;
        } else {
            const double share = component / static_cast<double>(targets.size());
            for (int v : targets) u.probs[static_cast<std::size_t>(v)] += share;
        }
    }
    return u;
}

std::vector<double> observation_probabilities(const FeedbackGraph& g, const ActionDistribution& p) {
    const int n = g.num_actions();
    if (p.size() != n) throw std::invalid_argument("observation probabilities: size mismatch");
    std::vector<double> P(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const double pj = p.probs[static_cast<std::size_t>(j)];
        if (pj == 0.0) continue;
        const std::uint8_t* row = g.row(j);
        for (int i = 0; i < n; ++i)
            if (row[i]) P[static_cast<std::size_t>(i)] += pj;
    }
    return P;
}

std::int64_t ceil_two_thirds_power(std::int64_t T) {
    // Smallest m with m^3 >= T^2, i.e. ceil(T^(2/3)), corrected around the
    // floating-point estimate so the result is integer-exact.
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    const auto t2 = static_cast<__int128>(T) * T;
    auto m = static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(T), 2.0 / 3.0)));
    m = std::max<std::int64_t>(m, 1);
    while (static_cast<__int128>(m) * m * m < t2) ++m;
    while (m > 1 && static_cast<__int128>(m - 1) * (m - 1) * (m - 1) >= t2) --m;
    return m;
}

Exp3Ex::Exp3Ex(const FeedbackGraph& g, std::int64_t T) : Exp3Ex(g, T, Options{}) {}

Exp3Ex::Exp3Ex(const FeedbackGraph& g, std::int64_t T, Options opts)
    : g_(g), horizon_(T), opts_(opts) {
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    cum_loss_est_.assign(static_cast<std::size_t>(g.num_actions()), 0.0);
    eta_ = 1.0 / std::sqrt(static_cast<double>(T));
}

ActionDistribution Exp3Ex::next_distribution() {
    const int n = g_.num_actions();
    // Weights use the provisional rate: the running minimum over previous
    // rounds. This round's buckets are formed from those weights and their
    // rates then finalize eta for the mixing step below.
    ActionDistribution q = weights_distribution(cum_loss_est_, eta_);
    Partition partition = partition_actions(q, g_);

    std::size_t nonempty = 0;
    for (const VertexSet& bucket : partition.buckets) nonempty += bucket.empty() ? 0 : 1;
    std::vector<SplitResult> fresh;
    fresh.reserve(opts_.cache_splits ? 0 : nonempty);
    std::vector<const SplitResult*> proxies(partition.buckets.size(), nullptr);
    double eta = eta_;
    for (std::size_t b = 0; b < partition.buckets.size(); ++b) {
        const VertexSet& bucket = partition.buckets[b];
        if (bucket.empty()) continue;
        const SplitResult* split;
        if (opts_.cache_splits) {
            auto it = split_cache_.find(bucket.members());
            if (it == split_cache_.end())
                it = split_cache_
                         .emplace(bucket.members(),
                                  split_proxies(g_, bucket, horizon_, opts_.lp_eps))
                         .first;
            split = &it->second;
        } else {
            fresh.push_back(split_proxies(g_, bucket, horizon_, opts_.lp_eps));
            split = &fresh.back();
        }
        proxies[b] = split;
        eta = std::min(eta, exploration_rate(*split, horizon_));
    }
    eta_ = eta;

    const double gamma = std::min(1.0 / (eta_ * static_cast<double>(horizon_)), 0.5);
    ActionDistribution u = exploration_distribution(partition, proxies, n);
    ActionDistribution p;
    p.probs.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < p.probs.size(); ++i)
        p.probs[i] = (1.0 - gamma) * q.probs[i] + gamma * u.probs[i];

    if (!is_full_distribution(p))
        throw std::logic_error("policy: sampling distribution does not sum to one");
    const double floor =
        gamma / ((static_cast<double>(partition.K) * partition.L + 1.0) * n) - 1e-12;
    for (double pi : p.probs)
        if (pi < floor) throw std::logic_error("policy: exploration floor violated");

    round_ = Round{std::move(q), std::move(u), p, eta_, gamma, std::move(partition)};
    return p;
}

void Exp3Ex::update(const Feedback& fb, const ActionDistribution& p_used) {
    if (p_used.size() != g_.num_actions())
        throw std::invalid_argument("update: distribution size mismatch");
    validate_feedback(g_, fb);
    const std::vector<double> P = observation_probabilities(g_, p_used);
    for (const auto& [arm, loss] : fb.observed) {
        const double prob = P[static_cast<std::size_t>(arm)];
        if (!(prob > 0.0))
            throw std::logic_error("update: observed arm has zero observation probability");
        cum_loss_est_[static_cast<std::size_t>(arm)] += loss / prob;
    }
    ++t_;
}

Exp3Set::Exp3Set(const FeedbackGraph& g, std::int64_t T) : g_(g) {
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    const int n = g.num_actions();
    cum_loss_est_.assign(static_cast<std::size_t>(n), 0.0);
    int alpha;
    if (n <= 24)
        alpha = exact_independence_number(g);
    else
        alpha = static_cast<int>(greedy_independent_set(g).size());
    eta_ = std::sqrt(std::log(static_cast<double>(n)) /
                     (static_cast<double>(alpha) * static_cast<double>(T)));
}

ActionDistribution Exp3Set::next_distribution() {
    return weights_distribution(cum_loss_est_, eta_);
}

void Exp3Set::update(const Feedback& fb, const ActionDistribution& p_used) {
    if (p_used.size() != g_.num_actions())
        throw std::invalid_argument("update: distribution size mismatch");
    validate_feedback(g_, fb);
    const std::vector<double> P = observation_probabilities(g_, p_used);
    for (const auto& [arm, loss] : fb.observed) {
        const double prob = P[static_cast<std::size_t>(arm)];
        if (!(prob > 0.0))
            throw std::logic_error("update: observed arm has zero observation probability");
        cum_loss_est_[static_cast<std::size_t>(arm)] += loss / prob;
    }
}

EtcHub::EtcHub(const FeedbackGraph& g, std::int64_t T, int hub) : g_(g), hub_(hub) {
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    const int n = g.num_actions();
    if (hub < 0 || hub >= n) throw std::out_of_range("hub out of range");
    const std::uint8_t* row = g.row(hub);
    for (int j = 0; j < n; ++j)
        if (!row[j]) throw std::invalid_argument("hub must observe every action");
    explore_rounds_ = ceil_two_thirds_power(T);
    loss_sums_.assign(static_cast<std::size_t>(n), 0.0);
    loss_counts_.assign(static_cast<std::size_t>(n), 0);
}

ActionDistribution EtcHub::next_distribution() {
    const int n = g_.num_actions();
    ActionDistribution p;
    p.probs.assign(static_cast<std::size_t>(n), 0.0);
    if (t_ <= explore_rounds_) {
        p.probs[static_cast<std::size_t>(hub_)] = 1.0;
        return p;
    }
    if (!committed_) {
        int best = 0;
        double best_mean = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double mean = loss_sums_[idx] / static_cast<double>(loss_counts_[idx]);
            if (mean < best_mean) {
                best_mean = mean;
                best = i;
            }
        }
        committed_ = best;
    }
    p.probs[static_cast<std::size_t>(*committed_)] = 1.0;
    return p;
}

void EtcHub::update(const Feedback& fb, const ActionDistribution& p_used) {
    if (p_used.size() != g_.num_actions())
        throw std::invalid_argument("update: distribution size mismatch");
    validate_feedback(g_, fb);
    if (t_ <= explore_rounds_) {
        for (const auto& [arm, loss] : fb.observed) {
            loss_sums_[static_cast<std::size_t>(arm)] += loss;
            ++loss_counts_[static_cast<std::size_t>(arm)];
        }
    }
    ++t_;
}

} // namespace graphbandit
