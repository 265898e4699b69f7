#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "graphbandit/environments.hpp"
#include "graphbandit/graph.hpp"
#include "graphbandit/policies.hpp"

namespace graphbandit {

struct GraphSpec {
    enum class Kind { Star, Edgeless, UnionOfStars, Random, File };
    Kind kind = Kind::Star;
    int n = 2;                                // Star, Edgeless, Random
    double p = 0.5;                           // Random
    std::uint64_t seed = 0;                   // Random
    std::vector<std::pair<int, int>> blocks;  // UnionOfStars: (leaves, multiplicity)
    std::string path;                         // File
};

struct EnvironmentSpec {
    enum class Kind { HardInstance, FixedValues, FixedCsv };
    Kind kind = Kind::HardInstance;
    HardInstanceSpec hard;                    // HardInstance
    std::vector<std::vector<double>> values;  // FixedValues
    std::string csv_path;                     // FixedCsv
};

struct ExperimentConfig {
    GraphSpec graph;
    EnvironmentSpec environment;
    std::vector<std::string> policies; // ids: exp3ex, exp3set, etc-hub
    std::int64_t horizon = 1;
    int num_seeds = 1;
    std::uint64_t master_seed = 0;
    std::string output_path;           // empty: caller decides what to do
    bool cache_splits = true;
    bool exact_complexity = false;
    std::optional<RegretKind> regret_mode; // default: pseudo when the
                                           // environment has means, else realized
};

// Parses and validates the JSON config document; unknown keys, missing
// required keys, and out-of-range values raise ConfigError with a diagnostic.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

FeedbackGraph build_graph(const GraphSpec& spec);

// Loss matrix for one run slot. Stochastic environments derive the instance
// seed from (environment seed, seed_index), so every policy sees the same
// losses at the same seed index; fixed environments ignore seed_index.
LossMatrix build_environment(const EnvironmentSpec& env, const FeedbackGraph& g, std::int64_t T,
                             int seed_index);

std::unique_ptr<Policy> make_policy(const std::string& id, const FeedbackGraph& g, std::int64_t T,
                                    bool cache_splits);

struct RunResult {
    std::string policy;
    int seed_index = 0;
    std::vector<double> cum_regret; // one entry per round
};

struct RegretCurve {
    std::int64_t horizon = 0;
    std::vector<RunResult> runs;                            // policy-major, seed-minor
    std::map<std::string, std::vector<double>> mean;        // per policy, per round
    std::map<std::string, std::vector<double>> std_error;   // per policy, per round
};

// Runs the full (policy x seed) grid. Independent runs may execute in
// parallel; results are merged in run-index order, so output is identical
// for any worker count. Deterministic given the config and master seed.
RegretCurve run_experiment(const ExperimentConfig& cfg);

// Columns exactly: policy,seed,t,cum_regret.
void write_csv(const RegretCurve& curve, std::ostream& os);
void write_csv(const RegretCurve& curve, const std::string& path);

// Worker cap: GRAPHBANDIT_THREADS when set (must be a positive integer),
// otherwise the OpenMP default.
int max_threads();

} // namespace graphbandit
