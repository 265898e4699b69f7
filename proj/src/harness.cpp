#include "graphbandit/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "graphbandit/distribution.hpp"
#include "graphbandit/errors.hpp"
#include "graphbandit/rng.hpp"

namespace graphbandit {

namespace {

using nlohmann::json;

void expect_keys(const json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("config: unknown key '" + it.key() + "' in " + ctx);
    }
}

const json& require(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string("config: missing key '") + key + "' in " + ctx);
    return *it;
}

std::int64_t get_int(const json& v, const char* what) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError(std::string("config: ") + what + " must be an integer");
    return v.get<std::int64_t>();
}

std::uint64_t get_u64(const json& v, const char* what) {
    const std::int64_t raw = get_int(v, what);
    if (raw < 0) throw ConfigError(std::string("config: ") + what + " must be non-negative");
    return static_cast<std::uint64_t>(raw);
}

double get_number(const json& v, const char* what) {
    if (!v.is_number()) throw ConfigError(std::string("config: ") + what + " must be a number");
    return v.get<double>();
}

GraphSpec parse_graph(const json& j) {
    if (!j.is_object()) throw ConfigError("config: 'graph' must be an object");
    GraphSpec spec;
    const std::string kind = require(j, "kind", "graph").get<std::string>();
    if (kind == "star") {
        expect_keys(j, {"kind", "n"}, "graph");
        spec.kind = GraphSpec::Kind::Star;
        spec.n = static_cast<int>(get_int(require(j, "n", "graph"), "graph.n"));
    } else if (kind == "edgeless") {
        expect_keys(j, {"kind", "n"}, "graph");
        spec.kind = GraphSpec::Kind::Edgeless;
        spec.n = static_cast<int>(get_int(require(j, "n", "graph"), "graph.n"));
    } else if (kind == "union_of_stars") {
        expect_keys(j, {"kind", "blocks"}, "graph");
        spec.kind = GraphSpec::Kind::UnionOfStars;
        const json& blocks = require(j, "blocks", "graph");
        if (!blocks.is_array() || blocks.empty())
            throw ConfigError(
                "config: graph.blocks must be a nonempty array of [leaves, multiplicity] pairs");
        for (const json& b : blocks) {
            if (!b.is_array() || b.size() != 2)
                throw ConfigError("config: each graph.blocks entry must be a pair "
                                  "[leaves, multiplicity]");
            spec.blocks.emplace_back(static_cast<int>(get_int(b[0], "graph.blocks leaves")),
                                     static_cast<int>(get_int(b[1], "graph.blocks multiplicity")));
        }
    } else if (kind == "random") {
        expect_keys(j, {"kind", "n", "p", "seed"}, "graph");
        spec.kind = GraphSpec::Kind::Random;
        spec.n = static_cast<int>(get_int(require(j, "n", "graph"), "graph.n"));
        spec.p = get_number(require(j, "p", "graph"), "graph.p");
        spec.seed = get_u64(require(j, "seed", "graph"), "graph.seed");
    } else if (kind == "file") {
        expect_keys(j, {"kind", "path"}, "graph");
        spec.kind = GraphSpec::Kind::File;
        spec.path = require(j, "path", "graph").get<std::string>();
    } else {
        throw ConfigError("config: unknown graph kind '" + kind + "'");
    }
    return spec;
}

EnvironmentSpec parse_environment(const json& j) {
    if (!j.is_object()) throw ConfigError("config: 'environment' must be an object");
    EnvironmentSpec spec;
    const std::string kind = require(j, "kind", "environment").get<std::string>();
    if (kind == "hard_instance") {
        expect_keys(j, {"kind", "targets", "optimal_arm", "gap", "seed"}, "environment");
        spec.kind = EnvironmentSpec::Kind::HardInstance;
        const json& targets = require(j, "targets", "environment");
        if (!targets.is_array() || targets.empty())
            throw ConfigError("config: environment.targets must be a nonempty array");
        std::vector<int> members;
        for (const json& v : targets)
            members.push_back(static_cast<int>(get_int(v, "environment.targets entry")));
        spec.hard.targets = VertexSet(std::move(members));
        spec.hard.optimal_arm =
            static_cast<int>(get_int(require(j, "optimal_arm", "environment"),
                                     "environment.optimal_arm"));
        spec.hard.gap = get_number(require(j, "gap", "environment"), "environment.gap");
        if (!(spec.hard.gap > 0.0 && spec.hard.gap <= 0.5))
            throw ConfigError("config: environment.gap must lie in (0, 1/2]");
        if (!spec.hard.targets.contains(spec.hard.optimal_arm))
            throw ConfigError("config: environment.optimal_arm must belong to targets");
        spec.hard.seed = get_u64(require(j, "seed", "environment"), "environment.seed");
    } else if (kind == "fixed") {
        expect_keys(j, {"kind", "values"}, "environment");
        spec.kind = EnvironmentSpec::Kind::FixedValues;
        const json& values = require(j, "values", "environment");
        if (!values.is_array() || values.empty())
            throw ConfigError("config: environment.values must be a nonempty array of rows");
        for (const json& row : values) {
            if (!row.is_array())
                throw ConfigError("config: environment.values rows must be arrays");
            std::vector<double> r;
            for (const json& v : row) r.push_back(get_number(v, "environment.values entry"));
            spec.values.push_back(std::move(r));
        }
    } else if (kind == "fixed_csv") {
        expect_keys(j, {"kind", "path"}, "environment");
        spec.kind = EnvironmentSpec::Kind::FixedCsv;
        spec.csv_path = require(j, "path", "environment").get<std::string>();
    } else {
        throw ConfigError("config: unknown environment kind '" + kind + "'");
    }
    return spec;
}

const std::vector<std::string> kKnownPolicies = {"exp3ex", "exp3set", "etc-hub"};

} // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
    try {
        expect_keys(j,
                    {"graph", "environment", "policies", "T", "num_seeds", "master_seed",
                     "output", "cache_splits", "exact_complexity", "regret_mode"},
                    "config");
        ExperimentConfig cfg;
        cfg.graph = parse_graph(require(j, "graph", "config"));
        cfg.environment = parse_environment(require(j, "environment", "config"));
        const json& policies = require(j, "policies", "config");
        if (!policies.is_array() || policies.empty())
            throw ConfigError("config: 'policies' must be a nonempty array");
        for (const json& p : policies) {
            if (!p.is_string()) throw ConfigError("config: policy ids must be strings");
            const std::string id = p.get<std::string>();
            if (std::find(kKnownPolicies.begin(), kKnownPolicies.end(), id) ==
                kKnownPolicies.end())
                throw ConfigError("config: unknown policy id '" + id + "'");
            if (std::find(cfg.policies.begin(), cfg.policies.end(), id) != cfg.policies.end())
                throw ConfigError("config: duplicate policy id '" + id + "'");
            cfg.policies.push_back(id);
        }
        cfg.horizon = get_int(require(j, "T", "config"), "T");
        if (cfg.horizon < 1) throw ConfigError("config: T must be at least 1");
        if (j.contains("num_seeds"))
            cfg.num_seeds = static_cast<int>(get_int(j["num_seeds"], "num_seeds"));
        if (cfg.num_seeds < 1) throw ConfigError("config: num_seeds must be at least 1");
        if (j.contains("master_seed")) cfg.master_seed = get_u64(j["master_seed"], "master_seed");
        if (j.contains("output")) cfg.output_path = j["output"].get<std::string>();
        if (j.contains("cache_splits")) {
            if (!j["cache_splits"].is_boolean())
                throw ConfigError("config: cache_splits must be a boolean");
            cfg.cache_splits = j["cache_splits"].get<bool>();
        }
        if (j.contains("exact_complexity")) {
            if (!j["exact_complexity"].is_boolean())
                throw ConfigError("config: exact_complexity must be a boolean");
            cfg.exact_complexity = j["exact_complexity"].get<bool>();
        }
        if (j.contains("regret_mode")) {
            const std::string mode = j["regret_mode"].get<std::string>();
            if (mode == "pseudo")
                cfg.regret_mode = RegretKind::Pseudo;
            else if (mode == "realized")
                cfg.regret_mode = RegretKind::Realized;
            else
                throw ConfigError("config: regret_mode must be 'pseudo' or 'realized'");
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

FeedbackGraph build_graph(const GraphSpec& spec) {
    switch (spec.kind) {
    case GraphSpec::Kind::Star:
        return gen_star(spec.n);
    case GraphSpec::Kind::Edgeless:
        return gen_edgeless(spec.n);
    case GraphSpec::Kind::UnionOfStars:
        return gen_union_of_stars(spec.blocks);
    case GraphSpec::Kind::Random:
        return gen_random(spec.n, spec.p, spec.seed);
    case GraphSpec::Kind::File:
        return load_graph(spec.path);
    }
    throw std::logic_error("unreachable graph kind");
}

LossMatrix build_environment(const EnvironmentSpec& env, const FeedbackGraph& g, std::int64_t T,
                             int seed_index) {
    switch (env.kind) {
    case EnvironmentSpec::Kind::HardInstance: {
        HardInstanceSpec per_seed = env.hard;
        per_seed.seed = rng::mix(env.hard.seed, static_cast<std::uint64_t>(seed_index));
        return gen_hard_instance(g, per_seed, T);
    }
    case EnvironmentSpec::Kind::FixedValues:
        return gen_fixed(env.values);
    case EnvironmentSpec::Kind::FixedCsv:
        return load_loss_csv(env.csv_path);
    }
    throw std::logic_error("unreachable environment kind");
}

std::unique_ptr<Policy> make_policy(const std::string& id, const FeedbackGraph& g, std::int64_t T,
                                    bool cache_splits) {
    if (id == "exp3ex") {
        Exp3Ex::Options opts;
        opts.cache_splits = cache_splits;
        return std::make_unique<Exp3Ex>(g, T, opts);
    }
    if (id == "exp3set") return std::make_unique<Exp3Set>(g, T);
    if (id == "etc-hub") {
        const int n = g.num_actions();
        for (int i = 0; i < n; ++i) {
            const std::uint8_t* row = g.row(i);
            bool full = true;
            for (int jj = 0; jj < n; ++jj)
                if (!row[jj]) {
                    full = false;
                    break;
                }
            if (full) return std::make_unique<EtcHub>(g, T, i);
        }
        throw ConfigError("etc-hub needs an action that observes every action");
    }
    throw ConfigError("unknown policy id '" + id + "'");
}

namespace {

RunResult execute_run(const FeedbackGraph& g, const LossMatrix& env, const std::string& policy_id,
                      int seed_index, int run_id, const ExperimentConfig& cfg, RegretKind mode) {
    std::unique_ptr<Policy> policy = make_policy(policy_id, g, cfg.horizon, cfg.cache_splits);
    const int n = g.num_actions();
    RunResult result;
    result.policy = policy_id;
    result.seed_index = seed_index;
    result.cum_regret.reserve(static_cast<std::size_t>(cfg.horizon));

    double best_mean = 0.0, pseudo_total = 0.0, chosen_total = 0.0;
    std::vector<double> arm_total;
    if (mode == RegretKind::Pseudo) {
        const std::vector<double>& means = *env.means();
        best_mean = *std::min_element(means.begin(), means.end());
    } else {
        arm_total.assign(static_cast<std::size_t>(n), 0.0);
    }

    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
        const ActionDistribution p = policy->next_distribution();
        const double u = rng::uniform01(cfg.master_seed, static_cast<std::uint64_t>(run_id),
                                        static_cast<std::uint64_t>(t));
        const int chosen = sample_index(p, u);
        Feedback fb;
        fb.chosen = chosen;
        const std::uint8_t* row = g.row(chosen);
        for (int jj = 0; jj < n; ++jj)
            if (row[jj]) fb.observed.emplace_back(jj, env.at(t - 1, jj));
        policy->update(fb, p);

        if (mode == RegretKind::Pseudo) {
            pseudo_total += (*env.means())[static_cast<std::size_t>(chosen)] - best_mean;
            result.cum_regret.push_back(pseudo_total);
        } else {
            chosen_total += env.at(t - 1, chosen);
            for (int k = 0; k < n; ++k)
                arm_total[static_cast<std::size_t>(k)] += env.at(t - 1, k);
            result.cum_regret.push_back(
                chosen_total - *std::min_element(arm_total.begin(), arm_total.end()));
        }
    }
    return result;
}

} // namespace

RegretCurve run_experiment(const ExperimentConfig& cfg) {
    const FeedbackGraph g = build_graph(cfg.graph);

    std::vector<LossMatrix> envs;
    envs.reserve(static_cast<std::size_t>(cfg.num_seeds));
    if (cfg.environment.kind == EnvironmentSpec::Kind::HardInstance) {
        for (int k = 0; k < cfg.num_seeds; ++k)
            envs.push_back(build_environment(cfg.environment, g, cfg.horizon, k));
    } else {
        const LossMatrix base = build_environment(cfg.environment, g, cfg.horizon, 0);
        envs.assign(static_cast<std::size_t>(cfg.num_seeds), base);
    }
    for (const LossMatrix& env : envs) {
        if (env.num_actions() != g.num_actions())
            throw ConfigError("loss matrix has " + std::to_string(env.num_actions()) +
                              " arms but the graph has " + std::to_string(g.num_actions()) +
                              " actions");
        if (env.horizon() < cfg.horizon)
            throw ConfigError("loss matrix has " + std::to_string(env.horizon()) +
                              " rounds but T is " + std::to_string(cfg.horizon));
    }

    RegretKind mode;
    if (cfg.regret_mode.has_value()) {
        mode = *cfg.regret_mode;
        if (mode == RegretKind::Pseudo && !envs.front().means().has_value())
            throw ConfigError("pseudo-regret needs a stochastic environment with known means");
    } else {
        mode = envs.front().means().has_value() ? RegretKind::Pseudo : RegretKind::Realized;
    }

    const int total = static_cast<int>(cfg.policies.size()) * cfg.num_seeds;
    RegretCurve curve;
    curve.horizon = cfg.horizon;
    curve.runs.resize(static_cast<std::size_t>(total));

    std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int run_id = 0; run_id < total; ++run_id) {
        try {
            const int policy_idx = run_id / cfg.num_seeds;
            const int seed_index = run_id % cfg.num_seeds;
            curve.runs[static_cast<std::size_t>(run_id)] =
                execute_run(g, envs[static_cast<std::size_t>(seed_index)],
                            cfg.policies[static_cast<std::size_t>(policy_idx)], seed_index,
                            run_id, cfg, mode);
        } catch (...) {
#pragma omp critical
            if (error == nullptr) error = std::current_exception();
        }
    }
    if (error != nullptr) std::rethrow_exception(error);

    const auto horizon = static_cast<std::size_t>(cfg.horizon);
    for (const std::string& id : cfg.policies) {
        std::vector<double> mean(horizon, 0.0), sq(horizon, 0.0);
        for (const RunResult& run : curve.runs) {
            if (run.policy != id) continue;
            for (std::size_t t = 0; t < horizon; ++t) mean[t] += run.cum_regret[t];
        }
        for (double& m : mean) m /= cfg.num_seeds;
        std::vector<double> se(horizon, 0.0);
        if (cfg.num_seeds > 1) {
            for (const RunResult& run : curve.runs) {
                if (run.policy != id) continue;
                for (std::size_t t = 0; t < horizon; ++t) {
                    const double d = run.cum_regret[t] - mean[t];
                    sq[t] += d * d;
                }
            }
            for (std::size_t t = 0; t < horizon; ++t)
                se[t] = std::sqrt(sq[t] / (cfg.num_seeds - 1)) /
                        std::sqrt(static_cast<double>(cfg.num_seeds));
        }
        curve.mean[id] = std::move(mean);
        curve.std_error[id] = std::move(se);
    }
    return curve;
}

void write_csv(const RegretCurve& curve, std::ostream& os) {
    os << "policy,seed,t,cum_regret\n";
    char buf[48];
    for (const RunResult& run : curve.runs) {
        for (std::size_t t = 0; t < run.cum_regret.size(); ++t) {
            std::snprintf(buf, sizeof buf, "%.17g", run.cum_regret[t]);
            os << run.policy << ',' << run.seed_index << ',' << (t + 1) << ',' << buf << '\n';
        }
    }
}

void write_csv(const RegretCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    write_csv(curve, out);
    if (!out) throw ConfigError("failed while writing output file: " + path);
}

int max_threads() {
    const char* env = std::getenv("GRAPHBANDIT_THREADS");
    if (env == nullptr || *env == '\0') return omp_get_max_threads();
    int value = 0;
    const char* end = env;
    while (*end != '\0') ++end;
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc{} || ptr != end || value < 1)
        throw ConfigError("GRAPHBANDIT_THREADS must be a positive integer");
    return value;
}

} // namespace graphbandit
