#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "graphbandit/errors.hpp"
#include "graphbandit/harness.hpp"

using namespace graphbandit;

namespace {

const char* kFullConfig = R"({
  "graph": {"kind": "star", "n": 6},
  "environment": {
    "kind": "hard_instance",
    "targets": [0, 1, 2, 3, 4],
    "optimal_arm": 2,
    "gap": 0.25,
    "seed": 11
  },
  "policies": ["exp3ex", "exp3set", "etc-hub"],
  "T": 40,
  "num_seeds": 3,
  "master_seed": 99,
  "output": "out.csv",
  "cache_splits": false,
  "exact_complexity": true,
  "regret_mode": "pseudo"
})";

std::string csv_of(const RegretCurve& curve) {
    std::ostringstream out;
    write_csv(curve, out);
    return out.str();
}

ExperimentConfig small_config() {
    return config_from_json_text(R"({
      "graph": {"kind": "star", "n": 5},
      "environment": {"kind": "hard_instance", "targets": [0, 1, 2, 3],
                      "optimal_arm": 1, "gap": 0.3, "seed": 4},
      "policies": ["exp3ex", "etc-hub"],
      "T": 25,
      "num_seeds": 2,
      "master_seed": 7
    })");
}

} // namespace

TEST_CASE("config: full document round trip") {
    const ExperimentConfig cfg = config_from_json_text(kFullConfig);
    CHECK(cfg.graph.kind == GraphSpec::Kind::Star);
    CHECK(cfg.graph.n == 6);
    CHECK(cfg.environment.kind == EnvironmentSpec::Kind::HardInstance);
    CHECK(cfg.environment.hard.targets == VertexSet({0, 1, 2, 3, 4}));
    CHECK(cfg.environment.hard.optimal_arm == 2);
    CHECK(cfg.environment.hard.gap == 0.25);
    CHECK(cfg.environment.hard.seed == 11);
    CHECK(cfg.policies == std::vector<std::string>{"exp3ex", "exp3set", "etc-hub"});
    CHECK(cfg.horizon == 40);
    CHECK(cfg.num_seeds == 3);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.output_path == "out.csv");
    CHECK(cfg.cache_splits == false);
    CHECK(cfg.exact_complexity == true);
    CHECK(cfg.regret_mode == RegretKind::Pseudo);
}

TEST_CASE("config: defaults") {
    const ExperimentConfig cfg = config_from_json_text(R"({
      "graph": {"kind": "edgeless", "n": 3},
      "environment": {"kind": "fixed", "values": [[0.1, 0.2, 0.3]]},
      "policies": ["exp3set"],
      "T": 1
    })");
    CHECK(cfg.num_seeds == 1);
    CHECK(cfg.master_seed == 0);
    CHECK(cfg.output_path.empty());
    CHECK(cfg.cache_splits == true);
    CHECK(cfg.exact_complexity == false);
    CHECK(!cfg.regret_mode.has_value());
    CHECK(cfg.environment.values == std::vector<std::vector<double>>{{0.1, 0.2, 0.3}});
}

TEST_CASE("config: graph variants") {
    const ExperimentConfig rnd = config_from_json_text(R"({
      "graph": {"kind": "random", "n": 7, "p": 0.4, "seed": 5},
      "environment": {"kind": "fixed", "values": [[0,0,0,0,0,0,0]]},
      "policies": ["exp3set"], "T": 1
    })");
    CHECK(rnd.graph.kind == GraphSpec::Kind::Random);
    CHECK(rnd.graph.p == 0.4);
    CHECK(rnd.graph.seed == 5);

    const ExperimentConfig uni = config_from_json_text(R"({
      "graph": {"kind": "union_of_stars", "blocks": [[3, 2], [1, 1]]},
      "environment": {"kind": "fixed",
                      "values": [[0,0,0,0,0,0,0,0,0,0]]},
      "policies": ["exp3set"], "T": 1
    })");
    REQUIRE(uni.graph.blocks.size() == 2);
    CHECK(uni.graph.blocks[0] == std::pair<int, int>{3, 2});
    CHECK(uni.graph.blocks[1] == std::pair<int, int>{1, 1});

    const ExperimentConfig file = config_from_json_text(R"({
      "graph": {"kind": "file", "path": "g.json"},
      "environment": {"kind": "fixed", "values": [[0.5]]},
      "policies": ["exp3set"], "T": 1
    })");
    CHECK(file.graph.kind == GraphSpec::Kind::File);
    CHECK(file.graph.path == "g.json");
}

TEST_CASE("config: rejected documents") {
    auto reject = [](const std::string& text) {
        CHECK_THROWS_AS(config_from_json_text(text), ConfigError);
    };
    reject("not json at all");
    reject(R"({"graph": {"kind": "star", "n": 4}})"); // missing keys
    // unknown top-level key
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set"], "T": 1, "horizonn": 2})");
    // unknown graph kind and stray graph key
    reject(R"({"graph": {"kind": "ring", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set"], "T": 1})");
    reject(R"({"graph": {"kind": "star", "n": 4, "p": 0.5},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set"], "T": 1})");
    // policies: unknown name, duplicate, empty
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["ucb"], "T": 1})");
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set", "exp3set"], "T": 1})");
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": [], "T": 1})");
    // bad scalar ranges
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set"], "T": 0})");
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set"], "T": 1, "num_seeds": 0})");
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set"], "T": 1, "regret_mode": "both"})");
    // hard instance constraints checked at parse time
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "hard_instance", "targets": [0, 1],
                               "optimal_arm": 2, "gap": 0.2, "seed": 0},
               "policies": ["exp3set"], "T": 1})");
    reject(R"({"graph": {"kind": "star", "n": 4},
               "environment": {"kind": "hard_instance", "targets": [0, 1],
                               "optimal_arm": 0, "gap": 0.7, "seed": 0},
               "policies": ["exp3set"], "T": 1})");
    // union-of-stars blocks must be [leaves, multiplicity] pairs
    reject(R"({"graph": {"kind": "union_of_stars", "blocks": [[3]]},
               "environment": {"kind": "fixed", "values": [[0,0,0,0]]},
               "policies": ["exp3set"], "T": 1})");
}

TEST_CASE("config: file loading") {
    const std::string path = "/tmp/graphbandit_test_cfg.json";
    {
        std::ofstream out(path);
        out << kFullConfig;
    }
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.horizon == 40);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config("/tmp/graphbandit_test_missing_cfg.json"), ConfigError);
}

TEST_CASE("graph and environment builders") {
    GraphSpec gs;
    gs.kind = GraphSpec::Kind::Star;
    gs.n = 5;
    const FeedbackGraph g = build_graph(gs);
    CHECK(g.num_actions() == 5);
    CHECK(g.out_neighborhood(4) == VertexSet::range(5));

    EnvironmentSpec es;
    es.kind = EnvironmentSpec::Kind::HardInstance;
    es.hard.targets = VertexSet({0, 1, 2, 3});
    es.hard.optimal_arm = 0;
    es.hard.gap = 0.25;
    es.hard.seed = 1;
    const LossMatrix e0 = build_environment(es, g, 50, 0);
    const LossMatrix e0b = build_environment(es, g, 50, 0);
    const LossMatrix e1 = build_environment(es, g, 50, 1);
    bool differ = false;
    for (std::int64_t t = 0; t < 50; ++t)
        for (int arm = 0; arm < 5; ++arm) {
            CHECK(e0.at(t, arm) == e0b.at(t, arm));
            if (e0.at(t, arm) != e1.at(t, arm)) differ = true;
        }
    CHECK(differ); // distinct seed indices draw distinct tables

    EnvironmentSpec fixed;
    fixed.kind = EnvironmentSpec::Kind::FixedValues;
    fixed.values = {{0.0, 0.1, 0.2, 0.3, 0.4}};
    const LossMatrix f0 = build_environment(fixed, g, 1, 0);
    const LossMatrix f1 = build_environment(fixed, g, 1, 3);
    CHECK(f0.row(0) == f1.row(0)); // fixed environments ignore the seed index
}

TEST_CASE("policy factory") {
    const FeedbackGraph star = gen_star(4);
    CHECK(make_policy("exp3ex", star, 10, true) != nullptr);
    CHECK(make_policy("exp3set", star, 10, true) != nullptr);
    // the hub is the only action observing everything; the factory finds it
    auto etc = make_policy("etc-hub", star, 8, true);
    const ActionDistribution p = etc->next_distribution();
    CHECK(p.probs[3] == 1.0);
    CHECK_THROWS_AS(make_policy("etc-hub", gen_edgeless(3), 8, true), ConfigError);
    CHECK_THROWS_AS(make_policy("mystery", star, 8, true), ConfigError);
}

TEST_CASE("experiment: deterministic and worker-count independent") {
    const ExperimentConfig cfg = small_config();
    const std::string first = csv_of(run_experiment(cfg));
    const std::string second = csv_of(run_experiment(cfg));
    CHECK(first == second);

    setenv("GRAPHBANDIT_THREADS", "1", 1);
    const std::string serial = csv_of(run_experiment(cfg));
    setenv("GRAPHBANDIT_THREADS", "3", 1);
    const std::string parallel = csv_of(run_experiment(cfg));
    unsetenv("GRAPHBANDIT_THREADS");
    CHECK(first == serial);
    CHECK(first == parallel);

    ExperimentConfig uncached = cfg;
    uncached.cache_splits = false;
    CHECK(csv_of(run_experiment(uncached)) == first);
}

TEST_CASE("experiment: csv schema and aggregates") {
    const ExperimentConfig cfg = small_config();
    const RegretCurve curve = run_experiment(cfg);
    REQUIRE(curve.horizon == 25);
    REQUIRE(curve.runs.size() == 4); // 2 policies x 2 seeds
    CHECK(curve.runs[0].policy == "exp3ex");
    CHECK(curve.runs[0].seed_index == 0);
    CHECK(curve.runs[1].seed_index == 1);
    CHECK(curve.runs[2].policy == "etc-hub");

    for (const std::string& policy : {std::string("exp3ex"), std::string("etc-hub")}) {
        REQUIRE(curve.mean.count(policy) == 1);
        REQUIRE(curve.std_error.count(policy) == 1);
        const std::vector<double>& mean = curve.mean.at(policy);
        REQUIRE(mean.size() == 25);
        for (std::int64_t t = 0; t < 25; ++t) {
            double acc = 0.0;
            for (const RunResult& run : curve.runs)
                if (run.policy == policy) acc += run.cum_regret[static_cast<std::size_t>(t)];
            CHECK(mean[static_cast<std::size_t>(t)] ==
                  doctest::Approx(acc / 2.0).epsilon(1e-12));
        }
        // std error recomputation at the final round
        double sq = 0.0;
        for (const RunResult& run : curve.runs)
            if (run.policy == policy) {
                const double d = run.cum_regret[24] - mean[24];
                sq += d * d;
            }
        const double expected_se = std::sqrt(sq / 1.0) / std::sqrt(2.0);
        CHECK(curve.std_error.at(policy)[24] == doctest::Approx(expected_se).epsilon(1e-12));
    }

    const std::string csv = csv_of(curve);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "policy,seed,t,cum_regret");
    int rows = 0;
    double last_val = -1.0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string policy, seed, t, value;
        REQUIRE(std::getline(cells, policy, ','));
        REQUIRE(std::getline(cells, seed, ','));
        REQUIRE(std::getline(cells, t, ','));
        REQUIRE(std::getline(cells, value, ','));
        last_val = std::stod(value);
    }
    CHECK(rows == 4 * 25);
    CHECK(last_val == curve.runs.back().cum_regret.back());

    const std::string out_path = "/tmp/graphbandit_test_out.csv";
    write_csv(curve, out_path);
    std::ifstream back(out_path);
    std::stringstream buf;
    buf << back.rdbuf();
    CHECK(buf.str() == csv);
    std::remove(out_path.c_str());
}

TEST_CASE("experiment: pseudo-regret curves are monotone for hard instances") {
    const RegretCurve curve = run_experiment(small_config());
    for (const RunResult& run : curve.runs) {
        double prev = 0.0;
        for (double v : run.cum_regret) {
            CHECK(v >= prev - 1e-12); // per-round increments are gaps >= 0
            prev = v;
        }
    }
}

TEST_CASE("experiment: equal losses give exactly zero realized regret") {
    const ExperimentConfig cfg = config_from_json_text(R"({
      "graph": {"kind": "random", "n": 4, "p": 0.5, "seed": 2},
      "environment": {"kind": "fixed",
                      "values": [[0.5,0.5,0.5,0.5],[0.1,0.1,0.1,0.1],[0.9,0.9,0.9,0.9],
                                 [0.5,0.5,0.5,0.5],[0.2,0.2,0.2,0.2],[0.7,0.7,0.7,0.7]]},
      "policies": ["exp3ex", "exp3set"],
      "T": 6,
      "num_seeds": 3
    })");
    const RegretCurve curve = run_experiment(cfg);
    for (const RunResult& run : curve.runs)
        for (double v : run.cum_regret) CHECK(v == 0.0);
}

TEST_CASE("experiment: regret mode resolution") {
    // stochastic environment defaults to pseudo-regret; zero only when the
    // optimal arm is played, which a short horizon will not always manage,
    // so just check the mode wiring through explicit settings
    ExperimentConfig cfg = small_config();
    cfg.regret_mode = RegretKind::Realized;
    const RegretCurve realized = run_experiment(cfg);
    cfg.regret_mode = RegretKind::Pseudo;
    const RegretCurve pseudo = run_experiment(cfg);
    CHECK(csv_of(realized) != csv_of(pseudo));

    ExperimentConfig fixed_cfg = config_from_json_text(R"({
      "graph": {"kind": "edgeless", "n": 2},
      "environment": {"kind": "fixed", "values": [[0.0, 1.0]]},
      "policies": ["exp3set"], "T": 1, "regret_mode": "pseudo"
    })");
    CHECK_THROWS_AS(run_experiment(fixed_cfg), ConfigError);
}

TEST_CASE("experiment: environment shape mismatches are rejected") {
    ExperimentConfig cfg = config_from_json_text(R"({
      "graph": {"kind": "edgeless", "n": 3},
      "environment": {"kind": "fixed", "values": [[0.0, 1.0]]},
      "policies": ["exp3set"], "T": 1
    })");
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError); // 2 arms vs 3 actions

    ExperimentConfig short_cfg = config_from_json_text(R"({
      "graph": {"kind": "edgeless", "n": 2},
      "environment": {"kind": "fixed", "values": [[0.0, 1.0]]},
      "policies": ["exp3set"], "T": 5
    })");
    CHECK_THROWS_AS(run_experiment(short_cfg), ConfigError); // 1 row vs T=5
}

TEST_CASE("worker cap parsing") {
    setenv("GRAPHBANDIT_THREADS", "3", 1);
    CHECK(max_threads() == 3);
    setenv("GRAPHBANDIT_THREADS", "1", 1);
    CHECK(max_threads() == 1);
    setenv("GRAPHBANDIT_THREADS", "abc", 1);
    CHECK_THROWS_AS(max_threads(), ConfigError);
    setenv("GRAPHBANDIT_THREADS", "0", 1);
    CHECK_THROWS_AS(max_threads(), ConfigError);
    setenv("GRAPHBANDIT_THREADS", "-2", 1);
    CHECK_THROWS_AS(max_threads(), ConfigError);
    setenv("GRAPHBANDIT_THREADS", "2x", 1);
    CHECK_THROWS_AS(max_threads(), ConfigError);
    unsetenv("GRAPHBANDIT_THREADS");
    CHECK(max_threads() >= 1);
}
