// Acceptance gate: one self-contained check per shipped guarantee, each with
// a pinned tolerance and a wall-clock budget. Run with no arguments for the
// full gate or with `--only <id>` for a single criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "graphbandit/complexity.hpp"
#include "graphbandit/domination.hpp"
#include "graphbandit/environments.hpp"
#include "graphbandit/graph.hpp"
#include "graphbandit/harness.hpp"
#include "graphbandit/lp.hpp"
#include "graphbandit/policies.hpp"
#include "graphbandit/rng.hpp"
#include "oracles.hpp"

using namespace graphbandit;

namespace {

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<bool(std::ostringstream&)> run;
};

bool check(std::ostringstream& log, bool ok, const std::string& what) {
    if (!ok) log << "    violated: " << what << "\n";
    return ok;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// --- 1: edgeless closed form -------------------------------------------------
bool edgeless_closed_form(std::ostringstream& log) {
    bool ok = true;
    for (int n : {2, 3, 4}) {
        const std::int64_t T = static_cast<std::int64_t>(n) * n * n;
        const double r = r_complexity(gen_edgeless(n), T);
        const double expected = static_cast<double>(n) * n;
        log << "    n=" << n << " T=" << T << ": r=" << fmt(r) << " expected " << fmt(expected)
            << "\n";
        ok &= check(log, std::abs(r - expected) <= 1e-9,
                    "edgeless n=" + std::to_string(n) + " off by " + fmt(r - expected));
    }
    return ok;
}

// --- 2: star closed form -----------------------------------------------------
bool star_closed_form(std::ostringstream& log) {
    bool ok = true;
    for (int n : {5, 8, 10})
        for (std::int64_t T : {20, 100}) {
            const std::int64_t leaf_cube =
                static_cast<std::int64_t>(n - 1) * (n - 1) * (n - 1);
            if (T >= leaf_cube) continue; // closed form only holds below the cube
            const double r = r_complexity(gen_star(n), T);
            const double expected = std::pow(static_cast<double>(T), 2.0 / 3.0);
            log << "    n=" << n << " T=" << T << ": r=" << fmt(r) << " expected "
                << fmt(expected) << "\n";
            ok &= check(log, std::abs(r - expected) <= 1e-6,
                        "star n=" + std::to_string(n) + " T=" + std::to_string(T) +
                            " off by " + fmt(r - expected));
        }
    return ok;
}

// --- 3: sandwich between the LP measure and the combinatorial measure --------
bool sandwich(std::ostringstream& log) {
    bool ok = true;
    int checked = 0;
    for (int k = 0; k < 20; ++k) {
        const int n = 4 + (k % 5);
        const double p = 0.2 + 0.15 * (k % 4);
        const FeedbackGraph g = gen_random(n, p, 300 + static_cast<std::uint64_t>(k));
        const double log_n = std::log(static_cast<double>(n));
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (rng::uniform01(900 + static_cast<std::uint64_t>(k),
                                   static_cast<std::uint64_t>(rep),
                                   static_cast<std::uint64_t>(i)) < 0.5)
                    members.push_back(i);
            if (members.empty()) members.push_back(k % n);
            const VertexSet I(std::move(members));
            for (std::int64_t T : {10, 100}) {
                const double R = r_complexity_set(g, I, T).value;
                const double Q = q_complexity(g, I, T);
                ++checked;
                ok &= check(log, R / (40.0 * log_n) - 1e-9 <= Q,
                            "lower bound: R=" + fmt(R) + " Q=" + fmt(Q) + " n=" +
                                std::to_string(n));
                ok &= check(log, Q <= 2.0 * R * (1.0 + 1e-6) + 1e-9,
                            "upper bound: R=" + fmt(R) + " Q=" + fmt(Q) + " n=" +
                                std::to_string(n));
            }
        }
    }
    log << "    " << checked << " (graph, I, T) triples checked\n";
    return ok;
}

// --- 4: greedy cover quality vs the exact optimum -----------------------------
bool greedy_cover_quality(std::ostringstream& log) {
    bool ok = true;
    int checked = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 3 + (k % 10);
        const double p = 0.25 + 0.15 * (k % 4);
        const FeedbackGraph g = gen_random(n, p, 400 + static_cast<std::uint64_t>(k));
        std::vector<int> a_members;
        for (int i = 0; i < n; ++i)
            if (rng::uniform01(1400 + static_cast<std::uint64_t>(k), 0,
                               static_cast<std::uint64_t>(i)) < 0.6)
                a_members.push_back(i);
        if (a_members.empty()) a_members.push_back(k % n);
        const VertexSet A(std::move(a_members));
        VertexSet coverable;
        for (int a : A) coverable = set_union(coverable, g.out_neighborhood(a));
        std::vector<int> b_members;
        for (int b : coverable)
            if (rng::uniform01(1400 + static_cast<std::uint64_t>(k), 1,
                               static_cast<std::uint64_t>(b)) < 0.5)
                b_members.push_back(b);
        if (b_members.empty()) b_members.push_back(*coverable.begin());
        const VertexSet B(std::move(b_members));

        const VertexSet D = greedy_dominating_set(g, A, B);
        const std::optional<int> exact = exact_dominating_number(g, A, B);
        ++checked;
        ok &= check(log, dominates(g, D, B), "greedy output fails to dominate B");
        ok &= check(log, exact.has_value(), "exact oracle found no cover where greedy did");
        if (exact) {
            const double bound = (std::log(static_cast<double>(n)) + 1.0) *
                                 static_cast<double>(*exact);
            ok &= check(log,
                        static_cast<double>(D.size()) <= bound + 1e-9,
                        "greedy size " + std::to_string(D.size()) + " exceeds (ln n + 1) * " +
                            std::to_string(*exact));
        }
    }
    log << "    " << checked << " random (graph, A, B) instances checked\n";
    return ok;
}

// --- 5: importance-weighted estimates are unbiased ----------------------------
bool estimator_unbiased(std::ostringstream& log) {
    const FeedbackGraph g = gen_random(5, 0.3, 50);
    ActionDistribution p;
    p.probs = {0.3, 0.25, 0.2, 0.15, 0.1};
    const std::vector<double> losses = {0.9, 0.1, 0.5, 0.3, 0.7};
    const std::vector<double> P = observation_probabilities(g, p);
    const int draws = 100000;

    bool ok = true;
    for (int arm = 0; arm < 5; ++arm) {
        ok &= check(log, P[static_cast<std::size_t>(arm)] > 0.0,
                    "arm " + std::to_string(arm) + " is never observed");
    }
    std::vector<double> sum(5, 0.0), sumsq(5, 0.0);
    for (int d = 0; d < draws; ++d) {
        const int chosen = sample_index(p, rng::uniform01(5000, 0, static_cast<std::uint64_t>(d)));
        for (int arm = 0; arm < 5; ++arm) {
            const double x = g.has_edge(chosen, arm)
                                 ? losses[static_cast<std::size_t>(arm)] /
                                       P[static_cast<std::size_t>(arm)]
                                 : 0.0;
            sum[static_cast<std::size_t>(arm)] += x;
            sumsq[static_cast<std::size_t>(arm)] += x * x;
        }
    }
    for (int arm = 0; arm < 5; ++arm) {
        const double mean = sum[static_cast<std::size_t>(arm)] / draws;
        const double var =
            (sumsq[static_cast<std::size_t>(arm)] - draws * mean * mean) / (draws - 1);
        const double stderr_mean = std::sqrt(std::max(var, 0.0) / draws);
        const double err = std::abs(mean - losses[static_cast<std::size_t>(arm)]);
        log << "    arm " << arm << ": mean=" << fmt(mean) << " true="
            << fmt(losses[static_cast<std::size_t>(arm)]) << " err=" << fmt(err)
            << " 4*stderr=" << fmt(4.0 * stderr_mean) << "\n";
        ok &= check(log, err <= 4.0 * stderr_mean,
                    "arm " + std::to_string(arm) + " biased beyond 4 standard errors");
    }
    return ok;
}

// --- 6: per-round invariants of the adaptive policy ---------------------------
bool adaptive_policy_invariants(std::ostringstream& log) {
    const int n = 50;
    const std::int64_t T = 200;
    const FeedbackGraph g = gen_random(n, 0.12, 606);
    std::vector<double> means(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        means[static_cast<std::size_t>(i)] =
            0.2 + 0.6 * rng::uniform01(606, 1, static_cast<std::uint64_t>(i));
    const LossMatrix env = LossMatrix::bernoulli(means, T, 17);

    Exp3Ex policy(g, T);
    bool ok = true;
    double prev_eta = std::numeric_limits<double>::infinity();
    for (std::int64_t t = 1; t <= T && ok; ++t) {
        const ActionDistribution p = policy.next_distribution();
        const Exp3Ex::Round& round = policy.last_round();
        ok &= check(log, std::abs(p.sum() - 1.0) <= 1e-9,
                    "round " + std::to_string(t) + ": sum(p) = " + fmt(p.sum()));
        ok &= check(log, round.gamma <= 0.5 + 1e-15,
                    "round " + std::to_string(t) + ": gamma = " + fmt(round.gamma));
        ok &= check(log, round.eta <= prev_eta + 1e-15,
                    "round " + std::to_string(t) + ": eta increased to " + fmt(round.eta));
        prev_eta = round.eta;
        const double floor =
            round.gamma /
            ((static_cast<double>(round.partition.K) * round.partition.L + 1.0) * n);
        for (int i = 0; i < n && ok; ++i)
            ok &= check(log, p.probs[static_cast<std::size_t>(i)] >= floor - 1e-12,
                        "round " + std::to_string(t) + ": p[" + std::to_string(i) +
                            "] below the exploration floor");
        const int chosen = sample_index(p, rng::uniform01(606, 2, static_cast<std::uint64_t>(t)));
        Feedback fb;
        fb.chosen = chosen;
        for (int j : g.out_neighborhood(chosen)) fb.observed.emplace_back(j, env.at(t - 1, j));
        policy.update(fb, p);
    }
    if (ok) log << "    " << T << " rounds, all invariants held\n";
    return ok;
}

// --- 7: regime-separation trend on the large star -----------------------------
bool star_regime_trend(std::ostringstream& log) {
    ExperimentConfig cfg;
    cfg.graph.kind = GraphSpec::Kind::Star;
    cfg.graph.n = 256;
    cfg.environment.kind = EnvironmentSpec::Kind::HardInstance;
    cfg.environment.hard.targets = VertexSet::range(255); // every leaf
    cfg.environment.hard.optimal_arm = 7;
    cfg.environment.hard.gap = 0.1; // T^(-1/3) for T = 1000
    cfg.environment.hard.seed = 2026;
    cfg.policies = {"exp3ex", "exp3set"};
    cfg.horizon = 1000;
    cfg.num_seeds = 20;
    cfg.master_seed = 77;
    cfg.regret_mode = RegretKind::Pseudo;

    const RegretCurve curve = run_experiment(cfg);
    const double adaptive = curve.mean.at("exp3ex").back();
    const double baseline = curve.mean.at("exp3set").back();
    const double cap = 50.0 * std::pow(1000.0, 2.0 / 3.0);
    log << "    mean final pseudo-regret: exp3ex=" << fmt(adaptive)
        << " exp3set=" << fmt(baseline) << " cap=" << fmt(cap) << "\n";
    bool ok = true;
    ok &= check(log, adaptive <= baseline,
                "adaptive policy regret " + fmt(adaptive) + " exceeds baseline " + fmt(baseline));
    ok &= check(log, adaptive <= cap, "adaptive policy regret " + fmt(adaptive) +
                                          " exceeds 50 T^(2/3) = " + fmt(cap));
    return ok;
}

// --- 8: LP solver against a vertex-enumeration oracle --------------------------
bool lp_correctness(std::ostringstream& log) {
    bool ok = true;

    LinearProgram reduced;
    reduced.num_vars = 2;
    reduced.objective = {8.0, 8.0};
    reduced.ge_rows = {{{16.0, 16.0}, 4.0}, {{16.0, 16.0}, 4.0}};
    reduced.simplex_cap = 1.0;
    const LpSolution sol = solve_lp(reduced, 1e-9);
    log << "    two-arm reduced program: objective=" << fmt(sol.objective_value) << "\n";
    ok &= check(log, sol.status == LpStatus::Optimal, "reduced program not optimal");
    ok &= check(log, std::abs(sol.objective_value - 2.0) <= 1e-6,
                "reduced program objective " + fmt(sol.objective_value) + " != 2.0");

    const double eps = 1e-9;
    int agreed = 0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        LinearProgram lp;
        lp.num_vars = 2 + static_cast<int>(k % 4);
        const int rows = 1 + static_cast<int>((k * 7 + 3) % 6);
        lp.objective.resize(static_cast<std::size_t>(lp.num_vars));
        for (int v = 0; v < lp.num_vars; ++v)
            lp.objective[static_cast<std::size_t>(v)] =
                2.0 * rng::uniform01(8000 + k, 0, static_cast<std::uint64_t>(v));
        for (int r = 0; r < rows; ++r) {
            LinearProgram::Row row;
            row.coeffs.resize(static_cast<std::size_t>(lp.num_vars), 0.0);
            for (int v = 0; v < lp.num_vars; ++v) {
                const double u =
                    rng::uniform01(8000 + k, 10 + static_cast<std::uint64_t>(r),
                                   static_cast<std::uint64_t>(v));
                if (u > 0.35) row.coeffs[static_cast<std::size_t>(v)] = 2.0 * u - 0.7;
            }
            row.rhs = 1.2 * rng::uniform01(8000 + k, 20, static_cast<std::uint64_t>(r));
            lp.ge_rows.push_back(std::move(row));
        }
        lp.simplex_cap = 0.5 + 1.5 * rng::uniform01(8000 + k, 30, 0);

        const LpSolution got = solve_lp(lp, eps);
        const oracles::OracleLpResult want = oracles::brute_lp(lp);
        const bool feasible_match = (got.status == LpStatus::Optimal) == want.feasible;
        ok &= check(log, feasible_match, "instance " + std::to_string(k) + ": status mismatch");
        if (feasible_match && want.feasible) {
            ok &= check(log, std::abs(got.objective_value - want.objective) <= eps + 1e-6,
                        "instance " + std::to_string(k) + ": objective " +
                            fmt(got.objective_value) + " vs oracle " + fmt(want.objective));
        }
        if (ok) ++agreed;
    }
    log << "    " << agreed << "/50 random programs agreed with the oracle\n";
    return ok;
}

// --- 9: byte-identical output across repeats, caching, and worker counts -------
bool simulate_determinism(std::ostringstream& log) {
    ExperimentConfig cfg;
    cfg.graph.kind = GraphSpec::Kind::Star;
    cfg.graph.n = 8;
    cfg.environment.kind = EnvironmentSpec::Kind::HardInstance;
    cfg.environment.hard.targets = VertexSet::range(7);
    cfg.environment.hard.optimal_arm = 2;
    cfg.environment.hard.gap = 0.25;
    cfg.environment.hard.seed = 5;
    cfg.policies = {"exp3ex", "exp3set", "etc-hub"};
    cfg.horizon = 50;
    cfg.num_seeds = 3;
    cfg.master_seed = 13;

    auto render = [](const ExperimentConfig& c) {
        std::ostringstream out;
        write_csv(run_experiment(c), out);
        return out.str();
    };

    const std::string base = render(cfg);
    bool ok = check(log, render(cfg) == base, "repeat run differs");

    ExperimentConfig uncached = cfg;
    uncached.cache_splits = false;
    ok &= check(log, render(uncached) == base, "disabling the split cache changes output");

    setenv("GRAPHBANDIT_THREADS", "1", 1);
    ok &= check(log, render(cfg) == base, "single worker changes output");
    setenv("GRAPHBANDIT_THREADS", "4", 1);
    ok &= check(log, render(cfg) == base, "four workers change output");
    unsetenv("GRAPHBANDIT_THREADS");

    if (ok) log << "    " << (base.size()) << "-byte CSV identical across 5 configurations\n";
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--only") == 0 && a + 1 < argc) {
            only = std::atoi(argv[++a]);
        } else {
            std::fprintf(stderr, "usage: %s [--only <criterion id 1..9>]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<Criterion> criteria = {
        {1, "edgeless closed form r = n^2 at T = n^3", 5.0, edgeless_closed_form},
        {2, "star closed form r = T^(2/3) below the leaf cube", 5.0, star_closed_form},
        {3, "LP measure sandwiched by the combinatorial measure", 60.0, sandwich},
        {4, "greedy cover within (ln n + 1) of the exact optimum", 30.0, greedy_cover_quality},
        {5, "importance-weighted loss estimates are unbiased", 10.0, estimator_unbiased},
        {6, "adaptive policy per-round invariants over a full run", 60.0,
         adaptive_policy_invariants},
        {7, "large-star regret trend: adaptive beats fixed-rate baseline", 600.0,
         star_regime_trend},
        {8, "LP solver matches the vertex-enumeration oracle", 30.0, lp_correctness},
        {9, "simulate output is byte-identical across repeats and workers", 120.0,
         simulate_determinism},
    };

    int failures = 0;
    int ran = 0;
    for (const Criterion& c : criteria) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        std::ostringstream detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail << "    exception: " << e.what() << "\n";
            ok = false;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = elapsed <= c.budget_seconds;
        if (!in_budget)
            detail << "    over budget: " << fmt(elapsed) << " s > " << fmt(c.budget_seconds)
                   << " s\n";
        const bool pass = ok && in_budget;
        std::printf("[%s] criterion %d: %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL",
                    c.id, c.name, elapsed, c.budget_seconds);
        std::fputs(detail.str().c_str(), stdout);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion with id %d\n", only);
        return 2;
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures;
}
