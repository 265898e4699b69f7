#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include "json.hpp"

#include "graphbandit/complexity.hpp"
#include "graphbandit/errors.hpp"
#include "graphbandit/graph.hpp"
#include "graphbandit/harness.hpp"

namespace {

using graphbandit::ConfigError;

void emit_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << text << '\n';
}

int run_simulate(const std::string& config_path, const std::string& output_override) {
    graphbandit::ExperimentConfig cfg = graphbandit::load_config(config_path);
    if (!output_override.empty()) cfg.output_path = output_override;
    const graphbandit::RegretCurve curve = graphbandit::run_experiment(cfg);
    if (cfg.output_path.empty()) {
        graphbandit::write_csv(curve, std::cout);
    } else {
        graphbandit::write_csv(curve, cfg.output_path);
        std::cerr << "wrote " << cfg.output_path << '\n';
    }
    for (const std::string& id : cfg.policies)
        std::cerr << id << ": final mean regret " << curve.mean.at(id).back() << '\n';
    return 0;
}

int run_complexity(const std::string& graph_path, const std::string& config_path, std::int64_t T,
                   bool approx, int samples, std::uint64_t seed, int guard,
                   const std::string& output) {
    if (graph_path.empty() == config_path.empty())
        throw ConfigError("complexity: pass exactly one of --graph or --config");
    graphbandit::AnalyzeOptions opts;
    opts.approximate = approx;
    opts.samples = samples;
    opts.seed = seed;
    opts.exact_guard = guard;

    graphbandit::FeedbackGraph g = [&] {
        if (!graph_path.empty()) return graphbandit::load_graph(graph_path);
        const graphbandit::ExperimentConfig cfg = graphbandit::load_config(config_path);
        if (!cfg.exact_complexity) opts.approximate = true;
        if (T <= 0) T = cfg.horizon;
        return graphbandit::build_graph(cfg.graph);
    }();
    if (T <= 0) throw ConfigError("complexity: --T must be at least 1");

    const graphbandit::ComplexityReport report = graphbandit::analyze(g, T, opts);
    emit_text(graphbandit::report_to_json(report).dump(2), output);
    return 0;
}

int run_graph_gen(int star_n, int edgeless_n, const std::vector<int>& union_blocks, int random_n,
                  double p, std::uint64_t seed, const std::string& output) {
    const int chosen = (star_n > 0 ? 1 : 0) + (edgeless_n > 0 ? 1 : 0) +
                       (union_blocks.empty() ? 0 : 1) + (random_n > 0 ? 1 : 0);
    if (chosen != 1)
        throw ConfigError(
            "graph gen: choose exactly one of --star, --edgeless, --union-of-stars, --random");
    graphbandit::FeedbackGraph g = [&] {
        if (star_n > 0) return graphbandit::gen_star(star_n);
        if (edgeless_n > 0) return graphbandit::gen_edgeless(edgeless_n);
        if (random_n > 0) return graphbandit::gen_random(random_n, p, seed);
        if (union_blocks.size() % 2 != 0)
            throw ConfigError("graph gen: --union-of-stars needs leaves,multiplicity pairs");
        std::vector<std::pair<int, int>> blocks;
        for (std::size_t i = 0; i + 1 < union_blocks.size(); i += 2)
            blocks.emplace_back(union_blocks[i], union_blocks[i + 1]);
        return graphbandit::gen_union_of_stars(blocks);
    }();
    emit_text(graphbandit::graph_to_json(g).dump(2), output);
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& output) {
    if (param != "T" && param != "gap")
        throw ConfigError("sweep: --param must be 'T' or 'gap'");
    if (values.empty()) throw ConfigError("sweep: --values must be nonempty");
    const graphbandit::ExperimentConfig base = graphbandit::load_config(config_path);
    if (param == "gap" &&
        base.environment.kind != graphbandit::EnvironmentSpec::Kind::HardInstance)
        throw ConfigError("sweep: gap sweeps need a hard_instance environment");

    std::ostringstream rows;
    rows << "param,value,policy,mean_final_regret\n";
    char buf[48];
    for (const double value : values) {
        graphbandit::ExperimentConfig cfg = base;
        cfg.output_path.clear();
        if (param == "T") {
            const auto T = static_cast<std::int64_t>(value);
            if (T < 1 || static_cast<double>(T) != value)
                throw ConfigError("sweep: T values must be positive integers");
            cfg.horizon = T;
        } else {
            if (!(value > 0.0 && value <= 0.5))
                throw ConfigError("sweep: gap values must lie in (0, 1/2]");
            cfg.environment.hard.gap = value;
        }
        const graphbandit::RegretCurve curve = graphbandit::run_experiment(cfg);
        for (const std::string& id : cfg.policies) {
            std::snprintf(buf, sizeof buf, "%.17g", curve.mean.at(id).back());
            rows << param << ',' << value << ',' << id << ',' << buf << '\n';
        }
    }
    if (output.empty()) {
        std::cout << rows.str();
    } else {
        std::ofstream out(output);
        if (!out) throw ConfigError("cannot write output file: " + output);
        out << rows.str();
        std::cerr << "wrote " << output << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for adversarial online learning with feedback graphs"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run a (policy x seed) experiment grid "
                                               "from a JSON config and emit regret curves");
    std::string sim_config, sim_output;
    sim->add_option("--config", sim_config, "experiment config (JSON)")->required();
    sim->add_option("--output", sim_output, "override the config's output CSV path");

    auto* cx = app.add_subcommand("complexity",
                                  "Analyze a feedback graph: independence and domination "
                                  "numbers plus both problem-complexity measures");
    std::string cx_graph, cx_config, cx_output;
    std::int64_t cx_T = 0;
    bool cx_approx = false;
    int cx_samples = 8, cx_guard = 10;
    std::uint64_t cx_seed = 0;
    cx->add_option("--graph", cx_graph, "graph file (JSON)");
    cx->add_option("--config", cx_config, "experiment config supplying graph, T, and mode");
    cx->add_option("--T", cx_T, "horizon");
    cx->add_flag("--approx", cx_approx, "use sampling instead of exact enumeration");
    cx->add_option("--samples", cx_samples, "independent-set restarts in approximate mode");
    cx->add_option("--seed", cx_seed, "seed for approximate mode");
    cx->add_option("--guard", cx_guard, "max action count for exact enumeration");
    cx->add_option("--output", cx_output, "write the JSON report here instead of stdout");

    auto* graph_cmd = app.add_subcommand("graph", "Graph utilities");
    graph_cmd->require_subcommand(1);
    auto* gen = graph_cmd->add_subcommand("gen", "Generate a graph and emit its JSON");
    int gen_star_n = 0, gen_edgeless_n = 0, gen_random_n = 0;
    std::vector<int> gen_union;
    double gen_p = 0.5;
    std::uint64_t gen_seed = 0;
    std::string gen_output;
    gen->add_option("--star", gen_star_n, "star graph with this many vertices (hub is last)");
    gen->add_option("--edgeless", gen_edgeless_n, "graph with self-loops only");
    gen->add_option("--union-of-stars", gen_union,
                    "flat list leaves,mult[,leaves,mult...] of star blocks")
        ->delimiter(',');
    gen->add_option("--random", gen_random_n, "random directed graph with this many vertices");
    gen->add_option("--p", gen_p, "edge probability for --random");
    gen->add_option("--seed", gen_seed, "seed for --random");
    gen->add_option("--output", gen_output, "write the graph JSON here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Re-run a config over a grid of T or gap values "
                                              "and emit final mean regrets");
    std::string sweep_config, sweep_param, sweep_output;
    std::vector<double> sweep_values;
    sweep->add_option("--config", sweep_config, "experiment config (JSON)")->required();
    sweep->add_option("--param", sweep_param, "grid parameter: T or gap")->required();
    sweep->add_option("--values", sweep_values, "comma-separated grid values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--output", sweep_output, "write the summary CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return run_simulate(sim_config, sim_output);
        if (cx->parsed())
            return run_complexity(cx_graph, cx_config, cx_T, cx_approx, cx_samples, cx_seed,
                                  cx_guard, cx_output);
        if (gen->parsed())
            return run_graph_gen(gen_star_n, gen_edgeless_n, gen_union, gen_random_n, gen_p,
                                 gen_seed, gen_output);
        if (sweep->parsed())
            return run_sweep(sweep_config, sweep_param, sweep_values, sweep_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}
