// Benchmark comparing the OpenMP kernels against their serial reference
// implementations: the subset scans behind both complexity measures, and the
// experiment harness at one worker versus the host's maximum. Values and CSV
// bytes must agree between the variants; timings show the parallel benefit
// (near 1.0x on single-core hosts).

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "graphbandit/complexity.hpp"
#include "graphbandit/graph.hpp"
#include "graphbandit/harness.hpp"

namespace {

template <typename F> double time_ms(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

} // namespace

int main() {
    using namespace graphbandit;

    const FeedbackGraph g10 = gen_random(10, 0.3, 7);
    double r_serial = 0.0, r_parallel = 0.0;
    const double t_r_serial = time_ms([&] { r_serial = r_complexity_serial(g10, 1000); });
    const double t_r_parallel = time_ms([&] { r_parallel = r_complexity(g10, 1000); });
    std::printf("[bench] r_complexity     n=10 T=1000  serial %8.2f ms  parallel %8.2f ms  "
                "speedup %.2fx  values %s (%.6f)\n",
                t_r_serial, t_r_parallel, t_r_serial / t_r_parallel,
                r_serial == r_parallel ? "match" : "DIFFER", r_parallel);

    const FeedbackGraph g8 = gen_random(8, 0.35, 11);
    double q_serial = 0.0, q_parallel = 0.0;
    const double t_q_serial = time_ms([&] { q_serial = q_complexity_max_serial(g8, 1000); });
    const double t_q_parallel = time_ms([&] { q_parallel = q_complexity_max(g8, 1000); });
    std::printf("[bench] q_complexity_max n=8  T=1000  serial %8.2f ms  parallel %8.2f ms  "
                "speedup %.2fx  values %s (%.6f)\n",
                t_q_serial, t_q_parallel, t_q_serial / t_q_parallel,
                q_serial == q_parallel ? "match" : "DIFFER", q_parallel);

    ExperimentConfig cfg;
    cfg.graph.kind = GraphSpec::Kind::Star;
    cfg.graph.n = 32;
    cfg.environment.kind = EnvironmentSpec::Kind::HardInstance;
    cfg.environment.hard.targets = VertexSet::range(31);
    cfg.environment.hard.optimal_arm = 3;
    cfg.environment.hard.gap = 0.15;
    cfg.environment.hard.seed = 5;
    cfg.policies = {"exp3ex", "exp3set"};
    cfg.horizon = 300;
    cfg.num_seeds = 6;
    cfg.master_seed = 42;

    auto run_to_csv = [&cfg] {
        std::ostringstream os;
        write_csv(run_experiment(cfg), os);
        return os.str();
    };
    setenv("GRAPHBANDIT_THREADS", "1", 1);
    std::string csv_one;
    const double t_one = time_ms([&] { csv_one = run_to_csv(); });
    unsetenv("GRAPHBANDIT_THREADS");
    std::string csv_many;
    const double t_many = time_ms([&] { csv_many = run_to_csv(); });
    std::printf("[bench] harness          star n=32 T=300 runs=12  1 worker %8.2f ms  "
                "%d workers %8.2f ms  speedup %.2fx  CSV %s\n",
                t_one, omp_get_max_threads(), t_many, t_one / t_many,
                csv_one == csv_many ? "identical" : "DIFFERS");

    if (omp_get_max_threads() == 1)
        std::printf("[note] host exposes a single hardware thread; speedups near 1.0x are "
                    "expected here\n");

    const bool ok = r_serial == r_parallel && q_serial == q_parallel && csv_one == csv_many;
    return ok ? 0 : 1;
}
