#pragma once

#include <vector>

namespace graphbandit {

// min objective . x
// s.t.  coeffs . x >= rhs   for every row in ge_rows
//       sum(x) <= simplex_cap
//       x >= 0
struct LinearProgram {
    struct Row {
        std::vector<double> coeffs;
        double rhs = 0.0;
    };
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<Row> ge_rows;
    double simplex_cap = 1.0;
};

enum class LpStatus { Optimal, Infeasible };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
    double tolerance = 0.0;
};

// Deterministic dense simplex. Identical inputs produce bit-identical
// solutions. On Optimal the solution satisfies objective . x <= OPT + eps and
// every constraint within relative slack eps; Infeasible is reported only
// when phase-one / dual-ray evidence shows no feasible point exists.
LpSolution solve_lp(const LinearProgram& lp, double eps);

} // namespace graphbandit
