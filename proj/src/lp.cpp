#include "graphbandit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace graphbandit {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;

void validate(const LinearProgram& lp) {
    if (lp.num_vars <= 0) throw std::invalid_argument("lp: num_vars must be positive");
    if (static_cast<int>(lp.objective.size()) != lp.num_vars)
        throw std::invalid_argument("lp: objective size mismatch");
    auto finite = [](double v) { return std::isfinite(v); };
    for (double c : lp.objective)
        if (!finite(c)) throw std::invalid_argument("lp: objective has non-finite entry");
    for (const auto& row : lp.ge_rows) {
        if (static_cast<int>(row.coeffs.size()) != lp.num_vars)
            throw std::invalid_argument("lp: row size mismatch");
        for (double a : row.coeffs)
            if (!finite(a)) throw std::invalid_argument("lp: row has non-finite entry");
        if (!finite(row.rhs)) throw std::invalid_argument("lp: row rhs non-finite");
    }
    if (!finite(lp.simplex_cap)) throw std::invalid_argument("lp: simplex cap non-finite");
}

// Dense tableau with an explicit basis and a maintained reduced-cost row.
// Column layout: [x_0..x_{n-1} | surplus per ge row | cap slack | rhs].
struct Tableau {
    std::size_t rows, width; // width includes the rhs column
    std::vector<double> t;
    std::vector<int> basis;  // basic column per row
    std::vector<double> z;   // reduced costs, width-1 entries

    double& at(std::size_t r, std::size_t c) { return t[r * width + c]; }
    double at(std::size_t r, std::size_t c) const { return t[r * width + c]; }
    double& rhs(std::size_t r) { return t[r * width + width - 1]; }
    double rhs(std::size_t r) const { return t[r * width + width - 1]; }

    void pivot(std::size_t pr, std::size_t pc) {
        double* prow = &t[pr * width];
        const double inv = 1.0 / prow[pc];
        for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr) continue;
            double* row = &t[r * width];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
            row[pc] = 0.0;
        }
        const double zf = z[pc];
        if (zf != 0.0) {
            for (std::size_t c = 0; c + 1 < width; ++c) z[c] -= zf * prow[c];
            z[pc] = 0.0;
        }
        basis[pr] = static_cast<int>(pc);
    }
};

std::vector<double> extract(const Tableau& tab, int n) {
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (std::size_t r = 0; r < tab.rows; ++r)
        if (tab.basis[r] < n) x[static_cast<std::size_t>(tab.basis[r])] = std::max(0.0, tab.rhs(r));
    return x;
}

// Builds the shared constraint block. Rows are scaled by their largest
// magnitude so pivot tolerances act on O(1) numbers; scaling a >= row by a
// positive factor changes nothing semantically. Ge rows are negated so the
// surplus columns form an identity basis.
Tableau build(const LinearProgram& lp) {
    const auto n = static_cast<std::size_t>(lp.num_vars);
    const std::size_t m1 = lp.ge_rows.size();
    Tableau tab;
    tab.rows = m1 + 1;
    tab.width = n + m1 + 1 + 1;
    tab.t.assign(tab.rows * tab.width, 0.0);
    tab.basis.assign(tab.rows, 0);
    tab.z.assign(tab.width - 1, 0.0);
    for (std::size_t r = 0; r < m1; ++r) {
        const auto& row = lp.ge_rows[r];
        double scale = std::abs(row.rhs);
        for (double a : row.coeffs) scale = std::max(scale, std::abs(a));
        if (scale == 0.0) scale = 1.0;
        for (std::size_t j = 0; j < n; ++j) tab.at(r, j) = -row.coeffs[j] / scale;
        tab.at(r, n + r) = 1.0;
        tab.rhs(r) = -row.rhs / scale;
        tab.basis[r] = static_cast<int>(n + r);
    }
    const std::size_t cap_row = m1;
    for (std::size_t j = 0; j < n; ++j) tab.at(cap_row, j) = 1.0;
    tab.at(cap_row, n + m1) = 1.0;
    tab.rhs(cap_row) = lp.simplex_cap;
    tab.basis[cap_row] = static_cast<int>(n + m1);
    return tab;
}

// Dual simplex from the all-surplus basis; valid whenever the reduced costs
// start nonnegative, i.e. objective >= 0. Infeasibility shows up as a row
// with negative rhs and no negative entry (a Farkas certificate).
bool dual_simplex(Tableau& tab, bool& feasible) {
    const std::size_t ncols = tab.width - 1;
    const std::size_t iter_cap = 200 * (tab.rows + ncols) + 2000;
    for (std::size_t iter = 0;; ++iter) {
        // Bland-style smallest-index leaving row once past the cap keeps the
        // iteration provably finite on degenerate instances.
        const bool bland = iter > iter_cap;
        if (iter > 2 * iter_cap) return false;
        std::size_t leave = tab.rows;
        double most_neg = -kFeasTol;
        for (std::size_t r = 0; r < tab.rows; ++r) {
            if (tab.rhs(r) < most_neg) {
                leave = r;
                if (bland) break;
                most_neg = tab.rhs(r);
            }
        }
        if (leave == tab.rows) {
            feasible = true;
            return true;
        }
        std::size_t enter = ncols;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ncols; ++j) {
            const double a = tab.at(leave, j);
            if (a < -kPivotTol) {
                const double ratio = tab.z[j] / (-a);
                if (ratio < best_ratio - 1e-12) {
                    best_ratio = ratio;
                    enter = j;
                }
            }
        }
        if (enter == ncols) {
            feasible = false; // no way to repair this row
            return true;
        }
        tab.pivot(leave, enter);
    }
}

// Primal simplex on the current tableau; assumes the rhs column is feasible.
// `allowed` masks columns that may enter (used to ban artificials).
bool primal_simplex(Tableau& tab, const std::vector<char>& allowed) {
    const std::size_t ncols = tab.width - 1;
    const std::size_t iter_cap = 200 * (tab.rows + ncols) + 2000;
    for (std::size_t iter = 0;; ++iter) {
        const bool bland = iter > iter_cap;
        if (iter > 2 * iter_cap) return false;
        std::size_t enter = ncols;
        double most_neg = -kPivotTol;
        for (std::size_t j = 0; j < ncols; ++j) {
            if (!allowed[j]) continue;
            if (tab.z[j] < most_neg) {
                enter = j;
                if (bland) break;
                most_neg = tab.z[j];
            }
        }
        if (enter == ncols) return true;
        std::size_t leave = tab.rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < tab.rows; ++r) {
            const double a = tab.at(r, enter);
            if (a > kPivotTol) {
                const double ratio = std::max(tab.rhs(r), 0.0) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && leave != tab.rows &&
                     tab.basis[r] < tab.basis[leave])) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave == tab.rows)
            throw std::logic_error("lp: unbounded direction in a capped simplex");
        tab.pivot(leave, enter);
    }
}

void set_costs(Tableau& tab, const std::vector<double>& col_costs) {
    const std::size_t ncols = tab.width - 1;
    for (std::size_t j = 0; j < ncols; ++j) tab.z[j] = col_costs[j];
    for (std::size_t r = 0; r < tab.rows; ++r) {
        const double cb = col_costs[static_cast<std::size_t>(tab.basis[r])];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < ncols; ++j) tab.z[j] -= cb * tab.at(r, j);
    }
    for (std::size_t r = 0; r < tab.rows; ++r) tab.z[static_cast<std::size_t>(tab.basis[r])] = 0.0;
}

// Two-phase primal for objectives with negative entries: phase one drives in
// artificial columns appended after the regular layout.
bool two_phase(const LinearProgram& lp, Tableau& tab, bool& feasible) {
    const auto n = static_cast<std::size_t>(lp.num_vars);
    const std::size_t base_cols = tab.width - 1;
    std::vector<std::size_t> art_rows;
    for (std::size_t r = 0; r < tab.rows; ++r)
        if (tab.rhs(r) < 0.0) art_rows.push_back(r);

    if (!art_rows.empty()) {
        Tableau ext;
        ext.rows = tab.rows;
        ext.width = tab.width + art_rows.size();
        ext.t.assign(ext.rows * ext.width, 0.0);
        ext.basis = tab.basis;
        ext.z.assign(ext.width - 1, 0.0);
        for (std::size_t r = 0; r < tab.rows; ++r) {
            const double flip = tab.rhs(r) < 0.0 ? -1.0 : 1.0;
            for (std::size_t c = 0; c < base_cols; ++c) ext.at(r, c) = flip * tab.at(r, c);
            ext.rhs(r) = flip * tab.rhs(r);
        }
        std::vector<double> phase1_costs(ext.width - 1, 0.0);
        for (std::size_t k = 0; k < art_rows.size(); ++k) {
            const std::size_t r = art_rows[k];
            ext.at(r, base_cols + k) = 1.0;
            ext.basis[r] = static_cast<int>(base_cols + k);
            phase1_costs[base_cols + k] = 1.0;
        }
        set_costs(ext, phase1_costs);
        std::vector<char> allowed(ext.width - 1, 1);
        if (!primal_simplex(ext, allowed)) return false;
        double art_sum = 0.0;
        for (std::size_t r = 0; r < ext.rows; ++r)
            if (ext.basis[r] >= static_cast<int>(base_cols)) art_sum += std::max(ext.rhs(r), 0.0);
        if (art_sum > kFeasTol) {
            feasible = false;
            return true;
        }
        // Drive any zero-level artificial out of the basis when possible.
        for (std::size_t r = 0; r < ext.rows; ++r) {
            if (ext.basis[r] < static_cast<int>(base_cols)) continue;
            for (std::size_t j = 0; j < base_cols; ++j)
                if (std::abs(ext.at(r, j)) > kPivotTol) {
                    ext.pivot(r, j);
                    break;
                }
        }
        // Copy the regular columns back into the caller's tableau.
        for (std::size_t r = 0; r < tab.rows; ++r) {
            for (std::size_t c = 0; c < base_cols; ++c) tab.at(r, c) = ext.at(r, c);
            tab.rhs(r) = ext.rhs(r);
        }
        tab.basis = ext.basis;
        // A leftover artificial marks a redundant row; freeze it by treating
        // its column as absent (it stays basic at level zero).
        for (auto& b : tab.basis)
            if (b >= static_cast<int>(base_cols)) b = static_cast<int>(base_cols); // sentinel
    }

    std::vector<double> costs(base_cols + 1, 0.0); // +1 slot for the sentinel
    for (std::size_t j = 0; j < n; ++j) costs[j] = lp.objective[j];
    const std::size_t ncols = tab.width - 1;
    for (std::size_t j = 0; j < ncols; ++j) tab.z[j] = costs[std::min(j, base_cols)];
    for (std::size_t r = 0; r < tab.rows; ++r) {
        const auto b = static_cast<std::size_t>(tab.basis[r]);
        const double cb = costs[std::min(b, base_cols)];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < ncols; ++j) tab.z[j] -= cb * tab.at(r, j);
    }
    for (std::size_t r = 0; r < tab.rows; ++r) {
        const auto b = static_cast<std::size_t>(tab.basis[r]);
        if (b < ncols) tab.z[b] = 0.0;
    }
    std::vector<char> allowed(ncols, 1);
    if (!primal_simplex(tab, allowed)) return false;
    feasible = true;
    return true;
}

} // namespace

LpSolution solve_lp(const LinearProgram& lp, double eps) {
    validate(lp);
    LpSolution sol;
    sol.tolerance = eps;

    if (lp.simplex_cap < 0.0) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }

    Tableau tab = build(lp);
    const bool nonneg_costs =
        std::all_of(lp.objective.begin(), lp.objective.end(), [](double c) { return c >= 0.0; });

    bool feasible = false;
    bool converged;
    if (nonneg_costs) {
        for (std::size_t j = 0; j < static_cast<std::size_t>(lp.num_vars); ++j)
            tab.z[j] = lp.objective[j];
        converged = dual_simplex(tab, feasible);
    } else {
        converged = two_phase(lp, tab, feasible);
    }
    if (!converged) throw std::logic_error("lp: simplex failed to converge");

    if (!feasible) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x = extract(tab, lp.num_vars);
    sol.objective_value = 0.0;
    for (int j = 0; j < lp.num_vars; ++j)
        sol.objective_value += lp.objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];

    // Loud check of the advertised contract: constraints hold within relative
    // slack eps (floored at a small absolute tolerance).
    const double slack = std::max(eps, 1e-7);
    double total = 0.0;
    for (double v : sol.x) total += v;
    if (total > lp.simplex_cap * (1.0 + slack) + slack)
        throw std::logic_error("lp: returned point violates the simplex cap");
    for (const auto& row : lp.ge_rows) {
        double lhs = 0.0;
        for (int j = 0; j < lp.num_vars; ++j)
            lhs += row.coeffs[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
        const double allowed_gap = slack * std::max(1.0, std::abs(row.rhs));
        if (lhs < row.rhs - allowed_gap)
            throw std::logic_error("lp: returned point violates a ge constraint");
    }
    return sol;
}

} // namespace graphbandit
