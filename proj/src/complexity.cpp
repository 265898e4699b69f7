#include "graphbandit/complexity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "graphbandit/domination.hpp"
#include "graphbandit/errors.hpp"
#include "graphbandit/lp.hpp"

namespace graphbandit {

namespace {

constexpr int kCoverInf = 1 << 20;

void validate_target_set(const FeedbackGraph& g, const VertexSet& I, bool allow_empty = false) {
    if (!allow_empty && I.empty()) throw std::invalid_argument("target set must be nonempty");
    for (int v : I)
        if (v < 0 || v >= g.num_actions()) throw std::out_of_range("target set index out of range");
}

void validate_gap_and_horizon(double delta, std::int64_t T) {
    if (!(delta > 0.0) || delta > 0.5) throw std::invalid_argument("gap must lie in (0, 1/2]");
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
}

double default_eps(double delta, int n, std::int64_t T) {
    const double nd = static_cast<double>(n);
    const double td = static_cast<double>(T);
    return std::max(delta * delta / (nd * nd * nd * nd * td * td), 1e-12);
}

// The observation-covering program restricted to columns that can observe
// anything in I; dropped columns are zero in every optimum since they have
// positive cost and appear in no constraint.
struct QProgram {
    LinearProgram lp;
    std::vector<int> cols; // original action per LP variable
};

QProgram build_q_program(const FeedbackGraph& g, const VertexSet& I, double delta,
                         std::int64_t T) {
    const int n = g.num_actions();
    const double td = static_cast<double>(T);
    QProgram p;
    for (int i = 0; i < n; ++i) {
        const std::uint8_t* r = g.row(i);
        for (int j : I)
            if (r[j]) {
                p.cols.push_back(i);
                break;
            }
    }
    p.lp.num_vars = static_cast<int>(p.cols.size());
    p.lp.simplex_cap = 1.0;
    p.lp.objective.resize(p.cols.size());
    for (std::size_t c = 0; c < p.cols.size(); ++c)
        p.lp.objective[c] = I.contains(p.cols[c]) ? td * delta : td;
    const double need = 1.0 / (delta * delta);
    for (int j : I) {
        LinearProgram::Row row;
        row.coeffs.resize(p.cols.size(), 0.0);
        for (std::size_t c = 0; c < p.cols.size(); ++c)
            if (g.has_edge(p.cols[c], j)) row.coeffs[c] = td;
        row.rhs = need;
        p.lp.ge_rows.push_back(std::move(row));
    }
    return p;
}

struct GridPoint {
    double delta = 0.0;
    bool feasible = false;
    double lp_value = 0.0;
    std::vector<double> pi; // full length n, zeros when infeasible
};

// Solves the covering program along the grid in descending gap order. Shrinking
// the gap only tightens the constraints, so after the first infeasible point
// the remaining ones are infeasible without solving; a point whose requirement
// 1/gap^2 exceeds T is infeasible outright because observation mass per arm is
// at most T under the unit cap.
std::vector<GridPoint> scan_grid(const FeedbackGraph& g, const VertexSet& I, std::int64_t T,
                                 double eps) {
    const int n = g.num_actions();
    std::vector<GridPoint> out;
    bool alive = true;
    for (double delta : delta_grid(n, T)) {
        GridPoint pt;
        pt.delta = delta;
        pt.pi.assign(static_cast<std::size_t>(n), 0.0);
        if (alive && 1.0 / (delta * delta) <= static_cast<double>(T)) {
            QProgram qp = build_q_program(g, I, delta, T);
            const double used_eps = eps > 0.0 ? eps : default_eps(delta, n, T);
            LpSolution sol = solve_lp(qp.lp, used_eps);
            if (sol.status == LpStatus::Optimal) {
                pt.feasible = true;
                pt.lp_value = sol.objective_value;
                for (std::size_t c = 0; c < qp.cols.size(); ++c)
                    pt.pi[static_cast<std::size_t>(qp.cols[c])] = sol.x[c];
            } else {
                alive = false;
            }
        } else {
            alive = false;
        }
        out.push_back(std::move(pt));
    }
    return out;
}

int floor_log2(std::int64_t x) { return 63 - std::countl_zero(static_cast<std::uint64_t>(x)); }

// delta_A(J) for every subset of I at once: cover[c] holds the positions of I
// observed by candidate c, dp[mask] the fewest candidates covering mask.
std::vector<int> subset_cover_table(const std::vector<std::uint32_t>& covers, int m) {
    const std::size_t size = 1ull << m;
    std::vector<std::vector<std::size_t>> coverers(static_cast<std::size_t>(m));
    for (std::size_t c = 0; c < covers.size(); ++c)
        for (int pos = 0; pos < m; ++pos)
            if (covers[c] & (1u << pos)) coverers[static_cast<std::size_t>(pos)].push_back(c);
    std::vector<int> dp(size, kCoverInf);
    dp[0] = 0;
    for (std::uint32_t mask = 1; mask < size; ++mask) {
        const int b = std::countr_zero(mask);
        int best = kCoverInf;
        for (std::size_t c : coverers[static_cast<std::size_t>(b)])
            best = std::min(best, 1 + dp[mask & ~covers[c]]);
        dp[mask] = best;
    }
    return dp;
}

double sqrt_term(int cover, std::int64_t T) {
    return cover == 0 ? 0.0 : std::sqrt(static_cast<double>(cover) * static_cast<double>(T));
}

double cbrt_term(int cover, std::int64_t T) {
    return cover == 0 ? 0.0
                      : std::cbrt(static_cast<double>(cover)) *
                            std::pow(static_cast<double>(T), 2.0 / 3.0);
}

} // namespace

std::vector<double> delta_grid(int n, std::int64_t T) {
    if (n < 1 || T < 1) throw std::invalid_argument("delta_grid: bad dimensions");
    const int top = floor_log2(static_cast<std::int64_t>(n) * T) + 1;
    std::vector<double> grid;
    for (int e = 1; e <= top; ++e) grid.push_back(std::ldexp(1.0, -e));
    return grid;
}

double split_criterion(std::size_t inside_dominators, std::size_t outside_dominators,
                       std::int64_t T) {
    return std::max(sqrt_term(static_cast<int>(inside_dominators), T),
                    cbrt_term(static_cast<int>(outside_dominators), T));
}

double exploration_rate(const SplitResult& split, std::int64_t T) {
    double rate = std::numeric_limits<double>::infinity();
    if (!split.inside_dominators.empty())
        rate = std::min(rate, 1.0 / sqrt_term(static_cast<int>(split.inside_dominators.size()), T));
    if (!split.outside_dominators.empty())
        rate = std::min(rate, 1.0 / cbrt_term(static_cast<int>(split.outside_dominators.size()), T));
    return rate;
}

QFixedResult q_complexity_fixed_delta(const FeedbackGraph& g, const VertexSet& I, double delta,
                                      std::int64_t T, double eps) {
    validate_target_set(g, I);
    validate_gap_and_horizon(delta, T);
    const int n = g.num_actions();
    QFixedResult res;
    res.pi.assign(static_cast<std::size_t>(n), 0.0);
    const double capped = static_cast<double>(T) * delta;
    if (1.0 / (delta * delta) <= static_cast<double>(T)) {
        QProgram qp = build_q_program(g, I, delta, T);
        const double used_eps = eps > 0.0 ? eps : default_eps(delta, n, T);
        LpSolution sol = solve_lp(qp.lp, used_eps);
        if (sol.status == LpStatus::Optimal) {
            res.feasible = true;
            res.value = std::min(sol.objective_value, capped);
            for (std::size_t c = 0; c < qp.cols.size(); ++c)
                res.pi[static_cast<std::size_t>(qp.cols[c])] = sol.x[c];
            return res;
        }
    }
    // Empty feasible region: the capped branch is the value of giving up.
    res.feasible = false;
    res.value = capped;
    return res;
}

double q_complexity(const FeedbackGraph& g, const VertexSet& I, std::int64_t T, double eps) {
    validate_target_set(g, I);
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    double best = 0.0;
    for (const GridPoint& pt : scan_grid(g, I, T, eps)) {
        const double capped = static_cast<double>(T) * pt.delta;
        best = std::max(best, pt.feasible ? std::min(pt.lp_value, capped) : capped);
    }
    return best;
}

RSetResult r_complexity_set(const FeedbackGraph& g, const VertexSet& I, std::int64_t T,
                            int guard) {
    validate_target_set(g, I, /*allow_empty=*/true);
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    if (static_cast<int>(I.size()) > guard)
        throw SizeGuardError("r_complexity_set: |I| exceeds size guard");
    if (I.empty()) return {0.0, VertexSet{}};

    const int n = g.num_actions();
    const int m = static_cast<int>(I.size());
    std::vector<std::uint32_t> covers_from_I;
    std::vector<std::uint32_t> covers_from_V;
    for (int v = 0; v < n; ++v) {
        std::uint32_t c = 0;
        const std::uint8_t* r = g.row(v);
        for (int pos = 0; pos < m; ++pos)
            if (r[I.members()[static_cast<std::size_t>(pos)]]) c |= 1u << pos;
        covers_from_V.push_back(c);
        if (I.contains(v)) covers_from_I.push_back(c);
    }
    const std::vector<int> from_inside = subset_cover_table(covers_from_I, m);
    const std::vector<int> from_anywhere = subset_cover_table(covers_from_V, m);

    const auto full = static_cast<std::uint32_t>((1ull << m) - 1);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::uint32_t jmask = 0; jmask <= full; ++jmask) {
        const int din = from_inside[jmask];
        const int dout = from_anywhere[full & ~jmask];
        if (din >= kCoverInf || dout >= kCoverInf) continue;
        const double val = std::max(sqrt_term(din, T), cbrt_term(dout, T));
        if (val < best) {
            best = val;
            best_mask = jmask;
        }
    }
    std::vector<int> argmin;
    for (int pos = 0; pos < m; ++pos)
        if (best_mask & (1u << pos)) argmin.push_back(I.members()[static_cast<std::size_t>(pos)]);
    return {best, VertexSet(std::move(argmin))};
}

namespace {

VertexSet set_from_mask(std::uint32_t mask, int n) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) members.push_back(v);
    return VertexSet(std::move(members));
}

template <typename PerSet>
double max_over_subsets(const FeedbackGraph& g, std::int64_t T, int guard, bool parallel,
                        PerSet per_set) {
    const int n = g.num_actions();
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    if (n > guard) throw SizeGuardError("exact enumeration: n exceeds size guard");
    const auto total = static_cast<std::int64_t>(1ull << n);
    double best = 0.0;
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16) reduction(max : best)
        for (std::int64_t mask = 1; mask < total; ++mask)
            best = std::max(best, per_set(static_cast<std::uint32_t>(mask)));
    } else {
        for (std::int64_t mask = 1; mask < total; ++mask)
            best = std::max(best, per_set(static_cast<std::uint32_t>(mask)));
    }
    return best;
}

} // namespace

double r_complexity(const FeedbackGraph& g, std::int64_t T, int guard) {
    return max_over_subsets(g, T, guard, true, [&](std::uint32_t mask) {
        return r_complexity_set(g, set_from_mask(mask, g.num_actions()), T, guard).value;
    });
}

double r_complexity_serial(const FeedbackGraph& g, std::int64_t T, int guard) {
    return max_over_subsets(g, T, guard, false, [&](std::uint32_t mask) {
        return r_complexity_set(g, set_from_mask(mask, g.num_actions()), T, guard).value;
    });
}

double q_complexity_max(const FeedbackGraph& g, std::int64_t T, double eps, int guard) {
    return max_over_subsets(g, T, guard, true, [&](std::uint32_t mask) {
        return q_complexity(g, set_from_mask(mask, g.num_actions()), T, eps);
    });
}

double q_complexity_max_serial(const FeedbackGraph& g, std::int64_t T, double eps, int guard) {
    return max_over_subsets(g, T, guard, false, [&](std::uint32_t mask) {
        return q_complexity(g, set_from_mask(mask, g.num_actions()), T, eps);
    });
}

SplitResult split_proxies(const FeedbackGraph& g, const VertexSet& I, std::int64_t T, double eps) {
    validate_target_set(g, I);
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    const int n = g.num_actions();
    const VertexSet everyone = VertexSet::range(n);

    SplitResult best;
    bool found = false;
    for (const GridPoint& pt : scan_grid(g, I, T, eps)) {
        if (!pt.feasible) break; // grid is scanned largest gap first
        SplitResult cand;
        cand.gap = pt.delta;
        cand.pi = pt.pi;
        std::vector<int> inside, outside;
        for (int j : I) {
            double in_mass = 0.0, total_mass = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!g.has_edge(i, j)) continue;
                const double p = pt.pi[static_cast<std::size_t>(i)];
                total_mass += p;
                if (I.contains(i)) in_mass += p;
            }
            if (in_mass >= 0.5 * total_mass)
                inside.push_back(j);
            else
                outside.push_back(j);
        }
        cand.inside_targets = VertexSet(std::move(inside));
        cand.outside_targets = VertexSet(std::move(outside));
        cand.inside_dominators = greedy_dominating_set(g, I, cand.inside_targets);
        cand.outside_dominators = greedy_dominating_set(g, everyone, cand.outside_targets);
        cand.criterion_value =
            split_criterion(cand.inside_dominators.size(), cand.outside_dominators.size(), T);
        if (!found || cand.criterion_value < best.criterion_value) {
            best = std::move(cand);
            found = true;
        }
    }
    if (!found) {
        // Nothing on the grid is achievable under the unit budget; explore all
        // of I from inside.
        best.gap = delta_grid(n, T).back();
        best.pi.assign(static_cast<std::size_t>(n), 0.0);
        best.inside_targets = I;
        best.outside_targets = VertexSet{};
        best.inside_dominators = greedy_dominating_set(g, I, I);
        best.outside_dominators = VertexSet{};
        best.criterion_value = split_criterion(best.inside_dominators.size(), 0, T);
    }

    if (set_union(best.inside_targets, best.outside_targets) != I ||
        !set_intersection(best.inside_targets, best.outside_targets).empty() ||
        !dominates(g, best.inside_dominators, best.inside_targets) ||
        !dominates(g, best.outside_dominators, best.outside_targets) ||
        !set_difference(best.inside_dominators, I).empty())
        throw std::logic_error("split_proxies: split invariants violated");
    return best;
}

ComplexityReport analyze(const FeedbackGraph& g, std::int64_t T, const AnalyzeOptions& opts) {
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    const int n = g.num_actions();
    const bool exact = !opts.approximate;
    ComplexityReport report;
    report.exact = exact;
    if (exact) {
        report.alpha = exact_independence_number(g);
        report.delta = exact_dominating_number(g, VertexSet::range(n), VertexSet::range(n)).value();
        report.r_star = r_complexity(g, T, opts.exact_guard);
        report.q_star = q_complexity_max(g, T, 0.0, opts.exact_guard);
    } else {
        std::vector<VertexSet> candidates;
        candidates.push_back(greedy_independent_set(g));
        for (int s = 0; s < opts.samples; ++s)
            candidates.push_back(greedy_independent_set(g, opts.seed + static_cast<std::uint64_t>(s)));
        std::size_t alpha = 0;
        double r_star = 0.0, q_star = 0.0;
        for (const VertexSet& I : candidates) {
            if (I.empty()) continue;
            alpha = std::max(alpha, I.size());
            r_star = std::max(r_star, split_proxies(g, I, T).criterion_value);
            q_star = std::max(q_star, q_complexity(g, I, T));
        }
        report.alpha = static_cast<int>(alpha);
        report.delta =
            static_cast<int>(greedy_dominating_set(g, VertexSet::range(n), VertexSet::range(n)).size());
        report.r_star = r_star;
        report.q_star = q_star;
    }
    const auto a = static_cast<std::int64_t>(report.alpha);
    report.regime = T >= a * a * a ? Regime::LargeT : Regime::SmallT;
    return report;
}

nlohmann::json report_to_json(const ComplexityReport& report) {
    nlohmann::json j;
    j["alpha"] = report.alpha;
    j["delta"] = report.delta;
    j["q_star"] = report.q_star;
    j["r_star"] = report.r_star;
    j["regime"] = report.regime == Regime::LargeT ? "LargeT" : "SmallT";
    j["exact"] = report.exact;
    return j;
}

} // namespace graphbandit
