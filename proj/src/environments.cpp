#include "graphbandit/environments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "graphbandit/errors.hpp"
#include "graphbandit/rng.hpp"

namespace graphbandit {

namespace {

void check_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0, 1]");
}

} // namespace

LossMatrix LossMatrix::fixed(std::vector<std::vector<double>> values) {
    if (values.empty()) throw std::invalid_argument("loss matrix needs at least one row");
    const std::size_t n = values.front().size();
    if (n == 0) throw std::invalid_argument("loss matrix needs at least one column");
    for (const auto& row : values) {
        if (row.size() != n) throw std::invalid_argument("loss matrix rows must have equal length");
        for (double v : row) check_unit_interval(v, "loss");
    }
    LossMatrix m;
    m.horizon_ = static_cast<std::int64_t>(values.size());
    m.n_ = static_cast<int>(n);
    m.values_ = std::move(values);
    return m;
}

LossMatrix LossMatrix::bernoulli(std::vector<double> means, std::int64_t T, std::uint64_t seed) {
    if (means.empty()) throw std::invalid_argument("loss matrix needs at least one arm");
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    for (double v : means) check_unit_interval(v, "mean");
    LossMatrix m;
    m.horizon_ = T;
    m.n_ = static_cast<int>(means.size());
    m.lazy_ = true;
    m.seed_ = seed;
    m.means_ = std::move(means);
    return m;
}

double LossMatrix::at(std::int64_t t, int arm) const {
    if (t < 0 || t >= horizon_) throw std::out_of_range("loss matrix: round out of range");
    if (arm < 0 || arm >= n_) throw std::out_of_range("loss matrix: arm out of range");
    if (!lazy_) return values_[static_cast<std::size_t>(t)][static_cast<std::size_t>(arm)];
    const double u = rng::uniform01(seed_, static_cast<std::uint64_t>(t),
                                    static_cast<std::uint64_t>(arm));
    return u < (*means_)[static_cast<std::size_t>(arm)] ? 1.0 : 0.0;
}

std::vector<double> LossMatrix::row(std::int64_t t) const {
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = at(t, i);
    return out;
}

LossMatrix gen_hard_instance(const FeedbackGraph& g, const HardInstanceSpec& spec,
                             std::int64_t T) {
    const int n = g.num_actions();
    if (spec.targets.empty()) throw std::invalid_argument("hard instance: empty target set");
    for (int v : spec.targets)
        if (v < 0 || v >= n) throw std::out_of_range("hard instance: target out of range");
    if (!spec.targets.contains(spec.optimal_arm))
        throw std::invalid_argument("hard instance: optimal arm must belong to the target set");
    if (!(spec.gap > 0.0 && spec.gap <= 0.5))
        throw std::invalid_argument("hard instance: gap must lie in (0, 1/2]");
    std::vector<double> means(static_cast<std::size_t>(n), 1.0);
    for (int v : spec.targets) means[static_cast<std::size_t>(v)] = 0.5;
    means[static_cast<std::size_t>(spec.optimal_arm)] = 0.5 - spec.gap;
    return LossMatrix::bernoulli(std::move(means), T, spec.seed);
}

LossMatrix gen_fixed(std::vector<std::vector<double>> values) {
    return LossMatrix::fixed(std::move(values));
}

namespace {

bool parse_cell(const std::string& cell, double& out) {
    std::size_t begin = 0, end = cell.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(cell[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(cell[end - 1]))) --end;
    if (begin == end) return false;
    const char* first = cell.data() + begin;
    const char* last = cell.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_line(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string cell = line.substr(start, comma == std::string::npos
                                                        ? std::string::npos
                                                        : comma - start);
        double v = 0.0;
        if (!parse_cell(cell, v)) return false;
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return true;
}

} // namespace

LossMatrix load_loss_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open loss file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        if (!parse_line(line, row)) {
            if (first_data_line) continue; // header
            throw ConfigError("loss file " + path + ": line " + std::to_string(line_no) +
                              " is not numeric");
        }
        first_data_line = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigError("loss file " + path + ": line " + std::to_string(line_no) +
                              " has " + std::to_string(row.size()) + " columns, expected " +
                              std::to_string(rows.front().size()));
        for (double v : row)
            if (!(v >= 0.0 && v <= 1.0))
                throw ConfigError("loss file " + path + ": line " + std::to_string(line_no) +
                                  " has a value outside [0, 1]");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("loss file " + path + ": no data rows");
    return LossMatrix::fixed(std::move(rows));
}

double compute_regret(const std::vector<TraceStep>& trace, const RegretMode& mode) {
    if (trace.empty()) throw std::invalid_argument("regret: empty trace");
    const std::size_t n = trace.front().losses.size();
    if (n == 0) throw std::invalid_argument("regret: empty loss row");
    for (const TraceStep& step : trace) {
        if (step.losses.size() != n)
            throw std::invalid_argument("regret: loss rows must have equal length");
        if (step.chosen < 0 || static_cast<std::size_t>(step.chosen) >= n)
            throw std::out_of_range("regret: chosen arm out of range");
        for (double v : step.losses) check_unit_interval(v, "loss");
    }
    if (mode.kind == RegretKind::Realized) {
        if (!mode.means.empty())
            throw std::invalid_argument("regret: realized mode must not carry means");
        std::vector<double> arm_total(n, 0.0);
        double chosen_total = 0.0;
        for (const TraceStep& step : trace) {
            chosen_total += step.losses[static_cast<std::size_t>(step.chosen)];
            for (std::size_t k = 0; k < n; ++k) arm_total[k] += step.losses[k];
        }
        return chosen_total - *std::min_element(arm_total.begin(), arm_total.end());
    }
    if (mode.means.size() != n)
        throw std::invalid_argument("regret: pseudo mode needs one mean per arm");
    const double best = *std::min_element(mode.means.begin(), mode.means.end());
    double total = 0.0;
    for (const TraceStep& step : trace)
        total += mode.means[static_cast<std::size_t>(step.chosen)] - best;
    return total;
}

} // namespace graphbandit
