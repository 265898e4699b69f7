#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace graphbandit {

// Probability vector over actions. Full distributions sum to one (validated
// where required); some producers return sub-distributions and say so.
struct ActionDistribution {
    std::vector<double> probs;

    int size() const { return static_cast<int>(probs.size()); }
    double sum() const {
        double s = 0.0;
        for (double p : probs) s += p;
        return s;
    }
};

inline bool is_full_distribution(const ActionDistribution& d, double tol = 1e-9) {
    for (double p : d.probs)
        if (!(p >= 0.0) || !std::isfinite(p)) return false;
    return std::abs(d.sum() - 1.0) <= tol;
}

// Inverse-CDF sampling: smallest index whose cumulative probability exceeds u.
inline int sample_index(const ActionDistribution& d, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < d.probs.size(); ++i) {
        cum += d.probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(d.probs.size()) - 1;
}

} // namespace graphbandit
