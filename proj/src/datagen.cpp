#include "optint/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "optint/error.hpp"
#include "optint/rng.hpp"

namespace optint {

void DagGenConfig::check() const {
    if (n_roots < 1) throw InvalidConfig("n_roots must be at least 1");
    if (!(parent_prob >= 0.0 && parent_prob <= 1.0)) throw InvalidConfig("parent_prob must lie in [0, 1]");
    if (min_parents > n_roots) throw InvalidConfig("min_parents cannot exceed n_roots");
    if (!(std::isfinite(weight_min) && std::isfinite(weight_max) && weight_min > 0.0 && weight_min <= weight_max))
        throw InvalidConfig("weight range must satisfy 0 < weight_min <= weight_max");
}

Scm generate_random_scm(const DagGenConfig& config) {
    config.check();
    const std::size_t n = config.n_roots + config.n_descendants;
    Rng rng(derive_seed(config.seed, 0));
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    for (std::size_t k = config.n_roots; k < n; ++k) {
        std::vector<std::size_t> chosen;
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < k; ++j) {
            if (rng.uniform() < config.parent_prob)
                chosen.push_back(j);
            else
                rest.push_back(j);
        }
        while (chosen.size() < config.min_parents) {
            const std::size_t pick = static_cast<std::size_t>(rng.index(rest.size()));
            chosen.push_back(rest[pick]);
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t j : chosen) {
            double magnitude = rng.uniform(config.weight_min, config.weight_max);
            if (config.mixed_signs && rng.coin()) magnitude = -magnitude;
            w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = magnitude;
        }
    }
    return Scm(Dag(std::move(w)), std::vector<NoiseSpec>(n, config.noise));
}

std::vector<int> median_split_labels(const Dataset& data, std::size_t target_index) {
    if (target_index >= data.column_count()) throw IndexOutOfRange(target_index, data.column_count());
    const std::size_t m = data.row_count();
    if (m < 1) throw InvalidConfig("median split needs at least one row");
    const auto column = data.rows.col(static_cast<Eigen::Index>(target_index));
    std::vector<double> sorted(column.begin(), column.end());
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((m - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double median = *mid;

    std::vector<int> labels(m);
    for (std::size_t r = 0; r < m; ++r) labels[r] = column[static_cast<Eigen::Index>(r)] > median ? 1 : 0;
    return labels;
}

std::size_t pick_random_target(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidConfig("need at least one variable to pick a target");
    Rng rng(derive_seed(seed, 0));
    return static_cast<std::size_t>(rng.index(n));
}

}  // namespace optint
