#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "optint/scm.hpp"

namespace optint {

// Random linear SCM generator. Vertices 0..n_roots-1 are roots; each later
// vertex k picks each earlier vertex as a parent with probability
// parent_prob, topped up to min_parents by uniform choice. Edge magnitudes
// are uniform in [weight_min, weight_max], negative with probability 1/2
// when mixed_signs is set. Every variable gets the same noise.
struct DagGenConfig {
    std::size_t n_roots = 20;
    std::size_t n_descendants = 50;
    double parent_prob = 0.05;
    std::size_t min_parents = 1;
    double weight_min = 0.5;
    double weight_max = 1.5;
    bool mixed_signs = true;
    NoiseSpec noise = UniformNoise{-1.0, 1.0};
    std::uint64_t seed = 0;

    // Throws InvalidConfig.
    void check() const;
};

Scm generate_random_scm(const DagGenConfig& config);

// Label 0 iff the target value is <= the median, 1 otherwise. For even m the
// median is the lower of the two middle values.
std::vector<int> median_split_labels(const Dataset& data, std::size_t target_index);

// Uniform over 0..n-1.
std::size_t pick_random_target(std::size_t n, std::uint64_t seed);

}  // namespace optint
