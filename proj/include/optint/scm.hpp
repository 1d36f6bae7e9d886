#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "optint/graph.hpp"

namespace optint {

class Rng;

struct GaussianNoise {
    double mean = 0.0;
    double stddev = 1.0;
    bool operator==(const GaussianNoise&) const = default;
};

struct UniformNoise {
    double lo = -1.0;
    double hi = 1.0;
    bool operator==(const UniformNoise&) const = default;
};

struct ConstantNoise {
    double value = 0.0;
    bool operator==(const ConstantNoise&) const = default;
};

// Additive noise term of one structural equation.
class NoiseSpec {
public:
    using Family = std::variant<GaussianNoise, UniformNoise, ConstantNoise>;

    NoiseSpec() : family_(ConstantNoise{}) {}
    NoiseSpec(GaussianNoise g);
    NoiseSpec(UniformNoise u);
    NoiseSpec(ConstantNoise c);

    const Family& family() const { return family_; }
    std::string family_name() const;
    double mean() const;
    double variance() const;
    double draw(Rng& rng) const;

    bool operator==(const NoiseSpec&) const = default;

private:
    Family family_;
};

// Rows are observations, columns are variables.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dataset {
    Matrix rows;
    std::vector<std::string> names;

    std::size_t row_count() const { return static_cast<std::size_t>(rows.rows()); }
    std::size_t column_count() const { return static_cast<std::size_t>(rows.cols()); }
    Eigen::VectorXd column_means() const;
};

// Linear SCM: X_i = sum_k b_ik X_k + N_i, evaluated in topological order.
// Roots take their noise draw as value.
class Scm {
public:
    Scm(Dag dag, std::vector<NoiseSpec> noises);

    const Dag& dag() const { return dag_; }
    const std::vector<NoiseSpec>& noises() const { return noises_; }
    std::size_t size() const { return dag_.size(); }

    bool operator==(const Scm&) const = default;

private:
    Dag dag_;
    std::vector<NoiseSpec> noises_;
};

// Rows are generated in blocks of this many; block b draws from
// Rng(derive_seed(seed, b)), so the output does not depend on how blocks are
// scheduled.
inline constexpr std::size_t kSampleBlockRows = 1024;

Dataset sample(const Scm& scm, std::size_t m, std::uint64_t seed);

// Same as sample() but X_i is fixed to c in every row. Noise for X_i is still
// drawn, so all other noise terms match sample() under the same seed.
Dataset sample_interventional(const Scm& scm, std::size_t i, double c, std::size_t m, std::uint64_t seed);

// E[X] by forward propagation of noise means.
Eigen::VectorXd analytic_means(const Scm& scm);

// E[N_i] = mu_i - sum_k b_ik mu_k for non-roots; 0 for roots. mu may be
// population means, empirical means, or a single observation.
Eigen::VectorXd estimate_noise_means(const Dag& dag, const Eigen::VectorXd& mu);

}  // namespace optint
