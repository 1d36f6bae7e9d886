#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "optint/graph.hpp"
#include "optint/models.hpp"
#include "optint/scm.hpp"

namespace optint {

// E[X_j | do(X_i = c)] = mu[j] + alpha[j] * c for every j.
struct EffectDecomposition {
    std::size_t intervened_index = 0;
    Eigen::VectorXd mu;
    Eigen::VectorXd alpha;

    double expectation(std::size_t j, double c) const;
};

// Propagates an intervention on X_i through the graph in topological order.
//
// `means` holds the pre-intervention expectations; only root entries are read
// (roots other than i keep their mean, alpha = 0). `noise_means` holds E[N_k]
// for non-roots, e.g. from estimate_noise_means(); root entries are ignored.
// Non-root k != i:
//   alpha[k] = sum_{q in pa(k)} b_kq alpha[q]
//   mu[k]    = sum_{q in pa(k), q != i} b_kq mu[q] + noise_means[k]
// and mu[i] = 0, alpha[i] = 1.
EffectDecomposition propagate(const Dag& dag, const Eigen::VectorXd& means, const Eigen::VectorXd& noise_means,
                              std::size_t i);

// E[X_j | do(X_i = c)] using the scm's analytic means.
double total_effect_expectation(const Scm& scm, std::size_t i, double c, std::size_t j);

// d/dc E[X_j | do(X_i = c)], i.e. the sum over directed paths i -> j of the
// products of edge weights.
double causal_effect(const Dag& dag, std::size_t i, std::size_t j);

// Empirical estimate of the same quantity: coefficient of X_i when regressing
// X_j on X_i and pa(X_i).
double causal_effect_regression(const Dataset& data, const Dag& dag, std::size_t i, std::size_t j);

// Causal effect of X_i on the prediction node.
double causal_effect_on_prediction(const AugmentedGraph& augmented, std::size_t i);

struct RankedEffect {
    std::size_t variable = 0;
    double effect = 0.0;
};

// Candidates sorted by |effect| descending, ties by lower index.
std::vector<RankedEffect> rank_effects(const AugmentedGraph& augmented, std::span<const std::size_t> candidates);

// Effects with magnitude below this are treated as "cannot move the
// prediction".
inline constexpr double kMinCausalEffect = 1e-12;

// Candidate with the greatest |effect| on the prediction, ties to the lower
// index. Throws EmptyCandidates, InterveneOnTarget (target among the
// candidates) or AllEffectsZero.
std::size_t select_intervention_target(const AugmentedGraph& augmented, std::span<const std::size_t> candidates);

struct InterventionPlan {
    std::size_t target_variable = 0;  // the intervened variable
    double value = 0.0;
    double desired_prediction = 0.0;
    double predicted_expectation = 0.0;
    EffectDecomposition effects;
};

// Closed-form minimizer of (E[Yhat | do(X_i = c)] - d)^2:
//   c = (d - w~'mu - w0) / (w~'alpha)
// with w~ the model coefficients expanded to all n variables (zero at the
// target and at non-predictors). Throws InterveneOnTarget if i is the model's
// target and ZeroCausalEffect if |w~'alpha| < kMinCausalEffect.
InterventionPlan optimal_intervention_value(const Eigen::VectorXd& means, const Dag& dag,
                                            const Eigen::VectorXd& noise_means, const PredictionModel& model,
                                            std::size_t i, double d);

// Plan for a single observation: its values replace the means and its
// implied noise terms replace the noise means.
InterventionPlan observation_specific_plan(const Eigen::VectorXd& observation, const Dag& dag,
                                           const PredictionModel& model, std::size_t i, double d);

// Solves the prediction equation for x_i while holding the other observed
// values fixed; ignores causal propagation. Throws ZeroCoefficient if X_i is
// not a predictor or its coefficient is zero.
double naive_intervention_value(const PredictionModel& model, std::span<const double> x, std::size_t i, double d);

}  // namespace optint
