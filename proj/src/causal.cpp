#include "optint/causal.hpp"

#include <algorithm>
#include <cmath>

#include "optint/error.hpp"

namespace optint {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_length(const Eigen::VectorXd& v, std::size_t n, const char* what) {
    if (static_cast<std::size_t>(v.size()) != n)
        throw FormatError(std::string(what) + " must have " + std::to_string(n) + " entries, got " +
                          std::to_string(v.size()));
}

}  // namespace

double EffectDecomposition::expectation(std::size_t j, double c) const { return mu[idx(j)] + alpha[idx(j)] * c; }

EffectDecomposition propagate(const Dag& dag, const Eigen::VectorXd& means, const Eigen::VectorXd& noise_means,
                              std::size_t i) {
    const std::size_t n = dag.size();
    if (i >= n) throw IndexOutOfRange(i, n);
    check_length(means, n, "means");
    check_length(noise_means, n, "noise means");

    EffectDecomposition out;
    out.intervened_index = i;
    out.mu = means;
    out.alpha = Eigen::VectorXd::Zero(idx(n));
    out.alpha[idx(i)] = 1.0;
    out.mu[idx(i)] = 0.0;

    for (std::size_t k : dag.topological_order()) {
        if (k == i || dag.is_root(k)) continue;
        double mu = 0.0;
        double alpha = 0.0;
        for (const auto& e : dag.in_edges(k)) {
            alpha += e.weight * out.alpha[idx(e.source)];
            if (e.source != i) mu += e.weight * out.mu[idx(e.source)];
        }
        out.mu[idx(k)] = mu + noise_means[idx(k)];
        out.alpha[idx(k)] = alpha;
    }
    return out;
}

double total_effect_expectation(const Scm& scm, std::size_t i, double c, std::size_t j) {
    if (j >= scm.size()) throw IndexOutOfRange(j, scm.size());
    const Eigen::VectorXd means = analytic_means(scm);
    const Eigen::VectorXd noise = estimate_noise_means(scm.dag(), means);
    return propagate(scm.dag(), means, noise, i).expectation(j, c);
}

double causal_effect(const Dag& dag, std::size_t i, std::size_t j) {
    if (j >= dag.size()) throw IndexOutOfRange(j, dag.size());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(idx(dag.size()));
    return propagate(dag, zero, zero, i).alpha[idx(j)];
}

double causal_effect_regression(const Dataset& data, const Dag& dag, std::size_t i, std::size_t j) {
    if (i >= dag.size()) throw IndexOutOfRange(i, dag.size());
    if (j >= dag.size()) throw IndexOutOfRange(j, dag.size());
    if (i == j) return 1.0;
    std::vector<std::size_t> regressors{i};
    for (std::size_t p : dag.parents(i))
        if (p != j) regressors.push_back(p);
    // X_j being a parent of X_i means it cannot be caused by X_i.
    if (dag.weight(i, j) != 0.0) return 0.0;
    return fit_linear(data, j, regressors).coeffs[0];
}

double causal_effect_on_prediction(const AugmentedGraph& augmented, std::size_t i) {
    const Dag& dag = augmented.base;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(idx(dag.size()));
    return augmented.expanded_weights().dot(propagate(dag, zero, zero, i).alpha);
}

std::vector<RankedEffect> rank_effects(const AugmentedGraph& augmented, std::span<const std::size_t> candidates) {
    std::vector<RankedEffect> ranked;
    ranked.reserve(candidates.size());
    for (std::size_t c : candidates) ranked.push_back({c, causal_effect_on_prediction(augmented, c)});
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedEffect& a, const RankedEffect& b) {
        const double fa = std::abs(a.effect), fb = std::abs(b.effect);
        if (fa != fb) return fa > fb;
        return a.variable < b.variable;
    });
    return ranked;
}

std::size_t select_intervention_target(const AugmentedGraph& augmented, std::span<const std::size_t> candidates) {
    if (candidates.empty()) throw EmptyCandidates("no candidate variables to intervene on");
    for (std::size_t c : candidates) {
        if (c >= augmented.base.size()) throw IndexOutOfRange(c, augmented.base.size());
        if (c == augmented.target_index)
            throw InterveneOnTarget("the target variable cannot be an intervention candidate");
    }
    const auto ranked = rank_effects(augmented, candidates);
    if (std::abs(ranked.front().effect) < kMinCausalEffect)
        throw AllEffectsZero("no candidate has a causal effect on the prediction");
    return ranked.front().variable;
}

InterventionPlan optimal_intervention_value(const Eigen::VectorXd& means, const Dag& dag,
                                            const Eigen::VectorXd& noise_means, const PredictionModel& model,
                                            std::size_t i, double d) {
    model.check();
    model.check_indices(dag.size());
    if (i >= dag.size()) throw IndexOutOfRange(i, dag.size());
    if (i == model.target_index)
        throw InterveneOnTarget("cannot intervene on the target variable " + std::to_string(i + 1));

    InterventionPlan plan;
    plan.target_variable = i;
    plan.desired_prediction = d;
    plan.effects = propagate(dag, means, noise_means, i);

    const Eigen::VectorXd w = augment_graph(dag, model).expanded_weights();
    const double slope = w.dot(plan.effects.alpha);
    if (std::abs(slope) < kMinCausalEffect)
        throw ZeroCausalEffect("intervening on variable " + std::to_string(i + 1) +
                               " has no causal effect on the prediction");
    const double offset = w.dot(plan.effects.mu) + model.bias;
    plan.value = (d - offset) / slope;
    plan.predicted_expectation = offset + slope * plan.value;
    return plan;
}

InterventionPlan observation_specific_plan(const Eigen::VectorXd& observation, const Dag& dag,
                                           const PredictionModel& model, std::size_t i, double d) {
    check_length(observation, dag.size(), "observation");
    const Eigen::VectorXd noise = estimate_noise_means(dag, observation);
    return optimal_intervention_value(observation, dag, noise, model, i, d);
}

double naive_intervention_value(const PredictionModel& model, std::span<const double> x, std::size_t i, double d) {
    const auto it = std::find(model.predictor_indices.begin(), model.predictor_indices.end(), i);
    if (it == model.predictor_indices.end())
        throw ZeroCoefficient("variable " + std::to_string(i + 1) + " is not a predictor of the model");
    const auto k = static_cast<Eigen::Index>(it - model.predictor_indices.begin());
    const double wi = model.coeffs[k];
    if (wi == 0.0) throw ZeroCoefficient("model coefficient of variable " + std::to_string(i + 1) + " is zero");
    const double rest = predict(model, x) - model.bias - wi * x[i];
    return (d - rest - model.bias) / wi;
}

}  // namespace optint
