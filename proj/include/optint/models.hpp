#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optint/graph.hpp"
#include "optint/scm.hpp"

namespace optint {

class Rng;

enum class ModelKind { linear, logistic };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& s);

// phi(x) = bias + sum_k coeffs[k] * x[predictor_indices[k]]. For the logistic
// kind phi is the log-odds of class 1.
struct PredictionModel {
    ModelKind kind = ModelKind::linear;
    double bias = 0.0;
    Eigen::VectorXd coeffs;
    std::vector<std::size_t> predictor_indices;
    std::size_t target_index = 0;

    // Throws FormatError if the target is a predictor, if predictors repeat,
    // or if coeffs and predictor_indices differ in length.
    void check() const;

    // Throws IndexOutOfRange unless every index is below n.
    void check_indices(std::size_t n) const;
};

// x is a full observation (one value per variable).
double predict(const PredictionModel& model, std::span<const double> x);

// 0 if phi < 0, 1 if phi > 0, a fair coin from `tie_breaker` if phi == 0.
int decision(const PredictionModel& model, std::span<const double> x, Rng& tie_breaker);

// Ordinary least squares with an intercept, solved by column-pivoting QR.
// Throws InsufficientRows if m <= p and RankDeficient if [1, X] has
// dependent columns.
PredictionModel fit_linear(const Dataset& data, std::size_t target_index,
                           const std::vector<std::size_t>& predictor_indices);

struct LogisticOptions {
    double tol = 1e-8;     // on the max absolute coefficient update
    int max_iter = 100;
    double l2 = 1e-6;      // ridge penalty on the slopes, not the bias
    bool standardize = false;
};

struct LogisticFit {
    PredictionModel model;
    int iterations = 0;
    bool converged = false;
    // Penalized log-likelihood after each accepted step, starting with the
    // initial all-zero coefficients.
    std::vector<double> objective_trace;
};

// Penalized maximum likelihood by IRLS (Newton) with step halving. Reports
// non-convergence through LogisticFit::converged rather than throwing.
// Throws SingleClass if the labels contain only one class.
LogisticFit fit_logistic(const Dataset& data, std::span<const int> labels,
                         const std::vector<std::size_t>& predictor_indices, std::size_t target_index,
                         const LogisticOptions& options = {});

// The base DAG with the prediction node attached as an extra sink whose
// parents are the predictors and whose edge strengths are the coefficients.
struct AugmentedGraph {
    Dag base;
    std::vector<std::size_t> yhat_parents;
    Eigen::VectorXd yhat_weights;
    double yhat_bias = 0.0;
    std::size_t target_index = 0;

    std::size_t yhat_index() const { return base.size(); }

    // Coefficients scattered to a length-n vector: coefficient of predictor
    // k at position k, zero elsewhere (including the target).
    Eigen::VectorXd expanded_weights() const;

    // The (n+1)-vertex graph with the prediction node last.
    Dag as_dag() const;
};

AugmentedGraph augment_graph(const Dag& dag, const PredictionModel& model);

}  // namespace optint
