#include "optint/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "optint/error.hpp"
#include "optint/rng.hpp"

namespace optint {

std::string to_string(ModelKind kind) { return kind == ModelKind::linear ? "linear" : "logistic"; }

ModelKind parse_model_kind(const std::string& s) {
    if (s == "linear") return ModelKind::linear;
    if (s == "logistic") return ModelKind::logistic;
    throw FormatError("unknown model kind '" + s + "'");
}

void PredictionModel::check() const {
    if (static_cast<std::size_t>(coeffs.size()) != predictor_indices.size())
        throw FormatError("model has " + std::to_string(coeffs.size()) + " coefficients for " +
                          std::to_string(predictor_indices.size()) + " predictors");
    std::set<std::size_t> seen;
    for (std::size_t p : predictor_indices) {
        if (p == target_index) throw FormatError("target variable cannot be a predictor");
        if (!seen.insert(p).second) throw FormatError("predictor " + std::to_string(p + 1) + " listed twice");
    }
    if (!std::isfinite(bias) || !coeffs.allFinite()) throw FormatError("model coefficients must be finite");
}

void PredictionModel::check_indices(std::size_t n) const {
    if (target_index >= n) throw IndexOutOfRange(target_index, n);
    for (std::size_t p : predictor_indices)
        if (p >= n) throw IndexOutOfRange(p, n);
}

double predict(const PredictionModel& model, std::span<const double> x) {
    double phi = model.bias;
    for (std::size_t k = 0; k < model.predictor_indices.size(); ++k)
        phi += model.coeffs[static_cast<Eigen::Index>(k)] * x[model.predictor_indices[k]];
    return phi;
}

int decision(const PredictionModel& model, std::span<const double> x, Rng& tie_breaker) {
    const double phi = predict(model, x);
    if (phi < 0.0) return 0;
    if (phi > 0.0) return 1;
    return tie_breaker.coin() ? 1 : 0;
}

namespace {

void check_columns(const Dataset& data, std::size_t target_index, const std::vector<std::size_t>& predictors) {
    const std::size_t n = data.column_count();
    if (target_index >= n) throw IndexOutOfRange(target_index, n);
    for (std::size_t p : predictors)
        if (p >= n) throw IndexOutOfRange(p, n);
}

// [1, X_predictors]
Eigen::MatrixXd design_matrix(const Dataset& data, const std::vector<std::size_t>& predictors) {
    const Eigen::Index m = data.rows.rows();
    Eigen::MatrixXd X(m, static_cast<Eigen::Index>(predictors.size() + 1));
    X.col(0).setOnes();
    for (std::size_t k = 0; k < predictors.size(); ++k)
        X.col(static_cast<Eigen::Index>(k + 1)) = data.rows.col(static_cast<Eigen::Index>(predictors[k]));
    return X;
}

// log(1 + exp(eta)) without overflow.
double log1p_exp(double eta) { return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double sigmoid(double eta) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double penalized_loglik(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                        double l2) {
    const Eigen::VectorXd eta = X * beta;
    double ll = 0.0;
    for (Eigen::Index r = 0; r < eta.size(); ++r) ll += y[r] * eta[r] - log1p_exp(eta[r]);
    return ll - 0.5 * l2 * beta.tail(beta.size() - 1).squaredNorm();
}

}  // namespace

PredictionModel fit_linear(const Dataset& data, std::size_t target_index,
                           const std::vector<std::size_t>& predictor_indices) {
    check_columns(data, target_index, predictor_indices);
    PredictionModel model;
    model.kind = ModelKind::linear;
    model.target_index = target_index;
    model.predictor_indices = predictor_indices;
    model.coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(predictor_indices.size()));
    model.check();

    const std::size_t p = predictor_indices.size();
    if (data.row_count() <= p)
        throw InsufficientRows("least squares with " + std::to_string(p) + " predictors needs more than " +
                               std::to_string(p) + " rows, got " + std::to_string(data.row_count()));

    const Eigen::MatrixXd X = design_matrix(data, predictor_indices);
    const Eigen::VectorXd y = data.rows.col(static_cast<Eigen::Index>(target_index));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols())
        throw RankDeficient("design matrix has rank " + std::to_string(qr.rank()) + " < " +
                            std::to_string(X.cols()) + " (collinear predictors)");
    const Eigen::VectorXd beta = qr.solve(y);
    model.bias = beta[0];
    model.coeffs = beta.tail(static_cast<Eigen::Index>(p));
    return model;
}

LogisticFit fit_logistic(const Dataset& data, std::span<const int> labels,
                         const std::vector<std::size_t>& predictor_indices, std::size_t target_index,
                         const LogisticOptions& options) {
    check_columns(data, target_index, predictor_indices);
    if (labels.size() != data.row_count())
        throw FormatError("expected " + std::to_string(data.row_count()) + " labels, got " +
                          std::to_string(labels.size()));
    if (options.max_iter < 1 || !(options.tol > 0.0) || !(options.l2 >= 0.0))
        throw InvalidConfig("logistic options need max_iter >= 1, tol > 0, l2 >= 0");

    const Eigen::Index m = data.rows.rows();
    Eigen::VectorXd y(m);
    std::size_t ones = 0;
    for (Eigen::Index r = 0; r < m; ++r) {
        const int label = labels[static_cast<std::size_t>(r)];
        if (label != 0 && label != 1) throw FormatError("labels must be 0 or 1");
        y[r] = label;
        ones += static_cast<std::size_t>(label);
    }
    if (ones == 0 || ones == static_cast<std::size_t>(m))
        throw SingleClass("logistic regression needs both classes in the labels");

    Eigen::MatrixXd X = design_matrix(data, predictor_indices);
    const Eigen::Index cols = X.cols();
    Eigen::VectorXd center = Eigen::VectorXd::Zero(cols);
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(cols);
    if (options.standardize) {
        for (Eigen::Index k = 1; k < cols; ++k) {
            center[k] = X.col(k).mean();
            const double sd = std::sqrt((X.col(k).array() - center[k]).square().mean());
            if (sd > 0.0) scale[k] = sd;
            X.col(k) = (X.col(k).array() - center[k]) / scale[k];
        }
    }

    Eigen::VectorXd penalty = Eigen::VectorXd::Constant(cols, options.l2);
    penalty[0] = 0.0;

    LogisticFit fit;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols);
    double objective = penalized_loglik(X, y, beta, options.l2);
    fit.objective_trace.push_back(objective);

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd prob(m), w(m);
        for (Eigen::Index r = 0; r < m; ++r) {
            prob[r] = sigmoid(eta[r]);
            w[r] = prob[r] * (1.0 - prob[r]);
        }
        const Eigen::VectorXd grad = X.transpose() * (y - prob) - penalty.cwiseProduct(beta);
        Eigen::MatrixXd hessian = X.transpose() * w.asDiagonal() * X;
        hessian.diagonal() += penalty;

        Eigen::VectorXd step;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            step = ldlt.solve(grad);
        } else {
            step = hessian.colPivHouseholderQr().solve(grad);
        }

        // Step halving keeps the objective non-decreasing.
        double t = 1.0;
        Eigen::VectorXd candidate = beta + step;
        double candidate_objective = penalized_loglik(X, y, candidate, options.l2);
        int halvings = 0;
        while (!(candidate_objective >= objective) && halvings < 50) {
            t *= 0.5;
            candidate = beta + t * step;
            candidate_objective = penalized_loglik(X, y, candidate, options.l2);
            ++halvings;
        }
        fit.iterations = iter;
        if (!(candidate_objective >= objective)) {
            // No ascent along the Newton direction: we are at the optimum up
            // to rounding.
            fit.converged = true;
            break;
        }
        const double max_update = (t * step).cwiseAbs().maxCoeff();
        beta = candidate;
        objective = candidate_objective;
        fit.objective_trace.push_back(objective);
        if (max_update < options.tol) {
            fit.converged = true;
            break;
        }
    }

    // Undo standardization so coefficients live on the variables' own scales.
    Eigen::VectorXd slopes = beta.tail(cols - 1).cwiseQuotient(scale.tail(cols - 1));
    double bias = beta[0] - slopes.dot(center.tail(cols - 1));

    fit.model.kind = ModelKind::logistic;
    fit.model.bias = bias;
    fit.model.coeffs = std::move(slopes);
    fit.model.predictor_indices = predictor_indices;
    fit.model.target_index = target_index;
    fit.model.check();
    return fit;
}

Eigen::VectorXd AugmentedGraph::expanded_weights() const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(base.size()));
    for (std::size_t k = 0; k < yhat_parents.size(); ++k)
        w[static_cast<Eigen::Index>(yhat_parents[k])] = yhat_weights[static_cast<Eigen::Index>(k)];
    return w;
}

Dag AugmentedGraph::as_dag() const {
    const auto n = static_cast<Eigen::Index>(base.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n + 1, n + 1);
    w.topLeftCorner(n, n) = base.weights();
    w.row(n).head(n) = expanded_weights().transpose();
    std::vector<std::string> names;
    for (std::size_t i = 0; i < base.size(); ++i) names.push_back(base.name(i));
    names.push_back("Yhat");
    return Dag(std::move(w), std::move(names));
}

AugmentedGraph augment_graph(const Dag& dag, const PredictionModel& model) {
    model.check();
    model.check_indices(dag.size());
    return AugmentedGraph{dag, model.predictor_indices, model.coeffs, model.bias, model.target_index};
}

}  // namespace optint
