#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optint/datagen.hpp"
#include "optint/models.hpp"
#include "optint/scm.hpp"

namespace optint {

struct SweepConfig {
    std::vector<double> d_values{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t n_dags = 1000;
    std::size_t n_train = 1000;
    std::size_t n_post = 1000;
    DagGenConfig datagen;  // its seed is replaced per DAG
    LogisticOptions logistic;
    std::uint64_t seed = 0;
    std::size_t threads = 0;  // 0: one per hardware thread

    void check() const;
};

SweepConfig sweep_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SweepConfig& config);

struct SweepRow {
    double d = 0.0;
    double accuracy_optimal = 0.0;
    double accuracy_naive = 0.0;
    std::size_t n_failed = 0;
};

// Per-DAG bookkeeping kept for the run manifest. Indices are 0-based.
struct DagOutcome {
    std::size_t target = 0;
    std::optional<std::size_t> intervened;
    bool fit_converged = false;
    int fit_iterations = 0;
    std::string failure;  // empty on success
    std::vector<double> optimal_values;
    std::vector<double> naive_values;
    std::vector<double> accuracy_optimal;
    std::vector<double> accuracy_naive;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<DagOutcome> dags;
};

// Fraction of interventional samples the classifier assigns to class 1.
double evaluate_intervention(const Scm& scm, const PredictionModel& model, std::size_t i, double c,
                             std::size_t n_post, std::uint64_t seed);

// Runs the single-DAG protocol: generate, train, label by median split, fit
// logistic regression on every other variable, pick the predictor with the
// greatest effect on the prediction, then evaluate the optimal and the naive
// intervention for every d. The naive value is computed at the analytic
// means. Failures are recorded in the outcome, never thrown.
DagOutcome run_single_dag(const SweepConfig& config, std::size_t dag_index);

// Averages accuracies over the DAGs that succeeded. Deterministic for a
// given config regardless of thread count.
SweepResult run_sweep(const SweepConfig& config);

// Header d,accuracy_optimal,accuracy_naive,n_failed; accuracies %.6f.
std::string sweep_to_csv(const SweepResult& result);

nlohmann::json sweep_manifest(const SweepConfig& config, const SweepResult& result);

}  // namespace optint
