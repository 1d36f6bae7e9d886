#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "optint/causal.hpp"
#include "optint/error.hpp"
#include "optint/sweep.hpp"
#include "unit/oracles.hpp"

namespace optint {
namespace {

SweepConfig small_config() {
    SweepConfig c;
    c.d_values = {0, 3, 6};
    c.n_dags = 6;
    c.n_train = 400;
    c.n_post = 300;
    c.datagen.n_roots = 5;
    c.datagen.n_descendants = 10;
    c.datagen.parent_prob = 0.2;
    c.seed = 11;
    c.threads = 1;
    return c;
}

// X1 -> X2, Gaussian noise; the logistic model reads X2 only.
Scm gaussian_chain() {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
    w(1, 0) = 1.5;
    return Scm(Dag(w), {GaussianNoise{0.0, 1.0}, GaussianNoise{0.0, 1.0}, GaussianNoise{0.0, 1.0}});
}

PredictionModel logistic_on_x2() {
    PredictionModel m;
    m.kind = ModelKind::logistic;
    m.bias = 0.0;
    m.coeffs = Eigen::VectorXd::Constant(1, 2.0);
    m.predictor_indices = {1};
    m.target_index = 2;
    return m;
}

TEST(EvaluateIntervention, Saturates) {
    const Scm scm = gaussian_chain();
    EXPECT_EQ(evaluate_intervention(scm, logistic_on_x2(), 0, 1e3, 500, 1), 1.0);
    EXPECT_EQ(evaluate_intervention(scm, logistic_on_x2(), 0, -1e3, 500, 1), 0.0);
}

TEST(EvaluateIntervention, SinglePostSample) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double a = evaluate_intervention(gaussian_chain(), logistic_on_x2(), 0, 0.1, 1, seed);
        EXPECT_TRUE(a == 0.0 || a == 1.0);
    }
}

TEST(EvaluateIntervention, SymmetricPredictionGivesHalf) {
    const Scm scm = gaussian_chain();
    const Eigen::VectorXd means = analytic_means(scm);
    const auto plan =
        optimal_intervention_value(means, scm.dag(), estimate_noise_means(scm.dag(), means), logistic_on_x2(), 0, 0.0);
    EXPECT_NEAR(plan.value, 0.0, 1e-15);
    constexpr std::size_t m = 40000;
    const double acc = evaluate_intervention(scm, logistic_on_x2(), 0, plan.value, m, 3);
    EXPECT_LE(std::abs(acc - 0.5), 4.0 * std::sqrt(0.25 / m));
}

TEST(Sweep, CsvFormat) {
    const SweepResult r = run_sweep(small_config());
    const std::string csv = sweep_to_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "d,accuracy_optimal,accuracy_naive,n_failed");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 3);
    ASSERT_EQ(r.rows.size(), 3u);
    for (const auto& row : r.rows) {
        EXPECT_GE(row.accuracy_optimal, 0.0);
        EXPECT_LE(row.accuracy_optimal, 1.0);
        EXPECT_GE(row.accuracy_naive, 0.0);
        EXPECT_LE(row.accuracy_naive, 1.0);
    }
    EXPECT_EQ(csv.substr(csv.find('\n') + 1, 2), "0,");
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
    SweepConfig c = small_config();
    const std::string one = sweep_to_csv(run_sweep(c));
    EXPECT_EQ(one, sweep_to_csv(run_sweep(c)));
    c.threads = 3;
    EXPECT_EQ(one, sweep_to_csv(run_sweep(c)));
    EXPECT_EQ(sweep_manifest(small_config(), run_sweep(small_config())).dump(),
              sweep_manifest(small_config(), run_sweep(c)).dump());
    c.seed = 12;
    EXPECT_NE(one, sweep_to_csv(run_sweep(c)));
}

TEST(Sweep, FailuresAreCountedNotThrown) {
    SweepConfig c = small_config();
    c.datagen.n_roots = 1;
    c.datagen.n_descendants = 0;
    c.datagen.min_parents = 0;
    const SweepResult r = run_sweep(c);
    for (const auto& row : r.rows) {
        EXPECT_EQ(row.n_failed, c.n_dags);
        EXPECT_EQ(row.accuracy_optimal, 0.0);
    }
    const auto manifest = sweep_manifest(c, r);
    EXPECT_EQ(manifest["dags"][0]["failure"], "no predictors");
}

TEST(Sweep, EveryDesiredValueIsEvaluated) {
    const SweepConfig c = small_config();
    for (std::size_t g = 0; g < c.n_dags; ++g) {
        const DagOutcome out = run_single_dag(c, g);
        if (!out.failure.empty()) continue;
        ASSERT_EQ(out.optimal_values.size(), c.d_values.size());
        ASSERT_TRUE(out.intervened.has_value());
        EXPECT_NE(*out.intervened, out.target);
    }
}

// d equal to the current expected prediction leaves the classifier near the
// median split, i.e. about half the samples in class 1.
TEST(Sweep, StatusQuoDesiredGivesBaseRate) {
    SweepConfig c = small_config();
    double total = 0.0;
    int used = 0;
    for (std::uint64_t g = 0; g < 30; ++g) {
        DagGenConfig gen = c.datagen;
        gen.seed = 1000 + g;
        const Scm scm = generate_random_scm(gen);
        const Dataset train = sample(scm, 2000, g);
        const std::size_t target = pick_random_target(scm.size(), g);
        std::vector<std::size_t> predictors;
        for (std::size_t v = 0; v < scm.size(); ++v)
            if (v != target) predictors.push_back(v);
        const auto fit = fit_logistic(train, median_split_labels(train, target), predictors, target, {});
        const std::size_t i = select_intervention_target(augment_graph(scm.dag(), fit.model), predictors);
        const Eigen::VectorXd means = analytic_means(scm);
        const double d = predict(fit.model, std::span<const double>(means.data(), scm.size()));
        const auto plan =
            optimal_intervention_value(means, scm.dag(), estimate_noise_means(scm.dag(), means), fit.model, i, d);
        total += evaluate_intervention(scm, fit.model, i, plan.value, 2000, 77 + g);
        ++used;
    }
    EXPECT_NEAR(total / used, 0.5, 0.1);
}

TEST(SweepConfigJson, RoundTripAndErrors) {
    const SweepConfig c = small_config();
    const SweepConfig back = sweep_config_from_json(to_json(c));
    EXPECT_EQ(back.d_values, c.d_values);
    EXPECT_EQ(back.n_dags, c.n_dags);
    EXPECT_EQ(back.n_post, c.n_post);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.datagen.n_roots, c.datagen.n_roots);
    EXPECT_EQ(to_json(back), to_json(c));

    EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"d_values": []})")), InvalidConfig);
    EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"n_dags": 0})")), InvalidConfig);
    EXPECT_THROW(sweep_config_from_json(nlohmann::json::parse(R"({"n_dags": "many"})")), FormatError);
    const SweepConfig defaults = sweep_config_from_json(nlohmann::json::object());
    EXPECT_EQ(defaults.d_values.size(), 11u);
    EXPECT_EQ(defaults.n_dags, 1000u);
}

TEST(SweepManifest, RecordsConfigAndSeeds) {
    const SweepConfig c = small_config();
    const auto manifest = sweep_manifest(c, run_sweep(c));
    EXPECT_EQ(manifest["tool"], "optint");
    EXPECT_EQ(manifest["config"]["seed"], 11);
    EXPECT_EQ(manifest["dags"].size(), c.n_dags);
    EXPECT_TRUE(manifest["dags"][0].contains("seed"));
}

}  // namespace
}  // namespace optint
