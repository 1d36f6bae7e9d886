#include "optint/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <thread>

#include "optint/causal.hpp"
#include "optint/error.hpp"
#include "optint/io.hpp"
#include "optint/rng.hpp"

namespace optint {

using nlohmann::json;

void SweepConfig::check() const {
    if (d_values.empty()) throw InvalidConfig("d_values must not be empty");
    if (n_dags < 1 || n_train < 2 || n_post < 1)
        throw InvalidConfig("sweep needs n_dags >= 1, n_train >= 2, n_post >= 1");
    datagen.check();
}

SweepConfig sweep_config_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("sweep config must be an object");
    SweepConfig config;
    try {
        if (doc.contains("d_values")) config.d_values = doc.at("d_values").get<std::vector<double>>();
        if (doc.contains("n_dags")) config.n_dags = doc.at("n_dags").get<std::size_t>();
        if (doc.contains("n_train")) config.n_train = doc.at("n_train").get<std::size_t>();
        if (doc.contains("n_post")) config.n_post = doc.at("n_post").get<std::size_t>();
        if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("threads")) config.threads = doc.at("threads").get<std::size_t>();
        if (doc.contains("logistic")) {
            const auto& l = doc.at("logistic");
            if (l.contains("tol")) config.logistic.tol = l.at("tol").get<double>();
            if (l.contains("max_iter")) config.logistic.max_iter = l.at("max_iter").get<int>();
            if (l.contains("l2")) config.logistic.l2 = l.at("l2").get<double>();
            if (l.contains("standardize")) config.logistic.standardize = l.at("standardize").get<bool>();
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad sweep config: ") + e.what());
    }
    if (doc.contains("datagen")) config.datagen = io::datagen_config_from_json(doc.at("datagen"));
    config.check();
    return config;
}

json to_json(const SweepConfig& config) {
    json datagen = io::to_json(config.datagen);
    datagen.erase("seed");
    return {{"d_values", config.d_values},
            {"n_dags", config.n_dags},
            {"n_train", config.n_train},
            {"n_post", config.n_post},
            {"seed", config.seed},
            {"datagen", datagen},
            {"logistic",
             {{"tol", config.logistic.tol},
              {"max_iter", config.logistic.max_iter},
              {"l2", config.logistic.l2},
              {"standardize", config.logistic.standardize}}}};
}

double evaluate_intervention(const Scm& scm, const PredictionModel& model, std::size_t i, double c,
                             std::size_t n_post, std::uint64_t seed) {
    const Dataset post = sample_interventional(scm, i, c, n_post, seed);
    Rng ties(derive_seed(seed, UINT64_MAX));
    const auto n = post.column_count();
    std::size_t ones = 0;
    for (Eigen::Index r = 0; r < post.rows.rows(); ++r)
        ones += static_cast<std::size_t>(decision(model, std::span<const double>(post.rows.row(r).data(), n), ties));
    return static_cast<double>(ones) / static_cast<double>(n_post);
}

namespace {

// Stream ids under each DAG's seed.
enum Stream : std::uint64_t { kGraph = 1, kTrain = 2, kTarget = 3, kPost = 100 };

}  // namespace

DagOutcome run_single_dag(const SweepConfig& config, std::size_t dag_index) {
    const std::uint64_t base = derive_seed(config.seed, dag_index);
    DagOutcome out;

    DagGenConfig gen = config.datagen;
    gen.seed = derive_seed(base, kGraph);
    const Scm scm = generate_random_scm(gen);
    const std::size_t n = scm.size();

    const Dataset train = sample(scm, config.n_train, derive_seed(base, kTrain));
    out.target = pick_random_target(n, derive_seed(base, kTarget));
    const auto labels = median_split_labels(train, out.target);

    std::vector<std::size_t> predictors;
    for (std::size_t v = 0; v < n; ++v)
        if (v != out.target) predictors.push_back(v);
    if (predictors.empty()) {
        out.failure = "no predictors";
        return out;
    }

    try {
        const LogisticFit fit = fit_logistic(train, labels, predictors, out.target, config.logistic);
        out.fit_converged = fit.converged;
        out.fit_iterations = fit.iterations;
        const PredictionModel& model = fit.model;

        const AugmentedGraph augmented = augment_graph(scm.dag(), model);
        const std::size_t i = select_intervention_target(augmented, predictors);
        out.intervened = i;

        const Eigen::VectorXd means = analytic_means(scm);
        const Eigen::VectorXd noise = estimate_noise_means(scm.dag(), means);
        const std::span<const double> x(means.data(), n);
        for (std::size_t k = 0; k < config.d_values.size(); ++k) {
            const double d = config.d_values[k];
            const double optimal = optimal_intervention_value(means, scm.dag(), noise, model, i, d).value;
            const double naive = naive_intervention_value(model, x, i, d);
            // Both methods see the same post-intervention noise.
            const std::uint64_t post_seed = derive_seed(base, kPost + k);
            out.optimal_values.push_back(optimal);
            out.naive_values.push_back(naive);
            out.accuracy_optimal.push_back(evaluate_intervention(scm, model, i, optimal, config.n_post, post_seed));
            out.accuracy_naive.push_back(evaluate_intervention(scm, model, i, naive, config.n_post, post_seed));
        }
    } catch (const Error& e) {
        out.failure = e.what();
        out.optimal_values.clear();
        out.naive_values.clear();
        out.accuracy_optimal.clear();
        out.accuracy_naive.clear();
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& config) {
    config.check();
    SweepResult result;
    result.dags.resize(config.n_dags);

    std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, config.n_dags);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t g = next++; g < config.n_dags; g = next++) result.dags[g] = run_single_dag(config, g);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }

    for (std::size_t k = 0; k < config.d_values.size(); ++k) {
        SweepRow row;
        row.d = config.d_values[k];
        std::size_t ok = 0;
        for (const auto& dag : result.dags) {
            if (!dag.failure.empty()) {
                ++row.n_failed;
                continue;
            }
            row.accuracy_optimal += dag.accuracy_optimal[k];
            row.accuracy_naive += dag.accuracy_naive[k];
            ++ok;
        }
        if (ok) {
            row.accuracy_optimal /= static_cast<double>(ok);
            row.accuracy_naive /= static_cast<double>(ok);
        }
        result.rows.push_back(row);
    }
    return result;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::string out = "d,accuracy_optimal,accuracy_naive,n_failed\n";
    char buf[128];
    for (const auto& row : result.rows) {
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%zu\n", row.accuracy_optimal, row.accuracy_naive, row.n_failed);
        out += io::format_number(row.d) + buf;
    }
    return out;
}

json sweep_manifest(const SweepConfig& config, const SweepResult& result) {
    json dags = json::array();
    std::size_t not_converged = 0;
    for (std::size_t g = 0; g < result.dags.size(); ++g) {
        const auto& dag = result.dags[g];
        if (!dag.fit_converged) ++not_converged;
        json entry = {{"index", g + 1},
                      {"seed", derive_seed(config.seed, g)},
                      {"target", dag.target + 1},
                      {"fit_converged", dag.fit_converged},
                      {"fit_iterations", dag.fit_iterations}};
        if (dag.intervened) entry["intervened"] = *dag.intervened + 1;
        if (!dag.failure.empty()) entry["failure"] = dag.failure;
        if (!dag.optimal_values.empty()) {
            entry["optimal_values"] = dag.optimal_values;
            entry["naive_values"] = dag.naive_values;
        }
        dags.push_back(std::move(entry));
    }
    return {{"tool", "optint"},
            {"version", OPTINT_VERSION},
            {"rng", "mt19937_64 seeded by splitmix64(seed, stream)"},
            {"config", to_json(config)},
            {"fits_not_converged", not_converged},
            {"dags", std::move(dags)}};
}

}  // namespace optint
