// optint: command line front end for the optimal-intervention library.
//
// Exit codes: 0 success, 1 usage error, 2 computation or I/O error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optint/autompg.hpp"
#include "optint/causal.hpp"
#include "optint/datagen.hpp"
#include "optint/error.hpp"
#include "optint/io.hpp"
#include "optint/models.hpp"
#include "optint/scm.hpp"
#include "optint/sweep.hpp"

namespace fs = std::filesystem;
using namespace optint;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty())
        std::cout << text;
    else
        io::write_text_file(g.out, text);
}

std::size_t zero_based(std::size_t one_based, const char* flag) {
    if (one_based < 1) throw CLI::ValidationError(flag, "indices are 1-based");
    return one_based - 1;
}

Dataset load_dataset(const std::string& path) { return io::dataset_from_csv(io::read_text_file(path)); }

Eigen::VectorXd load_observation(const std::string& path, std::size_t n) {
    const Dataset obs = load_dataset(path);
    if (obs.row_count() != 1 || obs.column_count() != n)
        throw FormatError("observation file must hold exactly one row of " + std::to_string(n) + " values");
    return obs.rows.row(0).transpose();
}

// Pre-intervention expectations: empirical means when data is supplied,
// otherwise the analytic means of the SCM document.
Eigen::VectorXd expectations(const io::json& doc, const Dag& dag, const std::optional<Dataset>& data) {
    if (data) {
        if (data->column_count() != dag.size())
            throw FormatError("data has " + std::to_string(data->column_count()) + " columns, graph has " +
                              std::to_string(dag.size()) + " variables");
        return data->column_means();
    }
    if (!io::has_noises(doc))
        throw FormatError("graph has no noise specifications; pass --data to estimate the means");
    return analytic_means(io::scm_from_json(doc));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal interventions on linear structural causal models"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->each([&](const std::string&) { g.seed_given = true; });
    app.add_option("--out", g.out, "Output file (default: stdout)");

    // gen-scm
    auto* gen = app.add_subcommand("gen-scm", "Generate a random linear SCM");
    std::string gen_config;
    gen->add_option("--config", gen_config, "Datagen config (JSON)")->check(CLI::ExistingFile);

    // sample
    auto* smp = app.add_subcommand("sample", "Draw observational or interventional samples as CSV");
    std::string smp_scm;
    std::size_t smp_m = 1000;
    std::size_t smp_index = 0;
    double smp_value = 0.0;
    smp->add_option("--scm", smp_scm, "SCM document")->required()->check(CLI::ExistingFile);
    smp->add_option("-m,--count", smp_m, "Number of rows")->check(CLI::PositiveNumber);
    auto* smp_index_opt = smp->add_option("--intervene-index", smp_index, "Variable fixed by do() (1-based)");
    auto* smp_value_opt = smp->add_option("--value", smp_value, "Intervention value");
    smp_index_opt->needs(smp_value_opt);
    smp_value_opt->needs(smp_index_opt);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a linear or logistic prediction model");
    std::string fit_data, fit_kind = "linear";
    std::size_t fit_target = 0;
    std::vector<std::size_t> fit_predictors;
    bool fit_standardize = false;
    fit->add_option("--data", fit_data, "Training data CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--target-index", fit_target, "Target variable (1-based)")->required();
    fit->add_option("--kind", fit_kind, "linear or logistic (labels by median split of the target)")
        ->check(CLI::IsMember({"linear", "logistic"}));
    fit->add_option("--predictors", fit_predictors, "Predictor indices (default: all but the target)")->delimiter(',');
    fit->add_flag("--standardize", fit_standardize, "Standardize predictors while fitting (logistic)");

    // analyze
    auto* ana = app.add_subcommand("analyze", "Rank predictors by causal effect on the prediction");
    std::string ana_scm, ana_model;
    ana->add_option("--scm", ana_scm, "Graph or SCM document")->required()->check(CLI::ExistingFile);
    ana->add_option("--model", ana_model, "Model document")->required()->check(CLI::ExistingFile);

    // intervene
    auto* itv = app.add_subcommand("intervene", "Compute the optimal intervention value");
    std::string itv_scm, itv_model, itv_data, itv_obs;
    std::size_t itv_target = 0, itv_index = 0;
    double itv_desired = 0.0;
    itv->add_option("--scm", itv_scm, "Graph or SCM document")->required()->check(CLI::ExistingFile);
    itv->add_option("--model", itv_model, "Model document")->required()->check(CLI::ExistingFile);
    itv->add_option("--data", itv_data, "Data CSV for empirical means and range checks")->check(CLI::ExistingFile);
    auto* itv_target_opt = itv->add_option("--target-index", itv_target, "Target variable (1-based); must match the model");
    auto* itv_index_opt =
        itv->add_option("--intervene-index", itv_index, "Variable to intervene on (default: greatest effect)");
    itv->add_option("--desired", itv_desired, "Desired expected prediction d")->required();
    itv->add_option("--observation-file", itv_obs, "One-row CSV for an observation-specific plan")
        ->check(CLI::ExistingFile);

    // sweep
    auto* swp = app.add_subcommand("sweep", "Naive vs optimal accuracy sweep over random DAGs");
    std::string swp_config;
    std::size_t swp_threads = 0;
    swp->add_option("--config", swp_config, "Sweep config (JSON)")->check(CLI::ExistingFile);
    auto* swp_threads_opt = swp->add_option("--threads", swp_threads, "Worker threads (0: auto)");

    // fetch-autompg
    auto* fetch = app.add_subcommand("fetch-autompg", "Download, cache and parse the UCI Auto-MPG data");
    std::string cache_dir;
    AutoMpgSource source;
    fetch->add_option("--cache-dir", cache_dir, "Cache directory (default: $OPTINT_CACHE_DIR or ~/.cache/optint)");
    fetch->add_option("--url", source.url, "Source URL");

    // demo-autompg
    auto* demo = app.add_subcommand("demo-autompg", "Optimal vs naive interventions on Auto-MPG");
    std::string demo_structure;
    std::vector<double> demo_desired{15, 21, 30};
    bool demo_file_weights = false, demo_json = false;
    demo->add_option("--structure", demo_structure, "Causal structure over the six variables")
        ->required()
        ->check(CLI::ExistingFile);
    demo->add_option("--desired", demo_desired, "Desired MPG values")->delimiter(',');
    demo->add_option("--cache-dir", cache_dir, "Cache directory");
    demo->add_option("--url", source.url, "Source URL");
    demo->add_flag("--use-file-weights", demo_file_weights, "Use the edge weights in the file instead of refitting");
    demo->add_flag("--json", demo_json, "Emit the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            DagGenConfig config;
            if (!gen_config.empty()) config = io::datagen_config_from_json(io::read_json_file(gen_config));
            if (g.seed_given) config.seed = g.seed;
            emit(g, io::dump(io::to_json(generate_random_scm(config))));
        } else if (*smp) {
            const Scm scm = io::scm_from_json(io::read_json_file(smp_scm));
            const Dataset data = *smp_index_opt
                                     ? sample_interventional(scm, zero_based(smp_index, "--intervene-index"),
                                                             smp_value, smp_m, g.seed)
                                     : sample(scm, smp_m, g.seed);
            emit(g, io::dataset_to_csv(data));
        } else if (*fit) {
            const Dataset data = load_dataset(fit_data);
            const std::size_t target = zero_based(fit_target, "--target-index");
            std::vector<std::size_t> predictors;
            for (std::size_t p : fit_predictors) predictors.push_back(zero_based(p, "--predictors"));
            if (fit_predictors.empty())
                for (std::size_t v = 0; v < data.column_count(); ++v)
                    if (v != target) predictors.push_back(v);
            PredictionModel model;
            if (fit_kind == "linear") {
                model = fit_linear(data, target, predictors);
            } else {
                LogisticOptions options;
                options.standardize = fit_standardize;
                const LogisticFit result =
                    fit_logistic(data, median_split_labels(data, target), predictors, target, options);
                if (!result.converged)
                    std::cerr << "warning: logistic fit did not converge after " << result.iterations
                              << " iterations\n";
                model = result.model;
            }
            emit(g, io::dump(io::to_json(model)));
        } else if (*ana) {
            const Dag dag = io::dag_from_json(io::read_json_file(ana_scm));
            const PredictionModel model = io::model_from_json(io::read_json_file(ana_model));
            const AugmentedGraph augmented = augment_graph(dag, model);
            std::vector<std::size_t> candidates;
            for (std::size_t v = 0; v < dag.size(); ++v)
                if (v != model.target_index) candidates.push_back(v);
            std::string text = "rank\tindex\tname\tcoefficient\teffect\n";
            const Eigen::VectorXd w = augmented.expanded_weights();
            std::size_t rank = 0;
            for (const auto& r : rank_effects(augmented, candidates)) {
                text += std::to_string(++rank) + "\t" + std::to_string(r.variable + 1) + "\t" + dag.name(r.variable) +
                        "\t" + io::format_number(w[static_cast<Eigen::Index>(r.variable)]) + "\t" +
                        io::format_number(r.effect) + "\n";
            }
            emit(g, text);
        } else if (*itv) {
            const io::json doc = io::read_json_file(itv_scm);
            const Dag dag = io::dag_from_json(doc);
            const PredictionModel model = io::model_from_json(io::read_json_file(itv_model));
            model.check_indices(dag.size());
            if (*itv_target_opt && zero_based(itv_target, "--target-index") != model.target_index)
                throw CLI::ValidationError("--target-index", "does not match the model's target_index " +
                                                                 std::to_string(model.target_index + 1));
            std::optional<Dataset> data;
            if (!itv_data.empty()) data = load_dataset(itv_data);

            std::size_t i = 0;
            if (*itv_index_opt) {
                i = zero_based(itv_index, "--intervene-index");
            } else {
                i = select_intervention_target(augment_graph(dag, model), model.predictor_indices);
            }
            const InterventionPlan plan =
                itv_obs.empty()
                    ? [&] {
                          const Eigen::VectorXd means = expectations(doc, dag, data);
                          return optimal_intervention_value(means, dag, estimate_noise_means(dag, means), model, i,
                                                            itv_desired);
                      }()
                    : observation_specific_plan(load_observation(itv_obs, dag.size()), dag, model, i, itv_desired);

            std::vector<std::string> warnings;
            if (data) {
                const auto col = data->rows.col(static_cast<Eigen::Index>(i));
                if (plan.value < col.minCoeff() || plan.value > col.maxCoeff())
                    warnings.push_back("value " + io::format_number(plan.value) + " outside the observed range [" +
                                       io::format_number(col.minCoeff()) + ", " + io::format_number(col.maxCoeff()) +
                                       "] of " + dag.name(i));
            }
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            emit(g, io::dump(io::plan_to_json(plan, dag, warnings)));
        } else if (*swp) {
            SweepConfig config;
            if (!swp_config.empty()) config = sweep_config_from_json(io::read_json_file(swp_config));
            if (g.seed_given) config.seed = g.seed;
            if (*swp_threads_opt) config.threads = swp_threads;
            const SweepResult result = run_sweep(config);
            emit(g, sweep_to_csv(result));
            if (!g.out.empty()) io::write_text_file(g.out + ".manifest.json", io::dump(sweep_manifest(config, result)));
        } else if (*fetch) {
            const fs::path dir = cache_dir.empty() ? default_cache_dir() : fs::path(cache_dir);
            emit(g, io::dataset_to_csv(fetch_autompg(dir, source)));
        } else if (*demo) {
            const fs::path dir = cache_dir.empty() ? default_cache_dir() : fs::path(cache_dir);
            const Dataset data = fetch_autompg(dir, source);
            const Dag structure = io::dag_from_json(io::read_json_file(demo_structure));
            const DemoReport report = demo_autompg(data, structure, demo_desired, !demo_file_weights);
            emit(g, demo_json ? io::dump(to_json(report)) : format_report(report));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
