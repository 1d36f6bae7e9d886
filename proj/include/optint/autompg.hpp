#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "optint/causal.hpp"
#include "optint/graph.hpp"
#include "optint/models.hpp"
#include "optint/scm.hpp"

namespace optint {

struct AutoMpgSource {
    std::string url = "https://archive.ics.uci.edu/ml/machine-learning-databases/auto-mpg/auto-mpg.data";
    std::string file_name = "auto-mpg.data";
    // When set, the cached file must hash to this value (hex SHA-256).
    std::optional<std::string> sha256;
    long timeout_seconds = 30;
};

// Column order of the parsed dataset.
inline const std::vector<std::string> kAutoMpgColumns{"cylinders", "weight",       "displacement",
                                                      "horsepower", "acceleration", "mpg"};
inline constexpr std::size_t kAutoMpgRawRecords = 398;

// $OPTINT_CACHE_DIR, else $XDG_CACHE_HOME/optint, else ~/.cache/optint.
std::filesystem::path default_cache_dir();

std::string sha256_hex(const std::string& bytes);

// Parses the raw UCI file (whitespace-separated fields plus a quoted car
// name), drops records with missing horsepower and keeps kAutoMpgColumns.
// Throws ParseError on malformed or truncated input.
Dataset parse_autompg(const std::string& text);

// Returns the parsed dataset, downloading the raw file into cache_dir on
// first use. A "<file>.sha256" sidecar records the checksum of the cached
// file and is verified on every later read. Throws NetworkUnavailable when
// the file is neither cached nor downloadable.
Dataset fetch_autompg(const std::filesystem::path& cache_dir, const AutoMpgSource& source = {});

// Re-estimates every edge weight of `structure` by regressing each variable
// on its parents (with intercept). The edge pattern is kept.
Dag fit_edge_weights(const Dag& structure, const Dataset& data);

struct DemoRow {
    double desired = 0.0;
    double optimal = 0.0;
    double naive = 0.0;
    double predicted_expectation = 0.0;
    bool optimal_in_range = true;
    bool naive_in_range = true;
    std::vector<std::string> warnings;
};

struct DemoReport {
    Dag structure;  // with the weights actually used
    PredictionModel model;
    std::vector<RankedEffect> ranking;
    std::size_t intervened = 0;
    double observed_min = 0.0;
    double observed_max = 0.0;
    double observed_mean = 0.0;
    std::vector<DemoRow> rows;
};

// Linear regression of mpg on the other five variables, intervention on the
// variable with the greatest effect on the prediction, and for each desired
// mpg the optimal and the naive value (both at the column means). Values
// outside the observed range of the intervened variable are flagged.
DemoReport demo_autompg(const Dataset& data, const Dag& structure, std::span<const double> desired_mpg,
                        bool refit_weights = true);

std::string format_report(const DemoReport& report);
nlohmann::json to_json(const DemoReport& report);

}  // namespace optint
