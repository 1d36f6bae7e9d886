#include "optint/autompg.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <curl/curl.h>
#include <openssl/evp.h>

#include "optint/error.hpp"
#include "optint/io.hpp"

namespace optint {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path default_cache_dir() {
    if (const char* dir = std::getenv("OPTINT_CACHE_DIR"); dir && *dir) return dir;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "optint";
    if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "optint";
    return fs::temp_directory_path() / "optint-cache";
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    std::string hex;
    char buf[3];
    for (unsigned int k = 0; k < len; ++k) {
        std::snprintf(buf, sizeof buf, "%02x", digest[k]);
        hex += buf;
    }
    return hex;
}

Dataset parse_autompg(const std::string& text) {
    // Raw field order: mpg cylinders displacement horsepower weight
    // acceleration model_year origin "name".
    constexpr std::size_t kMpg = 0, kCyl = 1, kDisp = 2, kHp = 3, kWeight = 4, kAccel = 5;
    std::vector<double> values;
    std::size_t records = 0;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (in.eof()) throw ParseError(line_no, "truncated record (no line terminator)");

        const auto quote = line.find('"');
        if (quote == std::string::npos || line.find('"', quote + 1) == std::string::npos)
            throw ParseError(line_no, "missing quoted car name");
        std::istringstream fields(line.substr(0, quote));
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.size() != 8)
            throw ParseError(line_no, "expected 8 numeric fields, got " + std::to_string(tokens.size()));
        ++records;

        double parsed[8];
        bool missing = false;
        for (std::size_t k = 0; k < 8; ++k) {
            if (tokens[k] == "?") {
                if (k != kHp) throw ParseError(line_no, "unexpected missing value in field " + std::to_string(k + 1));
                missing = true;
                continue;
            }
            char* end = nullptr;
            parsed[k] = std::strtod(tokens[k].c_str(), &end);
            if (end == tokens[k].c_str() || *end != '\0') throw ParseError(line_no, "bad number '" + tokens[k] + "'");
        }
        if (missing) continue;
        for (std::size_t k : {kCyl, kWeight, kDisp, kHp, kAccel, kMpg}) values.push_back(parsed[k]);
    }
    if (records != kAutoMpgRawRecords)
        throw ParseError(line_no + 1, "expected " + std::to_string(kAutoMpgRawRecords) + " records, found " +
                                          std::to_string(records));
    Dataset data;
    data.names = kAutoMpgColumns;
    data.rows = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(values.size() / 6), 6);
    return data;
}

namespace {

std::size_t append_body(char* ptr, std::size_t size, std::size_t nmemb, void* out) {
    static_cast<std::string*>(out)->append(ptr, size * nmemb);
    return size * nmemb;
}

std::string download(const AutoMpgSource& source) {
    CURL* curl = curl_easy_init();
    if (!curl) throw NetworkUnavailable("could not initialise libcurl");
    std::string body;
    char errbuf[CURL_ERROR_SIZE] = {0};
    curl_easy_setopt(curl, CURLOPT_URL, source.url.c_str());
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl, CURLOPT_TIMEOUT, source.timeout_seconds);
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, append_body);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(curl, CURLOPT_ERRORBUFFER, errbuf);
    const CURLcode rc = curl_easy_perform(curl);
    curl_easy_cleanup(curl);
    if (rc != CURLE_OK) {
        throw NetworkUnavailable("could not download " + source.url + " (" +
                                 (errbuf[0] ? std::string(errbuf) : curl_easy_strerror(rc)) + ")");
    }
    return body;
}

}  // namespace

Dataset fetch_autompg(const fs::path& cache_dir, const AutoMpgSource& source) {
    const fs::path file = cache_dir / source.file_name;
    const fs::path sidecar = cache_dir / (source.file_name + ".sha256");

    std::string raw;
    if (fs::exists(file)) {
        raw = io::read_text_file(file);
        const std::string digest = sha256_hex(raw);
        if (fs::exists(sidecar)) {
            std::string recorded = io::read_text_file(sidecar);
            recorded.erase(recorded.find_last_not_of(" \n\r\t") + 1);
            if (recorded != digest)
                throw FormatError("cached " + file.string() + " does not match its recorded checksum; delete it and fetch again");
        } else {
            io::write_text_file(sidecar, digest + "\n");
        }
    } else {
        try {
            raw = download(source);
        } catch (const NetworkUnavailable& e) {
            throw NetworkUnavailable(std::string(e.what()) + "; place the file manually at " + file.string());
        }
        // Parse before caching so a bad download never lands in the cache.
        parse_autompg(raw);
        fs::create_directories(cache_dir);
        io::write_text_file(file, raw);
        io::write_text_file(sidecar, sha256_hex(raw) + "\n");
    }
    if (source.sha256 && sha256_hex(raw) != *source.sha256)
        throw FormatError("cached " + file.string() + " does not match the pinned checksum");
    return parse_autompg(raw);
}

Dag fit_edge_weights(const Dag& structure, const Dataset& data) {
    if (data.column_count() != structure.size())
        throw FormatError("structure has " + std::to_string(structure.size()) + " variables but data has " +
                          std::to_string(data.column_count()) + " columns");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(structure.size()),
                                              static_cast<Eigen::Index>(structure.size()));
    for (std::size_t v = 0; v < structure.size(); ++v) {
        const auto parents = structure.parents(v);
        if (parents.empty()) continue;
        const PredictionModel fit = fit_linear(data, v, parents);
        for (std::size_t k = 0; k < parents.size(); ++k) {
            w(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(parents[k])) =
                fit.coeffs[static_cast<Eigen::Index>(k)];
        }
    }
    return Dag(std::move(w), structure.names());
}

namespace {

std::size_t column_of(const Dag& structure, const std::string& name) {
    for (std::size_t v = 0; v < structure.size(); ++v)
        if (structure.name(v) == name) return v;
    throw FormatError("structure has no variable named '" + name + "'");
}

}  // namespace

DemoReport demo_autompg(const Dataset& data, const Dag& structure, std::span<const double> desired_mpg,
                        bool refit_weights) {
    if (structure.size() != data.column_count())
        throw FormatError("structure must describe the " + std::to_string(data.column_count()) + " dataset columns");
    for (std::size_t v = 0; v < data.column_count(); ++v)
        if (v < data.names.size() && structure.name(v) != data.names[v])
            throw FormatError("structure variable " + std::to_string(v + 1) + " is '" + structure.name(v) +
                              "' but the data column is '" + data.names[v] + "'");

    DemoReport report{refit_weights ? fit_edge_weights(structure, data) : structure, {}, {}, 0, 0, 0, 0, {}};
    const std::size_t target = column_of(structure, "mpg");
    std::vector<std::size_t> predictors;
    for (std::size_t v = 0; v < structure.size(); ++v)
        if (v != target) predictors.push_back(v);

    report.model = fit_linear(data, target, predictors);
    const AugmentedGraph augmented = augment_graph(report.structure, report.model);
    report.ranking = rank_effects(augmented, predictors);
    report.intervened = select_intervention_target(augmented, predictors);

    const Eigen::VectorXd means = data.column_means();
    const Eigen::VectorXd noise = estimate_noise_means(report.structure, means);
    const auto column = data.rows.col(static_cast<Eigen::Index>(report.intervened));
    report.observed_min = column.minCoeff();
    report.observed_max = column.maxCoeff();
    report.observed_mean = means[static_cast<Eigen::Index>(report.intervened)];

    const std::string name = report.structure.name(report.intervened);
    auto in_range = [&](double v) { return v >= report.observed_min && v <= report.observed_max; };
    for (double d : desired_mpg) {
        DemoRow row;
        row.desired = d;
        const InterventionPlan plan =
            optimal_intervention_value(means, report.structure, noise, report.model, report.intervened, d);
        row.optimal = plan.value;
        row.predicted_expectation = plan.predicted_expectation;
        row.naive = naive_intervention_value(report.model, std::span<const double>(means.data(), means.size()),
                                             report.intervened, d);
        row.optimal_in_range = in_range(row.optimal);
        row.naive_in_range = in_range(row.naive);
        const std::string range =
            " outside the observed range [" + io::format_number(report.observed_min) + ", " +
            io::format_number(report.observed_max) + "] of " + name;
        if (!row.optimal_in_range) row.warnings.push_back("optimal value " + io::format_number(row.optimal) + range);
        if (!row.naive_in_range) row.warnings.push_back("naive value " + io::format_number(row.naive) + range);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string format_report(const DemoReport& report) {
    std::ostringstream out;
    char buf[256];
    const auto& dag = report.structure;
    out << "Linear model for " << dag.name(report.model.target_index) << ": bias " << io::format_number(report.model.bias)
        << "\n";
    out << "Causal effect on the prediction:\n";
    for (const auto& r : report.ranking) {
        std::snprintf(buf, sizeof buf, "  %-14s %14.6g\n", dag.name(r.variable).c_str(), r.effect);
        out << buf;
    }
    out << "Intervene on " << dag.name(report.intervened) << " (observed " << io::format_number(report.observed_min)
        << " .. " << io::format_number(report.observed_max) << ", mean " << io::format_number(report.observed_mean)
        << ")\n";
    std::snprintf(buf, sizeof buf, "%10s %14s %14s\n", "desired", "optimal", "naive");
    out << buf;
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%10.6g %14.6g %14.6g\n", row.desired, row.optimal, row.naive);
        out << buf;
        for (const auto& w : row.warnings) out << "  warning: " << w << "\n";
    }
    return out.str();
}

json to_json(const DemoReport& report) {
    const auto& dag = report.structure;
    json ranking = json::array();
    for (const auto& r : report.ranking)
        ranking.push_back({{"variable", r.variable + 1}, {"name", dag.name(r.variable)}, {"effect", r.effect}});
    json rows = json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"desired", row.desired},
                        {"optimal", row.optimal},
                        {"naive", row.naive},
                        {"predicted_expectation", row.predicted_expectation},
                        {"optimal_in_range", row.optimal_in_range},
                        {"naive_in_range", row.naive_in_range},
                        {"warnings", row.warnings}});
    return {{"structure", io::to_json(dag)},
            {"model", io::to_json(report.model)},
            {"ranking", std::move(ranking)},
            {"intervened", report.intervened + 1},
            {"intervened_name", dag.name(report.intervened)},
            {"observed_min", report.observed_min},
            {"observed_max", report.observed_max},
            {"observed_mean", report.observed_mean},
            {"rows", std::move(rows)}};
}

}  // namespace optint
