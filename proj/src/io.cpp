#include "optint/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "optint/error.hpp"

namespace optint::io {

namespace {

template <class T>
T get_field(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("field '") + key + "' has the wrong type");
    }
}

template <class T>
void read_optional(const json& doc, const char* key, T& out) {
    if (doc.contains(key)) out = get_field<T>(doc, key);
}

std::size_t one_based(const json& doc, const char* key, std::size_t n) {
    const auto v = get_field<long long>(doc, key);
    if (v < 1 || static_cast<std::size_t>(v) > n)
        throw FormatError(std::string("field '") + key + "' = " + std::to_string(v) + " outside 1.." +
                          std::to_string(n));
    return static_cast<std::size_t>(v - 1);
}

std::vector<std::size_t> to_one_based(const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out;
    for (std::size_t i : v) out.push_back(i + 1);
    return out;
}

}  // namespace

json to_json(const Dag& dag) {
    json doc;
    doc["n"] = dag.size();
    if (!dag.names().empty()) doc["names"] = dag.names();
    json edges = json::array();
    for (std::size_t to = 0; to < dag.size(); ++to)
        for (const auto& e : dag.in_edges(to)) edges.push_back({{"from", e.source + 1}, {"to", to + 1}, {"weight", e.weight}});
    // Sort by (from, to) for a stable, readable listing.
    std::sort(edges.begin(), edges.end(), [](const json& a, const json& b) {
        return std::pair(a["from"].get<std::size_t>(), a["to"].get<std::size_t>()) <
               std::pair(b["from"].get<std::size_t>(), b["to"].get<std::size_t>());
    });
    doc["edges"] = std::move(edges);
    return doc;
}

Dag dag_from_json(const json& doc) {
    const auto n_signed = get_field<long long>(doc, "n");
    if (n_signed < 1) throw FormatError("field 'n' must be positive");
    const auto n = static_cast<std::size_t>(n_signed);
    std::vector<std::string> names;
    read_optional(doc, "names", names);

    const auto& edges = doc.contains("edges") ? doc.at("edges") : json::array();
    if (!edges.is_array()) throw FormatError("field 'edges' must be a list");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges) {
        const std::size_t from = one_based(e, "from", n);
        const std::size_t to = one_based(e, "to", n);
        const double weight = get_field<double>(e, "weight");
        if (!seen.insert({from, to}).second)
            throw FormatError("duplicate edge " + std::to_string(from + 1) + " -> " + std::to_string(to + 1));
        if (weight == 0.0)
            throw FormatError("edge " + std::to_string(from + 1) + " -> " + std::to_string(to + 1) +
                              " has zero weight");
        w(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) = weight;
    }
    return Dag(std::move(w), std::move(names));
}

json to_json(const NoiseSpec& noise) {
    json doc;
    doc["family"] = noise.family_name();
    if (const auto* g = std::get_if<GaussianNoise>(&noise.family())) {
        doc["mean"] = g->mean;
        doc["stddev"] = g->stddev;
    } else if (const auto* u = std::get_if<UniformNoise>(&noise.family())) {
        doc["lo"] = u->lo;
        doc["hi"] = u->hi;
    } else {
        doc["value"] = std::get<ConstantNoise>(noise.family()).value;
    }
    return doc;
}

NoiseSpec noise_from_json(const json& doc) {
    const auto family = get_field<std::string>(doc, "family");
    if (family == "gaussian") return GaussianNoise{get_field<double>(doc, "mean"), get_field<double>(doc, "stddev")};
    if (family == "uniform") return UniformNoise{get_field<double>(doc, "lo"), get_field<double>(doc, "hi")};
    if (family == "constant") return ConstantNoise{get_field<double>(doc, "value")};
    throw FormatError("unknown noise family '" + family + "'");
}

json to_json(const Scm& scm) {
    json doc = to_json(scm.dag());
    json noises = json::array();
    for (const auto& noise : scm.noises()) noises.push_back(to_json(noise));
    doc["noises"] = std::move(noises);
    return doc;
}

bool has_noises(const json& doc) { return doc.is_object() && doc.contains("noises"); }

Scm scm_from_json(const json& doc) {
    Dag dag = dag_from_json(doc);
    if (!has_noises(doc) || !doc.at("noises").is_array()) throw FormatError("missing list field 'noises'");
    std::vector<NoiseSpec> noises;
    for (const auto& entry : doc.at("noises")) noises.push_back(noise_from_json(entry));
    return Scm(std::move(dag), std::move(noises));
}

json to_json(const PredictionModel& model) {
    json doc;
    doc["kind"] = to_string(model.kind);
    doc["bias"] = model.bias;
    doc["coeffs"] = std::vector<double>(model.coeffs.begin(), model.coeffs.end());
    doc["predictor_indices"] = to_one_based(model.predictor_indices);
    doc["target_index"] = model.target_index + 1;
    return doc;
}

PredictionModel model_from_json(const json& doc) {
    PredictionModel model;
    model.kind = parse_model_kind(get_field<std::string>(doc, "kind"));
    model.bias = get_field<double>(doc, "bias");
    const auto coeffs = get_field<std::vector<double>>(doc, "coeffs");
    model.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    for (long long p : get_field<std::vector<long long>>(doc, "predictor_indices")) {
        if (p < 1) throw FormatError("predictor indices are 1-based");
        model.predictor_indices.push_back(static_cast<std::size_t>(p - 1));
    }
    const auto target = get_field<long long>(doc, "target_index");
    if (target < 1) throw FormatError("target_index is 1-based");
    model.target_index = static_cast<std::size_t>(target - 1);
    model.check();
    return model;
}

json to_json(const DagGenConfig& config) {
    return {{"n_roots", config.n_roots},         {"n_descendants", config.n_descendants},
            {"parent_prob", config.parent_prob}, {"min_parents", config.min_parents},
            {"weight_min", config.weight_min},   {"weight_max", config.weight_max},
            {"mixed_signs", config.mixed_signs}, {"noise", to_json(config.noise)},
            {"seed", config.seed}};
}

DagGenConfig datagen_config_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("datagen config must be an object");
    DagGenConfig config;
    read_optional(doc, "n_roots", config.n_roots);
    read_optional(doc, "n_descendants", config.n_descendants);
    read_optional(doc, "parent_prob", config.parent_prob);
    read_optional(doc, "min_parents", config.min_parents);
    read_optional(doc, "weight_min", config.weight_min);
    read_optional(doc, "weight_max", config.weight_max);
    read_optional(doc, "mixed_signs", config.mixed_signs);
    read_optional(doc, "seed", config.seed);
    if (doc.contains("noise")) config.noise = noise_from_json(doc.at("noise"));
    config.check();
    return config;
}

json plan_to_json(const InterventionPlan& plan, const Dag& dag, const std::vector<std::string>& warnings) {
    const auto& alpha = plan.effects.alpha;
    return {{"target_variable", plan.target_variable + 1},
            {"target_name", dag.name(plan.target_variable)},
            {"value", plan.value},
            {"desired_prediction", plan.desired_prediction},
            {"predicted_expectation", plan.predicted_expectation},
            {"effects", std::vector<double>(alpha.begin(), alpha.end())},
            {"warnings", warnings}};
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string dataset_to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t j = 0; j < data.column_count(); ++j) {
        if (j) out += ',';
        out += j < data.names.size() ? data.names[j] : "X" + std::to_string(j + 1);
    }
    out += '\n';
    for (Eigen::Index r = 0; r < data.rows.rows(); ++r) {
        for (Eigen::Index j = 0; j < data.rows.cols(); ++j) {
            if (j) out += ',';
            out += format_number(data.rows(r, j));
        }
        out += '\n';
    }
    return out;
}

Dataset dataset_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    Dataset data;
    std::vector<double> values;
    std::size_t rows = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (data.names.empty()) {
            data.names = split(line);
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != data.names.size())
            throw ParseError(line_no, "expected " + std::to_string(data.names.size()) + " columns, got " +
                                          std::to_string(cells.size()));
        for (const auto& cell : cells) {
            double v = 0.0;
            const char* first = cell.data();
            const char* last = first + cell.size();
            while (first < last && *first == ' ') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last || !std::isfinite(v))
                throw ParseError(line_no, "not a finite number: '" + cell + "'");
            values.push_back(v);
        }
        ++rows;
    }
    if (data.names.empty()) throw ParseError(line_no, "missing CSV header");
    data.rows = Eigen::Map<const Matrix>(values.data(), static_cast<Eigen::Index>(rows),
                                         static_cast<Eigen::Index>(data.names.size()));
    return data;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

json read_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace optint::io
