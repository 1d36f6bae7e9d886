#include "optint/scm.hpp"

#include <cmath>

#include "optint/error.hpp"
#include "optint/rng.hpp"

namespace optint {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InvalidConfig(std::string("non-finite noise parameter: ") + what);
}

}  // namespace

NoiseSpec::NoiseSpec(GaussianNoise g) : family_(g) {
    check_finite(g.mean, "mean");
    check_finite(g.stddev, "stddev");
    if (g.stddev < 0.0) throw InvalidConfig("gaussian noise needs stddev >= 0");
}

NoiseSpec::NoiseSpec(UniformNoise u) : family_(u) {
    check_finite(u.lo, "lo");
    check_finite(u.hi, "hi");
    if (u.lo > u.hi) throw InvalidConfig("uniform noise needs lo <= hi");
}

NoiseSpec::NoiseSpec(ConstantNoise c) : family_(c) { check_finite(c.value, "value"); }

std::string NoiseSpec::family_name() const {
    return std::visit(overloaded{[](const GaussianNoise&) { return std::string("gaussian"); },
                                 [](const UniformNoise&) { return std::string("uniform"); },
                                 [](const ConstantNoise&) { return std::string("constant"); }},
                      family_);
}

double NoiseSpec::mean() const {
    return std::visit(overloaded{[](const GaussianNoise& g) { return g.mean; },
                                 [](const UniformNoise& u) { return 0.5 * (u.lo + u.hi); },
                                 [](const ConstantNoise& c) { return c.value; }},
                      family_);
}

double NoiseSpec::variance() const {
    return std::visit(overloaded{[](const GaussianNoise& g) { return g.stddev * g.stddev; },
                                 [](const UniformNoise& u) { return (u.hi - u.lo) * (u.hi - u.lo) / 12.0; },
                                 [](const ConstantNoise&) { return 0.0; }},
                      family_);
}

double NoiseSpec::draw(Rng& rng) const {
    return std::visit(overloaded{[&](const GaussianNoise& g) { return g.mean + g.stddev * rng.normal(); },
                                 [&](const UniformNoise& u) { return rng.uniform(u.lo, u.hi); },
                                 [](const ConstantNoise& c) { return c.value; }},
                      family_);
}

Eigen::VectorXd Dataset::column_means() const {
    if (rows.rows() == 0) return Eigen::VectorXd::Zero(rows.cols());
    return rows.colwise().mean().transpose();
}

Scm::Scm(Dag dag, std::vector<NoiseSpec> noises) : dag_(std::move(dag)), noises_(std::move(noises)) {
    if (noises_.size() != dag_.size())
        throw FormatError("expected " + std::to_string(dag_.size()) + " noise specs, got " +
                          std::to_string(noises_.size()));
}

namespace {

constexpr std::size_t kObservational = static_cast<std::size_t>(-1);

Dataset draw_rows(const Scm& scm, std::size_t intervened, double value, std::size_t m, std::uint64_t seed) {
    const Dag& dag = scm.dag();
    const std::size_t n = dag.size();
    Dataset out;
    out.rows.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out.names.push_back(dag.name(i));

    const auto& order = dag.topological_order();
    std::vector<double> noise(n);
    for (std::size_t block = 0; block * kSampleBlockRows < m; ++block) {
        Rng rng(derive_seed(seed, block));
        const std::size_t end = std::min(m, (block + 1) * kSampleBlockRows);
        for (std::size_t r = block * kSampleBlockRows; r < end; ++r) {
            for (std::size_t v = 0; v < n; ++v) noise[v] = scm.noises()[v].draw(rng);
            double* row = out.rows.row(static_cast<Eigen::Index>(r)).data();
            for (std::size_t v : order) {
                if (v == intervened) {
                    row[v] = value;
                    continue;
                }
                double x = noise[v];
                for (const auto& e : dag.in_edges(v)) x += e.weight * row[e.source];
                row[v] = x;
            }
        }
    }
    return out;
}

}  // namespace

Dataset sample(const Scm& scm, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw InvalidConfig("sample count must be at least 1");
    return draw_rows(scm, kObservational, 0.0, m, seed);
}

Dataset sample_interventional(const Scm& scm, std::size_t i, double c, std::size_t m, std::uint64_t seed) {
    if (i >= scm.size()) throw IndexOutOfRange(i, scm.size());
    if (m == 0) throw InvalidConfig("sample count must be at least 1");
    return draw_rows(scm, i, c, m, seed);
}

Eigen::VectorXd analytic_means(const Scm& scm) {
    const Dag& dag = scm.dag();
    Eigen::VectorXd mu(static_cast<Eigen::Index>(dag.size()));
    for (std::size_t v : dag.topological_order()) {
        double x = scm.noises()[v].mean();
        for (const auto& e : dag.in_edges(v)) x += e.weight * mu[static_cast<Eigen::Index>(e.source)];
        mu[static_cast<Eigen::Index>(v)] = x;
    }
    return mu;
}

Eigen::VectorXd estimate_noise_means(const Dag& dag, const Eigen::VectorXd& mu) {
    if (static_cast<std::size_t>(mu.size()) != dag.size())
        throw FormatError("expected " + std::to_string(dag.size()) + " expectations, got " +
                          std::to_string(mu.size()));
    Eigen::VectorXd noise = Eigen::VectorXd::Zero(mu.size());
    for (std::size_t v = 0; v < dag.size(); ++v) {
        if (dag.is_root(v)) continue;
        double x = mu[static_cast<Eigen::Index>(v)];
        for (const auto& e : dag.in_edges(v)) x -= e.weight * mu[static_cast<Eigen::Index>(e.source)];
        noise[static_cast<Eigen::Index>(v)] = x;
    }
    return noise;
}

}  // namespace optint
