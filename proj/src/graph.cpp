#include "optint/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "optint/error.hpp"

namespace optint {

namespace {

std::string join_one_based(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ", ";
        s += std::to_string(v[k] + 1);
    }
    return s;
}

// Kahn's algorithm. Returns the (possibly partial) order; a partial order
// means the leftover vertices contain a cycle.
std::vector<std::size_t> kahn(const Eigen::MatrixXd& w) {
    const auto n = static_cast<std::size_t>(w.rows());
    std::vector<std::size_t> in_degree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (w(i, j) != 0.0) ++in_degree[i];

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (in_degree[i] == 0) ready.push(i);

    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        order.push_back(v);
        for (std::size_t c = 0; c < n; ++c)
            if (w(c, v) != 0.0 && --in_degree[c] == 0) ready.push(c);
    }
    return order;
}

std::vector<std::size_t> find_cycle(const Eigen::MatrixXd& w, const std::vector<std::size_t>& partial) {
    const auto n = static_cast<std::size_t>(w.rows());
    std::vector<bool> left(n, true);
    for (std::size_t v : partial) left[v] = false;

    // Every leftover vertex has a leftover parent, so walking parents must
    // eventually revisit a vertex.
    std::size_t start = 0;
    while (!left[start]) ++start;
    std::vector<std::size_t> walk;
    std::vector<std::ptrdiff_t> seen_at(n, -1);
    std::size_t v = start;
    while (seen_at[v] < 0) {
        seen_at[v] = static_cast<std::ptrdiff_t>(walk.size());
        walk.push_back(v);
        std::size_t p = 0;
        while (!(left[p] && w(v, p) != 0.0)) ++p;
        v = p;
    }
    std::vector<std::size_t> cycle(walk.begin() + seen_at[v], walk.end());
    // The walk follows edges backwards.
    std::reverse(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    return cycle;
}

}  // namespace

void validate(const Eigen::MatrixXd& weights) {
    if (weights.rows() != weights.cols())
        throw FormatError("connection matrix must be square");
    const auto n = static_cast<std::size_t>(weights.rows());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(weights(i, j))) throw NonFiniteWeight(i, j);
    for (std::size_t i = 0; i < n; ++i)
        if (weights(i, i) != 0.0) throw NonzeroDiagonal(i);
    const auto order = kahn(weights);
    if (order.size() != n) throw CycleDetected(find_cycle(weights, order));
}

std::vector<std::size_t> topological_order(const Eigen::MatrixXd& weights) {
    validate(weights);
    return kahn(weights);
}

Dag::Dag(std::size_t n) : Dag(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {}

Dag::Dag(Eigen::MatrixXd weights, std::vector<std::string> names)
    : weights_(std::move(weights)), names_(std::move(names)) {
    if (weights_.rows() == 0) throw FormatError("a graph needs at least one vertex");
    validate(weights_);
    if (!names_.empty() && names_.size() != size())
        throw FormatError("expected " + std::to_string(size()) + " names, got " +
                          std::to_string(names_.size()));
    order_ = kahn(weights_);
    in_edges_.resize(size());
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (weights_(i, j) != 0.0) in_edges_[i].push_back({j, weights_(i, j)});
}

void Dag::check_index(std::size_t i) const {
    if (i >= size()) throw IndexOutOfRange(i, size());
}

std::string Dag::name(std::size_t i) const {
    check_index(i);
    return names_.empty() ? "X" + std::to_string(i + 1) : names_[i];
}

std::span<const InEdge> Dag::in_edges(std::size_t i) const {
    check_index(i);
    return in_edges_[i];
}

std::vector<std::size_t> Dag::parents(std::size_t i) const {
    std::vector<std::size_t> out;
    for (const auto& e : in_edges(i)) out.push_back(e.source);
    return out;
}

std::vector<std::size_t> Dag::children(std::size_t i) const {
    check_index(i);
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < size(); ++c)
        if (weights_(c, i) != 0.0) out.push_back(c);
    return out;
}

std::vector<std::size_t> Dag::roots() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (in_edges_[i].empty()) out.push_back(i);
    return out;
}

bool Dag::reaches(std::size_t from, std::size_t to) const {
    check_index(from);
    check_index(to);
    std::vector<bool> hit(size(), false);
    hit[from] = true;
    for (std::size_t v : order_)
        for (const auto& e : in_edges_[v])
            if (hit[e.source]) hit[v] = true;
    return hit[to];
}

std::size_t Dag::edge_count() const {
    std::size_t count = 0;
    for (const auto& edges : in_edges_) count += edges.size();
    return count;
}

CycleDetected::CycleDetected(std::vector<std::size_t> cycle)
    : Error("cycle detected through vertices [" + join_one_based(cycle) + "]"), cycle_(std::move(cycle)) {}

NonzeroDiagonal::NonzeroDiagonal(std::size_t index)
    : Error("self-loop on vertex " + std::to_string(index + 1)), index_(index) {}

NonFiniteWeight::NonFiniteWeight(std::size_t row, std::size_t col)
    : Error("non-finite weight on edge " + std::to_string(col + 1) + " -> " + std::to_string(row + 1)),
      row_(row),
      col_(col) {}

IndexOutOfRange::IndexOutOfRange(std::size_t index, std::size_t size)
    : Error("variable index " + std::to_string(index + 1) + " out of range 1.." + std::to_string(size)) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace optint
