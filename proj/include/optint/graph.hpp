#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace optint {

// Incoming edge of a vertex: `source` -> owner with strength `weight`.
struct InEdge {
    std::size_t source;
    double weight;
};

// Checks a connection matrix: square, finite, zero diagonal, acyclic.
// Throws NonzeroDiagonal, NonFiniteWeight or CycleDetected (with a witness
// cycle listed in edge direction, starting at its smallest vertex).
void validate(const Eigen::MatrixXd& weights);

// Kahn's algorithm; among ready vertices the lowest index goes first.
std::vector<std::size_t> topological_order(const Eigen::MatrixXd& weights);

// Weighted DAG. weights(i, j) is the strength of the edge j -> i; zero means
// no edge. Indices are 0-based here and 1-based in every file format.
// Immutable once constructed.
class Dag {
public:
    explicit Dag(std::size_t n);
    explicit Dag(Eigen::MatrixXd weights, std::vector<std::string> names = {});

    std::size_t size() const { return static_cast<std::size_t>(weights_.rows()); }
    const Eigen::MatrixXd& weights() const { return weights_; }
    double weight(std::size_t to, std::size_t from) const { return weights_(to, from); }

    const std::vector<std::string>& names() const { return names_; }
    std::string name(std::size_t i) const;

    std::span<const InEdge> in_edges(std::size_t i) const;
    std::vector<std::size_t> parents(std::size_t i) const;
    std::vector<std::size_t> children(std::size_t i) const;
    std::vector<std::size_t> roots() const;
    bool is_root(std::size_t i) const { return in_edges(i).empty(); }

    const std::vector<std::size_t>& topological_order() const { return order_; }

    // True if a directed path from `from` to `to` exists (from == to counts).
    bool reaches(std::size_t from, std::size_t to) const;

    std::size_t edge_count() const;

    bool operator==(const Dag& other) const {
        return weights_ == other.weights_ && names_ == other.names_;
    }

private:
    void check_index(std::size_t i) const;

    Eigen::MatrixXd weights_;
    std::vector<std::string> names_;
    std::vector<std::vector<InEdge>> in_edges_;
    std::vector<std::size_t> order_;
};

}  // namespace optint
