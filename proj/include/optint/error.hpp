#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace optint {

// Base class for every error raised by the library. The CLI maps these to
// exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Vertex indices carried by errors are 0-based; messages print them 1-based.

class CycleDetected : public Error {
public:
    explicit CycleDetected(std::vector<std::size_t> cycle);
    const std::vector<std::size_t>& cycle() const { return cycle_; }

private:
    std::vector<std::size_t> cycle_;
};

class NonzeroDiagonal : public Error {
public:
    explicit NonzeroDiagonal(std::size_t index);
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class NonFiniteWeight : public Error {
public:
    NonFiniteWeight(std::size_t row, std::size_t col);
    std::size_t row() const { return row_; }
    std::size_t col() const { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

class IndexOutOfRange : public Error {
public:
    IndexOutOfRange(std::size_t index, std::size_t size);
};

class FormatError : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class InsufficientRows : public Error {
public:
    using Error::Error;
};

class SingleClass : public Error {
public:
    using Error::Error;
};

class ZeroCausalEffect : public Error {
public:
    using Error::Error;
};

class InterveneOnTarget : public Error {
public:
    using Error::Error;
};

class ZeroCoefficient : public Error {
public:
    using Error::Error;
};

class EmptyCandidates : public Error {
public:
    using Error::Error;
};

class AllEffectsZero : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class NetworkUnavailable : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace optint
