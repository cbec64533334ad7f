// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace embdim {

/// Input file does not conform to its declared format.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its contract (k >= n, empty input, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense n x d matrix of row vectors, stored row-major in 64-bit floats.
/// Immutable by convention once built; safe to share across threads.
struct EmbeddingMatrix {
    std::size_t rows = 0;
    std::size_t dim = 0;  // extrinsic dimension
    std::vector<double> data;            // rows * dim, row-major
    std::vector<std::string> labels;     // empty, or one label per row
    std::string source;                  // provenance: path + format

    const double* row(std::size_t i) const { return data.data() + i * dim; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * dim + j]; }
    bool has_labels() const { return !labels.empty(); }

    /// Enforces the type invariants: finite values, label count, n,d >= 1.
    void validate() const {
        if (rows == 0 || dim == 0)
            throw PreconditionError("matrix must have at least one row and one column");
        if (data.size() != rows * dim)
            throw PreconditionError("matrix buffer size does not match rows*dim");
        if (!labels.empty() && labels.size() != rows)
            throw PreconditionError("label count " + std::to_string(labels.size()) +
                                    " does not match row count " + std::to_string(rows));
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!std::isfinite(data[i]))
                throw ParseError("non-finite value at row " + std::to_string(i / dim + 1));
        }
    }
};

}  // namespace embdim
