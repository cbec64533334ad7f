// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "embdim/types.hpp"

namespace embdim {

/// Per-row k nearest neighbors (self excluded), distances sorted ascending.
/// True Euclidean distances, not squared. Immutable after construction.
struct NeighborTable {
    std::size_t rows = 0;
    std::size_t k = 0;
    std::vector<std::uint32_t> indices;  // rows * k
    std::vector<double> distances;       // rows * k, nondecreasing per row

    std::span<const std::uint32_t> row_indices(std::size_t i) const {
        return {indices.data() + i * k, k};
    }
    std::span<const double> row_distances(std::size_t i) const {
        return {distances.data() + i * k, k};
    }
};

/// Squared Euclidean distances between two row blocks via the norm-expansion
/// kernel ||a-b||^2 = ||a||^2 + ||b||^2 - 2 a.b. Values below the kernel's
/// cancellation floor (including negatives) are clamped to exactly 0, so
/// duplicate rows always report distance 0.
/// Returns an a_rows x b_rows row-major block.
std::vector<double> pairwise_block_distances(std::span<const double> a, std::size_t a_rows,
                                             std::span<const double> b, std::size_t b_rows,
                                             std::size_t dim);

/// Exact brute-force k-NN under Euclidean distance. Ties broken by smaller
/// row index. Output is bit-identical for any worker count (threads = 0
/// means hardware concurrency).
NeighborTable exact_knn(const EmbeddingMatrix& m, std::size_t k, unsigned threads = 0);

}  // namespace embdim
