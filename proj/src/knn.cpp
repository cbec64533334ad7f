// SPDX-License-Identifier: Apache-2.0
#include "embdim/knn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#define EIGEN_DONT_PARALLELIZE
#include <Eigen/Dense>

namespace embdim {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajorMatrix>;
using Map = Eigen::Map<RowMajorMatrix>;

constexpr std::size_t kQueryBlock = 256;
constexpr std::size_t kCandidateBlock = 8192;

// The expansion ||a||^2 + ||b||^2 - 2a.b loses relative precision once the
// squared distance falls far below the norms (catastrophic cancellation,
// error ~ eps * (||a||^2 + ||b||^2)). Candidates under this floor are
// recomputed by direct subtraction, which is exact in that regime and
// yields exactly 0 for duplicate rows.
constexpr double kRefineFloor = 1e-4;

inline double subtracted_distance2(const double* a, const double* b, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
        const double diff = a[c] - b[c];
        acc += diff * diff;
    }
    return acc;
}

inline double refined_distance2(double a_norm2, double b_norm2, double dot, const double* a,
                                const double* b, std::size_t dim) {
    const double s = a_norm2 + b_norm2;
    const double d2 = s - 2.0 * dot;
    return d2 < kRefineFloor * s ? subtracted_distance2(a, b, dim) : d2;
}

// Bounded selection of the k lexicographically smallest (dist2, index) pairs.
// The content is a well-defined set, so it does not depend on stream order;
// blocks are still scanned in ascending index order for the tie rule.
struct TopK {
    std::size_t k;
    std::vector<std::pair<double, std::uint32_t>> heap;  // max-heap

    explicit TopK(std::size_t k_) : k(k_) { heap.reserve(k_); }

    void offer(double d2, std::uint32_t idx) {
        if (heap.size() < k) {
            heap.emplace_back(d2, idx);
            std::push_heap(heap.begin(), heap.end());
        } else if (std::pair<double, std::uint32_t>(d2, idx) < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = {d2, idx};
            std::push_heap(heap.begin(), heap.end());
        }
    }

    double worst() const {
        return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.front().first;
    }
};

std::vector<double> row_squared_norms(const EmbeddingMatrix& m) {
    std::vector<double> norms(m.rows);
    ConstMap x(m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.dim));
    for (std::size_t i = 0; i < m.rows; ++i) norms[i] = x.row(static_cast<Eigen::Index>(i)).squaredNorm();
    return norms;
}

}  // namespace

std::vector<double> pairwise_block_distances(std::span<const double> a, std::size_t a_rows,
                                             std::span<const double> b, std::size_t b_rows,
                                             std::size_t dim) {
    if (dim == 0) throw PreconditionError("dimension must be >= 1");
    if (a.size() != a_rows * dim || b.size() != b_rows * dim)
        throw PreconditionError("block size does not match rows*dim (dimension mismatch)");

    ConstMap ma(a.data(), static_cast<Eigen::Index>(a_rows), static_cast<Eigen::Index>(dim));
    ConstMap mb(b.data(), static_cast<Eigen::Index>(b_rows), static_cast<Eigen::Index>(dim));

    std::vector<double> out(a_rows * b_rows);
    Map g(out.data(), static_cast<Eigen::Index>(a_rows), static_cast<Eigen::Index>(b_rows));
    g.noalias() = ma * mb.transpose();

    std::vector<double> bnorms(b_rows);
    for (std::size_t j = 0; j < b_rows; ++j)
        bnorms[j] = mb.row(static_cast<Eigen::Index>(j)).squaredNorm();
    for (std::size_t i = 0; i < a_rows; ++i) {
        const double an = ma.row(static_cast<Eigen::Index>(i)).squaredNorm();
        for (std::size_t j = 0; j < b_rows; ++j)
            out[i * b_rows + j] = refined_distance2(an, bnorms[j], out[i * b_rows + j],
                                                    a.data() + i * dim, b.data() + j * dim, dim);
    }
    return out;
}

NeighborTable exact_knn(const EmbeddingMatrix& m, std::size_t k, unsigned threads) {
    const std::size_t n = m.rows;
    if (k == 0) throw PreconditionError("k must be >= 1");
    if (k >= n)
        throw PreconditionError("k=" + std::to_string(k) + " must be < n=" + std::to_string(n) +
                                " (self is excluded)");

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_query_blocks = (n + kQueryBlock - 1) / kQueryBlock;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_query_blocks));

    const std::vector<double> norms = row_squared_norms(m);
    ConstMap x(m.data.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m.dim));

    NeighborTable t;
    t.rows = n;
    t.k = k;
    t.indices.resize(n * k);
    t.distances.resize(n * k);

    std::atomic<std::size_t> next_block{0};

    auto worker = [&]() {
        RowMajorMatrix gram(kQueryBlock, kCandidateBlock);
        std::vector<std::pair<double, std::uint32_t>> sorted;
        sorted.reserve(k);

        for (;;) {
            const std::size_t qb = next_block.fetch_add(1);
            if (qb >= n_query_blocks) break;
            const std::size_t q0 = qb * kQueryBlock;
            const std::size_t qn = std::min(kQueryBlock, n - q0);

            // candidate blocks scanned in ascending order for every query
            // row, so the result is independent of scheduling
            std::vector<TopK> tops;
            tops.reserve(qn);
            for (std::size_t q = 0; q < qn; ++q) tops.emplace_back(k);

            for (std::size_t c0 = 0; c0 < n; c0 += kCandidateBlock) {
                const std::size_t cn = std::min(kCandidateBlock, n - c0);
                auto gblock = gram.topLeftCorner(static_cast<Eigen::Index>(qn),
                                                 static_cast<Eigen::Index>(cn));
                gblock.noalias() =
                    x.middleRows(static_cast<Eigen::Index>(q0), static_cast<Eigen::Index>(qn)) *
                    x.middleRows(static_cast<Eigen::Index>(c0), static_cast<Eigen::Index>(cn)).transpose();

                for (std::size_t q = 0; q < qn; ++q) {
                    const std::size_t i = q0 + q;
                    const double qnorm = norms[i];
                    const double* qrow = m.row(i);
                    TopK& top_q = tops[q];
                    const double* grow = gram.data() + q * static_cast<std::size_t>(gram.cols());
                    for (std::size_t c = 0; c < cn; ++c) {
                        const std::size_t j = c0 + c;
                        if (j == i) continue;
                        const double d2 =
                            refined_distance2(qnorm, norms[j], grow[c], qrow, m.row(j), m.dim);
                        if (d2 <= top_q.worst()) top_q.offer(d2, static_cast<std::uint32_t>(j));
                    }
                }
            }

            for (std::size_t q = 0; q < qn; ++q) {
                const std::size_t i = q0 + q;
                sorted.assign(tops[q].heap.begin(), tops[q].heap.end());
                std::sort(sorted.begin(), sorted.end());
                for (std::size_t r = 0; r < k; ++r) {
                    t.indices[i * k + r] = sorted[r].second;
                    t.distances[i * k + r] = std::sqrt(sorted[r].first);
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return t;
}

}  // namespace embdim
