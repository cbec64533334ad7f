// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "embdim/knn.hpp"
#include "embdim/types.hpp"

namespace embdim {

/// Distances below this are treated as zero when flagging degenerate points.
constexpr double kDefaultZeroEps = 1e-12;

/// Per-point local intrinsic dimension estimates with a degeneracy mask.
struct LidVector {
    std::size_t k = 0;
    std::vector<double> values;      // valid only where !excluded[i]
    std::vector<bool> excluded;

    std::size_t size() const { return values.size(); }
    std::size_t n_excluded() const;
    std::size_t n_used() const { return size() - n_excluded(); }
};

struct LidStats {
    double mean = 0.0;
    double median = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;
    double std_dev = 0.0;  // population (1/n)
};

/// Global ID, extrinsic dimension and redundancy for one matrix.
struct IdReport {
    double id = 0.0;
    std::size_t ed = 0;
    double redundancy = 0.0;  // (ed - id) / ed
    std::size_t k = 0;
    std::size_t n_used = 0;
    std::size_t n_excluded = 0;
    LidStats lid_stats;
};

/// MLE of the local intrinsic dimension from k ascending neighbor distances:
/// (k-1) / sum_{i<k} (ln d_k - ln d_i). Returns nullopt for degenerate input
/// (a zero inner distance, or all distances equal). `bias_corrected` divides
/// by k-2 instead of k-1 and requires k >= 3.
std::optional<double> lid_point(std::span<const double> dists, bool bias_corrected = false);

/// lid_point applied per row; distances below zero_eps count as zero.
LidVector lid_all(const NeighborTable& t, double zero_eps = kDefaultZeroEps,
                  bool bias_corrected = false);

/// Harmonic mean of the non-excluded LIDs. Throws when all are excluded.
double global_id(const LidVector& l);

/// Arithmetic mean of the non-excluded LIDs (diagnostic only; the global ID
/// is the harmonic mean).
double arithmetic_mean_lid(const LidVector& l);

/// (ed - id) / ed. Negative results are allowed (id may exceed ed).
double redundancy(double ed, double id);

/// Dispersion statistics over the non-excluded LIDs. Percentiles use linear
/// interpolation between order statistics.
LidStats lid_dispersion(const LidVector& l);

struct EstimateOptions {
    std::size_t k = 5;
    double zero_eps = kDefaultZeroEps;
    bool bias_corrected = false;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct EstimateOutput {
    IdReport report;
    LidVector lids;
};

/// Full pipeline: exact_knn -> lid_all -> global_id -> redundancy.
EstimateOutput estimate_detailed(const EmbeddingMatrix& m, const EstimateOptions& opts = {});
IdReport estimate(const EmbeddingMatrix& m, const EstimateOptions& opts = {});

}  // namespace embdim
