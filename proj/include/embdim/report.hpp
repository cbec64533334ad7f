// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "embdim/estimator.hpp"

namespace embdim {

/// A density estimate sampled on an ascending grid; integrates to 1 under
/// the trapezoidal rule.
struct DensityCurve {
    enum class Method { kde_gaussian, histogram };
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;  // kernel bandwidth, or histogram bin width
    Method method = Method::histogram;

    /// Trapezoidal integral over the grid.
    double integral() const;
};

/// Equal-width histogram over [min, max], normalized to unit area. The curve
/// carries both edges of every bin so the step shape survives the grid form.
DensityCurve histogram_density(std::span<const double> values, std::size_t bins);

/// Gaussian-kernel density on a uniform grid over [min-3h, max+3h], rescaled
/// so the trapezoidal integral is exactly 1. Default bandwidth is Silverman's
/// 1.06 * sd * n^(-1/5). Throws when all values are identical.
DensityCurve kde_density(std::span<const double> values, std::size_t grid_points,
                         std::optional<double> bandwidth = std::nullopt);

DensityCurve lid_histogram(const LidVector& l, std::size_t bins);
DensityCurve lid_kde(const LidVector& l, std::size_t grid_points,
                     std::optional<double> bandwidth = std::nullopt);

std::string density_csv(const DensityCurve& c);

struct RedundancyEntry {
    std::string name;
    double ed = 0.0;
    double id = 0.0;
    std::optional<double> params;  // parameter count, for scale plots
};

struct RedundancyRow {
    std::string name;
    double ed = 0.0;
    double id = 0.0;
    double redundancy_pct = 0.0;  // valid when error is empty
    std::optional<double> params;
    std::string error;

    bool ok() const { return error.empty(); }
};

/// One row per entry, input order preserved; a bad entry yields a row-level
/// error without suppressing the others.
std::vector<RedundancyRow> redundancy_table(const std::vector<RedundancyEntry>& entries);

std::string redundancy_table_csv(const std::vector<RedundancyRow>& rows);
std::string redundancy_table_text(const std::vector<RedundancyRow>& rows);

struct SeriesPoint {
    long long step = 0;
    IdReport report;
};

/// CSV with header step,id,ed,redundancy,n_used,n_excluded,lid_mean,lid_std;
/// floats carry 6 significant digits. Steps must be strictly increasing.
std::string series_report(const std::vector<SeriesPoint>& points);

struct RankSuggestion {
    long long recommended = 0;            // ceil(id): never below the ID
    std::vector<long long> probe;         // ranks worth sweeping, ascending
};

/// Low-rank adaptation rank guidance from a global ID estimate.
RankSuggestion rank_suggestion(double id);

/// Fixed-significant-digit formatting used by every CSV emitter.
std::string format_sig(double v, int digits = 6);

}  // namespace embdim
