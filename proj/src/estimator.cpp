// SPDX-License-Identifier: Apache-2.0
#include "embdim/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace embdim {

namespace {

// Compensated (Kahan) sum keeps aggregates permutation-stable to ~1 ulp.
class KahanSum {
public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

double percentile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t m = sorted.size();
    if (m == 1) return sorted[0];
    const double rank = p / 100.0 * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= m) return sorted[m - 1];
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

std::size_t LidVector::n_excluded() const {
    std::size_t c = 0;
    for (bool e : excluded) c += e ? 1 : 0;
    return c;
}

std::optional<double> lid_point(std::span<const double> dists, bool bias_corrected) {
    const std::size_t k = dists.size();
    if (k < 2) throw PreconditionError("lid_point needs k >= 2 distances");
    if (bias_corrected && k < 3)
        throw PreconditionError("bias-corrected LID needs k >= 3 distances");
    for (std::size_t i = 0; i < k; ++i) {
        if (dists[i] < 0.0) throw PreconditionError("distances must be nonnegative");
        if (i > 0 && dists[i] < dists[i - 1])
            throw PreconditionError("distances must be sorted ascending");
    }

    const double dk = dists[k - 1];
    if (dk <= 0.0) return std::nullopt;  // all zero
    const double log_dk = std::log(dk);

    // ln(dk) - ln(di) rather than ln(dk/di): immune to ratio under/overflow
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        if (dists[i] <= 0.0) return std::nullopt;  // zero inner distance
        sum += log_dk - std::log(dists[i]);
    }
    if (sum <= 0.0) return std::nullopt;  // all distances equal

    const double norm = static_cast<double>(k - (bias_corrected ? 2 : 1));
    return norm / sum;
}

LidVector lid_all(const NeighborTable& t, double zero_eps, bool bias_corrected) {
    if (t.k < 2) throw PreconditionError("lid_all needs a neighbor table with k >= 2");
    if (bias_corrected && t.k < 3)
        throw PreconditionError("bias-corrected LID needs k >= 3 neighbors");

    LidVector l;
    l.k = t.k;
    l.values.assign(t.rows, 0.0);
    l.excluded.assign(t.rows, false);

    std::vector<double> row(t.k);
    for (std::size_t i = 0; i < t.rows; ++i) {
        auto d = t.row_distances(i);
        for (std::size_t j = 0; j < t.k; ++j) row[j] = d[j] < zero_eps ? 0.0 : d[j];
        const auto v = lid_point(row, bias_corrected);
        if (v) {
            l.values[i] = *v;
        } else {
            l.excluded[i] = true;
        }
    }
    return l;
}

double global_id(const LidVector& l) {
    KahanSum inv;
    std::size_t used = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l.excluded[i]) continue;
        inv.add(1.0 / l.values[i]);
        ++used;
    }
    if (used == 0)
        throw PreconditionError("all points are degenerate; global ID is undefined");
    return static_cast<double>(used) / inv.value();
}

double arithmetic_mean_lid(const LidVector& l) {
    KahanSum s;
    std::size_t used = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l.excluded[i]) continue;
        s.add(l.values[i]);
        ++used;
    }
    if (used == 0)
        throw PreconditionError("all points are degenerate; mean LID is undefined");
    return s.value() / static_cast<double>(used);
}

double redundancy(double ed, double id) {
    if (ed <= 0.0) throw PreconditionError("extrinsic dimension must be > 0");
    return (ed - id) / ed;
}

LidStats lid_dispersion(const LidVector& l) {
    std::vector<double> vals;
    vals.reserve(l.size());
    for (std::size_t i = 0; i < l.size(); ++i)
        if (!l.excluded[i]) vals.push_back(l.values[i]);
    if (vals.empty())
        throw PreconditionError("all points are degenerate; statistics are undefined");

    LidStats st;
    KahanSum s;
    for (double v : vals) s.add(v);
    st.mean = s.value() / static_cast<double>(vals.size());

    KahanSum sq;
    for (double v : vals) sq.add((v - st.mean) * (v - st.mean));
    st.std_dev = std::sqrt(sq.value() / static_cast<double>(vals.size()));

    std::sort(vals.begin(), vals.end());
    st.median = percentile_sorted(vals, 50.0);
    st.p5 = percentile_sorted(vals, 5.0);
    st.p95 = percentile_sorted(vals, 95.0);
    return st;
}

EstimateOutput estimate_detailed(const EmbeddingMatrix& m, const EstimateOptions& opts) {
    if (opts.k < 2) throw PreconditionError("k must be >= 2 for LID estimation");
    const NeighborTable t = exact_knn(m, opts.k, opts.threads);
    LidVector l = lid_all(t, opts.zero_eps, opts.bias_corrected);

    IdReport r;
    r.id = global_id(l);
    r.ed = m.dim;
    r.redundancy = redundancy(static_cast<double>(m.dim), r.id);
    r.k = opts.k;
    r.n_excluded = l.n_excluded();
    r.n_used = l.size() - r.n_excluded;
    r.lid_stats = lid_dispersion(l);
    return {r, std::move(l)};
}

IdReport estimate(const EmbeddingMatrix& m, const EstimateOptions& opts) {
    return estimate_detailed(m, opts).report;
}

}  // namespace embdim
