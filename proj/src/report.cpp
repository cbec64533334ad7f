// SPDX-License-Identifier: Apache-2.0
#include "embdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace embdim {

namespace {

std::vector<double> included_values(const LidVector& l) {
    std::vector<double> vals;
    vals.reserve(l.size());
    for (std::size_t i = 0; i < l.size(); ++i)
        if (!l.excluded[i]) vals.push_back(l.values[i]);
    return vals;
}

void check_ascending(const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw PreconditionError("density grid is not strictly ascending");
}

}  // namespace

double DensityCurve::integral() const {
    double area = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        area += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    return area;
}

DensityCurve histogram_density(std::span<const double> values, std::size_t bins) {
    if (values.empty()) throw PreconditionError("histogram needs at least one value");
    if (bins == 0) throw PreconditionError("bins must be >= 1");

    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) {  // zero range: nominal unit-width support around the value
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);

    std::vector<double> counts(bins, 0.0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= bins) b = bins - 1;  // v == hi lands in the last bin
        counts[b] += 1.0;
    }

    DensityCurve c;
    c.method = DensityCurve::Method::histogram;
    c.bandwidth = width;
    c.grid.reserve(2 * bins);
    c.density.reserve(2 * bins);
    const double total = static_cast<double>(values.size());
    for (std::size_t b = 0; b < bins; ++b) {
        const double h = counts[b] / (total * width);
        const double left = lo + width * static_cast<double>(b);
        const double right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
        // both edges of the bin; interior left edges are nudged one ulp up
        // so the grid stays strictly ascending across each step
        c.grid.push_back(b == 0 ? left : std::nextafter(left, hi));
        c.density.push_back(h);
        c.grid.push_back(b + 1 == bins ? right : right);
        c.density.push_back(h);
    }
    check_ascending(c.grid);
    return c;
}

DensityCurve kde_density(std::span<const double> values, std::size_t grid_points,
                         std::optional<double> bandwidth) {
    if (values.size() < 2) throw PreconditionError("kde needs at least two values");
    if (grid_points < 2) throw PreconditionError("kde needs at least two grid points");

    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    const double sd = std::sqrt(var);

    double h;
    if (bandwidth) {
        h = *bandwidth;
        if (!(h > 0.0)) throw PreconditionError("bandwidth must be > 0");
    } else {
        if (sd == 0.0)
            throw PreconditionError("all values identical: bandwidth degenerates, use a histogram");
        h = 1.06 * sd * std::pow(n, -0.2);  // Silverman's rule
    }

    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn_it - 3.0 * h;
    const double hi = *mx_it + 3.0 * h;

    DensityCurve c;
    c.method = DensityCurve::Method::kde_gaussian;
    c.bandwidth = h;
    c.grid.resize(grid_points);
    c.density.assign(grid_points, 0.0);
    const double step = (hi - lo) / static_cast<double>(grid_points - 1);
    const double scale = 1.0 / (n * h * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double x = lo + step * static_cast<double>(g);
        c.grid[g] = x;
        double acc = 0.0;
        for (double v : values) {
            const double z = (x - v) / h;
            acc += std::exp(-0.5 * z * z);
        }
        c.density[g] = acc * scale;
    }

    // correct for the mass the finite grid cuts off
    const double area = c.integral();
    for (double& d : c.density) d /= area;
    check_ascending(c.grid);
    return c;
}

DensityCurve lid_histogram(const LidVector& l, std::size_t bins) {
    return histogram_density(included_values(l), bins);
}

DensityCurve lid_kde(const LidVector& l, std::size_t grid_points, std::optional<double> bandwidth) {
    return kde_density(included_values(l), grid_points, bandwidth);
}

std::string format_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string density_csv(const DensityCurve& c) {
    std::ostringstream out;
    out << "x,density\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        out << format_sig(c.grid[i], 12) << "," << format_sig(c.density[i]) << "\n";
    return out.str();
}

std::vector<RedundancyRow> redundancy_table(const std::vector<RedundancyEntry>& entries) {
    std::vector<RedundancyRow> rows;
    rows.reserve(entries.size());
    for (const auto& e : entries) {
        RedundancyRow r;
        r.name = e.name;
        r.ed = e.ed;
        r.id = e.id;
        r.params = e.params;
        if (e.ed <= 0.0) {
            r.error = "ED must be > 0";
        } else {
            r.redundancy_pct = redundancy(e.ed, e.id) * 100.0;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

std::string pct2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

bool any_params(const std::vector<RedundancyRow>& rows) {
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.params.has_value(); });
}

}  // namespace

std::string redundancy_table_csv(const std::vector<RedundancyRow>& rows) {
    const bool with_params = any_params(rows);
    std::ostringstream out;
    out << "name,ed,id,redundancy_pct";
    if (with_params) out << ",params,log10_params";
    out << "\n";
    for (const auto& r : rows) {
        out << r.name << "," << format_sig(r.ed) << "," << format_sig(r.id) << ",";
        out << (r.ok() ? pct2(r.redundancy_pct) : "error: " + r.error);
        if (with_params) {
            if (r.params) {
                out << "," << format_sig(*r.params) << "," << format_sig(std::log10(*r.params));
            } else {
                out << ",,";
            }
        }
        out << "\n";
    }
    return out.str();
}

std::string redundancy_table_text(const std::vector<RedundancyRow>& rows) {
    const bool with_params = any_params(rows);
    std::size_t name_w = 5;
    for (const auto& r : rows) name_w = std::max(name_w, r.name.size());

    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %10s  %10s  %10s", static_cast<int>(name_w), "model",
                  "Redu.(%)", "ID", "ED");
    out << buf;
    if (with_params) out << "  log10(params)";
    out << "\n";
    for (const auto& r : rows) {
        if (r.ok()) {
            std::snprintf(buf, sizeof buf, "%-*s  %10s  %10s  %10s", static_cast<int>(name_w),
                          r.name.c_str(), pct2(r.redundancy_pct).c_str(), format_sig(r.id).c_str(),
                          format_sig(r.ed).c_str());
        } else {
            std::snprintf(buf, sizeof buf, "%-*s  error: %s", static_cast<int>(name_w),
                          r.name.c_str(), r.error.c_str());
        }
        out << buf;
        if (with_params && r.ok() && r.params)
            out << "  " << format_sig(std::log10(*r.params));
        out << "\n";
    }
    return out.str();
}

std::string series_report(const std::vector<SeriesPoint>& points) {
    if (points.empty()) throw PreconditionError("series needs at least one point");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].step <= points[i - 1].step)
            throw PreconditionError("series steps must be strictly increasing (step " +
                                    std::to_string(points[i].step) + " after " +
                                    std::to_string(points[i - 1].step) + ")");

    std::ostringstream out;
    out << "step,id,ed,redundancy,n_used,n_excluded,lid_mean,lid_std\n";
    for (const auto& p : points) {
        out << p.step << "," << format_sig(p.report.id) << "," << p.report.ed << ","
            << format_sig(p.report.redundancy) << "," << p.report.n_used << ","
            << p.report.n_excluded << "," << format_sig(p.report.lid_stats.mean) << ","
            << format_sig(p.report.lid_stats.std_dev) << "\n";
    }
    return out.str();
}

RankSuggestion rank_suggestion(double id) {
    if (!(id > 0.0)) throw PreconditionError("id must be > 0");

    const auto c = static_cast<long long>(std::ceil(id));
    RankSuggestion s;
    s.recommended = c;

    long long pow2 = 1;
    while (pow2 <= c) pow2 *= 2;

    std::vector<long long> probe = {c - 1, c, c + 1, pow2};
    std::sort(probe.begin(), probe.end());
    for (long long r : probe)
        if (r >= 1 && (s.probe.empty() || s.probe.back() != r)) s.probe.push_back(r);
    return s;
}

}  // namespace embdim
