// SPDX-License-Identifier: Apache-2.0
#include "embdim/cli.hpp"

#include <glob.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>

#include <CLI11.hpp>
#include <json.hpp>

#include "embdim/estimator.hpp"
#include "embdim/io.hpp"
#include "embdim/report.hpp"
#include "embdim/synthetic.hpp"
#include "embdim/version.hpp"

namespace embdim {

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string format = "auto";
    std::size_t k = 5;
    std::size_t sample = 0;  // 0 = full matrix
    std::uint64_t seed = 42;
    double zero_eps = kDefaultZeroEps;
    bool bias_corrected = false;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
    if (with_format)
        cmd->add_option("--format", o.format, "Input format: word2vec|glove|npy|csv|auto")
            ->default_val("auto");
    cmd->add_option("-k,--k", o.k, "Neighbor count")->default_val(5)->check(CLI::Range(2, 1 << 20));
    if (with_format)
        cmd->add_option("--sample", o.sample, "Subsample this many rows before estimating");
    cmd->add_option("--seed", o.seed, "RNG seed, echoed in every report")->default_val(42);
    cmd->add_option("--zero-eps", o.zero_eps, "Distances below this count as zero")
        ->default_val(kDefaultZeroEps)
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--bias-corrected", o.bias_corrected,
                  "Normalize the LID sum by k-2 instead of k-1");
    cmd->add_option("--threads", o.threads, "Worker threads for k-NN (0 = all cores)")
        ->default_val(0);
}

EstimateOptions to_estimate_options(const CommonOpts& o) {
    EstimateOptions e;
    e.k = o.k;
    e.zero_eps = o.zero_eps;
    e.bias_corrected = o.bias_corrected;
    e.threads = o.threads;
    return e;
}

// optional secondary outputs of estimate/baseline
struct ExtraOutputs {
    std::string kde_path;
    std::string hist_path;
    std::size_t bins = 50;
    bool rank = false;
};

void add_extras(CLI::App* cmd, ExtraOutputs& o) {
    cmd->add_option("--lid-kde", o.kde_path, "Write the LID kernel-density curve CSV here");
    cmd->add_option("--lid-histogram", o.hist_path, "Write the LID histogram curve CSV here");
    cmd->add_option("--bins", o.bins, "Bin count for --lid-histogram")
        ->default_val(50)
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--rank", o.rank, "Also print an adapter rank suggestion for the estimated ID");
}

EmbeddingMatrix load_and_sample(const std::string& path, const CommonOpts& o) {
    EmbeddingMatrix m = load_matrix(path, format_from_name(o.format));
    if (o.sample > 0) {
        if (o.sample < o.k + 1)
            throw PreconditionError("--sample must be >= k+1 = " + std::to_string(o.k + 1));
        m = sample_rows(m, o.sample, o.seed);
    }
    return m;
}

json report_json(const IdReport& r, std::size_t n, const std::string& source, std::uint64_t seed) {
    return json{
        {"n", n},
        {"d", r.ed},
        {"k", r.k},
        {"id", r.id},
        {"redundancy", r.redundancy},
        {"n_excluded", r.n_excluded},
        {"lid_stats",
         {{"mean", r.lid_stats.mean},
          {"median", r.lid_stats.median},
          {"p5", r.lid_stats.p5},
          {"p95", r.lid_stats.p95},
          {"std", r.lid_stats.std_dev}}},
        {"source", source},
        {"seed", seed},
        {"tool_version", kVersion},
    };
}

std::string summary_line(const IdReport& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "ID=%s ED=%zu redundancy=%.2f%%", format_sig(r.id).c_str(),
                  r.ed, r.redundancy * 100.0);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::out | std::ios::trunc);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << text;
    if (!out) throw ParseError(path + ": write failed");
}

// JSON to --out (summary on stdout), or JSON to stdout (summary on stderr).
void emit_report(const json& j, const IdReport& r, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (!out_path.empty()) {
        write_text_file(out_path, text);
        std::cout << summary_line(r) << "\n";
    } else {
        std::cout << text;
        std::cerr << summary_line(r) << "\n";
    }
}

void emit_extras(const EstimateOutput& out, const ExtraOutputs& o) {
    if (!o.kde_path.empty()) write_text_file(o.kde_path, density_csv(lid_kde(out.lids, 512)));
    if (!o.hist_path.empty())
        write_text_file(o.hist_path, density_csv(lid_histogram(out.lids, o.bins)));
    if (o.rank) {
        const RankSuggestion s = rank_suggestion(out.report.id);
        std::cout << "rank: recommended=" << s.recommended << " probe=";
        for (std::size_t i = 0; i < s.probe.size(); ++i)
            std::cout << (i ? "," : "") << s.probe[i];
        std::cout << "\n";
    }
}

int cmd_estimate(const std::string& input, const CommonOpts& o, const ExtraOutputs& extras,
                 const std::string& out_path) {
    EmbeddingMatrix m = load_and_sample(input, o);
    const EstimateOutput out = estimate_detailed(m, to_estimate_options(o));
    emit_report(report_json(out.report, m.rows, m.source, o.seed), out.report, out_path);
    emit_extras(out, extras);
    return kExitOk;
}

int cmd_baseline(std::size_t dim, std::size_t n, const CommonOpts& o, const ExtraOutputs& extras,
                 const std::string& out_path) {
    if (n < o.k + 1)
        throw PreconditionError("--n must be >= k+1 = " + std::to_string(o.k + 1));
    EmbeddingMatrix m = gaussian_cloud(n, dim, o.seed);
    const EstimateOutput out = estimate_detailed(m, to_estimate_options(o));
    json j = report_json(out.report, m.rows, m.source, o.seed);
    j["synthetic"] = {{"kind", "gaussian"}, {"n", n}, {"d", dim}, {"seed", o.seed}};
    emit_report(j, out.report, out_path);
    emit_extras(out, extras);
    return kExitOk;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_path) {
    EmbeddingMatrix m = generate(spec);
    write_npy(out_path, m);
    std::cout << "synth kind=" << kind_name(spec.kind) << " n=" << spec.n << " d=" << spec.dim;
    if (spec.kind == SyntheticKind::hypercube) std::cout << " m=" << spec.m;
    std::cout << " seed=" << spec.seed << " -> " << out_path << "\n";
    return kExitOk;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    ::glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::string> paths;
    if (rc == 0)
        for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
    ::globfree(&g);
    if (rc == GLOB_NOMATCH || paths.empty())
        throw ParseError("no files match '" + pattern + "'");
    if (rc != 0) throw ParseError("glob failed for '" + pattern + "'");
    return paths;
}

long long step_from_name(const std::string& path, const std::regex& re) {
    const std::string base = std::filesystem::path(path).filename().string();
    std::smatch match;
    if (!std::regex_search(base, match, re) || match.size() < 2)
        throw ParseError(path + ": cannot extract a step number from the filename");
    try {
        return std::stoll(match[1].str());
    } catch (const std::exception&) {
        throw ParseError(path + ": step '" + match[1].str() + "' is not a valid integer");
    }
}

int cmd_series(const std::string& pattern, const std::string& step_pattern, const CommonOpts& o,
               const std::string& out_path) {
    std::regex re;
    try {
        re = std::regex(step_pattern);
    } catch (const std::regex_error& e) {
        throw PreconditionError("invalid --pattern regex: " + std::string(e.what()));
    }

    std::vector<std::pair<long long, std::string>> files;
    for (const auto& path : expand_glob(pattern))
        files.emplace_back(step_from_name(path, re), path);
    std::sort(files.begin(), files.end());

    std::vector<SeriesPoint> points;
    points.reserve(files.size());
    for (const auto& [step, path] : files) {
        EmbeddingMatrix m = load_and_sample(path, o);
        points.push_back({step, estimate(m, to_estimate_options(o))});
    }

    const std::string csv = series_report(points);
    if (!out_path.empty()) {
        write_text_file(out_path, csv);
        std::cout << "series: " << points.size() << " checkpoints -> " << out_path << "\n";
    } else {
        std::cout << csv;
    }
    return kExitOk;
}

std::pair<std::string, std::string> split_once(const std::string& s, char sep,
                                               const std::string& what) {
    const auto pos = s.find(sep);
    if (pos == std::string::npos || pos == 0 || pos + 1 == s.size())
        throw PreconditionError("expected " + what + ", got '" + s + "'");
    return {s.substr(0, pos), s.substr(pos + 1)};
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw PreconditionError("cannot parse number '" + s + "' in " + what);
    }
}

int cmd_compare(const std::vector<std::string>& inputs, const std::vector<std::string>& pairs,
                const std::vector<std::string>& params, bool csv_out, const CommonOpts& o,
                const std::string& out_path) {
    if (inputs.empty() && pairs.empty())
        throw PreconditionError("compare needs at least one --input NAME=PATH or --pair NAME:ED:ID");

    std::map<std::string, double> param_counts;
    for (const auto& p : params) {
        auto [name, value] = split_once(p, '=', "--params NAME=COUNT");
        param_counts[name] = to_double(value, "--params");
    }

    std::size_t n_failed = 0;
    std::vector<RedundancyRow> rows;
    for (const auto& spec : inputs) {
        auto [name, path] = split_once(spec, '=', "--input NAME=PATH");
        RedundancyEntry e;
        e.name = name;
        if (auto it = param_counts.find(name); it != param_counts.end()) e.params = it->second;
        try {
            EmbeddingMatrix m = load_and_sample(path, o);
            const IdReport r = estimate(m, to_estimate_options(o));
            e.ed = static_cast<double>(r.ed);
            e.id = r.id;
            rows.push_back(redundancy_table({e}).front());
        } catch (const std::exception& ex) {
            RedundancyRow bad;
            bad.name = name;
            bad.error = ex.what();
            rows.push_back(std::move(bad));
            ++n_failed;
        }
    }
    for (const auto& spec : pairs) {
        auto [name, rest] = split_once(spec, ':', "--pair NAME:ED:ID");
        auto [ed_s, id_s] = split_once(rest, ':', "--pair NAME:ED:ID");
        RedundancyEntry e;
        e.name = name;
        e.ed = to_double(ed_s, "--pair");
        e.id = to_double(id_s, "--pair");
        if (auto it = param_counts.find(name); it != param_counts.end()) e.params = it->second;
        rows.push_back(redundancy_table({e}).front());
        if (!rows.back().ok()) ++n_failed;
    }

    const std::string text = csv_out ? redundancy_table_csv(rows) : redundancy_table_text(rows);
    if (!out_path.empty()) {
        write_text_file(out_path, text);
        std::cout << "compare: " << rows.size() << " rows -> " << out_path << "\n";
    } else {
        std::cout << text;
    }
    return n_failed == rows.size() ? kExitParse : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Intrinsic-dimension estimation for embedding matrices"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate the ID of one embedding matrix");
    std::string est_input, est_out;
    CommonOpts est_opts;
    ExtraOutputs est_extras;
    est->add_option("input", est_input, "Embedding matrix file")->required();
    add_common(est, est_opts);
    add_extras(est, est_extras);
    est->add_option("-o,--out", est_out, "Write the JSON report here (default: stdout)");

    // baseline
    auto* base = app.add_subcommand("baseline", "Estimate the ID of a random Gaussian cloud");
    std::size_t base_dim = 0, base_n = 0;
    std::string base_out;
    CommonOpts base_opts;
    ExtraOutputs base_extras;
    base->add_option("--dim", base_dim, "Ambient dimension d")->required();
    base->add_option("--n", base_n, "Point count")->required();
    add_common(base, base_opts, /*with_format=*/false);
    add_extras(base, base_extras);
    base->add_option("-o,--out", base_out, "Write the JSON report here (default: stdout)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic matrix as npy");
    SyntheticSpec spec;
    std::string synth_kind = "gaussian", synth_out;
    synth->add_option("--kind", synth_kind, "gaussian|hypercube")->default_val("gaussian");
    synth->add_option("--n", spec.n, "Point count")->required();
    synth->add_option("--dim", spec.dim, "Ambient dimension D")->required();
    synth->add_option("--m", spec.m, "Intrinsic dimension (hypercube only)");
    synth->add_option("--seed", spec.seed, "RNG seed")->default_val(42);
    synth->add_option("-o,--out", synth_out, "Output npy path")->required();

    // series
    auto* series = app.add_subcommand("series", "Track ID across checkpoint files");
    std::string series_glob, series_pattern = "step(\\d+)", series_out;
    CommonOpts series_opts;
    series->add_option("input", series_glob, "Glob of checkpoint matrices")->required();
    series->add_option("--pattern", series_pattern,
                       "Regex with one capture group extracting the step from a filename")
        ->default_val("step(\\d+)");
    add_common(series, series_opts);
    series->add_option("-o,--out", series_out, "Write the series CSV here (default: stdout)");

    // compare
    auto* cmp = app.add_subcommand("compare", "Redundancy table across models");
    std::vector<std::string> cmp_inputs, cmp_pairs, cmp_params;
    bool cmp_csv = false;
    std::string cmp_out;
    CommonOpts cmp_opts;
    cmp->add_option("--input", cmp_inputs, "NAME=PATH of a matrix to estimate (repeatable)");
    cmp->add_option("--pair", cmp_pairs, "NAME:ED:ID with a precomputed ID (repeatable)");
    cmp->add_option("--params", cmp_params, "NAME=PARAM_COUNT for scale plots (repeatable)");
    cmp->add_flag("--csv", cmp_csv, "Emit CSV instead of an aligned table");
    add_common(cmp, cmp_opts);
    cmp->add_option("-o,--out", cmp_out, "Write the table here (default: stdout)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitPrecondition;
    }

    try {
        if (est->parsed()) return cmd_estimate(est_input, est_opts, est_extras, est_out);
        if (base->parsed()) return cmd_baseline(base_dim, base_n, base_opts, base_extras, base_out);
        if (synth->parsed()) {
            spec.kind = kind_from_name(synth_kind);
            if (spec.kind == SyntheticKind::hypercube && spec.m == 0)
                throw PreconditionError("hypercube needs --m >= 1");
            if (spec.kind == SyntheticKind::gaussian) spec.m = 0;
            return cmd_synth(spec, synth_out);
        }
        if (series->parsed()) return cmd_series(series_glob, series_pattern, series_opts, series_out);
        if (cmp->parsed())
            return cmd_compare(cmp_inputs, cmp_pairs, cmp_params, cmp_csv, cmp_opts, cmp_out);
        throw PreconditionError("no subcommand given");
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace embdim
