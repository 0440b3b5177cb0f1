#pragma once

// The `stats`, `flow` and `pair` commands as library calls. The CLI is a thin
// argument-parsing shell around these.

#include "teflow/config.hpp"
#include "teflow/error.hpp"
#include "teflow/export.hpp"
#include "teflow/flow.hpp"
#include "teflow/ingest.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace teflow {

/// Writes `content` to `path` via a sibling temp file and rename, so readers
/// never see a half-written export.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw InputError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

struct LoadedData {
    Manifest manifest;
    std::vector<ReturnSeries> returns;  // manifest order; empty when < 2 prices
    std::vector<RowError> row_errors;
};

inline LoadedData load_returns(const RunConfig& cfg) {
    LoadedData d;
    d.manifest = load_manifest(cfg.manifest);
    auto load = load_prices(cfg.prices, d.manifest);
    d.row_errors = std::move(load.row_errors);
    for (const auto& p : load.series) {
        d.returns.push_back(p.size() >= 2 ? log_returns(p) : ReturnSeries{p.meta, {}});
    }
    return d;
}

namespace detail {

inline std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir = cfg.out.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out);
    std::filesystem::create_directories(dir);
    return dir;
}

template <class Writer>
std::string render(Writer&& w) {
    std::ostringstream ss;
    w(ss);
    return ss.str();
}

inline const ReturnSeries& find_returns(const LoadedData& d, const std::string& ticker) {
    for (const auto& r : d.returns) {
        if (r.meta.ticker == ticker) return r;
    }
    throw InputError("unknown ticker " + ticker);
}

}  // namespace detail

/// Descriptive statistics per instrument. With an output directory, writes
/// stats.csv and row_errors.csv there; otherwise the table goes to `out`.
inline void run_stats(const RunConfig& cfg, std::ostream& out) {
    const auto data = load_returns(cfg);
    std::vector<io::StatsRow> rows;
    for (const auto& r : data.returns) {
        if (r.observations.empty()) throw InputError("describe: " + r.meta.ticker + " has fewer than 2 prices");
        rows.push_back({r.meta.ticker, describe(r)});
    }
    const int decimals = std::max(cfg.precision, 5);
    auto table = detail::render([&](std::ostream& s) { io::write_stats(s, rows, decimals); });
    if (cfg.out.empty()) {
        out << table;
        return;
    }
    const auto dir = detail::prepare_out_dir(cfg);
    write_atomic(dir / "stats.csv", table);
    write_atomic(dir / "row_errors.csv",
                 detail::render([&](std::ostream& s) { io::write_row_errors(s, data.row_errors); }));
    out << "wrote " << rows.size() << " rows to " << (dir / "stats.csv").string() << '\n';
}

struct FlowRun {
    FlowMatrix matrix;
    NetFlowReport net;
    FlowGraph graph;
};

/// Full pipeline. Writes matrix.csv, matrix.json, skipped.csv, net_flow.csv,
/// flow.dot, flow.json, row_errors.csv and the resolved config.json; prints a
/// short summary to `out`.
inline FlowRun run_flow(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    const auto started = std::chrono::steady_clock::now();
    const auto data = load_returns(cfg);
    const auto scope = Scope::parse(cfg.scope);

    FlowRun run;
    run.matrix = pairwise_analysis(std::span<const ReturnSeries>(data.returns), cfg.scheme, cfg.embed,
                                   cfg.inference, scope, cfg.threads);
    run.net = net_flow(run.matrix, cfg.focal);
    run.graph = dominance_graph(run.matrix, cfg.cutoff);

    const auto dir = detail::prepare_out_dir(cfg);
    const int p = cfg.precision;
    write_atomic(dir / "matrix.csv", detail::render([&](auto& s) { io::write_matrix(s, run.matrix, p); }));
    write_atomic(dir / "matrix.json", io::to_json(run.matrix).dump(2) + "\n");
    write_atomic(dir / "skipped.csv", detail::render([&](auto& s) { io::write_skipped(s, run.matrix); }));
    write_atomic(dir / "net_flow.csv", detail::render([&](auto& s) { io::write_net_flow(s, run.net, p); }));
    write_atomic(dir / "flow.dot", detail::render([&](auto& s) { io::write_dot(s, run.graph, p); }));
    write_atomic(dir / "flow.json", io::to_json(run.graph).dump(2) + "\n");
    write_atomic(dir / "row_errors.csv",
                 detail::render([&](auto& s) { io::write_row_errors(s, data.row_errors); }));
    write_atomic(dir / "config.json", to_json(cfg).dump(2) + "\n");

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    out << "pairs computed: " << run.matrix.results.size() << '\n'
        << "pairs skipped:  " << run.matrix.skipped.size() << '\n'
        << "row errors:     " << data.row_errors.size() << '\n'
        << "edges (p <= " << cfg.cutoff << "): " << run.graph.edges.size() << '\n'
        << "elapsed:        " << io::format_number(elapsed.count(), 2) << " s\n"
        << "outputs in " << dir.string() << '\n';
    for (const auto& s : run.matrix.skipped) {
        out << "warning: skipped " << s.source << "->" << s.destination << ": " << s.reason << '\n';
    }
    return run;
}

/// One directed result source -> destination, computed exactly as the
/// corresponding run_flow cell. Prints a CSV header and row, then a summary.
inline TeResult run_pair(const RunConfig& cfg, const std::string& source, const std::string& destination,
                         std::ostream& out) {
    validate(cfg);
    if (source == destination) throw InputError("source and destination must differ");
    const auto data = load_returns(cfg);
    const auto& src = detail::find_returns(data, source);
    const auto& dst = detail::find_returns(data, destination);
    const auto r = analyze_directed(src, dst, cfg.scheme, cfg.embed, cfg.inference);

    io::write_matrix_header(out);
    io::write_result_row(out, r, cfg.precision);
    out << '\n'
        << "TE(" << source << " -> " << destination << ") = " << io::format_number(r.te, cfg.precision)
        << " bits, ETE = " << io::format_number(r.ete, cfg.precision) << ", std. err. = "
        << io::format_number(r.std_err, cfg.precision) << ", p = "
        << io::format_number(r.p_value, cfg.precision) << to_string(r.mark) << " (n = " << r.n_effective
        << ")\n";
    return r;
}

}  // namespace teflow
