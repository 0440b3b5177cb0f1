#pragma once

// CSV, DOT and JSON writers for stats, matrices, net flows and graphs.

#include "teflow/csv.hpp"
#include "teflow/flow.hpp"
#include "teflow/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace teflow::io {

/// Fixed-point with `decimals` digits; a negative precision prints the
/// shortest round-trip form. Negative zero is printed without its sign.
inline std::string format_number(double v, int decimals) {
    char buf[64];
    if (decimals < 0) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    }
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

inline void write_row_errors(std::ostream& out, const std::vector<RowError>& errors) {
    out << "line,ticker,reason\n";
    for (const auto& e : errors) {
        out << e.line << ',' << csv::escape(e.ticker) << ',' << csv::escape(e.reason) << '\n';
    }
}

struct StatsRow {
    std::string ticker;
    DescriptiveStats stats;
};

inline void write_stats(std::ostream& out, const std::vector<StatsRow>& rows, int decimals) {
    out << "ticker,mean,std_dev,kurtosis,skewness,n\n";
    auto opt = [&](const std::optional<double>& v) { return v ? format_number(*v, decimals) : std::string("NA"); };
    for (const auto& r : rows) {
        out << csv::escape(r.ticker) << ',' << format_number(r.stats.mean, decimals) << ','
            << format_number(r.stats.std_dev, decimals) << ',' << opt(r.stats.kurtosis) << ','
            << opt(r.stats.skewness) << ',' << r.stats.n << '\n';
    }
}

inline void write_matrix_header(std::ostream& out) {
    out << "source,destination,te,ete,std_err,p_value,mark,n_effective\n";
}

inline void write_result_row(std::ostream& out, const TeResult& r, int decimals) {
    out << csv::escape(r.source) << ',' << csv::escape(r.destination) << ','
        << format_number(r.te, decimals) << ',' << format_number(r.ete, decimals) << ','
        << format_number(r.std_err, decimals) << ',' << format_number(r.p_value, decimals) << ','
        << to_string(r.mark) << ',' << r.n_effective << '\n';
}

inline void write_matrix(std::ostream& out, const FlowMatrix& m, int decimals) {
    write_matrix_header(out);
    for (const auto& [key, r] : m.results) write_result_row(out, r, decimals);
}

inline void write_skipped(std::ostream& out, const FlowMatrix& m) {
    out << "source,destination,reason\n";
    for (const auto& s : m.skipped) {
        out << csv::escape(s.source) << ',' << csv::escape(s.destination) << ',' << csv::escape(s.reason) << '\n';
    }
}

inline void write_net_flow(std::ostream& out, const NetFlowReport& report, int decimals) {
    out << "# difference = ETE(pair) - ETE(reverse of pair); positive: focal receives more than it sends\n";
    out << "pair,focal,difference\n";
    for (const auto& f : report.flows) {
        out << csv::escape(f.pair_label()) << ',' << csv::escape(f.focal) << ','
            << format_number(f.difference, decimals) << '\n';
    }
}

inline nlohmann::ordered_json to_json(const InstrumentMeta& m) {
    return {{"ticker", m.ticker}, {"name", m.name}, {"currency", m.currency},
            {"market", std::string(to_string(m.market))}};
}

inline nlohmann::ordered_json to_json(const TeResult& r) {
    return {{"source", r.source},       {"destination", r.destination},
            {"te", r.te},               {"ete", r.ete},
            {"std_err", r.std_err},     {"p_value", r.p_value},
            {"mark", std::string(to_string(r.mark))},
            {"n_effective", r.n_effective}};
}

inline nlohmann::ordered_json to_json(const FlowMatrix& m) {
    nlohmann::ordered_json j;
    j["instruments"] = nlohmann::ordered_json::array();
    for (const auto& meta : m.instruments) j["instruments"].push_back(to_json(meta));
    j["results"] = nlohmann::ordered_json::array();
    for (const auto& [key, r] : m.results) j["results"].push_back(to_json(r));
    j["skipped"] = nlohmann::ordered_json::array();
    for (const auto& s : m.skipped) {
        j["skipped"].push_back({{"source", s.source}, {"destination", s.destination}, {"reason", s.reason}});
    }
    return j;
}

inline nlohmann::ordered_json to_json(const FlowGraph& g) {
    nlohmann::ordered_json j;
    j["cutoff"] = g.cutoff;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes) {
        auto node = to_json(n.meta);
        node["out_ete"] = n.out_ete;
        node["in_ete"] = n.in_ete;
        j["nodes"].push_back(std::move(node));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges) {
        j["edges"].push_back({{"source", e.source}, {"destination", e.destination},
                              {"ete", e.ete}, {"p_value", e.p_value}});
    }
    return j;
}

namespace detail {

inline std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('\\');  // backslashes pass through as DOT escapes
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace detail

/// Graphviz digraph: one cluster per market, edge label = ETE, penwidth
/// proportional to ETE (the heaviest edge gets width 5).
inline void write_dot(std::ostream& out, const FlowGraph& g, int decimals) {
    double max_ete = 0.0;
    for (const auto& e : g.edges) max_ete = std::max(max_ete, e.ete);
    const double scale = max_ete > 0.0 ? 5.0 / max_ete : 0.0;

    out << "digraph flow {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box, style=rounded];\n";
    std::size_t i = 0;
    while (i < g.nodes.size()) {
        const Market market = g.nodes[i].meta.market;
        out << "  subgraph cluster_" << to_string(market) << " {\n";
        out << "    label=" << detail::dot_quote(to_string(market)) << ";\n";
        for (; i < g.nodes.size() && g.nodes[i].meta.market == market; ++i) {
            const auto& n = g.nodes[i];
            out << "    " << detail::dot_quote(n.meta.ticker) << " [label="
                << detail::dot_quote(n.meta.ticker + "\\nout " + format_number(n.out_ete, decimals) +
                                     " / in " + format_number(n.in_ete, decimals))
                << "];\n";
        }
        out << "  }\n";
    }
    for (const auto& e : g.edges) {
        out << "  " << detail::dot_quote(e.source) << " -> " << detail::dot_quote(e.destination)
            << " [label=" << detail::dot_quote(format_number(e.ete, decimals))
            << ", penwidth=" << format_number(e.ete * scale, 3) << "];\n";
    }
    out << "}\n";
}

}  // namespace teflow::io
