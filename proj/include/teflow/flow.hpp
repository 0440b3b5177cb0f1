#pragma once

// Pairwise analysis over many instruments, net flows and the dominance graph.

#include "teflow/entropy.hpp"
#include "teflow/error.hpp"
#include "teflow/inference.hpp"
#include "teflow/ingest.hpp"
#include "teflow/symbolize.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace teflow {

/// Which unordered instrument pairs to analyse. Textual forms:
///   "all", "within" (same market), "cross" (different markets),
///   "<Market>" (both in that market), "<MarketA>-<MarketB>" (one in each).
class Scope {
public:
    enum class Mode { all, within, cross, markets };

    Scope() = default;

    static Scope parse(std::string_view text) {
        Scope s;
        s.label_ = std::string(text);
        if (text == "all") return s.with(Mode::all);
        if (text == "within") return s.with(Mode::within);
        if (text == "cross") return s.with(Mode::cross);
        if (auto m = parse_market(text)) {
            s.a_ = s.b_ = *m;
            return s.with(Mode::markets);
        }
        if (auto dash = text.find('-'); dash != std::string_view::npos) {
            auto a = parse_market(text.substr(0, dash));
            auto b = parse_market(text.substr(dash + 1));
            if (a && b) {
                s.a_ = *a;
                s.b_ = *b;
                return s.with(Mode::markets);
            }
        }
        throw std::invalid_argument("unknown scope '" + std::string(text) + "'");
    }

    [[nodiscard]] bool includes(Market x, Market y) const {
        switch (mode_) {
            case Mode::all: return true;
            case Mode::within: return x == y;
            case Mode::cross: return x != y;
            case Mode::markets: return (x == a_ && y == b_) || (x == b_ && y == a_);
        }
        return false;
    }

    [[nodiscard]] const std::string& label() const { return label_; }

private:
    Scope with(Mode m) {
        mode_ = m;
        return *this;
    }

    Mode mode_ = Mode::all;
    Market a_ = Market::US;
    Market b_ = Market::US;
    std::string label_ = "all";
};

struct SkipRecord {
    std::string source;
    std::string destination;
    std::string reason;

    friend bool operator==(const SkipRecord&, const SkipRecord&) = default;
};

using DirectedPair = std::pair<std::string, std::string>;  // (source, destination)

struct FlowMatrix {
    std::vector<InstrumentMeta> instruments;
    std::map<DirectedPair, TeResult> results;  // lexicographic by source, then destination
    std::vector<SkipRecord> skipped;           // same ordering

    [[nodiscard]] const TeResult* find(const std::string& source, const std::string& destination) const {
        auto it = results.find({source, destination});
        return it == results.end() ? nullptr : &it->second;
    }
};

/// source -> destination on the pair's common dates. Both series are
/// symbolised on that aligned sample, so per-pair quantiles apply.
inline TeResult analyze_directed(const ReturnSeries& source, const ReturnSeries& destination,
                                 const SymbolScheme& scheme, const EmbedParams& embed_params,
                                 const InferenceParams& inf) {
    auto [src, dst] = align_pair(source, destination);
    return significance(symbolize(dst, scheme), symbolize(src, scheme), embed_params, inf);
}

namespace detail {

/// Runs job(i) for i in [0, n) on up to `threads` workers (0: hardware
/// concurrency). InputError from a job becomes a skip message; anything else
/// is rethrown after all workers stop.
template <class Job>
std::vector<std::optional<std::string>> fan_out(std::size_t n, std::size_t threads, Job&& job) {
    std::vector<std::optional<std::string>> failures(n);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(n, 1));

    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (const InputError& e) {
                failures[i] = e.what();
            } catch (...) {
                std::lock_guard lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (fatal) std::rethrow_exception(fatal);
    return failures;
}

template <class Series, class Compute>
FlowMatrix pairwise(std::span<const Series> series, const Scope& scope, std::size_t threads,
                    Compute&& compute) {
    if (series.size() < 2) throw InputError("pairwise_analysis: need at least two series");
    FlowMatrix m;
    for (const auto& s : series) m.instruments.push_back(s.meta);

    std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (source, destination) indices
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = 0; j < series.size(); ++j) {
            if (i == j) continue;
            if (!scope.includes(series[i].meta.market, series[j].meta.market)) continue;
            jobs.emplace_back(i, j);
        }
    }
    std::vector<TeResult> out(jobs.size());
    auto failures = fan_out(jobs.size(), threads, [&](std::size_t n) {
        out[n] = compute(series[jobs[n].first], series[jobs[n].second]);
    });
    for (std::size_t n = 0; n < jobs.size(); ++n) {
        const auto& src = series[jobs[n].first].meta.ticker;
        const auto& dst = series[jobs[n].second].meta.ticker;
        if (failures[n]) {
            m.skipped.push_back({src, dst, *failures[n]});
        } else {
            m.results.emplace(DirectedPair{src, dst}, std::move(out[n]));
        }
    }
    std::sort(m.skipped.begin(), m.skipped.end(), [](const auto& a, const auto& b) {
        return std::tie(a.source, a.destination) < std::tie(b.source, b.destination);
    });
    return m;
}

}  // namespace detail

/// Both directions of every in-scope pair of return series, each on its own
/// aligned sample. Pairs too short to embed are recorded in `skipped`.
/// Output is independent of `threads`.
inline FlowMatrix pairwise_analysis(std::span<const ReturnSeries> series, const SymbolScheme& scheme,
                                    const EmbedParams& embed_params, const InferenceParams& inf,
                                    const Scope& scope = {}, std::size_t threads = 0) {
    scheme.validate();
    embed_params.validate();
    inf.validate();
    return detail::pairwise(series, scope, threads, [&](const ReturnSeries& src, const ReturnSeries& dst) {
        return analyze_directed(src, dst, scheme, embed_params, inf);
    });
}

/// Variant for already symbolised, equal-length series.
inline FlowMatrix pairwise_analysis(std::span<const SymbolSeries> series, const EmbedParams& embed_params,
                                    const InferenceParams& inf, const Scope& scope = {},
                                    std::size_t threads = 0) {
    embed_params.validate();
    inf.validate();
    return detail::pairwise(series, scope, threads, [&](const SymbolSeries& src, const SymbolSeries& dst) {
        return significance(dst, src, embed_params, inf);
    });
}

/// difference = ETE(other -> focal) - ETE(focal -> other).
/// Positive: the focal instrument receives more than it sends.
struct NetFlow {
    std::string focal;
    std::string other;
    double difference = 0.0;

    [[nodiscard]] std::string pair_label() const { return other + "->" + focal; }
};

struct NetFlowReport {
    std::vector<NetFlow> flows;
    std::vector<std::string> notes;  // pairs excluded for a missing direction
};

inline std::optional<double> net_flow_between(const FlowMatrix& m, const std::string& focal,
                                              const std::string& other) {
    const auto* in = m.find(other, focal);
    const auto* out = m.find(focal, other);
    if (!in || !out) return std::nullopt;
    return in->ete - out->ete;
}

/// One entry per unordered pair with at least one computed direction. The
/// focal side is the first ticker of `focal_priority` present in the pair,
/// else the lexicographically smaller ticker.
inline NetFlowReport net_flow(const FlowMatrix& m, std::span<const std::string> focal_priority = {}) {
    auto rank = [&](const std::string& t) {
        auto it = std::find(focal_priority.begin(), focal_priority.end(), t);
        return static_cast<std::size_t>(it - focal_priority.begin());
    };
    NetFlowReport report;
    std::map<std::pair<std::string, std::string>, bool> seen;
    auto visit = [&](const std::string& a, const std::string& b) {
        auto key = a < b ? std::pair{a, b} : std::pair{b, a};
        if (!seen.emplace(key, true).second) return;
        std::string focal = key.first, other = key.second;
        if (rank(other) < rank(focal)) std::swap(focal, other);
        if (auto d = net_flow_between(m, focal, other)) {
            report.flows.push_back({focal, other, *d});
        } else {
            report.notes.push_back("pair " + key.first + "/" + key.second +
                                   " excluded: one direction missing");
        }
    };
    for (const auto& [k, r] : m.results) visit(k.first, k.second);
    for (const auto& s : m.skipped) visit(s.source, s.destination);
    return report;
}

struct GraphNode {
    InstrumentMeta meta;
    double out_ete = 0.0;  // sum of ETE over significant outgoing edges
    double in_ete = 0.0;   // sum of ETE over significant incoming edges
};

struct FlowEdge {
    std::string source;
    std::string destination;
    double ete = 0.0;
    double p_value = 0.0;
};

struct FlowGraph {
    double cutoff = 0.05;
    std::vector<GraphNode> nodes;  // grouped by market, then ticker order
    std::vector<FlowEdge> edges;   // lexicographic by source, then destination
};

/// Keeps exactly the directed results with p_value <= cutoff.
inline FlowGraph dominance_graph(const FlowMatrix& m, double cutoff) {
    FlowGraph g;
    g.cutoff = cutoff;
    std::map<std::string, std::size_t> at;
    std::vector<InstrumentMeta> metas = m.instruments;
    std::stable_sort(metas.begin(), metas.end(), [](const auto& a, const auto& b) {
        return std::tie(a.market, a.ticker) < std::tie(b.market, b.ticker);
    });
    for (auto& meta : metas) {
        at.emplace(meta.ticker, g.nodes.size());
        g.nodes.push_back({std::move(meta), 0.0, 0.0});
    }
    for (const auto& [key, r] : m.results) {
        if (!(r.p_value <= cutoff)) continue;
        g.edges.push_back({r.source, r.destination, r.ete, r.p_value});
        g.nodes.at(at.at(r.source)).out_ete += r.ete;
        g.nodes.at(at.at(r.destination)).in_ete += r.ete;
    }
    return g;
}

}  // namespace teflow
