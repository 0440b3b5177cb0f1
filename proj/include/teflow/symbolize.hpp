#pragma once

// Discretisation of return series into small-alphabet symbol sequences.

#include "teflow/error.hpp"
#include "teflow/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace teflow {

using Symbol = std::uint32_t;

struct SymbolScheme {
    enum class Kind { quantile, fixed_thresholds };

    Kind kind = Kind::quantile;
    /// Quantile levels in (0,1) for `quantile`, raw return thresholds otherwise.
    std::vector<double> edges{0.05, 0.95};

    [[nodiscard]] std::size_t alphabet_size() const { return edges.size() + 1; }

    static SymbolScheme quantiles(std::vector<double> levels) {
        SymbolScheme s{Kind::quantile, std::move(levels)};
        s.validate();
        return s;
    }

    static SymbolScheme thresholds(std::vector<double> cuts) {
        SymbolScheme s{Kind::fixed_thresholds, std::move(cuts)};
        s.validate();
        return s;
    }

    /// `bins` equal-mass quantile bins: levels 1/bins, ..., (bins-1)/bins.
    static SymbolScheme equiprobable(std::size_t bins) {
        if (bins < 2) throw std::invalid_argument("bins must be >= 2");
        std::vector<double> levels;
        for (std::size_t i = 1; i < bins; ++i) {
            levels.push_back(static_cast<double>(i) / static_cast<double>(bins));
        }
        return quantiles(std::move(levels));
    }

    void validate() const {
        if (edges.empty()) throw std::invalid_argument("symbol scheme needs at least one edge");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!std::isfinite(edges[i])) throw std::invalid_argument("symbol scheme edge is not finite");
            if (kind == Kind::quantile && (edges[i] <= 0.0 || edges[i] >= 1.0)) {
                throw std::invalid_argument("quantile levels must lie in (0,1)");
            }
            if (i > 0 && !(edges[i - 1] < edges[i])) {
                throw std::invalid_argument("symbol scheme edges must be strictly increasing");
            }
        }
    }

    friend bool operator==(const SymbolScheme&, const SymbolScheme&) = default;
};

struct SymbolSeries {
    InstrumentMeta meta;
    std::vector<Symbol> symbols;
    std::size_t alphabet = 2;
    std::optional<SymbolScheme> scheme;  // empty when built from raw symbols

    [[nodiscard]] std::size_t size() const { return symbols.size(); }

    /// Wraps pre-coded symbols; throws if any symbol is outside [0, alphabet).
    static SymbolSeries from_symbols(std::vector<Symbol> symbols, std::size_t alphabet,
                                     InstrumentMeta meta = {}) {
        if (alphabet < 1) throw std::invalid_argument("alphabet must be >= 1");
        for (Symbol s : symbols) {
            if (s >= alphabet) throw std::invalid_argument("symbol outside alphabet");
        }
        return SymbolSeries{std::move(meta), std::move(symbols), alphabet, std::nullopt};
    }

    friend bool operator==(const SymbolSeries&, const SymbolSeries&) = default;
};

/// Sample quantile by linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
inline double empirical_quantile(std::span<const double> sorted, double level) {
    const double h = static_cast<double>(sorted.size() - 1) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Resolves a scheme to raw cut points for this sample.
inline std::vector<double> bin_edges(std::span<const double> values, const SymbolScheme& scheme) {
    scheme.validate();
    if (scheme.kind == SymbolScheme::Kind::fixed_thresholds) return scheme.edges;
    if (values.empty()) throw InputError("symbolize: empty series");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    cuts.reserve(scheme.edges.size());
    for (double level : scheme.edges) cuts.push_back(empirical_quantile(sorted, level));
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (!(cuts[i - 1] < cuts[i])) {
            std::ostringstream msg;
            msg << "symbolize: degenerate quantiles, levels " << scheme.edges[i - 1] << " and "
                << scheme.edges[i] << " give the same edge " << cuts[i];
            throw InputError(msg.str());
        }
    }
    const auto distinct = static_cast<std::size_t>(
        std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    if (distinct < scheme.alphabet_size()) {
        throw InputError("symbolize: " + std::to_string(distinct) +
                         " distinct values cannot fill " +
                         std::to_string(scheme.alphabet_size()) + " quantile bins");
    }
    return cuts;
}

/// Bins are [e_{i-1}, e_i); the first is open below and the last closed above,
/// so the symbol is the number of cut points <= value.
inline std::vector<Symbol> symbolize(std::span<const double> values, const SymbolScheme& scheme) {
    const auto cuts = bin_edges(values, scheme);
    std::vector<Symbol> out;
    out.reserve(values.size());
    for (double v : values) {
        out.push_back(static_cast<Symbol>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin()));
    }
    return out;
}

inline SymbolSeries symbolize(const ReturnSeries& returns, const SymbolScheme& scheme) {
    if (returns.observations.empty()) throw InputError("symbolize: empty series " + returns.meta.ticker);
    const auto values = returns.values();
    return SymbolSeries{returns.meta, symbolize(std::span<const double>(values), scheme),
                        scheme.alphabet_size(), scheme};
}

inline std::vector<std::size_t> histogram(const SymbolSeries& series) {
    std::vector<std::size_t> counts(series.alphabet, 0);
    for (Symbol s : series.symbols) ++counts.at(s);
    return counts;
}

}  // namespace teflow
