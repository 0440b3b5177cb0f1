#pragma once

// Plugin transfer entropy over Markov-embedded symbol blocks.
//
// Direction convention: everything here measures TE_{Y->X}, the information
// the history of the *second* series (source Y) adds about the next value of
// the *first* series (destination X) beyond X's own history:
//
//   TE_{Y->X} = sum p(x_{t+1}, x_t^(k), y_t^(l))
//               * log2[ p(x_{t+1} | x_t^(k), y_t^(l)) / p(x_{t+1} | x_t^(k)) ]
//
// with x_t^(k) = (x_t, ..., x_{t-k+1}) and y_t^(l) = (y_t, ..., y_{t-l+1}).

#include "teflow/error.hpp"
#include "teflow/symbolize.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace teflow {

struct EmbedParams {
    std::size_t k = 1;  // destination (X) history length
    std::size_t l = 1;  // source (Y) history length

    void validate() const {
        if (k < 1 || l < 1) throw std::invalid_argument("embedding orders k and l must be >= 1");
    }

    friend bool operator==(const EmbedParams&, const EmbedParams&) = default;
};

/// Block code, most recent symbol in the lowest digit.
using BlockCode = std::uint64_t;

struct JointKey {
    Symbol next = 0;
    BlockCode x_block = 0;
    BlockCode y_block = 0;

    friend auto operator<=>(const JointKey&, const JointKey&) = default;
};

/// Counts of (x_{t+1}, x-block, y-block) triples plus the three marginals the
/// estimator needs. Immutable once built by embed().
struct JointTable {
    EmbedParams params;
    std::size_t x_alphabet = 0;
    std::size_t y_alphabet = 0;
    std::map<JointKey, std::size_t> counts;
    std::map<std::pair<BlockCode, BlockCode>, std::size_t> xy_counts;   // (x-block, y-block)
    std::map<std::pair<Symbol, BlockCode>, std::size_t> next_x_counts;  // (x_{t+1}, x-block)
    std::map<BlockCode, std::size_t> x_counts;                          // x-block
    std::size_t n_effective = 0;

    [[nodiscard]] bool empty() const { return n_effective == 0; }
};

namespace detail {

inline void check_block_fits(std::size_t alphabet, std::size_t order) {
    double bits = static_cast<double>(order) * std::log2(static_cast<double>(std::max<std::size_t>(alphabet, 2)));
    if (bits >= 63.0) throw std::invalid_argument("embedding block does not fit in 64 bits");
}

inline BlockCode block_at(const std::vector<Symbol>& s, std::size_t t, std::size_t order,
                          std::size_t alphabet) {
    BlockCode code = 0;
    BlockCode place = 1;
    for (std::size_t i = 0; i < order; ++i) {
        code += static_cast<BlockCode>(s[t - i]) * place;
        place *= alphabet;
    }
    return code;
}

}  // namespace detail

/// Embeds destination `x` and source `y`. One triple per t in
/// [max(k,l)-1, N-2], so n_effective = N - max(k,l).
inline JointTable embed(const SymbolSeries& x, const SymbolSeries& y, const EmbedParams& params) {
    params.validate();
    if (x.size() != y.size()) {
        throw InputError("embed: length mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    const std::size_t n = x.size();
    if (n <= params.k + params.l) {
        throw InputError("embed: series of length " + std::to_string(n) + " too short for k=" +
                         std::to_string(params.k) + ", l=" + std::to_string(params.l));
    }
    detail::check_block_fits(x.alphabet, params.k);
    detail::check_block_fits(y.alphabet, params.l);

    JointTable table;
    table.params = params;
    table.x_alphabet = x.alphabet;
    table.y_alphabet = y.alphabet;

    const std::size_t start = std::max(params.k, params.l) - 1;
    for (std::size_t t = start; t + 1 < n; ++t) {
        const Symbol next = x.symbols[t + 1];
        const BlockCode xb = detail::block_at(x.symbols, t, params.k, x.alphabet);
        const BlockCode yb = detail::block_at(y.symbols, t, params.l, y.alphabet);
        ++table.counts[{next, xb, yb}];
        ++table.xy_counts[{xb, yb}];
        ++table.next_x_counts[{next, xb}];
        ++table.x_counts[xb];
        ++table.n_effective;
    }
    return table;
}

/// Plugin TE in bits. Unobserved triples contribute nothing; rounding noise
/// below zero is clamped away.
inline double transfer_entropy(const JointTable& table) {
    if (table.empty()) throw InputError("transfer_entropy: empty joint table");
    const double n = static_cast<double>(table.n_effective);
    double sum = 0.0;
    for (const auto& [key, c] : table.counts) {
        const std::size_t c_x = table.x_counts.at(key.x_block);
        const std::size_t c_xy = table.xy_counts.at({key.x_block, key.y_block});
        const std::size_t c_nx = table.next_x_counts.at({key.next, key.x_block});
        // p(n|x,y)/p(n|x) = c(n,x,y) c(x) / (c(x,y) c(n,x)); integer products keep
        // the identity case exactly 1.
        const double num = static_cast<double>(static_cast<std::uint64_t>(c) * c_x);
        const double den = static_cast<double>(static_cast<std::uint64_t>(c_xy) * c_nx);
        sum += static_cast<double>(c) * std::log2(num / den);
    }
    return std::max(0.0, sum / n);
}

/// TE_{Y->X}: information flowing from `y` (second argument) into the future of
/// `x` (first argument).
inline double directed_te(const SymbolSeries& x, const SymbolSeries& y, const EmbedParams& params) {
    return transfer_entropy(embed(x, y, params));
}

}  // namespace teflow
