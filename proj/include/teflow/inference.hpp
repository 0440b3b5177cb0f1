#pragma once

// Shuffle-corrected (effective) transfer entropy and bootstrap significance.

#include "teflow/entropy.hpp"
#include "teflow/error.hpp"
#include "teflow/rng.hpp"
#include "teflow/symbolize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teflow {

struct InferenceParams {
    std::size_t shuffles = 100;    // M surrogates for the ETE correction
    std::size_t bootstraps = 300;  // B replicates for p-value and std. err.
    std::uint64_t seed = 20211006;
    std::vector<double> levels{0.1, 0.05, 0.01, 0.001};

    void validate() const {
        if (shuffles < 1) throw std::invalid_argument("shuffles must be >= 1");
        if (bootstraps < 1) throw std::invalid_argument("bootstrap replicates must be >= 1");
        if (levels.empty() || levels.size() > 4) {
            throw std::invalid_argument("between 1 and 4 significance levels are supported");
        }
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!(levels[i] > 0.0 && levels[i] < 1.0)) {
                throw std::invalid_argument("significance levels must lie in (0,1)");
            }
            if (i > 0 && !(levels[i] < levels[i - 1])) {
                throw std::invalid_argument("significance levels must be strictly decreasing");
            }
        }
    }

    friend bool operator==(const InferenceParams&, const InferenceParams&) = default;
};

enum class Mark { none, dot, star, star2, star3 };

inline std::string_view to_string(Mark m) {
    switch (m) {
        case Mark::none: return "";
        case Mark::dot: return ".";
        case Mark::star: return "*";
        case Mark::star2: return "**";
        case Mark::star3: return "***";
    }
    return "";
}

/// The i-th level (0-based, decreasing) earns Mark(i+1); the smallest level met wins.
inline Mark mark_for(double p_value, const std::vector<double>& levels) {
    for (std::size_t i = levels.size(); i-- > 0;) {
        if (p_value <= levels[i]) return static_cast<Mark>(i + 1);
    }
    return Mark::none;
}

/// One directed measurement source -> destination.
struct TeResult {
    std::string source;
    std::string destination;
    double te = 0.0;
    double ete = 0.0;
    double std_err = 0.0;
    double p_value = 1.0;
    Mark mark = Mark::none;
    std::size_t n_effective = 0;

    friend bool operator==(const TeResult&, const TeResult&) = default;
};

/// Uniform random permutation (Fisher-Yates); the histogram is unchanged.
inline SymbolSeries shuffle_surrogate(const SymbolSeries& y, rng::Stream& stream) {
    SymbolSeries out = y;
    auto& s = out.symbols;
    for (std::size_t i = s.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(stream.below(i));
        std::swap(s[i - 1], s[j]);
    }
    return out;
}

struct EffectiveTe {
    double te = 0.0;
    double ete = 0.0;             // te - surrogate_mean, clamped at 0
    double surrogate_mean = 0.0;  // mean TE over the shuffled sources
};

/// ETE_{Y->X} = TE_{Y->X} - mean_i TE_{Y_(i)->X}, with Y_(i) the i-th shuffle of Y.
/// Surrogate i draws from the (seed, y->x, shuffle, i) substream.
inline EffectiveTe effective_te(const SymbolSeries& x, const SymbolSeries& y,
                                const EmbedParams& embed_params, const InferenceParams& inf) {
    inf.validate();
    EffectiveTe r;
    r.te = directed_te(x, y, embed_params);
    double sum = 0.0;
    for (std::size_t i = 0; i < inf.shuffles; ++i) {
        auto stream = rng::pair_stream(inf.seed, y.meta.ticker, x.meta.ticker, rng::Purpose::shuffle, i);
        sum += directed_te(x, shuffle_surrogate(y, stream), embed_params);
    }
    r.surrogate_mean = sum / static_cast<double>(inf.shuffles);
    r.ete = std::max(0.0, r.te - r.surrogate_mean);
    return r;
}

namespace detail {

inline std::size_t draw_index(const std::vector<std::size_t>& counts, std::size_t total,
                              rng::Stream& stream) {
    auto r = static_cast<std::size_t>(stream.below(total));
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (r < counts[i]) return i;
        r -= counts[i];
    }
    return counts.size() - 1;
}

}  // namespace detail

/// Fresh path of y's length from the empirical order-`order` Markov chain of y.
/// The initial block is drawn from the empirical distribution of length-`order`
/// blocks (the marginal when order is 1). A block seen only at the very end of
/// y has no observed successor; its next symbol falls back to the marginal.
inline SymbolSeries markov_block_bootstrap(const SymbolSeries& y, std::size_t order,
                                           rng::Stream& stream) {
    if (order < 1) throw std::invalid_argument("markov_block_bootstrap: order must be >= 1");
    const std::size_t n = y.size();
    if (n <= order) {
        throw InputError("markov_block_bootstrap: series of length " + std::to_string(n) +
                         " too short for order " + std::to_string(order));
    }
    const std::size_t a = y.alphabet;
    detail::check_block_fits(a, order);

    std::vector<std::size_t> marginal(a, 0);
    for (Symbol s : y.symbols) ++marginal[s];

    std::map<BlockCode, std::vector<std::size_t>> transitions;
    std::map<BlockCode, std::size_t> blocks;
    for (std::size_t t = order - 1; t < n; ++t) {
        const BlockCode b = detail::block_at(y.symbols, t, order, a);
        ++blocks[b];
        if (t + 1 < n) {
            auto& row = transitions[b];
            if (row.empty()) row.assign(a, 0);
            ++row[y.symbols[t + 1]];
        }
    }

    SymbolSeries out = y;
    auto& s = out.symbols;

    // Initial block.
    {
        std::vector<BlockCode> codes;
        std::vector<std::size_t> weights;
        for (const auto& [code, c] : blocks) {
            codes.push_back(code);
            weights.push_back(c);
        }
        BlockCode code = codes[detail::draw_index(weights, n - order + 1, stream)];
        for (std::size_t i = 0; i < order; ++i) {
            s[order - 1 - i] = static_cast<Symbol>(code % a);
            code /= a;
        }
    }

    for (std::size_t t = order - 1; t + 1 < n; ++t) {
        const BlockCode b = detail::block_at(s, t, order, a);
        auto it = transitions.find(b);
        if (it != transitions.end()) {
            std::size_t total = 0;
            for (std::size_t c : it->second) total += c;
            s[t + 1] = static_cast<Symbol>(detail::draw_index(it->second, total, stream));
        } else {
            s[t + 1] = static_cast<Symbol>(detail::draw_index(marginal, n, stream));
        }
    }
    return out;
}

/// Full directed result for y -> x. Bootstrap replicate b resamples the source
/// with markov_block_bootstrap at order l on the (seed, y->x, bootstrap, b)
/// substream while x stays fixed. p = #{TE_b >= TE} / B; std_err is the sample
/// standard deviation of the replicate TEs.
inline TeResult significance(const SymbolSeries& x, const SymbolSeries& y,
                             const EmbedParams& embed_params, const InferenceParams& inf) {
    const auto table = embed(x, y, embed_params);
    const auto eff = effective_te(x, y, embed_params, inf);

    std::vector<double> replicates;
    replicates.reserve(inf.bootstraps);
    std::size_t exceed = 0;
    for (std::size_t b = 0; b < inf.bootstraps; ++b) {
        auto stream = rng::pair_stream(inf.seed, y.meta.ticker, x.meta.ticker, rng::Purpose::bootstrap, b);
        const double te_b = directed_te(x, markov_block_bootstrap(y, embed_params.l, stream), embed_params);
        if (te_b >= eff.te) ++exceed;
        replicates.push_back(te_b);
    }

    double mean = 0.0;
    for (double v : replicates) mean += v;
    mean /= static_cast<double>(replicates.size());
    double ss = 0.0;
    for (double v : replicates) ss += (v - mean) * (v - mean);

    TeResult r;
    r.source = y.meta.ticker;
    r.destination = x.meta.ticker;
    r.te = eff.te;
    r.ete = eff.ete;
    r.std_err = replicates.size() > 1 ? std::sqrt(ss / static_cast<double>(replicates.size() - 1)) : 0.0;
    r.p_value = static_cast<double>(exceed) / static_cast<double>(inf.bootstraps);
    r.mark = mark_for(r.p_value, inf.levels);
    r.n_effective = table.n_effective;
    return r;
}

}  // namespace teflow
