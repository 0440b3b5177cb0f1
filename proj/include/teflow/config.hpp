#pragma once

// Run configuration: defaults, JSON config files and command-line overrides.

#include "teflow/entropy.hpp"
#include "teflow/flow.hpp"
#include "teflow/inference.hpp"
#include "teflow/symbolize.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace teflow {

struct RunConfig {
    std::string prices;
    std::string manifest;
    std::string out;
    SymbolScheme scheme;
    EmbedParams embed;
    InferenceParams inference;
    std::string scope = "all";
    double cutoff = 0.05;
    int precision = 4;
    std::vector<std::string> focal;
    std::size_t threads = 0;  // execution only; not part of the resolved config

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// One layer of settings (config file or flags). Unset fields fall through to
/// the layer below.
struct ConfigLayer {
    std::optional<std::string> prices, manifest, out, scope;
    std::optional<std::size_t> bins;
    std::optional<std::vector<double>> quantiles, thresholds, levels;
    std::optional<std::size_t> k, l, shuffles, boot, threads;
    std::optional<std::uint64_t> seed;
    std::optional<double> cutoff;
    std::optional<int> precision;
    std::optional<std::vector<std::string>> focal;
};

inline std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto v = detail::parse_double(item);
        if (!v) throw std::invalid_argument("not a number list: '" + text + "'");
        out.push_back(*v);
    }
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

inline std::vector<std::string> parse_word_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto t = csv::trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

/// Applies `layer` on top of `cfg`. Within one layer `quantiles` and
/// `thresholds` are mutually exclusive and `bins` must agree with either;
/// `bins` alone selects equal-mass quantile bins unless it already matches.
inline void apply(RunConfig& cfg, const ConfigLayer& layer) {
    if (layer.prices) cfg.prices = *layer.prices;
    if (layer.manifest) cfg.manifest = *layer.manifest;
    if (layer.out) cfg.out = *layer.out;
    if (layer.scope) cfg.scope = *layer.scope;

    if (layer.quantiles && layer.thresholds) {
        throw std::invalid_argument("quantiles and thresholds are mutually exclusive");
    }
    if (layer.quantiles) {
        cfg.scheme = SymbolScheme::quantiles(*layer.quantiles);
    } else if (layer.thresholds) {
        cfg.scheme = SymbolScheme::thresholds(*layer.thresholds);
    } else if (layer.bins && *layer.bins != cfg.scheme.alphabet_size()) {
        cfg.scheme = SymbolScheme::equiprobable(*layer.bins);
    }
    if (layer.bins && *layer.bins != cfg.scheme.alphabet_size()) {
        throw std::invalid_argument("bins = " + std::to_string(*layer.bins) + " disagrees with " +
                                    std::to_string(cfg.scheme.edges.size()) + " bin edges");
    }

    if (layer.k) cfg.embed.k = *layer.k;
    if (layer.l) cfg.embed.l = *layer.l;
    if (layer.shuffles) cfg.inference.shuffles = *layer.shuffles;
    if (layer.boot) cfg.inference.bootstraps = *layer.boot;
    if (layer.seed) cfg.inference.seed = *layer.seed;
    if (layer.levels) cfg.inference.levels = *layer.levels;
    if (layer.cutoff) cfg.cutoff = *layer.cutoff;
    if (layer.precision) cfg.precision = *layer.precision;
    if (layer.focal) cfg.focal = *layer.focal;
    if (layer.threads) cfg.threads = *layer.threads;
}

inline void validate(const RunConfig& cfg) {
    cfg.scheme.validate();
    cfg.embed.validate();
    cfg.inference.validate();
    (void)Scope::parse(cfg.scope);
    if (!(cfg.cutoff >= 0.0 && cfg.cutoff <= 1.0)) throw std::invalid_argument("cutoff must lie in [0,1]");
    if (cfg.precision < 0 || cfg.precision > 17) throw std::invalid_argument("precision must be 0..17");
}

inline nlohmann::ordered_json to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["prices"] = cfg.prices;
    j["manifest"] = cfg.manifest;
    j["out"] = cfg.out;
    j["bins"] = cfg.scheme.alphabet_size();
    if (cfg.scheme.kind == SymbolScheme::Kind::quantile) {
        j["quantiles"] = cfg.scheme.edges;
    } else {
        j["thresholds"] = cfg.scheme.edges;
    }
    j["k"] = cfg.embed.k;
    j["l"] = cfg.embed.l;
    j["shuffles"] = cfg.inference.shuffles;
    j["boot"] = cfg.inference.bootstraps;
    j["seed"] = cfg.inference.seed;
    j["levels"] = cfg.inference.levels;
    j["scope"] = cfg.scope;
    j["cutoff"] = cfg.cutoff;
    j["precision"] = cfg.precision;
    j["focal"] = cfg.focal;
    return j;
}

inline ConfigLayer layer_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    static const std::vector<std::string> known{"prices", "manifest", "out", "bins", "quantiles",
                                                "thresholds", "k", "l", "shuffles", "boot", "seed",
                                                "levels", "scope", "cutoff", "precision", "focal",
                                                "threads"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    ConfigLayer layer;
    auto get = [&](const char* key, auto& slot) {
        if (auto it = j.find(key); it != j.end()) {
            slot = it->get<typename std::remove_reference_t<decltype(slot)>::value_type>();
        }
    };
    try {
        get("prices", layer.prices);
        get("manifest", layer.manifest);
        get("out", layer.out);
        get("scope", layer.scope);
        get("bins", layer.bins);
        get("quantiles", layer.quantiles);
        get("thresholds", layer.thresholds);
        get("levels", layer.levels);
        get("k", layer.k);
        get("l", layer.l);
        get("shuffles", layer.shuffles);
        get("boot", layer.boot);
        get("threads", layer.threads);
        get("seed", layer.seed);
        get("cutoff", layer.cutoff);
        get("precision", layer.precision);
        get("focal", layer.focal);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return layer;
}

inline ConfigLayer load_config_layer(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("config " + path + ": " + e.what());
    }
    return layer_from_json(j);
}

}  // namespace teflow
