#pragma once

// Price ingestion, calendar alignment, log returns and descriptive statistics.

#include "teflow/csv.hpp"
#include "teflow/date.hpp"
#include "teflow/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teflow {

enum class Market { US, Canada, Europe };

inline std::string_view to_string(Market m) {
    switch (m) {
        case Market::US: return "US";
        case Market::Canada: return "Canada";
        case Market::Europe: return "Europe";
    }
    return "?";
}

inline std::optional<Market> parse_market(std::string_view text) {
    std::string lower;
    for (char c : csv::trim(text)) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "us" || lower == "usa") return Market::US;
    if (lower == "canada" || lower == "ca") return Market::Canada;
    if (lower == "europe" || lower == "eu") return Market::Europe;
    return std::nullopt;
}

struct InstrumentMeta {
    std::string ticker;
    std::string name;
    std::string currency;
    Market market = Market::US;

    friend bool operator==(const InstrumentMeta&, const InstrumentMeta&) = default;
};

using Manifest = std::vector<InstrumentMeta>;

struct PriceObservation {
    Date date;
    double close = 0.0;
};

/// Dated closes for one instrument. Dates strictly increasing, closes > 0.
struct PriceSeries {
    InstrumentMeta meta;
    std::vector<PriceObservation> observations;

    [[nodiscard]] std::size_t size() const { return observations.size(); }
};

struct ReturnObservation {
    Date date;
    double value = 0.0;
};

struct ReturnSeries {
    InstrumentMeta meta;
    std::vector<ReturnObservation> observations;

    [[nodiscard]] std::size_t size() const { return observations.size(); }

    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(observations.size());
        for (const auto& o : observations) out.push_back(o.value);
        return out;
    }
};

/// A rejected input row. `line` is 1-based and counts the header.
struct RowError {
    std::size_t line = 0;
    std::string ticker;
    std::string reason;
};

struct PriceLoad {
    std::vector<PriceSeries> series;  // manifest order
    std::vector<RowError> row_errors;
};

namespace detail {

inline std::optional<double> parse_double(std::string_view text) {
    text = csv::trim(text);
    if (text.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

}  // namespace detail

/// Reads `ticker,name,currency,market`. Tickers must be non-empty and unique;
/// the market column is mandatory and never inferred from the currency.
inline Manifest parse_manifest(std::istream& in) {
    Manifest out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (csv::trim(line).empty() || line.front() == '#') continue;
        auto f = csv::split(line);
        if (header) {
            header = false;
            if (f.size() < 4 || csv::trim(f[0]) != "ticker") {
                throw InputError("manifest: expected header ticker,name,currency,market");
            }
            continue;
        }
        if (f.size() != 4) {
            throw InputError("manifest line " + std::to_string(lineno) + ": expected 4 fields");
        }
        InstrumentMeta meta;
        meta.ticker = std::string(csv::trim(f[0]));
        meta.name = std::string(csv::trim(f[1]));
        meta.currency = std::string(csv::trim(f[2]));
        auto market = parse_market(f[3]);
        if (meta.ticker.empty()) {
            throw InputError("manifest line " + std::to_string(lineno) + ": empty ticker");
        }
        if (!market) {
            throw InputError("manifest line " + std::to_string(lineno) + ": unknown market '" +
                             f[3] + "'");
        }
        if (!seen.insert(meta.ticker).second) {
            throw InputError("manifest: duplicate ticker " + meta.ticker);
        }
        meta.market = *market;
        out.push_back(std::move(meta));
    }
    return out;
}

inline Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest file: " + path);
    return parse_manifest(in);
}

/// Parses long (`ticker,date,close`) or wide (`date,<t1>,<t2>,...`) price CSV.
/// Bad dates and non-positive or unparseable closes are skipped and reported;
/// duplicate (ticker, date) rows and manifest tickers missing from the file throw.
inline PriceLoad parse_prices(std::istream& in, const Manifest& manifest) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < manifest.size(); ++i) index.emplace(manifest[i].ticker, i);

    std::vector<std::vector<PriceObservation>> obs(manifest.size());
    std::vector<std::set<Date>> dates(manifest.size());
    std::vector<bool> present(manifest.size(), false);
    PriceLoad load;

    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    bool wide = false;

    auto accept = [&](std::size_t lineno, std::size_t slot, std::string_view date_text,
                      std::string_view close_text) {
        const std::string& ticker = manifest[slot].ticker;
        auto date = Date::parse(csv::trim(date_text));
        if (!date) {
            load.row_errors.push_back({lineno, ticker, "unparseable date"});
            return;
        }
        auto close = detail::parse_double(close_text);
        if (!close) {
            load.row_errors.push_back({lineno, ticker, "unparseable close"});
            return;
        }
        if (*close <= 0.0) {
            load.row_errors.push_back({lineno, ticker, "non-positive close"});
            return;
        }
        if (!dates[slot].insert(*date).second) {
            throw InputError("duplicate row for " + ticker + " on " + date->iso() + " (line " +
                             std::to_string(lineno) + ")");
        }
        obs[slot].push_back({*date, *close});
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (csv::trim(line).empty()) continue;
        auto f = csv::split(line);
        if (header.empty()) {
            for (auto& h : f) header.emplace_back(csv::trim(h));
            if (header.size() >= 3 && header[0] == "ticker" && header[1] == "date" &&
                header[2] == "close") {
                wide = false;
            } else if (!header.empty() && header[0] == "date") {
                wide = true;
                for (std::size_t c = 1; c < header.size(); ++c) {
                    if (auto it = index.find(header[c]); it != index.end()) present[it->second] = true;
                }
            } else {
                throw InputError("price file: header must be ticker,date,close or date,<tickers...>");
            }
            continue;
        }
        if (wide) {
            for (std::size_t c = 1; c < header.size(); ++c) {
                auto it = index.find(header[c]);
                if (it == index.end()) continue;
                if (c >= f.size() || csv::trim(f[c]).empty()) continue;  // missing cell
                accept(lineno, it->second, f[0], f[c]);
            }
        } else {
            if (f.size() < 3) {
                load.row_errors.push_back({lineno, f.empty() ? "" : std::string(csv::trim(f[0])),
                                           "too few fields"});
                continue;
            }
            auto it = index.find(std::string(csv::trim(f[0])));
            if (it == index.end()) continue;
            present[it->second] = true;
            accept(lineno, it->second, f[1], f[2]);
        }
    }
    if (header.empty()) throw InputError("price file is empty");

    for (std::size_t i = 0; i < manifest.size(); ++i) {
        if (!present[i]) throw InputError("ticker " + manifest[i].ticker + " not found in price file");
        std::sort(obs[i].begin(), obs[i].end(),
                  [](const auto& a, const auto& b) { return a.date < b.date; });
        load.series.push_back({manifest[i], std::move(obs[i])});
    }
    return load;
}

inline PriceLoad load_prices(const std::string& path, const Manifest& manifest) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open price file: " + path);
    return parse_prices(in, manifest);
}

/// R_t = ln z_t - ln z_{t-1}, dated at t.
inline ReturnSeries log_returns(const PriceSeries& prices) {
    if (prices.size() < 2) {
        throw InputError("log_returns: " + prices.meta.ticker + " has fewer than 2 prices");
    }
    ReturnSeries out{prices.meta, {}};
    out.observations.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) {
        const auto& prev = prices.observations[i - 1];
        const auto& cur = prices.observations[i];
        out.observations.push_back({cur.date, std::log(cur.close) - std::log(prev.close)});
    }
    return out;
}

/// Restricts both series to their common dates (inner join, order preserved).
inline std::pair<ReturnSeries, ReturnSeries> align_pair(const ReturnSeries& a,
                                                        const ReturnSeries& b) {
    if (a.observations.empty() || b.observations.empty()) {
        throw InputError("align_pair: empty series (" + a.meta.ticker + ", " + b.meta.ticker + ")");
    }
    ReturnSeries ra{a.meta, {}}, rb{b.meta, {}};
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const Date da = a.observations[i].date;
        const Date db = b.observations[j].date;
        if (da < db) {
            ++i;
        } else if (db < da) {
            ++j;
        } else {
            ra.observations.push_back(a.observations[i++]);
            rb.observations.push_back(b.observations[j++]);
        }
    }
    if (ra.observations.empty()) {
        throw InputError("align_pair: no common dates between " + a.meta.ticker + " and " +
                         b.meta.ticker);
    }
    return {std::move(ra), std::move(rb)};
}

struct DescriptiveStats {
    double mean = 0.0;
    double std_dev = 0.0;                 // n-1 denominator
    std::optional<double> kurtosis;       // raw m4/m2^2; empty for zero variance
    std::optional<double> skewness;       // adjusted Fisher-Pearson G1
    std::size_t n = 0;
};

inline DescriptiveStats describe(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) throw InputError("describe: need at least 4 observations, got " + std::to_string(n));

    // Shift by the first element so a constant series gives exact zeros.
    const double shift = x[0];
    double s = 0.0;
    for (double v : x) s += v - shift;
    const double mean_dev = s / static_cast<double>(n);

    DescriptiveStats st;
    st.n = n;
    st.mean = shift + mean_dev;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = (v - shift) - mean_dev;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double nd = static_cast<double>(n);
    st.std_dev = std::sqrt(m2 / (nd - 1.0));
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    if (m2 > 0.0) {
        const double g1 = m3 / std::pow(m2, 1.5);
        st.skewness = std::sqrt(nd * (nd - 1.0)) / (nd - 2.0) * g1;
        st.kurtosis = m4 / (m2 * m2);
    }
    return st;
}

inline DescriptiveStats describe(const ReturnSeries& returns) {
    const auto v = returns.values();
    return describe(std::span<const double>(v));
}

}  // namespace teflow
