#include "teflow/ingest.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace teflow;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

Manifest two_tickers() {
    return {{"AAA", "Fund A", "USD", Market::US}, {"BBB", "Fund B", "EUR", Market::Europe}};
}

PriceSeries prices(std::initializer_list<double> closes) {
    PriceSeries p{{"T", "", "", Market::US}, {}};
    Date d{2022, 1, 3};
    for (double c : closes) {
        p.observations.push_back({d, c});
        d = Date{d.days() + std::chrono::days{1}};
    }
    return p;
}

ReturnSeries returns_on(std::initializer_list<int> days, double base = 0.0) {
    ReturnSeries r{{"R", "", "", Market::US}, {}};
    for (int d : days) r.observations.push_back({Date{2022, 3, static_cast<unsigned>(d)}, base + d});
    return r;
}

}  // namespace

TEST_CASE("manifest parsing", "[ingest]") {
    std::istringstream in("ticker,name,currency,market\n"
                          "XGBU.SW,Xtrackers USD Corporate Green Bond UCITS ETF,USD,US\n"
                          "HGGB,\"Horizons S&P GreenBond Index ETF, CAD\",CAD,Canada\n");
    auto m = parse_manifest(in);
    REQUIRE(m.size() == 2);
    CHECK(m[0].market == Market::US);  // from the market column, not the Swiss listing
    CHECK(m[1].name == "Horizons S&P GreenBond Index ETF, CAD");
    CHECK(m[1].market == Market::Canada);

    std::istringstream dup("ticker,name,currency,market\nA,a,USD,US\nA,b,USD,US\n");
    CHECK_THROWS_WITH(parse_manifest(dup), ContainsSubstring("duplicate ticker A"));

    std::istringstream bad_market("ticker,name,currency,market\nA,a,USD,Mars\n");
    CHECK_THROWS_AS(parse_manifest(bad_market), InputError);

    std::istringstream empty_ticker("ticker,name,currency,market\n,a,USD,US\n");
    CHECK_THROWS_AS(parse_manifest(empty_ticker), InputError);
}

TEST_CASE("load_prices long format", "[ingest]") {
    std::string csv = "ticker,date,close\n";
    for (int d = 1; d <= 5; ++d) {
        csv += "AAA,2022-01-0" + std::to_string(d) + "," + std::to_string(100 + d) + "\n";
        csv += "BBB,2022-01-0" + std::to_string(d) + "," + std::to_string(50 + d) + ".5\n";
    }
    std::istringstream in(csv);
    auto load = parse_prices(in, two_tickers());
    REQUIRE(load.series.size() == 2);
    CHECK(load.series[0].size() == 5);
    CHECK(load.series[1].size() == 5);
    CHECK(load.series[1].observations[0].close == 51.5);
    CHECK(load.row_errors.empty());
}

TEST_CASE("load_prices rejects bad rows but keeps the rest", "[ingest]") {
    std::istringstream in("ticker,date,close\n"
                          "AAA,2022-01-03,10\n"
                          "AAA,2022-01-04,0\n"
                          "AAA,2022-01-05,11\n"
                          "AAA,2022-02-30,12\n"
                          "AAA,2022-01-07,abc\n"
                          "BBB,2022-01-03,-1\n"
                          "BBB,2022-01-04,5\n");
    auto load = parse_prices(in, two_tickers());
    CHECK(load.series[0].size() == 2);
    CHECK(load.series[1].size() == 1);
    REQUIRE(load.row_errors.size() == 4);
    CHECK(load.row_errors[0].line == 3);
    CHECK(load.row_errors[0].ticker == "AAA");
    CHECK(load.row_errors[0].reason == "non-positive close");
    CHECK(load.row_errors[1].reason == "unparseable date");
    CHECK(load.row_errors[2].reason == "unparseable close");
    CHECK(load.row_errors[3].ticker == "BBB");
}

TEST_CASE("load_prices errors", "[ingest]") {
    Manifest m{{"FLMB", "Franklin", "USD", Market::US}};
    std::istringstream missing("ticker,date,close\nBGRN,2022-01-03,10\n");
    CHECK_THROWS_WITH(parse_prices(missing, m), ContainsSubstring("FLMB"));

    std::istringstream dup("ticker,date,close\nFLMB,2022-01-03,10\nFLMB,2022-01-03,11\n");
    CHECK_THROWS_AS(parse_prices(dup, m), InputError);

    CHECK_THROWS_AS(load_prices("/nonexistent/prices.csv", m), InputError);

    std::istringstream bad_header("foo,bar\n1,2\n");
    CHECK_THROWS_AS(parse_prices(bad_header, m), InputError);
}

TEST_CASE("load_prices wide format with gaps, unsorted dates", "[ingest]") {
    std::istringstream in("date,BBB,ZZZ,AAA\n"
                          "2022-01-04,2.0,9,\n"
                          "2022-01-03,1.0,9,3.0\n"
                          "2022-01-05,,9,3.5\n");
    auto load = parse_prices(in, two_tickers());
    REQUIRE(load.series[0].meta.ticker == "AAA");
    CHECK(load.series[0].size() == 2);
    CHECK(load.series[1].size() == 2);
    CHECK(load.series[1].observations[0].date == Date{2022, 1, 3});
    CHECK(load.row_errors.empty());
}

TEST_CASE("log_returns", "[ingest]") {
    auto r0 = log_returns(prices({100, 100}));
    REQUIRE(r0.size() == 1);
    CHECK(r0.observations[0].value == 0.0);

    auto r1 = log_returns(prices({100, 100 * std::exp(1.0)}));
    CHECK_THAT(r1.observations[0].value, WithinAbs(1.0, 1e-12));

    // Hand-calculator values of ln(0.99) and ln(101/99).
    auto r2 = log_returns(prices({100, 99, 101}));
    REQUIRE(r2.size() == 2);
    CHECK_THAT(r2.observations[0].value, WithinAbs(-0.01005033585350145, 1e-12));
    CHECK_THAT(r2.observations[1].value, WithinAbs(0.020000666706669435, 1e-12));
    CHECK(r2.observations[0].date == Date{2022, 1, 4});

    CHECK_THROWS_AS(log_returns(prices({100})), InputError);
}

TEST_CASE("log_returns is invariant to price scale", "[ingest][property]") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> price(1.0, 500.0), scale(1e-3, 1e3);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = prices({});
        Date d{2021, 1, 1};
        for (int i = 0; i < 20; ++i) {
            p.observations.push_back({d, price(gen)});
            d = Date{d.days() + std::chrono::days{1}};
        }
        auto q = p;
        const double c = scale(gen);
        for (auto& o : q.observations) o.close *= c;
        auto a = log_returns(p), b = log_returns(q);
        for (std::size_t i = 0; i < a.size(); ++i) {
            REQUIRE_THAT(a.observations[i].value, WithinAbs(b.observations[i].value, 1e-12));
        }
    }
}

TEST_CASE("align_pair", "[ingest]") {
    SECTION("identical dates") {
        auto a = returns_on({1, 2, 3}), b = returns_on({1, 2, 3}, 10);
        auto [x, y] = align_pair(a, b);
        CHECK(x.size() == 3);
        CHECK(y.observations[2].value == 13.0);
    }
    SECTION("intersection") {
        auto [x, y] = align_pair(returns_on({1, 2, 3}), returns_on({2, 3, 4}));
        REQUIRE(x.size() == 2);
        CHECK(x.observations[0].date == Date{2022, 3, 2});
        CHECK(y.observations[1].date == Date{2022, 3, 3});
    }
    SECTION("disjoint") {
        CHECK_THROWS_AS(align_pair(returns_on({1, 2}), returns_on({3, 4})), InputError);
    }
    SECTION("idempotent") {
        auto [x, y] = align_pair(returns_on({1, 3, 5, 6, 9}), returns_on({2, 3, 5, 9, 10}));
        auto [x2, y2] = align_pair(x, y);
        REQUIRE(x2.size() == x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x2.observations[i].date == x.observations[i].date);
            CHECK(y2.observations[i].value == y.observations[i].value);
        }
    }
}

TEST_CASE("describe", "[ingest]") {
    SECTION("reference sample (scipy: skew bias=False, kurtosis fisher=False)") {
        std::vector<double> x{1, 2, 3, 4, 10};
        auto s = describe(x);
        CHECK_THAT(s.mean, WithinAbs(4.0, 1e-12));
        CHECK_THAT(s.std_dev, WithinAbs(3.5355339059327378, 1e-12));
        CHECK_THAT(*s.skewness, WithinAbs(1.6970562748477143, 1e-12));
        CHECK_THAT(*s.kurtosis, WithinAbs(2.788, 1e-12));
        CHECK(s.n == 5);
    }
    SECTION("constant series") {
        std::vector<double> x(10, 0.001);
        auto s = describe(x);
        CHECK(s.mean == 0.001);
        CHECK(s.std_dev == 0.0);
        CHECK_FALSE(s.skewness.has_value());
        CHECK_FALSE(s.kurtosis.has_value());
    }
    SECTION("alternating +-1") {
        std::vector<double> x{1, -1, 1, -1, 1, -1};
        auto s = describe(x);
        CHECK_THAT(s.mean, WithinAbs(0.0, 1e-15));
        CHECK_THAT(*s.skewness, WithinAbs(0.0, 1e-15));
    }
    SECTION("too short") {
        std::vector<double> x{1, 2, 3};
        CHECK_THROWS_AS(describe(x), InputError);
    }
    SECTION("large normal sample has raw kurtosis near 3") {
        std::mt19937_64 gen(11);
        std::normal_distribution<double> nd;
        std::vector<double> x(200000);
        for (auto& v : x) v = nd(gen);
        auto s = describe(x);
        CHECK_THAT(*s.kurtosis, WithinAbs(3.0, 0.05));
        CHECK_THAT(*s.skewness, WithinAbs(0.0, 0.02));
        CHECK_THAT(s.std_dev, WithinAbs(1.0, 0.01));
    }
}

TEST_CASE("describe is shift invariant apart from the mean", "[ingest][property]") {
    std::mt19937_64 gen(3);
    std::student_t_distribution<double> t(4.0);
    std::uniform_real_distribution<double> shift(-0.01, 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(50);
        for (auto& v : x) v = 0.004 * t(gen);
        const double c = shift(gen);
        auto y = x;
        for (auto& v : y) v += c;
        auto a = describe(x), b = describe(y);
        REQUIRE_THAT(b.mean, WithinAbs(a.mean + c, 1e-10));
        REQUIRE_THAT(b.std_dev, WithinAbs(a.std_dev, 1e-10));
        REQUIRE_THAT(*b.skewness, WithinAbs(*a.skewness, 1e-10));
        REQUIRE_THAT(*b.kurtosis, WithinAbs(*a.kurtosis, 1e-10));
    }
}

TEST_CASE("accepted price files always satisfy series invariants", "[ingest][property]") {
    std::mt19937_64 gen(99);
    std::uniform_int_distribution<int> day(1, 28), month(1, 12), kind(0, 9);
    std::uniform_real_distribution<double> close(-5.0, 200.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::string csv = "ticker,date,close\n";
        std::set<std::pair<std::string, int>> used;
        for (int row = 0; row < 40; ++row) {
            const std::string t = (row % 2) ? "AAA" : "BBB";
            const int m = month(gen), d = day(gen);
            if (!used.emplace(t, m * 100 + d).second) continue;  // duplicates would throw
            char date[16];
            std::snprintf(date, sizeof date, "2022-%02d-%02d", m, d);
            std::string date_text = kind(gen) == 0 ? "2022-13-01x" : date;
            std::string close_text = kind(gen) == 0 ? "n/a" : std::to_string(close(gen));
            csv += t + "," + date_text + "," + close_text + "\n";
        }
        std::istringstream in(csv);
        auto load = parse_prices(in, two_tickers());
        for (const auto& s : load.series) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                REQUIRE(s.observations[i].close > 0.0);
                if (i > 0) REQUIRE(s.observations[i - 1].date < s.observations[i].date);
            }
        }
    }
}
