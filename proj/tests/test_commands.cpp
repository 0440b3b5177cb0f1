#include "teflow/commands.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace teflow;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string data_dir = TEFLOW_DATA_DIR;

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("teflow_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

RunConfig fixture_config() {
    RunConfig cfg;
    cfg.prices = data_dir + "/prices_synthetic.csv";
    cfg.manifest = data_dir + "/manifest.csv";
    cfg.inference.shuffles = 5;
    cfg.inference.bootstraps = 20;
    return cfg;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string("\"") + TEFLOW_CLI + "\" " + args + " >\"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
    return WEXITSTATUS(status);
#else
    return status;
#endif
}

}  // namespace

TEST_CASE("stats on the fixture", "[commands]") {
    auto cfg = fixture_config();
    std::ostringstream out;
    run_stats(cfg, out);
    const auto text = out.str();
    CHECK(line_count(text) == 14);
    CHECK(text.rfind("ticker,mean,std_dev,kurtosis,skewness,n\n", 0) == 0);
    CHECK_THAT(text, ContainsSubstring("\nHGGB,"));
}

TEST_CASE("empty manifest gives a header-only table", "[commands]") {
    const auto dir = scratch("empty_manifest");
    std::ofstream(dir / "manifest.csv") << "ticker,name,currency,market\n";
    auto cfg = fixture_config();
    cfg.manifest = (dir / "manifest.csv").string();
    std::ostringstream out;
    run_stats(cfg, out);
    CHECK(out.str() == "ticker,mean,std_dev,kurtosis,skewness,n\n");
}

TEST_CASE("input errors", "[commands]") {
    auto cfg = fixture_config();
    cfg.prices = data_dir + "/does_not_exist.csv";
    std::ostringstream out;
    CHECK_THROWS_AS(run_stats(cfg, out), InputError);

    auto pair_cfg = fixture_config();
    CHECK_THROWS_AS(run_pair(pair_cfg, "HGGB", "ZZZZ", out), InputError);
    CHECK_THROWS_AS(run_pair(pair_cfg, "HGGB", "HGGB", out), InputError);
}

TEST_CASE("command-line exit codes", "[commands][cli]") {
    const auto dir = scratch("cli");
    const std::string common = "--prices \"" + data_dir + "/prices_synthetic.csv\" --manifest \"" + data_dir +
                               "/manifest.csv\"";
    CHECK(run_cli("stats " + common, dir / "ok.log") == 0);
    CHECK(line_count(slurp(dir / "ok.log")) == 14);

    CHECK(run_cli("stats --prices \"" + data_dir + "/nope.csv\" --manifest \"" + data_dir + "/manifest.csv\"",
                  dir / "missing.log") == 1);

    CHECK(run_cli("pair HGGB ZZZZ --shuffles 2 --boot 2 " + common, dir / "unknown.log") == 1);
    CHECK_THAT(slurp(dir / "unknown.log"), ContainsSubstring("ZZZZ"));

    CHECK(run_cli("flow " + common, dir / "no_out.log") != 0);
    CHECK(run_cli("stats --bogus " + common, dir / "bogus.log") != 0);
}

TEST_CASE("flow writes scoped outputs", "[commands]") {
    const auto dir = scratch("flow");
    auto cfg = fixture_config();
    std::ostringstream log;

    cfg.out = (dir / "us").string();
    cfg.scope = "US";
    const auto us = run_flow(cfg, log);
    CHECK(us.matrix.results.size() == 12);
    CHECK(line_count(slurp(dir / "us" / "matrix.csv")) == 13);
    for (const char* f : {"matrix.json", "skipped.csv", "net_flow.csv", "flow.dot", "flow.json",
                          "row_errors.csv", "config.json"}) {
        CHECK(fs::exists(dir / "us" / f));
    }

    cfg.out = (dir / "ce").string();
    cfg.scope = "Canada-Europe";
    CHECK(run_flow(cfg, log).matrix.results.size() == 16);
}

TEST_CASE("reruns and config replay are byte-identical", "[commands]") {
    const auto dir = scratch("replay");
    auto cfg = fixture_config();
    cfg.scope = "Canada-US";
    std::ostringstream log;

    cfg.out = (dir / "a").string();
    run_flow(cfg, log);
    cfg.out = (dir / "b").string();
    cfg.threads = 3;
    run_flow(cfg, log);

    RunConfig replay;
    apply(replay, load_config_layer((dir / "a" / "config.json").string()));
    replay.out = (dir / "c").string();
    run_flow(replay, log);

    for (const char* f : {"matrix.csv", "matrix.json", "net_flow.csv", "flow.dot", "flow.json"}) {
        INFO(f);
        const auto a = slurp(dir / "a" / f);
        CHECK(!a.empty());
        CHECK(a == slurp(dir / "b" / f));
        CHECK(a == slurp(dir / "c" / f));
    }
}

TEST_CASE("pair agrees with the flow cell", "[commands]") {
    const auto dir = scratch("pair");
    auto cfg = fixture_config();
    cfg.out = dir.string();
    cfg.scope = "Canada-US";
    std::ostringstream log;
    const auto run = run_flow(cfg, log);
    REQUIRE(run.matrix.results.size() == 8);

    std::size_t checked = 0;
    for (const auto& [key, cell] : run.matrix.results) {
        if (++checked > 5) break;
        std::ostringstream out;
        const auto r = run_pair(cfg, key.first, key.second, out);
        CHECK(r == cell);
        CHECK_THAT(out.str(), ContainsSubstring("TE(" + key.first + " -> " + key.second + ")"));
    }
}
