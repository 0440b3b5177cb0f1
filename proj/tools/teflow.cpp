// teflow: transfer entropy / effective transfer entropy between price series.
//
//   teflow stats --prices P --manifest M [--out DIR]
//   teflow flow  --prices P --manifest M --out DIR [--scope S] [...]
//   teflow pair  SOURCE DESTINATION --prices P --manifest M [...]
//
// Exit status: 0 success, 1 input error, 2 internal error.

#include "teflow/teflow.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

struct Flags {
    std::string prices, manifest, out, scope, quantiles, thresholds, levels, focal, config;
    std::size_t bins = 0, k = 0, l = 0, shuffles = 0, boot = 0, threads = 0;
    std::uint64_t seed = 0;
    double cutoff = 0.0;
    int precision = 0;
};

void add_common(CLI::App& cmd, Flags& f) {
    cmd.add_option("--prices", f.prices, "price CSV (long ticker,date,close or wide date,<tickers>)");
    cmd.add_option("--manifest", f.manifest, "instrument manifest CSV ticker,name,currency,market");
    cmd.add_option("--out", f.out, "output directory");
    cmd.add_option("--config", f.config, "JSON config file; flags override its keys");
    cmd.add_option("--bins", f.bins, "alphabet size (equal-mass quantile bins unless --quantiles/--thresholds)");
    cmd.add_option("--quantiles", f.quantiles, "comma-separated quantile levels, default 0.05,0.95");
    cmd.add_option("--thresholds", f.thresholds, "comma-separated fixed return thresholds")->excludes("--quantiles");
    cmd.add_option("--k", f.k, "destination history length, default 1");
    cmd.add_option("--l", f.l, "source history length, default 1");
    cmd.add_option("--shuffles", f.shuffles, "shuffled surrogates per ETE, default 100");
    cmd.add_option("--boot", f.boot, "bootstrap replicates, default 300");
    cmd.add_option("--seed", f.seed, "master random seed");
    cmd.add_option("--levels", f.levels, "significance levels, default 0.1,0.05,0.01,0.001");
    cmd.add_option("--scope", f.scope, "all | within | cross | US | Canada | Europe | <A>-<B>");
    cmd.add_option("--cutoff", f.cutoff, "p-value cutoff for graph edges, default 0.05");
    cmd.add_option("--precision", f.precision, "decimals in CSV/DOT output, default 4");
    cmd.add_option("--focal", f.focal, "comma-separated focal tickers for net-flow differences");
    cmd.add_option("--threads", f.threads, "worker threads (0 = all cores); never changes results");
}

teflow::RunConfig resolve(const CLI::App& cmd, const Flags& f) {
    teflow::RunConfig cfg;
    if (!f.config.empty()) teflow::apply(cfg, teflow::load_config_layer(f.config));

    teflow::ConfigLayer layer;
    auto set = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
    if (set("--prices")) layer.prices = f.prices;
    if (set("--manifest")) layer.manifest = f.manifest;
    if (set("--out")) layer.out = f.out;
    if (set("--scope")) layer.scope = f.scope;
    if (set("--bins")) layer.bins = f.bins;
    if (set("--quantiles")) layer.quantiles = teflow::parse_number_list(f.quantiles);
    if (set("--thresholds")) layer.thresholds = teflow::parse_number_list(f.thresholds);
    if (set("--levels")) layer.levels = teflow::parse_number_list(f.levels);
    if (set("--k")) layer.k = f.k;
    if (set("--l")) layer.l = f.l;
    if (set("--shuffles")) layer.shuffles = f.shuffles;
    if (set("--boot")) layer.boot = f.boot;
    if (set("--threads")) layer.threads = f.threads;
    if (set("--seed")) layer.seed = f.seed;
    if (set("--cutoff")) layer.cutoff = f.cutoff;
    if (set("--precision")) layer.precision = f.precision;
    if (set("--focal")) layer.focal = teflow::parse_word_list(f.focal);
    teflow::apply(cfg, layer);
    teflow::validate(cfg);
    if (cfg.prices.empty() || cfg.manifest.empty()) {
        throw std::invalid_argument("--prices and --manifest are required");
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer entropy and effective transfer entropy between price series"};
    app.require_subcommand(1);

    Flags f;
    std::string source, destination;
    auto* stats = app.add_subcommand("stats", "descriptive statistics of log returns");
    auto* flow = app.add_subcommand("flow", "all directed pairs: matrix, net flows, graph");
    auto* pair = app.add_subcommand("pair", "one directed result SOURCE -> DESTINATION");
    for (auto* cmd : {stats, flow, pair}) add_common(*cmd, f);
    pair->add_option("source", source, "source ticker")->required();
    pair->add_option("destination", destination, "destination ticker")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (stats->parsed()) {
            teflow::run_stats(resolve(*stats, f), std::cout);
        } else if (flow->parsed()) {
            auto cfg = resolve(*flow, f);
            if (cfg.out.empty()) throw std::invalid_argument("flow needs --out");
            teflow::run_flow(cfg, std::cout);
        } else if (pair->parsed()) {
            teflow::run_pair(resolve(*pair, f), source, destination, std::cout);
        }
    } catch (const teflow::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
