// misbeep: run beeping-model MIS experiments and verify MIS outputs.

#include "misbeep/experiment.hpp"
#include "misbeep/graph_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace misbeep;

namespace {

struct ConfigFlags
{
    std::string config_path;
    std::string algorithm;
    std::string graph;
    std::uint64_t n_upper = 0;
    std::string big_n;
    std::string mode;
    std::string wakeup;
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
    Round round_cap = 0;
    std::uint32_t m = kDefaultStepFactor;
    std::uint32_t c = kDefaultWindowFactor;
    std::size_t threads = 0;
    std::string output;
    bool json = false;
    bool no_timestamp = false;

    CLI::Option* o_algorithm = nullptr;
    CLI::Option* o_graph = nullptr;
    CLI::Option* o_n_upper = nullptr;
    CLI::Option* o_big_n = nullptr;
    CLI::Option* o_mode = nullptr;
    CLI::Option* o_wakeup = nullptr;
    CLI::Option* o_trials = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_round_cap = nullptr;
    CLI::Option* o_m = nullptr;
    CLI::Option* o_c = nullptr;
};

void add_config_flags(CLI::App* app, ConfigFlags& f, const std::string& graph_flag)
{
    app->add_option("--config", f.config_path, "JSON config file; flags override its values");
    f.o_algorithm = app->add_option("--algorithm", f.algorithm, "algo1 | algo1-nocd | algo2");
    f.o_graph = app->add_option(graph_flag, f.graph, "clique:<n> | ring:<n> | gnp:<n>:<p> | bipartite:<n> | file:<path>");
    f.o_n_upper = app->add_option("--n-upper", f.n_upper, "size upper bound given to the nodes");
    f.o_big_n = app->add_option("--big-n", f.big_n, "Algorithm 2 bound N (integer or 2^k)");
    f.o_mode = app->add_option("--mode", f.mode, "cd | beep-only (must match the algorithm)");
    f.o_wakeup = app->add_option("--wakeup", f.wakeup, "sync | random:<fraction>:<max round> | <file>");
    f.o_trials = app->add_option("--trials", f.trials, "number of trials");
    f.o_seed = app->add_option("--seed", f.seed, "seed of the first trial");
    f.o_round_cap = app->add_option("--round-cap", f.round_cap, "override the default round cap");
    f.o_m = app->add_option("--m", f.m, "steps per phase factor M");
    f.o_c = app->add_option("--c", f.c, "contention window factor c (algo1-nocd)");
    app->add_option("--threads", f.threads, "worker threads (default: MISBEEP_THREADS or hardware)");
}

ExperimentConfig resolve_config(const ConfigFlags& f)
{
    ExperimentConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in)
            throw ConfigError("config", "cannot open '" + f.config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config", e.what());
        }
        auto get = [&](const char* key, auto& dst) {
            if (j.contains(key)) {
                try {
                    j.at(key).get_to(dst);
                } catch (const nlohmann::json::exception&) {
                    throw ConfigError(key, "wrong type in config file");
                }
            }
        };
        std::string s;
        if (j.contains("algorithm")) {
            get("algorithm", s);
            cfg.algorithm = parse_algorithm(s);
        }
        get("graph", cfg.graph);
        if (j.contains("n_upper")) {
            std::uint64_t v = 0;
            get("n_upper", v);
            cfg.n_upper = v;
        }
        if (j.contains("big_n")) {
            if (j["big_n"].is_string())
                cfg.big_n = j["big_n"].get<std::string>();
            else
                cfg.big_n = std::to_string(j["big_n"].get<std::uint64_t>());
        }
        if (j.contains("mode")) {
            get("mode", s);
            cfg.mode = parse_channel_mode(s);
        }
        get("wakeup", cfg.wakeup);
        get("trials", cfg.trials);
        get("seed", cfg.seed);
        if (j.contains("round_cap")) {
            Round v = 0;
            get("round_cap", v);
            cfg.round_cap = v;
        }
        get("m", cfg.m);
        get("c", cfg.c);
    }
    try {
        if (f.o_algorithm->count())
            cfg.algorithm = parse_algorithm(f.algorithm);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("algorithm", e.what());
    }
    if (f.o_graph->count())
        cfg.graph = f.graph;
    if (f.o_n_upper->count())
        cfg.n_upper = f.n_upper;
    if (f.o_big_n->count())
        cfg.big_n = f.big_n;
    try {
        if (f.o_mode->count())
            cfg.mode = parse_channel_mode(f.mode);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("mode", e.what());
    }
    if (f.o_wakeup->count())
        cfg.wakeup = f.wakeup;
    if (f.o_trials->count())
        cfg.trials = f.trials;
    if (f.o_seed->count())
        cfg.seed = f.seed;
    if (f.o_round_cap->count())
        cfg.round_cap = f.round_cap;
    if (f.o_m->count())
        cfg.m = f.m;
    if (f.o_c->count())
        cfg.c = f.c;
    return cfg;
}

std::vector<double> parse_list(const std::string& text, const char* field)
{
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size())
                throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError(field, "bad list entry '" + tok + "'");
        }
    }
    if (out.empty())
        throw ConfigError(field, "empty list");
    return out;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    fn(out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Beeping-model MIS simulator"};
    app.require_subcommand(1);

    ConfigFlags run_flags;
    auto* run = app.add_subcommand("run", "run seeded trials and emit one row per trial");
    add_config_flags(run, run_flags, "--graph");
    run->add_option("--output,-o", run_flags.output, "output file (default stdout)");
    run->add_flag("--json", run_flags.json, "emit JSON lines instead of CSV");
    run->add_flag("--no-timestamp", run_flags.no_timestamp, "omit the timestamp header line");

    ConfigFlags sweep_flags;
    std::string sweep_ns;
    std::string sweep_records;
    auto* sw = app.add_subcommand("sweep", "run a template over several n and fit the round complexity");
    add_config_flags(sw, sweep_flags, "--graph-template");
    sw->add_option("--n", sweep_ns, "comma separated n values")->required();
    sw->add_option("--output,-o", sweep_flags.output, "summary output file (default stdout)");
    sw->add_option("--records", sweep_records, "also write per-trial CSV rows here");
    sw->add_flag("--no-timestamp", sweep_flags.no_timestamp, "omit the timestamp header line in --records");

    std::string lb_logn = "12,20,40";
    double lb_grid = 1e-4;
    std::string lb_pvalues;
    std::uint32_t lb_trials = 100;
    std::uint64_t lb_seed = 0;
    double lb_max_empirical = 16;
    std::size_t lb_threads = 0;
    std::string lb_output;
    auto* lb = app.add_subcommand("lowerbound", "failure-product certificates and hard-family experiment");
    lb->add_option("--logn", lb_logn, "comma separated log2(n) values");
    lb->add_option("--grid", lb_grid, "probability grid resolution");
    lb->add_option("--p-values", lb_pvalues, "explicit comma separated probability grid");
    lb->add_option("--trials", lb_trials, "seeds for the hard-family experiment");
    lb->add_option("--seed", lb_seed, "first seed");
    lb->add_option("--max-empirical-logn", lb_max_empirical, "largest log2(n) simulated on the hard family");
    lb->add_option("--threads", lb_threads, "worker threads");
    lb->add_option("--output,-o", lb_output, "output file (default stdout)");

    std::string vf_graph, vf_status;
    auto* vf = app.add_subcommand("verify", "check an MIS status file against an edge list");
    vf->add_option("--graph", vf_graph, "edge list file")->required();
    vf->add_option("--status", vf_status, "status file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = resolve_config(run_flags);
            const auto rows = run_experiment(cfg, run_flags.threads);
            with_output(run_flags.output, [&](std::ostream& os) {
                if (run_flags.json)
                    write_json(os, rows);
                else
                    write_csv(os, rows, !run_flags.no_timestamp);
            });
            return 0;
        }
        if (sw->parsed()) {
            const auto cfg = resolve_config(sweep_flags);
            std::vector<std::size_t> ns;
            for (double v : parse_list(sweep_ns, "n"))
                ns.push_back(static_cast<std::size_t>(v));
            const auto summary = sweep(cfg, ns, sweep_flags.threads);
            with_output(sweep_flags.output, [&](std::ostream& os) { write_sweep(os, summary); });
            if (!sweep_records.empty())
                with_output(sweep_records,
                            [&](std::ostream& os) { write_csv(os, summary.records, !sweep_flags.no_timestamp); });
            return 0;
        }
        if (lb->parsed()) {
            LowerBoundOptions opt;
            opt.log_ns = parse_list(lb_logn, "logn");
            opt.resolution = lb_grid;
            if (!lb_pvalues.empty())
                opt.explicit_grid = parse_list(lb_pvalues, "p-values");
            opt.trials = lb_trials;
            opt.seed = lb_seed;
            opt.max_empirical_log_n = lb_max_empirical;
            const auto entries = lowerbound_report(opt, lb_threads);
            with_output(lb_output, [&](std::ostream& os) { write_lowerbound(os, entries); });
            return 0;
        }
        if (vf->parsed()) {
            const auto result = verify_files(vf_graph, vf_status);
            std::cout << render_verification(result);
            return result.valid() ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
