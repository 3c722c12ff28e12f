#include "misbeep/experiment.hpp"

#include "misbeep/graph_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace misbeep {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

std::size_t parse_size(const std::string& field, const std::string& text)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
    }
    if (pos != text.size() || text.front() == '-')
        throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

double parse_double(const std::string& field, const std::string& text)
{
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError(field, "expected a number, got '" + text + "'");
    }
    if (pos != text.size())
        throw ConfigError(field, "expected a number, got '" + text + "'");
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

WakeupSchedule parse_wakeup(const std::string& text, std::size_t node_count, std::uint64_t seed)
{
    if (text == "sync")
        return WakeAllAtZero{};
    if (text.rfind("random:", 0) == 0) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw ConfigError("wakeup", "expected random:<fraction>:<max round>");
        WakeRandomSubset w;
        w.fraction = parse_double("wakeup", parts[1]);
        w.max_round = parse_size("wakeup", parts[2]);
        w.seed = mix64(seed ^ 0xa54ff53a5f1d36f1ULL);
        if (!(w.fraction > 0.0 && w.fraction <= 1.0))
            throw ConfigError("wakeup", "fraction must lie in (0, 1]");
        return w;
    }
    const std::string path = text.rfind("file:", 0) == 0 ? text.substr(5) : text;
    std::ifstream in(path);
    if (!in)
        throw ConfigError("wakeup", "expected sync, random:<f>:<r> or a readable file, got '" + text + "'");
    WakeExplicit w;
    w.rounds.resize(node_count);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
            continue;
        std::istringstream ls(line);
        long long v = -1, r = -1;
        if (!(ls >> v >> r) || v < 0 || r < 0 || static_cast<std::size_t>(v) >= node_count)
            throw ParseError(lineno, "expected '<node> <round>' in wake-up file " + path);
        w.rounds[static_cast<std::size_t>(v)] = static_cast<Round>(r);
    }
    return w;
}

} // namespace

GraphSpec parse_graph_spec(const std::string& text)
{
    GraphSpec spec;
    spec.text = text;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const auto parts = split(text, ':');

    if (kind == "file") {
        if (colon == std::string::npos || colon + 1 == text.size())
            throw ConfigError("graph", "expected file:<path>");
        spec.kind = GraphSpec::Kind::File;
        spec.path = text.substr(colon + 1);
        return spec;
    }
    if (kind == "clique" || kind == "ring" || kind == "bipartite") {
        if (parts.size() != 2)
            throw ConfigError("graph", "expected " + kind + ":<n>");
        spec.kind = kind == "clique" ? GraphSpec::Kind::Clique
                    : kind == "ring" ? GraphSpec::Kind::Ring
                                     : GraphSpec::Kind::Bipartite;
        spec.n = parse_size("graph", parts[1]);
        const std::size_t min_n = kind == "clique" ? 1 : kind == "ring" ? 3 : 16;
        if (spec.n < min_n)
            throw ConfigError("graph", kind + " needs n >= " + std::to_string(min_n));
        return spec;
    }
    if (kind == "gnp") {
        if (parts.size() != 3)
            throw ConfigError("graph", "expected gnp:<n>:<p>");
        spec.kind = GraphSpec::Kind::Gnp;
        spec.n = parse_size("graph", parts[1]);
        if (spec.n < 1)
            throw ConfigError("graph", "gnp needs n >= 1");
        const std::string& ptext = parts[2];
        if (auto over = ptext.find("overN"); over != std::string::npos && over + 5 == ptext.size())
            spec.p = parse_double("graph", ptext.substr(0, over)) / static_cast<double>(spec.n);
        else
            spec.p = parse_double("graph", ptext);
        if (!(spec.p >= 0.0 && spec.p <= 1.0))
            throw ConfigError("graph", "gnp edge probability must lie in [0, 1]");
        return spec;
    }
    throw ConfigError("graph", "unknown graph kind '" + kind + "' (clique, ring, gnp, bipartite, file)");
}

Graph build_graph(const GraphSpec& spec, std::uint64_t seed)
{
    switch (spec.kind) {
    case GraphSpec::Kind::Clique: return gen_clique(spec.n);
    case GraphSpec::Kind::Ring: return gen_ring(spec.n);
    case GraphSpec::Kind::Gnp: return gen_gnp(spec.n, spec.p, mix64(seed ^ 0x510e527fade682d1ULL));
    case GraphSpec::Kind::Bipartite: return gen_bipartite_family(spec.n).graph;
    case GraphSpec::Kind::File: {
        std::ifstream in(spec.path);
        if (!in)
            throw ConfigError("graph", "cannot open edge list '" + spec.path + "'");
        return read_edge_list(in);
    }
    }
    throw ConfigError("graph", "unhandled graph kind");
}

BigBound parse_big_bound(const std::string& text)
{
    BigBound b;
    b.text = text;
    if (text.rfind("2^", 0) == 0) {
        const auto k = parse_size("big_n", text.substr(2));
        if (k < 1 || k > 4096)
            throw ConfigError("big_n", "exponent must lie in [1, 4096]");
        b.bits = static_cast<std::uint32_t>(k);
        return b;
    }
    const auto v = parse_size("big_n", text);
    if (v < 1)
        throw ConfigError("big_n", "must be positive");
    b.bits = ceil_log2(v);
    return b;
}

TrialSetup prepare_trial(const ExperimentConfig& cfg, std::uint64_t seed, std::shared_ptr<const Graph> shared)
{
    if (cfg.trials < 1)
        throw ConfigError("trials", "must be at least 1");
    if (cfg.m < 1)
        throw ConfigError("m", "must be at least 1");
    if (cfg.c < 1)
        throw ConfigError("c", "must be at least 1");
    if (cfg.round_cap && *cfg.round_cap < 1)
        throw ConfigError("round_cap", "must be at least 1");

    const auto spec = parse_graph_spec(cfg.graph);
    TrialSetup s;
    s.graph = shared && !spec.randomized() ? std::move(shared)
                                            : std::make_shared<const Graph>(build_graph(spec, seed));
    const std::size_t n = s.graph->node_count();
    if (n == 0)
        throw ConfigError("graph", "graph has no nodes");

    s.n_upper = cfg.n_upper.value_or(n);
    if (s.n_upper < n)
        throw ConfigError("n_upper", "upper bound " + std::to_string(s.n_upper) + " is below the node count " +
                                         std::to_string(n));

    const ChannelMode required = required_mode(cfg.algorithm);
    if (cfg.mode && *cfg.mode != required)
        throw ConfigError("mode", std::string(to_string(cfg.algorithm)) + " requires mode " +
                                      std::string(to_string(required)));
    s.mode = required;

    switch (cfg.algorithm) {
    case Algorithm::Algo1:
        if (cfg.big_n)
            throw ConfigError("big_n", "only meaningful for algo2");
        s.protocol = algo1_config(s.n_upper, cfg.m);
        break;
    case Algorithm::Algo1NoCd:
        if (cfg.big_n)
            throw ConfigError("big_n", "only meaningful for algo2");
        s.protocol = algo1_nocd_config(s.n_upper, cfg.m, cfg.c);
        break;
    case Algorithm::Algo2: {
        const auto big = parse_big_bound(cfg.big_n.value_or(std::to_string(s.n_upper)));
        if (big.bits < 64 && (std::uint64_t{1} << big.bits) < n)
            throw ConfigError("big_n", "bound " + big.text + " is below the node count " + std::to_string(n));
        s.protocol = algo2_config(big.bits);
        break;
    }
    }

    s.wakeup = parse_wakeup(cfg.wakeup, n, seed);
    s.round_cap = cfg.round_cap.value_or(default_round_cap(s.protocol, s.n_upper, n));
    return s;
}

void validate(const ExperimentConfig& cfg)
{
    (void)prepare_trial(cfg, cfg.seed);
}

RunRecord make_record(const ExperimentConfig& cfg, const TrialSetup& setup, const SimResult& sim,
                      std::uint64_t seed)
{
    RunRecord r;
    r.algorithm = std::string(to_string(cfg.algorithm));
    r.graph = cfg.graph;
    r.n = setup.graph->node_count();
    r.n_upper = setup.n_upper;
    if (cfg.algorithm == Algorithm::Algo2)
        r.big_n = cfg.big_n.value_or(std::to_string(setup.n_upper));
    r.mode = std::string(to_string(setup.mode));
    r.wakeup = cfg.wakeup;
    r.seed = seed;
    r.total_rounds = sim.total_rounds;
    r.max_active_time = sim.max_active_time;
    r.mis_size = sim.mis_size();
    r.algorithm_beeps = sim.algorithm_beeps();
    r.wakeup_beeps = sim.wakeup_beeps();
    r.beeps_per_mis_node =
        r.mis_size == 0 ? 0.0 : static_cast<double>(r.algorithm_beeps) / static_cast<double>(r.mis_size);
    r.failed_nodes = sim.failed_count();
    r.valid = sim.verification.valid() && r.failed_nodes == 0;
    r.cap_hit = sim.cap_hit;
    return r;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t seed, std::shared_ptr<const Graph> shared)
{
    const auto setup = prepare_trial(cfg, seed, std::move(shared));
    TrialOutcome out;
    out.sim = run_simulation(
        *setup.graph, [&](NodeId) { return MisNode(setup.protocol); }, setup.wakeup, setup.mode, seed,
        setup.round_cap);
    out.record = make_record(cfg, setup, out.sim, seed);
    return out;
}

std::size_t thread_count()
{
    if (const char* env = std::getenv("MISBEEP_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn)
{
    if (threads == 0)
        threads = thread_count();
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, std::size_t threads)
{
    // fail fast on bad configs, and build deterministic graphs once
    const auto first = prepare_trial(cfg, cfg.seed);
    std::vector<RunRecord> rows(cfg.trials);
    parallel_for(cfg.trials, threads, [&](std::size_t i) {
        rows[i] = run_trial(cfg, cfg.seed + i, first.graph).record;
    });
    return rows;
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{
        "algorithm",       "graph",           "n",           "n_upper",           "big_n",
        "mode",            "wakeup",          "seed",        "total_rounds",      "max_active_time",
        "mis_size",        "algorithm_beeps", "wakeup_beeps", "beeps_per_mis_node", "valid",
        "failed_nodes"};
    return cols;
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& rows, bool timestamp)
{
    if (timestamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        os << "# generated " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << '\n';
    }
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : rows)
        os << r.algorithm << ',' << r.graph << ',' << r.n << ',' << r.n_upper << ',' << r.big_n << ',' << r.mode
           << ',' << r.wakeup << ',' << r.seed << ',' << r.total_rounds << ',' << r.max_active_time << ','
           << r.mis_size << ',' << r.algorithm_beeps << ',' << r.wakeup_beeps << ','
           << format_double(r.beeps_per_mis_node) << ',' << (r.valid ? "true" : "false") << ','
           << r.failed_nodes << '\n';
}

void write_json(std::ostream& os, const std::vector<RunRecord>& rows)
{
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["algorithm"] = r.algorithm;
        j["graph"] = r.graph;
        j["n"] = r.n;
        j["n_upper"] = r.n_upper;
        j["big_n"] = r.big_n;
        j["mode"] = r.mode;
        j["wakeup"] = r.wakeup;
        j["seed"] = r.seed;
        j["total_rounds"] = r.total_rounds;
        j["max_active_time"] = r.max_active_time;
        j["mis_size"] = r.mis_size;
        j["algorithm_beeps"] = r.algorithm_beeps;
        j["wakeup_beeps"] = r.wakeup_beeps;
        j["beeps_per_mis_node"] = r.beeps_per_mis_node;
        j["valid"] = r.valid;
        j["failed_nodes"] = r.failed_nodes;
        os << j.dump() << '\n';
    }
}

SweepSummary sweep(const ExperimentConfig& tmpl, const std::vector<std::size_t>& ns, std::size_t threads)
{
    if (std::set<std::size_t>(ns.begin(), ns.end()).size() < 3)
        throw ConfigError("n", "sweep needs at least three distinct n values");
    if (tmpl.graph.find("{n}") == std::string::npos)
        throw ConfigError("graph_template", "template must contain {n}");

    SweepSummary out;
    out.regressor = tmpl.algorithm == Algorithm::Algo2 ? "log2(n)*log2(N)" : "log2(n)^2";
    std::vector<double> xs, ys;
    for (std::size_t n : ns) {
        ExperimentConfig cfg = tmpl;
        const auto pos = cfg.graph.find("{n}");
        cfg.graph.replace(pos, 3, std::to_string(n));
        const auto rows = run_experiment(cfg, threads);

        SweepRow row;
        row.n = n;
        const double lg = std::log2(static_cast<double>(n));
        if (tmpl.algorithm == Algorithm::Algo2) {
            const auto setup = prepare_trial(cfg, cfg.seed);
            row.x = lg * setup.protocol.bits;
        } else {
            row.x = lg * lg;
        }
        double sum_time = 0, sum_bpm = 0;
        for (const auto& r : rows) {
            sum_time += static_cast<double>(r.max_active_time);
            sum_bpm += r.beeps_per_mis_node;
            row.max_max_active_time = std::max(row.max_max_active_time, r.max_active_time);
            row.max_beeps_per_mis_node = std::max(row.max_beeps_per_mis_node, r.beeps_per_mis_node);
            row.valid_runs += r.valid;
        }
        row.runs = rows.size();
        row.mean_max_active_time = sum_time / static_cast<double>(rows.size());
        row.mean_beeps_per_mis_node = sum_bpm / static_cast<double>(rows.size());
        xs.push_back(row.x);
        ys.push_back(row.mean_max_active_time);
        out.rows.push_back(row);
        out.records.insert(out.records.end(), rows.begin(), rows.end());
    }
    out.fit = fit_line(xs, ys);
    return out;
}

void write_sweep(std::ostream& os, const SweepSummary& s)
{
    os << "n,x,mean_max_active_time,max_max_active_time,mean_beeps_per_mis_node,max_beeps_per_mis_node,"
          "valid_runs,runs\n";
    for (const auto& r : s.rows)
        os << r.n << ',' << format_double(r.x) << ',' << format_double(r.mean_max_active_time) << ','
           << r.max_max_active_time << ',' << format_double(r.mean_beeps_per_mis_node) << ','
           << format_double(r.max_beeps_per_mis_node) << ',' << r.valid_runs << ',' << r.runs << '\n';
    os << "# fit mean_max_active_time ~ slope * " << s.regressor << " + intercept: slope "
       << format_double(s.fit.slope) << ", intercept " << format_double(s.fit.intercept) << ", R^2 "
       << format_double(s.fit.r_squared) << '\n';
}

std::vector<LowerBoundEntry> lowerbound_report(const LowerBoundOptions& opt, std::size_t threads)
{
    std::vector<LowerBoundEntry> out;
    for (double log_n : opt.log_ns) {
        if (!(log_n > 0))
            throw ConfigError("logn", "values must be positive");
        LowerBoundEntry e;
        e.log_n = log_n;
        e.minimum = opt.explicit_grid.empty() ? min_product_over_p(log_n, opt.resolution)
                                              : min_product_over_grid(log_n, opt.explicit_grid);
        e.certificate = e.minimum.product >= 0.001;

        const bool integral = std::floor(log_n) == log_n;
        if (integral && log_n >= 4 && log_n <= opt.max_empirical_log_n && opt.trials > 0) {
            const auto family = gen_bipartite_family(std::size_t{1} << static_cast<unsigned>(log_n));
            e.rounds = hard_round_count(log_n);
            const UniformSchedule schedule{std::vector<double>(*e.rounds, e.minimum.p)};
            std::vector<std::uint8_t> stuck(opt.trials, 0);
            parallel_for(opt.trials, threads, [&](std::size_t i) {
                const auto first = simulate_uniform_process(family, schedule, opt.seed + i);
                stuck[i] = std::any_of(first.begin(), first.end(), [](const auto& f) { return !f; });
            });
            e.runs = opt.trials;
            e.never_succeeded_runs = static_cast<std::size_t>(std::count(stuck.begin(), stuck.end(), 1));
            e.interval = wilson_interval(*e.never_succeeded_runs, e.runs);
        }
        out.push_back(e);
    }
    return out;
}

void write_lowerbound(std::ostream& os, const std::vector<LowerBoundEntry>& entries)
{
    for (const auto& e : entries) {
        os << "log_n " << e.log_n << ": argmin p " << std::setprecision(6) << e.minimum.p << ", min product "
           << e.minimum.product << " (log " << e.minimum.log_product << ")\n";
        os << "  certificate: min product " << e.minimum.product << " >= 0.001: "
           << (e.certificate ? "PASS" : "FAIL") << '\n';
        if (e.never_succeeded_runs) {
            const double freq = static_cast<double>(*e.never_succeeded_runs) / static_cast<double>(e.runs);
            os << "  hard family n = 2^" << e.log_n << ", T = " << *e.rounds << " rounds: " << *e.never_succeeded_runs
               << "/" << e.runs << " runs left a component failing every round (frequency " << freq
               << ", 95% Wilson [" << e.interval.first << ", " << e.interval.second << "])\n";
        } else {
            os << "  hard family experiment skipped\n";
        }
    }
}

std::string render_verification(const VerificationResult& r)
{
    if (r.valid())
        return "VALID\n";
    std::ostringstream os;
    if (!r.is_independent) {
        os << "INDEPENDENCE VIOLATION";
        for (auto [u, v] : r.adjacent_mis_pairs)
            os << " (" << u << ',' << v << ')';
        os << '\n';
    }
    if (!r.is_maximal) {
        os << "MAXIMALITY VIOLATION: uncovered";
        for (NodeId v : r.uncovered_nodes)
            os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

VerificationResult verify_files(const std::string& graph_path, const std::string& status_path)
{
    std::ifstream gin(graph_path);
    if (!gin)
        throw std::runtime_error("cannot open graph file '" + graph_path + "'");
    std::ifstream sin(status_path);
    if (!sin)
        throw std::runtime_error("cannot open status file '" + status_path + "'");
    const Graph g = read_edge_list(gin);
    const auto status = read_status_list(sin, g.node_count());
    return verify_mis(g, status);
}

} // namespace misbeep
