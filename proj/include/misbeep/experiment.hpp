#ifndef MISBEEP_EXPERIMENT_HPP
#define MISBEEP_EXPERIMENT_HPP

#include "misbeep/engine.hpp"
#include "misbeep/lower_bound.hpp"
#include "misbeep/protocols.hpp"
#include "misbeep/stats.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace misbeep {

/// Invalid experiment configuration; field() names the offending setting.
class ConfigError : public std::invalid_argument
{
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Parsed "kind:args" graph description: clique:<n>, ring:<n>,
/// gnp:<n>:<p> (p may be written <k>overN for k/n), bipartite:<n>,
/// file:<edge-list path>.
struct GraphSpec
{
    enum class Kind { Clique, Ring, Gnp, Bipartite, File };
    Kind kind = Kind::Clique;
    std::size_t n = 0;
    double p = 0;
    std::string path;
    std::string text;

    /// Whether each trial draws a fresh instance from its own seed.
    bool randomized() const noexcept { return kind == Kind::Gnp; }
};

GraphSpec parse_graph_spec(const std::string& text);

/// Instance of a spec. `seed` only matters for randomized kinds.
Graph build_graph(const GraphSpec& spec, std::uint64_t seed);

/// Upper bound N for Algorithm 2, kept as its bit length so that values up
/// to 2^64 and beyond fit. Accepts decimal integers or "2^k".
struct BigBound
{
    std::uint32_t bits = 0; // ceil(log2 N)
    std::string text;
};

BigBound parse_big_bound(const std::string& text);

struct ExperimentConfig
{
    Algorithm algorithm = Algorithm::Algo1;
    std::string graph = "clique:16";
    std::optional<std::uint64_t> n_upper; // defaults to the node count
    std::optional<std::string> big_n;     // algo2 only; defaults to n_upper
    std::optional<ChannelMode> mode;      // defaults to the algorithm's mode
    std::string wakeup = "sync";          // sync | random:<fraction>:<max round> | <path>
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
    std::optional<Round> round_cap;
    std::uint32_t m = kDefaultStepFactor;
    std::uint32_t c = kDefaultWindowFactor;
};

/// One row of experiment output.
struct RunRecord
{
    std::string algorithm;
    std::string graph;
    std::size_t n = 0;
    std::uint64_t n_upper = 0;
    std::string big_n;
    std::string mode;
    std::string wakeup;
    std::uint64_t seed = 0;
    Round total_rounds = 0;
    Round max_active_time = 0;
    std::size_t mis_size = 0;
    std::uint64_t algorithm_beeps = 0;
    std::uint64_t wakeup_beeps = 0;
    double beeps_per_mis_node = 0;
    bool valid = false;
    std::size_t failed_nodes = 0;
    bool cap_hit = false; // not a CSV column
};

/// Fully resolved configuration for one trial.
struct TrialSetup
{
    std::shared_ptr<const Graph> graph;
    ProtocolConfig protocol;
    WakeupSchedule wakeup;
    ChannelMode mode = ChannelMode::ListenWhileBeeping;
    std::uint64_t n_upper = 0;
    Round round_cap = 0;
};

/// Validates `cfg` and resolves everything a trial with `seed` needs.
/// `shared` reuses an already built instance of a non-randomized graph.
/// Throws ConfigError naming the bad field.
TrialSetup prepare_trial(const ExperimentConfig& cfg, std::uint64_t seed,
                         std::shared_ptr<const Graph> shared = nullptr);

/// Validation only (resolves the seed-0 instance).
void validate(const ExperimentConfig& cfg);

struct TrialOutcome
{
    RunRecord record;
    SimResult sim;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t seed,
                       std::shared_ptr<const Graph> shared = nullptr);
RunRecord make_record(const ExperimentConfig& cfg, const TrialSetup& setup, const SimResult& sim,
                      std::uint64_t seed);

/// Trials with seeds seed, seed+1, ... run on up to `threads` workers
/// (0 = thread_count()); rows come back ordered by seed.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, std::size_t threads = 0);

/// MISBEEP_THREADS if set and positive, else the hardware concurrency.
std::size_t thread_count();

/// Runs fn(i) for i in [0, count) across `threads` workers.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Column order of the CSV output.
const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& os, const std::vector<RunRecord>& rows, bool timestamp);
/// JSON Lines, one object per trial with the CSV fields.
void write_json(std::ostream& os, const std::vector<RunRecord>& rows);

struct SweepRow
{
    std::size_t n = 0;
    double x = 0; // regressor for this n
    double mean_max_active_time = 0;
    Round max_max_active_time = 0;
    double mean_beeps_per_mis_node = 0;
    double max_beeps_per_mis_node = 0;
    std::size_t valid_runs = 0;
    std::size_t runs = 0;
};

struct SweepSummary
{
    std::string regressor; // "log2(n)^2" or "log2(n)*log2(N)"
    std::vector<SweepRow> rows;
    LinearFit fit;
    std::vector<RunRecord> records;
};

/// Replaces "{n}" in the template's graph string for each n and fits mean
/// max_active_time against log2(n)^2 (Algorithm 1 variants) or
/// log2(n) * log2(N) (Algorithm 2). Needs at least three distinct n.
SweepSummary sweep(const ExperimentConfig& tmpl, const std::vector<std::size_t>& ns, std::size_t threads = 0);
void write_sweep(std::ostream& os, const SweepSummary& s);

struct LowerBoundOptions
{
    std::vector<double> log_ns{12, 20, 40};
    double resolution = 1e-4;
    std::vector<double> explicit_grid; // overrides the resolution grid when non-empty
    std::uint32_t trials = 100;
    std::uint64_t seed = 0;
    double max_empirical_log_n = 16;
};

struct LowerBoundEntry
{
    double log_n = 0;
    ProductMinimum minimum;
    bool certificate = false; // minimum product >= 0.001
    std::optional<std::uint32_t> rounds;           // T
    std::optional<std::size_t> never_succeeded_runs; // seeds with a component failing all T rounds
    std::size_t runs = 0;
    std::pair<double, double> interval{0, 1};
};

std::vector<LowerBoundEntry> lowerbound_report(const LowerBoundOptions& opt, std::size_t threads = 0);
void write_lowerbound(std::ostream& os, const std::vector<LowerBoundEntry>& entries);

/// "VALID", or one line per violated property.
std::string render_verification(const VerificationResult& r);
/// Reads both files and renders the verdict. Throws ParseError.
VerificationResult verify_files(const std::string& graph_path, const std::string& status_path);

} // namespace misbeep

#endif
