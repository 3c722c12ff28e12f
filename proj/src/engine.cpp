#include "misbeep/engine.hpp"

#include <numeric>

namespace misbeep {

std::vector<TerminalStatus> SimResult::statuses() const
{
    std::vector<TerminalStatus> out;
    out.reserve(nodes.size());
    for (const auto& n : nodes)
        out.push_back(n.status);
    return out;
}

std::size_t SimResult::mis_size() const
{
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const NodeRecord& n) {
        return n.status == TerminalStatus::InMIS;
    }));
}

std::size_t SimResult::failed_count() const
{
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const NodeRecord& n) {
        return n.status == TerminalStatus::Failed;
    }));
}

std::uint64_t SimResult::algorithm_beeps() const
{
    return std::accumulate(nodes.begin(), nodes.end(), std::uint64_t{0},
                           [](std::uint64_t s, const NodeRecord& n) { return s + n.algorithm_beeps; });
}

std::uint64_t SimResult::wakeup_beeps() const
{
    return std::accumulate(nodes.begin(), nodes.end(), std::uint64_t{0},
                           [](std::uint64_t s, const NodeRecord& n) { return s + n.wakeup_beeps; });
}

namespace {

bool same_record(const NodeRecord& a, const NodeRecord& b)
{
    return a.wake_round == b.wake_round && a.exit_round == b.exit_round && a.status == b.status &&
           a.algorithm_beeps == b.algorithm_beeps && a.wakeup_beeps == b.wakeup_beeps &&
           a.active_time == b.active_time;
}

} // namespace

bool operator==(const SimResult& a, const SimResult& b)
{
    if (a.total_rounds != b.total_rounds || a.max_active_time != b.max_active_time ||
        a.cap_hit != b.cap_hit || a.nodes.size() != b.nodes.size())
        return false;
    for (std::size_t v = 0; v < a.nodes.size(); ++v)
        if (!same_record(a.nodes[v], b.nodes[v]))
            return false;
    return a.verification.uncovered_nodes == b.verification.uncovered_nodes &&
           a.verification.adjacent_mis_pairs == b.verification.adjacent_mis_pairs;
}

std::vector<Round> compute_active_times(const SimResult& r, const Graph& g)
{
    std::vector<Round> out(r.nodes.size(), 0);
    auto exit_of = [&](NodeId v) { return r.nodes[v].exit_round.value_or(r.total_rounds); };
    for (NodeId v = 0; v < r.nodes.size(); ++v) {
        const auto& rec = r.nodes[v];
        if (!rec.wake_round)
            continue;
        Round last = exit_of(v);
        for (NodeId u : g.neighbors(v))
            if (r.nodes[u].wake_round)
                last = std::max(last, exit_of(u));
        out[v] = last - *rec.wake_round;
    }
    return out;
}

Round default_round_cap(const ProtocolConfig& cfg, std::uint64_t n_upper, std::size_t node_count)
{
    const Round lg = std::max<Round>(1, ceil_log2(n_upper));
    // wake prologue (3 rounds) plus a wave that may have to cross every node
    const Round prologue = static_cast<Round>(node_count) + 3;
    if (cfg.algorithm == Algorithm::Algo2)
        return std::max<Round>(100 * lg * cfg.bits, prologue + 1);
    const Round nominal = 100 * Round{cfg.bits} * cfg.bits;
    const Round schedule = Round{cfg.phase_count} * cfg.steps_per_phase * cfg.rounds_per_step();
    return std::max(nominal, prologue + schedule + 1);
}

SimResult run_protocol(const Graph& g, const ProtocolConfig& cfg, const WakeupSchedule& schedule,
                       std::uint64_t seed, Round round_cap)
{
    return run_simulation(
        g, [&](NodeId) { return MisNode(cfg); }, schedule, required_mode(cfg.algorithm), seed, round_cap);
}

} // namespace misbeep
