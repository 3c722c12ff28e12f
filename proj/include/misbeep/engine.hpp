#ifndef MISBEEP_ENGINE_HPP
#define MISBEEP_ENGINE_HPP

#include "misbeep/channel.hpp"
#include "misbeep/graph.hpp"
#include "misbeep/protocols.hpp"
#include "misbeep/rng.hpp"
#include "misbeep/wakeup.hpp"

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace misbeep {

struct NodeRecord
{
    std::optional<Round> wake_round;
    std::optional<Round> exit_round;
    TerminalStatus status = TerminalStatus::NeverWoke;
    std::uint64_t algorithm_beeps = 0;
    std::uint32_t wakeup_beeps = 0;
    Round active_time = 0;
};

struct SimResult
{
    std::vector<NodeRecord> nodes;
    Round total_rounds = 0;
    Round max_active_time = 0;
    bool cap_hit = false;
    VerificationResult verification;

    std::vector<TerminalStatus> statuses() const;
    std::size_t mis_size() const;
    std::size_t failed_count() const;
    std::uint64_t algorithm_beeps() const;
    std::uint64_t wakeup_beeps() const;

    friend bool operator==(const SimResult& a, const SimResult& b);
};

/// Active time per node: latest exit in the closed neighborhood minus the
/// node's wake round. Nodes without an exit round count as exiting at
/// total_rounds; nodes that never woke get 0 and are skipped as neighbors.
std::vector<Round> compute_active_times(const SimResult& r, const Graph& g);

/// State handed to observers once per round, after delivery and before the
/// automata consume their heard flags.
template <class Automaton>
struct RoundView
{
    Round round;
    std::span<const Automaton> automata;
    std::span<const NodeId> beepers;
    std::span<const std::uint8_t> heard;
    std::span<const RoundAction> actions; // Listen for nodes that did not act
};

/// Observer hooks. Both are optional; detection is structural.
struct NoObserver
{
};

/// Node automaton contract the engine relies on.
template <class A>
concept EngineAutomaton = requires(A a, const A ca, Rng& rng, bool heard) {
    { ca.stage() } -> std::same_as<Stage>;
    a.wake();
    { a.act(rng) } -> std::same_as<RoundAction>;
    a.observe(heard);
};

/// Lockstep round driver. Each round: spontaneous wake-ups, every awake
/// non-terminal automaton acts, beeps are delivered per the channel mode,
/// every awake automaton and every asleep node that heard a beep observes.
/// Stops once no node is running and no spontaneous wake-up is pending, or
/// when the round cap is reached (survivors become Failed).
template <EngineAutomaton Automaton>
class Simulation
{
public:
    Simulation(const Graph& g, std::vector<Automaton> automata, const WakeupSchedule& schedule,
               ChannelMode mode, std::uint64_t seed, Round round_cap)
        : graph_(g), automata_(std::move(automata)), mode_(mode), round_cap_(round_cap)
    {
        if (automata_.size() != g.node_count())
            throw std::invalid_argument("one automaton per node required");
        if (round_cap_ < 1)
            throw std::invalid_argument("round cap must be at least 1");
        const auto rounds = spontaneous_rounds(schedule, g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (rounds[v])
                pending_.emplace_back(*rounds[v], v);
        std::sort(pending_.begin(), pending_.end());
        rngs_.reserve(g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v)
            rngs_.push_back(Rng::substream(seed, v));
    }

    std::span<const Automaton> automata() const noexcept { return automata_; }

    template <class Observer = NoObserver>
    SimResult run(Observer&& obs = {})
    {
        const std::size_t n = graph_.node_count();
        SimResult res;
        res.nodes.assign(n, NodeRecord{});

        std::vector<NodeId> live;
        std::vector<NodeId> beepers;
        std::vector<NodeId> touched;
        std::vector<std::uint8_t> heard(n, 0);
        std::vector<RoundAction> actions(n, RoundAction::Listen);
        std::size_t next_pending = 0;

        Round t = 0;
        for (; t < round_cap_; ++t) {
            while (next_pending < pending_.size() && pending_[next_pending].first == t) {
                const NodeId v = pending_[next_pending++].second;
                if (automata_[v].stage() != Stage::Asleep)
                    continue;
                automata_[v].wake();
                res.nodes[v].wake_round = t;
                live.push_back(v);
            }

            beepers.clear();
            for (NodeId v : live) {
                const Stage before = automata_[v].stage();
                const RoundAction a = automata_[v].act(rngs_[v]);
                actions[v] = a;
                if (a != RoundAction::Beep)
                    continue;
                beepers.push_back(v);
                if (before == Stage::WakeBroadcast)
                    ++res.nodes[v].wakeup_beeps;
                else
                    ++res.nodes[v].algorithm_beeps;
            }

            for (NodeId u : beepers)
                for (NodeId w : graph_.neighbors(u))
                    if (!heard[w]) {
                        heard[w] = 1;
                        touched.push_back(w);
                    }
            if (mode_ == ChannelMode::BeepOnly)
                for (NodeId u : beepers)
                    heard[u] = 0;

            if constexpr (requires { obs.on_delivery(std::declval<RoundView<Automaton>>()); })
                obs.on_delivery(RoundView<Automaton>{t, automata_, beepers, heard, actions});

            std::size_t kept = 0;
            for (NodeId v : live) {
                automata_[v].observe(heard[v] != 0);
                actions[v] = RoundAction::Listen;
                if (is_terminal(automata_[v].stage()))
                    res.nodes[v].exit_round = t;
                else
                    live[kept++] = v;
            }
            live.resize(kept);

            for (NodeId w : touched) {
                if (heard[w] && automata_[w].stage() == Stage::Asleep) {
                    automata_[w].observe(true);
                    if (automata_[w].stage() != Stage::Asleep) {
                        res.nodes[w].wake_round = t;
                        live.push_back(w);
                    }
                }
                heard[w] = 0;
            }
            touched.clear();

            if constexpr (requires { obs.on_round_end(t, std::span<const Automaton>(automata_)); })
                obs.on_round_end(t, std::span<const Automaton>(automata_));

            if (live.empty() && next_pending == pending_.size()) {
                ++t;
                break;
            }
        }

        res.total_rounds = t;
        res.cap_hit = !live.empty() || next_pending < pending_.size();
        for (NodeId v = 0; v < n; ++v) {
            auto& rec = res.nodes[v];
            switch (automata_[v].stage()) {
            case Stage::InMIS: rec.status = TerminalStatus::InMIS; break;
            case Stage::Inactive: rec.status = TerminalStatus::Inactive; break;
            case Stage::Asleep: rec.status = TerminalStatus::NeverWoke; break;
            default: rec.status = TerminalStatus::Failed; break;
            }
        }
        const auto active = compute_active_times(res, graph_);
        for (NodeId v = 0; v < n; ++v) {
            res.nodes[v].active_time = active[v];
            res.max_active_time = std::max(res.max_active_time, active[v]);
        }
        res.verification = verify_mis(graph_, res.statuses());
        return res;
    }

private:
    const Graph& graph_;
    std::vector<Automaton> automata_;
    ChannelMode mode_;
    Round round_cap_;
    std::vector<std::pair<Round, NodeId>> pending_;
    std::vector<Rng> rngs_;
};

/// `make(v)` yields the automaton for node v.
template <class Factory>
auto run_simulation(const Graph& g, Factory&& make, const WakeupSchedule& schedule, ChannelMode mode,
                    std::uint64_t seed, Round round_cap)
{
    using Automaton = std::decay_t<decltype(make(NodeId{0}))>;
    std::vector<Automaton> automata;
    automata.reserve(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        automata.push_back(make(v));
    Simulation<Automaton> sim(g, std::move(automata), schedule, mode, seed, round_cap);
    return sim.run();
}

/// Default round cap for a protocol: the larger of the nominal allowance
/// (100 L^2 for Algorithm 1 variants, 100 log2(n_upper) L_N for Algorithm 2)
/// and the full bounded phase schedule plus the wake-up prologue and a
/// wave crossing the whole graph.
Round default_round_cap(const ProtocolConfig& cfg, std::uint64_t n_upper, std::size_t node_count);

/// Runs one protocol end to end on `g` with the mode it requires.
SimResult run_protocol(const Graph& g, const ProtocolConfig& cfg, const WakeupSchedule& schedule,
                       std::uint64_t seed, Round round_cap);

} // namespace misbeep

#endif
