#include "misbeep/engine.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace misbeep;

namespace {

Graph path3()
{
    const std::vector<Edge> e{{0, 1}, {1, 2}};
    return Graph::from_edges(3, e);
}

Round cap_for(const ProtocolConfig& cfg, const Graph& g)
{
    return default_round_cap(cfg, g.node_count(), g.node_count());
}

// Linear position of a running node inside its loop nest.
std::uint64_t position(const MisNode& a)
{
    const auto& cfg = a.config();
    const auto c = a.coordinates();
    const std::uint64_t in_step = c.exchange == 1 ? c.round - 1 : cfg.exchange1_rounds() + c.round - 1;
    return (c.phase * cfg.steps_per_phase + c.step) * cfg.rounds_per_step() + in_step;
}

struct AlignmentObserver
{
    const Graph* g;
    std::uint64_t checks = 0;
    std::uint64_t misaligned = 0;

    void on_delivery(const RoundView<MisNode>& view)
    {
        for (auto [u, v] : g->edges()) {
            const auto& a = view.automata[u];
            const auto& b = view.automata[v];
            if (!a.running() || !b.running())
                continue;
            ++checks;
            const auto pu = position(a);
            const auto pv = position(b);
            misaligned += (pu > pv ? pu - pv : pv - pu) > 1;
        }
    }
};

} // namespace

TEST_CASE("deliver_round examples")
{
    const auto g = path3();
    const std::vector<NodeId> mid{1};
    CHECK(deliver_round(g, mid, ChannelMode::ListenWhileBeeping) == std::vector<bool>{true, false, true});
    const std::vector<NodeId> ends{0, 2};
    CHECK(deliver_round(g, ends, ChannelMode::ListenWhileBeeping) == std::vector<bool>{false, true, false});
    const std::vector<NodeId> pair{0, 1};
    CHECK(deliver_round(g, pair, ChannelMode::ListenWhileBeeping) == std::vector<bool>{true, true, true});
    CHECK(deliver_round(g, pair, ChannelMode::BeepOnly) == std::vector<bool>{false, false, true});
    CHECK(deliver_round(g, {}, ChannelMode::BeepOnly) == std::vector<bool>{false, false, false});
}

TEST_CASE("a node hears exactly when a neighbor beeped")
{
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = gen_gnp(30, 0.15, rng());
        std::vector<NodeId> beepers;
        std::vector<char> beeps(30, 0);
        for (NodeId v = 0; v < 30; ++v)
            if (rng.bernoulli(0.2)) {
                beepers.push_back(v);
                beeps[v] = 1;
            }
        const auto mode = trial % 2 ? ChannelMode::BeepOnly : ChannelMode::ListenWhileBeeping;
        const auto heard = deliver_round(g, beepers, mode);
        for (NodeId v = 0; v < 30; ++v) {
            bool neighbor_beeped = false;
            for (NodeId u : g.neighbors(v))
                neighbor_beeped |= beeps[u] != 0;
            const bool expect = neighbor_beeped && (mode == ChannelMode::ListenWhileBeeping || !beeps[v]);
            REQUIRE(heard[v] == expect);
        }
    }
}

TEST_CASE("single node joins")
{
    const auto g = gen_clique(1);
    for (auto cfg : {algo1_config(1), algo1_nocd_config(1), algo2_config(1)}) {
        const auto r = run_protocol(g, cfg, WakeAllAtZero{}, 3, cap_for(cfg, g));
        CHECK(r.nodes[0].status == TerminalStatus::InMIS);
        CHECK(r.nodes[0].wakeup_beeps == 1);
        CHECK(r.nodes[0].algorithm_beeps >= 1);
        CHECK_FALSE(r.cap_hit);
    }
}

TEST_CASE("K2 elects exactly one node")
{
    const auto g = gen_clique(2);
    for (auto cfg : {algo1_config(2), algo1_nocd_config(2), algo2_config(2)})
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto r = run_protocol(g, cfg, WakeAllAtZero{}, seed, cap_for(cfg, g));
            REQUIRE(r.verification.valid());
            REQUIRE(r.mis_size() == 1);
        }
}

TEST_CASE("runs are deterministic in the seed")
{
    const auto g = gen_gnp(200, 0.04, 9);
    const auto cfg = algo1_config(200);
    const WakeupSchedule wake = WakeRandomSubset{0.1, 30, 4};
    const auto a = run_protocol(g, cfg, wake, 11, cap_for(cfg, g));
    const auto b = run_protocol(g, cfg, wake, 11, cap_for(cfg, g));
    CHECK(a == b);
    const auto c = run_protocol(g, cfg, wake, 12, cap_for(cfg, g));
    CHECK_FALSE(a.statuses() == c.statuses());
}

TEST_CASE("active time examples")
{
    const auto g = path3();
    SimResult r;
    r.total_rounds = 20;
    r.nodes.resize(3);
    r.nodes[0].wake_round = 0;
    r.nodes[0].exit_round = 10;
    r.nodes[1].wake_round = 1;
    r.nodes[1].exit_round = 12;
    r.nodes[2].wake_round = 2; // no exit: counts as total_rounds
    CHECK(compute_active_times(r, g) == std::vector<Round>{12, 19, 18});

    r.nodes[2] = NodeRecord{}; // never woke
    CHECK(compute_active_times(r, g) == std::vector<Round>{12, 11, 0});
}

TEST_CASE("wake-up wave")
{
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = trial % 2 ? gen_ring(50 + rng.below(50)) : gen_gnp(120, 0.05, rng());
        const auto cfg = algo1_config(g.node_count());
        const WakeupSchedule wake = WakeRandomSubset{0.05, 40, rng()};
        const auto r = run_protocol(g, cfg, wake, rng(), cap_for(cfg, g));
        for (auto [u, v] : g.edges()) {
            REQUIRE(r.nodes[u].wake_round.has_value());
            REQUIRE(r.nodes[v].wake_round.has_value());
            const auto a = *r.nodes[u].wake_round;
            const auto b = *r.nodes[v].wake_round;
            REQUIRE((a > b ? a - b : b - a) <= 1);
        }
        for (const auto& rec : r.nodes)
            CHECK(rec.wakeup_beeps == (rec.wake_round ? 1u : 0u));
    }
}

TEST_CASE("adjacent running nodes stay within one round of each other")
{
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = gen_gnp(150, 0.04, rng());
        const auto cfg = algo1_config(150);
        std::vector<MisNode> nodes(g.node_count(), MisNode(cfg));
        const WakeupSchedule wake = WakeRandomSubset{0.1, 25, rng()};
        Simulation<MisNode> sim(g, std::move(nodes), wake, ChannelMode::ListenWhileBeeping, rng(),
                                cap_for(cfg, g));
        AlignmentObserver obs{&g};
        const auto r = sim.run(obs);
        CHECK(obs.checks > 0);
        CHECK(obs.misaligned == 0);
        CHECK(r.verification.valid());
    }
}

TEST_CASE("beep counters add up")
{
    const auto g = gen_gnp(100, 0.08, 2);
    const auto cfg = algo1_config(100);
    std::vector<MisNode> nodes(g.node_count(), MisNode(cfg));
    Simulation<MisNode> sim(g, std::move(nodes), WakeAllAtZero{}, ChannelMode::ListenWhileBeeping, 8,
                            cap_for(cfg, g));
    struct Counter
    {
        std::uint64_t beeps = 0;
        void on_delivery(const RoundView<MisNode>& v) { beeps += v.beepers.size(); }
    } counter;
    const auto r = sim.run(counter);
    CHECK(counter.beeps == r.algorithm_beeps() + r.wakeup_beeps());
    CHECK(r.wakeup_beeps() == g.node_count());
    for (const auto& rec : r.nodes)
        if (rec.status == TerminalStatus::InMIS)
            CHECK(rec.algorithm_beeps >= 1);
}

TEST_CASE("unreached components never wake")
{
    const std::vector<Edge> e{{0, 1}, {2, 3}};
    const auto g = Graph::from_edges(4, e);
    const auto cfg = algo1_config(4);
    const WakeupSchedule wake = WakeExplicit{{Round{0}, std::nullopt, std::nullopt, std::nullopt}};
    const auto r = run_protocol(g, cfg, wake, 1, cap_for(cfg, g));
    CHECK(r.nodes[2].status == TerminalStatus::NeverWoke);
    CHECK(r.nodes[3].status == TerminalStatus::NeverWoke);
    CHECK(r.nodes[2].active_time == 0);
    CHECK(r.mis_size() == 1);
    CHECK(r.verification.valid());
    CHECK_FALSE(r.cap_hit);
}

TEST_CASE("round cap turns survivors into failures")
{
    const auto g = gen_clique(30);
    const auto r = run_protocol(g, algo1_config(30), WakeAllAtZero{}, 1, 5);
    CHECK(r.cap_hit);
    CHECK(r.total_rounds == 5);
    CHECK(r.failed_count() == 30);
    CHECK_THROWS_AS(run_protocol(g, algo1_config(30), WakeAllAtZero{}, 1, 0), std::invalid_argument);
}

TEST_CASE("wake-up schedules")
{
    CHECK_THROWS_AS(spontaneous_rounds(WakeExplicit{{std::nullopt, std::nullopt}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(spontaneous_rounds(WakeExplicit{{Round{0}}}, 2), std::invalid_argument);
    const auto r = spontaneous_rounds(WakeRandomSubset{0.25, 10, 3}, 100);
    std::size_t woken = 0;
    for (const auto& w : r)
        if (w) {
            ++woken;
            CHECK(*w <= 10);
        }
    CHECK(woken == 25);
    CHECK(spontaneous_rounds(WakeRandomSubset{0.001, 0, 3}, 100).size() == 100);
    CHECK(describe(WakeAllAtZero{}) == "sync");
}
