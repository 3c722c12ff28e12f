#include "misbeep/graph.hpp"
#include "misbeep/graph_io.hpp"
#include "misbeep/rng.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>
#include <sstream>

using namespace misbeep;

namespace {

using Status = TerminalStatus;

// Graph on <= 8 nodes encoded as per-node neighbor bitmasks.
std::vector<std::uint32_t> to_masks(const Graph& g)
{
    std::vector<std::uint32_t> m(g.node_count(), 0);
    for (auto [u, v] : g.edges()) {
        m[u] |= 1u << v;
        m[v] |= 1u << u;
    }
    return m;
}

bool independent(const std::vector<std::uint32_t>& adj, std::uint32_t set)
{
    for (std::size_t v = 0; v < adj.size(); ++v)
        if ((set >> v & 1u) && (adj[v] & set))
            return false;
    return true;
}

// Maximal independent: independent, and adding any outside node breaks it.
bool brute_mis(const std::vector<std::uint32_t>& adj, std::uint32_t set)
{
    if (!independent(adj, set))
        return false;
    for (std::size_t v = 0; v < adj.size(); ++v)
        if (!(set >> v & 1u) && independent(adj, set | (1u << v)))
            return false;
    return true;
}

Graph graph_from_code(std::size_t n, std::uint64_t code)
{
    std::vector<Edge> edges;
    std::size_t bit = 0;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v, ++bit)
            if (code >> bit & 1u)
                edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

void check_against_brute_force(const Graph& g)
{
    const auto adj = to_masks(g);
    const std::size_t n = g.node_count();
    std::vector<Status> status(n);
    for (std::uint32_t set = 0; set < (1u << n); ++set) {
        for (std::size_t v = 0; v < n; ++v)
            status[v] = (set >> v & 1u) ? Status::InMIS : Status::Inactive;
        const auto r = verify_mis(g, status);
        REQUIRE(r.valid() == brute_mis(adj, set));
        REQUIRE(r.is_independent == independent(adj, set));
    }
}

} // namespace

TEST_CASE("clique generator")
{
    CHECK(gen_clique(1).node_count() == 1);
    CHECK(gen_clique(1).edge_count() == 0);
    CHECK(gen_clique(2).edge_count() == 1);
    const auto k5 = gen_clique(5);
    CHECK(k5.edge_count() == 10);
    for (NodeId v = 0; v < 5; ++v)
        CHECK(k5.degree(v) == 4);
    CHECK_THROWS_AS(gen_clique(0), std::invalid_argument);
}

TEST_CASE("ring generator")
{
    CHECK(gen_ring(3).edge_count() == 3);
    const auto c4 = gen_ring(4);
    for (NodeId v = 0; v < 4; ++v)
        CHECK(c4.degree(v) == 2);
    CHECK(gen_ring(100).edge_count() == 100);
    CHECK_THROWS_AS(gen_ring(2), std::invalid_argument);
}

TEST_CASE("gnp generator")
{
    CHECK(gen_gnp(10, 0.0, 3).edge_count() == 0);
    CHECK(gen_gnp(10, 1.0, 3) == gen_clique(10));

    SUBCASE("edge count within 5 sigma of the binomial mean")
    {
        const double mean = 499500.0 * 0.01; // n(n-1)/2 * p with n = 1000
        const double sigma = std::sqrt(499500.0 * 0.01 * 0.99);
        for (std::uint64_t seed : {1u, 2u, 3u, 77u}) {
            const auto g = gen_gnp(1000, 0.01, seed);
            CHECK(std::abs(static_cast<double>(g.edge_count()) - mean) <= 5 * sigma);
        }
    }

    SUBCASE("same seed, same graph; other seed, other graph")
    {
        for (std::uint64_t seed = 0; seed < 20; ++seed)
            CHECK(gen_gnp(200, 0.05, seed) == gen_gnp(200, 0.05, seed));
        CHECK_FALSE(gen_gnp(200, 0.05, 1) == gen_gnp(200, 0.05, 2));
    }
    CHECK_THROWS_AS(gen_gnp(10, 1.5, 0), std::invalid_argument);
}

TEST_CASE("bipartite hard family")
{
    SUBCASE("n = 16")
    {
        const auto fam = gen_bipartite_family(16);
        CHECK(fam.max_type == 1);
        CHECK(fam.copies == 7);
        CHECK(fam.graph.node_count() == 28);
        CHECK(fam.graph.edge_count() == 28);
    }
    SUBCASE("n = 256")
    {
        const auto fam = gen_bipartite_family(256);
        CHECK(fam.max_type == 2);
        CHECK(fam.copies == 49);
        CHECK(fam.graph.node_count() == 588);
        CHECK(fam.component_count() == 98);
    }
    SUBCASE("component structure")
    {
        const auto fam = gen_bipartite_family(4096);
        CHECK(fam.copies == 338);
        for (NodeId v = 0; v < fam.graph.node_count(); ++v) {
            const auto i = fam.type_of(v);
            REQUIRE(fam.graph.degree(v) == (std::size_t{1} << i));
            for (NodeId u : fam.graph.neighbors(v)) {
                REQUIRE(fam.component[u] == fam.component[v]);
                REQUIRE(fam.side[u] != fam.side[v]);
            }
        }
    }
    SUBCASE("sizes match the closed form")
    {
        for (std::size_t n : {16u, 17u, 100u, 255u, 256u, 1000u, 1024u, 4096u, 5000u, 65536u}) {
            const auto fam = gen_bipartite_family(n);
            const auto [nodes, edges] = bipartite_family_size(n);
            CHECK(fam.graph.node_count() == nodes);
            CHECK(fam.graph.edge_count() == edges);
            std::size_t expect_nodes = 0;
            const auto copies = static_cast<std::size_t>(std::ceil(std::pow(double(n), 0.7) - 1e-9));
            for (std::size_t i = 1; i <= static_cast<std::size_t>(std::log2(double(n)) / 4); ++i)
                expect_nodes += copies * (std::size_t{2} << i);
            CHECK(nodes == expect_nodes);
        }
    }
    CHECK_THROWS_AS(gen_bipartite_family(15), std::invalid_argument);
}

TEST_CASE("from_edges rejects malformed input")
{
    const std::vector<Edge> loop{{1, 1}};
    CHECK_THROWS_AS(Graph::from_edges(3, loop), std::invalid_argument);
    const std::vector<Edge> dup{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(Graph::from_edges(3, dup), std::invalid_argument);
    const std::vector<Edge> range{{0, 3}};
    CHECK_THROWS_AS(Graph::from_edges(3, range), std::invalid_argument);
}

TEST_CASE("adjacency is symmetric and duplicate-free")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = gen_gnp(60, 0.2, seed);
        for (NodeId v = 0; v < g.node_count(); ++v) {
            auto nb = g.neighbors(v);
            CHECK(std::set<NodeId>(nb.begin(), nb.end()).size() == nb.size());
            for (NodeId u : nb) {
                REQUIRE(u != v);
                REQUIRE(g.adjacent(u, v));
            }
        }
    }
}

TEST_CASE("verify_mis examples")
{
    const auto k3 = gen_clique(3);
    const std::vector<Status> ok{Status::InMIS, Status::Inactive, Status::Inactive};
    const auto r1 = verify_mis(k3, ok);
    CHECK(r1.is_independent);
    CHECK(r1.is_maximal);

    const auto k2 = gen_clique(2);
    const std::vector<Status> both{Status::InMIS, Status::InMIS};
    const auto r2 = verify_mis(k2, both);
    CHECK_FALSE(r2.is_independent);
    CHECK(r2.adjacent_mis_pairs == std::vector<Edge>{{0, 1}});

    const std::vector<Edge> path_edges{{0, 1}, {1, 2}};
    const auto path = Graph::from_edges(3, path_edges);
    const std::vector<Status> none(3, Status::Inactive);
    const auto r3 = verify_mis(path, none);
    CHECK_FALSE(r3.is_maximal);
    CHECK(r3.uncovered_nodes == std::vector<NodeId>{0, 1, 2});

    // Never-woken nodes are not required to be covered; failed ones are.
    const std::vector<Status> sleepy{Status::NeverWoke, Status::Inactive, Status::InMIS};
    CHECK(verify_mis(path, sleepy).valid());
    const std::vector<Status> failed{Status::Failed, Status::Inactive, Status::InMIS};
    CHECK(verify_mis(path, failed).uncovered_nodes == std::vector<NodeId>{0});
}

TEST_CASE("verify_mis agrees with brute force on every graph up to 6 nodes")
{
    for (std::size_t n = 1; n <= 6; ++n) {
        const std::uint64_t codes = std::uint64_t{1} << (n * (n - 1) / 2);
        for (std::uint64_t code = 0; code < codes; ++code)
            check_against_brute_force(graph_from_code(n, code));
    }
}

TEST_CASE("verify_mis agrees with brute force on sampled 7 and 8 node graphs")
{
    Rng rng(2024);
    for (std::size_t n : {7u, 8u})
        for (int k = 0; k < 1500; ++k)
            check_against_brute_force(graph_from_code(n, rng() & ((std::uint64_t{1} << (n * (n - 1) / 2)) - 1)));
}

TEST_CASE("good vertices")
{
    const auto k4 = gen_clique(4);
    const std::vector<NodeId> all4{0, 1, 2, 3};
    CHECK(good_vertices(k4, all4) == all4);

    const std::vector<Edge> star_edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    const auto star = Graph::from_edges(5, star_edges);
    const std::vector<NodeId> all5{0, 1, 2, 3, 4};
    CHECK(good_vertices(star, all5) == std::vector<NodeId>{0});

    CHECK(good_vertices(k4, {}).empty());

    // Degrees are taken in the active subgraph: without the hub only the
    // middle of the path 1-2-3 is good.
    const std::vector<Edge> e{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}};
    const auto g = Graph::from_edges(4, e);
    const std::vector<NodeId> sub{1, 2, 3};
    CHECK(good_vertices(g, sub) == std::vector<NodeId>{2});
    CHECK(good_vertices(g, all4) == std::vector<NodeId>{0, 2});
}

TEST_CASE("good vertices touch at least half of the active edges")
{
    Rng rng(99);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 5 + rng.below(120);
        const double p = 0.02 + 0.5 * rng.uniform();
        Graph g;
        switch (trial % 4) {
        case 0: g = gen_gnp(n, p, rng()); break;
        case 1: g = gen_clique(5 + rng.below(20)); break;
        case 2: g = gen_ring(n); break;
        default: g = gen_bipartite_family(16 + rng.below(300)).graph; break;
        }
        std::vector<NodeId> active;
        std::vector<char> is_active(g.node_count(), 0);
        const double keep = 0.2 + 0.8 * rng.uniform();
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (rng.uniform() < keep) {
                active.push_back(v);
                is_active[v] = 1;
            }
        std::size_t active_edges = 0;
        for (auto [u, v] : g.edges())
            active_edges += is_active[u] && is_active[v];
        std::size_t good_degree = 0;
        for (NodeId v : good_vertices(g, active))
            for (NodeId u : g.neighbors(v))
                good_degree += is_active[u];
        CHECK(2 * good_degree >= active_edges);
    }
}

TEST_CASE("edge list round trip and parse errors")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = gen_gnp(40, 0.1, seed);
        std::stringstream ss;
        write_edge_list(ss, g);
        CHECK(read_edge_list(ss) == g);
    }

    std::istringstream missing_header("0 1\n");
    CHECK_THROWS_AS(read_edge_list(missing_header), ParseError);

    std::istringstream bad("n 3\n0 1\n2 1\n");
    try {
        read_edge_list(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream dup("n 3\n0 1\n# comment\n0 1\n");
    try {
        read_edge_list(dup);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }

    std::istringstream statuses("0 InMIS\n1 Inactive\n");
    CHECK(read_status_list(statuses, 2) == std::vector<Status>{Status::InMIS, Status::Inactive});
    std::istringstream bad_status("0 InMIS\n1 Sleeping\n");
    try {
        read_status_list(bad_status, 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream short_status("0 InMIS\n");
    CHECK_THROWS_AS(read_status_list(short_status, 2), ParseError);
}
