#include "misbeep/graph.hpp"

#include "misbeep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace misbeep {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges)
{
    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                        ") out of range for " + std::to_string(node_count) + " nodes");
        if (u == v)
            throw std::invalid_argument("self-loop on node " + std::to_string(u));
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t v = 0; v < node_count; ++v)
        g.offsets_[v + 1] += g.offsets_[v];

    g.targets_.resize(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
        g.targets_[cursor[u]++] = v;
        g.targets_[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(first, last);
        if (auto dup = std::adjacent_find(first, last); dup != last)
            throw std::invalid_argument("duplicate edge (" + std::to_string(v) + "," +
                                        std::to_string(*dup) + ")");
    }
    return g;
}

bool Graph::adjacent(NodeId u, NodeId v) const noexcept
{
    if (u >= node_count() || v >= node_count())
        return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

std::string_view to_string(TerminalStatus s) noexcept
{
    switch (s) {
    case TerminalStatus::InMIS: return "InMIS";
    case TerminalStatus::Inactive: return "Inactive";
    case TerminalStatus::Failed: return "Failed";
    case TerminalStatus::NeverWoke: return "NeverWoke";
    }
    return "?";
}

TerminalStatus parse_status(std::string_view name)
{
    for (auto s : {TerminalStatus::InMIS, TerminalStatus::Inactive, TerminalStatus::Failed,
                   TerminalStatus::NeverWoke})
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown status '" + std::string(name) + "'");
}

VerificationResult verify_mis(const Graph& g, std::span<const TerminalStatus> status)
{
    if (status.size() != g.node_count())
        throw std::invalid_argument("status count does not match node count");

    VerificationResult r;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const bool in_mis = status[u] == TerminalStatus::InMIS;
        bool covered = in_mis;
        for (NodeId v : g.neighbors(u)) {
            if (status[v] != TerminalStatus::InMIS)
                continue;
            covered = true;
            if (in_mis && u < v)
                r.adjacent_mis_pairs.emplace_back(u, v);
        }
        if (!covered && status[u] != TerminalStatus::NeverWoke)
            r.uncovered_nodes.push_back(u);
    }
    r.is_independent = r.adjacent_mis_pairs.empty();
    r.is_maximal = r.uncovered_nodes.empty();
    return r;
}

std::vector<NodeId> good_vertices(const Graph& g, std::span<const NodeId> active)
{
    std::vector<char> is_active(g.node_count(), 0);
    for (NodeId v : active)
        is_active[v] = 1;

    std::vector<std::size_t> degree(g.node_count(), 0);
    for (NodeId v : active)
        for (NodeId u : g.neighbors(v))
            degree[v] += is_active[u];

    std::vector<NodeId> good;
    for (NodeId v : active) {
        std::size_t low = 0;
        for (NodeId u : g.neighbors(v))
            if (is_active[u] && degree[u] <= degree[v])
                ++low;
        // low >= d_v / 3 without rounding
        if (3 * low >= degree[v])
            good.push_back(v);
    }
    std::sort(good.begin(), good.end());
    good.erase(std::unique(good.begin(), good.end()), good.end());
    return good;
}

Graph gen_clique(std::size_t n)
{
    if (n < 1)
        throw std::invalid_argument("clique needs n >= 1");
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

Graph gen_ring(std::size_t n)
{
    if (n < 3)
        throw std::invalid_argument("ring needs n >= 3, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(n);
    for (NodeId u = 0; u + 1 < n; ++u)
        edges.emplace_back(u, u + 1);
    edges.emplace_back(0, static_cast<NodeId>(n - 1));
    return Graph::from_edges(n, edges);
}

Graph gen_gnp(std::size_t n, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("gnp edge probability must lie in [0, 1]");
    Rng rng(mix64(seed ^ 0x6a09e667f3bcc908ULL));
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.uniform() < p)
                edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

namespace {

std::uint32_t family_max_type(std::size_t n)
{
    return static_cast<std::uint32_t>(std::floor(std::log2(static_cast<double>(n)) / 4.0));
}

std::size_t family_copies(std::size_t n)
{
    const double x = std::pow(static_cast<double>(n), 0.7);
    // 0.7 is not exact in binary; keep exact integer powers from rounding up
    return static_cast<std::size_t>(std::ceil(x - 1e-9 * x));
}

} // namespace

std::pair<std::size_t, std::size_t> bipartite_family_size(std::size_t n)
{
    std::size_t nodes = 0, edges = 0;
    const std::size_t copies = family_copies(n);
    for (std::uint32_t i = 1; i <= family_max_type(n); ++i) {
        nodes += copies * (std::size_t{1} << (i + 1));
        edges += copies * (std::size_t{1} << (2 * i));
    }
    return {nodes, edges};
}

BipartiteFamily gen_bipartite_family(std::size_t n)
{
    if (n < 16)
        throw std::invalid_argument("bipartite family needs n >= 16, got " + std::to_string(n));

    BipartiteFamily fam;
    fam.max_type = family_max_type(n);
    fam.copies = family_copies(n);

    std::vector<Edge> edges;
    NodeId next = 0;
    for (std::uint32_t i = 1; i <= fam.max_type; ++i) {
        const NodeId half = NodeId{1} << i;
        for (std::size_t c = 0; c < fam.copies; ++c) {
            const auto comp = static_cast<std::uint32_t>(fam.component_type.size());
            fam.component_type.push_back(i);
            fam.component_start.push_back(next);
            for (NodeId a = 0; a < half; ++a)
                for (NodeId b = 0; b < half; ++b)
                    edges.emplace_back(next + a, next + half + b);
            for (NodeId k = 0; k < 2 * half; ++k) {
                fam.component.push_back(comp);
                fam.side.push_back(k < half ? 0 : 1);
            }
            next += 2 * half;
        }
    }
    fam.graph = Graph::from_edges(next, edges);
    return fam;
}

} // namespace misbeep
