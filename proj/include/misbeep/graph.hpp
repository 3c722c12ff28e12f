#ifndef MISBEEP_GRAPH_HPP
#define MISBEEP_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace misbeep {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed adjacency form.
/// Neighbor lists are sorted, which doubles as the membership index
/// used by adjacent().
class Graph
{
public:
    Graph() = default;

    /// Builds from an edge list. Throws std::invalid_argument on self-loops,
    /// out-of-range endpoints or duplicate edges (in either orientation).
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const noexcept
    {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }

    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    bool adjacent(NodeId u, NodeId v) const noexcept;

    /// All edges as (u, v) with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

enum class TerminalStatus : std::uint8_t { InMIS, Inactive, Failed, NeverWoke };

std::string_view to_string(TerminalStatus s) noexcept;
/// Throws std::invalid_argument for unknown names.
TerminalStatus parse_status(std::string_view name);

struct VerificationResult
{
    bool is_independent = true;
    bool is_maximal = true;
    std::vector<NodeId> uncovered_nodes;
    std::vector<Edge> adjacent_mis_pairs;

    bool valid() const noexcept { return is_independent && is_maximal; }
};

/// Independence and maximality of the InMIS nodes. NeverWoke nodes took no
/// part in the run and are not required to be covered.
VerificationResult verify_mis(const Graph& g, std::span<const TerminalStatus> status);

/// Active vertices with at least d/3 active neighbors of no larger active
/// degree, degrees taken in the subgraph induced by `active`. Sorted.
std::vector<NodeId> good_vertices(const Graph& g, std::span<const NodeId> active);

Graph gen_clique(std::size_t n);
/// Throws std::invalid_argument for n < 3.
Graph gen_ring(std::size_t n);
Graph gen_gnp(std::size_t n, double p, std::uint64_t seed);

/// Disjoint union of complete bipartite components K_{2^i,2^i}, with
/// per-node component bookkeeping.
struct BipartiteFamily
{
    Graph graph;
    std::vector<std::uint32_t> component;      // per node
    std::vector<std::uint8_t> side;            // per node, 0 or 1
    std::vector<std::uint32_t> component_type; // per component, the i in K_{2^i,2^i}
    std::vector<NodeId> component_start;       // first node of each component
    std::uint32_t max_type = 0;
    std::size_t copies = 0;

    std::size_t component_count() const noexcept { return component_type.size(); }
    std::uint32_t type_of(NodeId v) const noexcept { return component_type[component[v]]; }
};

/// Types i = 1..floor(log2(n)/4), each with ceil(n^0.7) copies.
/// Throws std::invalid_argument for n < 16.
BipartiteFamily gen_bipartite_family(std::size_t n);

/// Closed-form node and edge counts of gen_bipartite_family(n).
std::pair<std::size_t, std::size_t> bipartite_family_size(std::size_t n);

} // namespace misbeep

#endif
