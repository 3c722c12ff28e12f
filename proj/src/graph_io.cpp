#include "misbeep/graph_io.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace misbeep {

namespace {

bool skippable(const std::string& line)
{
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

} // namespace

void write_edge_list(std::ostream& os, const Graph& g)
{
    os << "n " << g.node_count() << '\n';
    for (auto [u, v] : g.edges())
        os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is)
{
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (skippable(line))
            continue;
        std::istringstream ls(line);
        if (!n) {
            std::string tag;
            long long count = -1;
            if (!(ls >> tag >> count) || tag != "n" || count < 0)
                throw ParseError(lineno, "expected header 'n <node_count>'");
            n = static_cast<std::size_t>(count);
            continue;
        }
        long long u = -1, v = -1;
        std::string extra;
        if (!(ls >> u >> v) || (ls >> extra))
            throw ParseError(lineno, "expected 'u v'");
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= *n || static_cast<std::size_t>(v) >= *n)
            throw ParseError(lineno, "node index out of range");
        if (u >= v)
            throw ParseError(lineno, "edge must satisfy u < v");
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    if (!n)
        throw ParseError(lineno + 1, "missing header 'n <node_count>'");
    try {
        return Graph::from_edges(*n, edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
    }
}

void write_status_list(std::ostream& os, const std::vector<TerminalStatus>& status)
{
    for (std::size_t v = 0; v < status.size(); ++v)
        os << v << ' ' << to_string(status[v]) << '\n';
}

std::vector<TerminalStatus> read_status_list(std::istream& is, std::size_t node_count)
{
    std::vector<std::optional<TerminalStatus>> seen(node_count);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (skippable(line))
            continue;
        std::istringstream ls(line);
        long long v = -1;
        std::string name, extra;
        if (!(ls >> v >> name) || (ls >> extra))
            throw ParseError(lineno, "expected '<node> <STATUS>'");
        if (v < 0 || static_cast<std::size_t>(v) >= node_count)
            throw ParseError(lineno, "node index out of range");
        if (seen[v])
            throw ParseError(lineno, "duplicate status for node " + std::to_string(v));
        try {
            seen[v] = parse_status(name);
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    std::vector<TerminalStatus> out(node_count);
    for (std::size_t v = 0; v < node_count; ++v) {
        if (!seen[v])
            throw ParseError(lineno, "no status given for node " + std::to_string(v));
        out[v] = *seen[v];
    }
    return out;
}

} // namespace misbeep
