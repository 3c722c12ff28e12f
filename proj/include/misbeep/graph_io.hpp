#ifndef MISBEEP_GRAPH_IO_HPP
#define MISBEEP_GRAPH_IO_HPP

#include "misbeep/graph.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace misbeep {

/// Parse failure carrying the 1-based line number of the offending input.
class ParseError : public std::runtime_error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Edge list: "n <node_count>" then one "u v" per line, 0-indexed, u < v.
// Blank lines and lines starting with '#' are skipped.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

// Status list: one "<node> <STATUS>" per node.
void write_status_list(std::ostream& os, const std::vector<TerminalStatus>& status);
std::vector<TerminalStatus> read_status_list(std::istream& is, std::size_t node_count);

} // namespace misbeep

#endif
