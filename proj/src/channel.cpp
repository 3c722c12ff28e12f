#include "misbeep/channel.hpp"

#include <stdexcept>
#include <string>

namespace misbeep {

std::string_view to_string(ChannelMode m) noexcept
{
    return m == ChannelMode::ListenWhileBeeping ? "cd" : "beep-only";
}

ChannelMode parse_channel_mode(std::string_view name)
{
    if (name == "cd" || name == "listen-while-beeping")
        return ChannelMode::ListenWhileBeeping;
    if (name == "beep-only" || name == "nocd")
        return ChannelMode::BeepOnly;
    throw std::invalid_argument("unknown channel mode '" + std::string(name) + "'");
}

std::vector<bool> deliver_round(const Graph& g, std::span<const NodeId> beepers, ChannelMode mode)
{
    std::vector<bool> heard(g.node_count(), false);
    for (NodeId u : beepers)
        for (NodeId v : g.neighbors(u))
            heard[v] = true;
    if (mode == ChannelMode::BeepOnly)
        for (NodeId u : beepers)
            heard[u] = false;
    return heard;
}

} // namespace misbeep
