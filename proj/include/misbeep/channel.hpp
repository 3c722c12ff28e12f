#ifndef MISBEEP_CHANNEL_HPP
#define MISBEEP_CHANNEL_HPP

#include "misbeep/graph.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace misbeep {

/// Hearing semantics of a round.
enum class ChannelMode : std::uint8_t {
    ListenWhileBeeping, // a node hears iff some neighbor beeped
    BeepOnly,           // ... and it did not beep itself
};

enum class RoundAction : std::uint8_t { Listen, Beep };

std::string_view to_string(ChannelMode m) noexcept;
ChannelMode parse_channel_mode(std::string_view name);

/// Heard flag per node for one round. `beepers` may be in any order but
/// must not contain duplicates.
std::vector<bool> deliver_round(const Graph& g, std::span<const NodeId> beepers, ChannelMode mode);

} // namespace misbeep

#endif
