#ifndef MISBEEP_WAKEUP_HPP
#define MISBEEP_WAKEUP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace misbeep {

using Round = std::uint64_t;

struct WakeAllAtZero {};

struct WakeExplicit
{
    std::vector<std::optional<Round>> rounds; // per node; nullopt = only wakes on a beep
};

/// ceil(fraction * n) distinct nodes (at least one), each waking at a
/// uniform round in [0, max_round].
struct WakeRandomSubset
{
    double fraction = 0.1;
    Round max_round = 0;
    std::uint64_t seed = 0;
};

using WakeupSchedule = std::variant<WakeAllAtZero, WakeExplicit, WakeRandomSubset>;

/// Per-node spontaneous wake round. Throws std::invalid_argument when the
/// schedule does not fit `node_count` or would wake nobody.
std::vector<std::optional<Round>> spontaneous_rounds(const WakeupSchedule& s, std::size_t node_count);

/// Short label for CSV output: "sync", "random:<f>:<r>", "explicit".
std::string describe(const WakeupSchedule& s);

} // namespace misbeep

#endif
