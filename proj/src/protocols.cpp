#include "misbeep/protocols.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace misbeep {

std::string_view to_string(Algorithm a) noexcept
{
    switch (a) {
    case Algorithm::Algo1: return "algo1";
    case Algorithm::Algo1NoCd: return "algo1-nocd";
    case Algorithm::Algo2: return "algo2";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (auto a : {Algorithm::Algo1, Algorithm::Algo1NoCd, Algorithm::Algo2})
        if (to_string(a) == name)
            return a;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                                "' (expected algo1, algo1-nocd or algo2)");
}

ChannelMode required_mode(Algorithm a) noexcept
{
    return a == Algorithm::Algo1NoCd ? ChannelMode::BeepOnly : ChannelMode::ListenWhileBeeping;
}

std::uint32_t ceil_log2(std::uint64_t x) noexcept
{
    return x <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(x - 1));
}

ProtocolConfig algo1_config(std::uint64_t n_upper, std::uint32_t m)
{
    if (m == 0)
        throw std::invalid_argument("step factor M must be positive");
    ProtocolConfig cfg;
    cfg.algorithm = Algorithm::Algo1;
    cfg.bits = std::max<std::uint32_t>(1, ceil_log2(n_upper));
    cfg.steps_per_phase = m * cfg.bits;
    cfg.phase_count = cfg.bits + 1;
    return cfg;
}

ProtocolConfig algo1_nocd_config(std::uint64_t n_upper, std::uint32_t m, std::uint32_t c)
{
    if (c == 0)
        throw std::invalid_argument("window factor c must be positive");
    ProtocolConfig cfg = algo1_config(n_upper, m);
    cfg.algorithm = Algorithm::Algo1NoCd;
    cfg.window = c * cfg.bits;
    cfg.beep_slots = cfg.window / 2;
    return cfg;
}

ProtocolConfig algo2_config(std::uint32_t log2_big_n)
{
    ProtocolConfig cfg;
    cfg.algorithm = Algorithm::Algo2;
    cfg.bits = std::max<std::uint32_t>(1, log2_big_n);
    cfg.steps_per_phase = cfg.bits + 1;
    cfg.phase_count = 0;
    return cfg;
}

} // namespace misbeep
