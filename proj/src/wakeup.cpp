#include "misbeep/wakeup.hpp"

#include "misbeep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace misbeep {

namespace {

struct Resolver
{
    std::size_t n;

    std::vector<std::optional<Round>> operator()(const WakeAllAtZero&) const
    {
        return std::vector<std::optional<Round>>(n, Round{0});
    }

    std::vector<std::optional<Round>> operator()(const WakeExplicit& s) const
    {
        if (s.rounds.size() != n)
            throw std::invalid_argument("explicit wake-up list has " + std::to_string(s.rounds.size()) +
                                        " entries for " + std::to_string(n) + " nodes");
        return s.rounds;
    }

    std::vector<std::optional<Round>> operator()(const WakeRandomSubset& s) const
    {
        if (!(s.fraction > 0.0 && s.fraction <= 1.0))
            throw std::invalid_argument("wake-up fraction must lie in (0, 1]");
        const auto count = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::ceil(s.fraction * static_cast<double>(n))), 1, n);
        Rng rng(mix64(s.seed ^ 0xbb67ae8584caa73bULL));
        std::vector<NodeIdx> order(n);
        std::iota(order.begin(), order.end(), NodeIdx{0});
        // partial Fisher-Yates
        for (std::size_t k = 0; k < count; ++k)
            std::swap(order[k], order[k + rng.below(n - k)]);
        std::vector<std::optional<Round>> out(n);
        for (std::size_t k = 0; k < count; ++k)
            out[order[k]] = rng.below(s.max_round + 1);
        return out;
    }

    using NodeIdx = std::size_t;
};

} // namespace

std::vector<std::optional<Round>> spontaneous_rounds(const WakeupSchedule& s, std::size_t node_count)
{
    auto out = std::visit(Resolver{node_count}, s);
    if (node_count > 0 && std::none_of(out.begin(), out.end(), [](auto r) { return r.has_value(); }))
        throw std::invalid_argument("wake-up schedule wakes no node");
    return out;
}

std::string describe(const WakeupSchedule& s)
{
    if (std::holds_alternative<WakeAllAtZero>(s))
        return "sync";
    if (auto* r = std::get_if<WakeRandomSubset>(&s)) {
        std::ostringstream os;
        os << "random:" << r->fraction << ':' << r->max_round;
        return os.str();
    }
    return "explicit";
}

} // namespace misbeep
