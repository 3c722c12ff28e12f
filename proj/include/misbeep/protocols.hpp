#ifndef MISBEEP_PROTOCOLS_HPP
#define MISBEEP_PROTOCOLS_HPP

#include "misbeep/channel.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace misbeep {

/// Lifecycle shared by every node automaton the engine drives.
enum class Stage : std::uint8_t {
    Asleep,
    WakeBroadcast, // emitting the one-time wake-up beep
    WaitRound,     // silent round while neighbors wake their neighbors
    Running,
    InMIS,
    Inactive,
    Failed,
};

constexpr bool is_terminal(Stage s) noexcept
{
    return s == Stage::InMIS || s == Stage::Inactive || s == Stage::Failed;
}

enum class Algorithm : std::uint8_t { Algo1, Algo1NoCd, Algo2 };

std::string_view to_string(Algorithm a) noexcept;
/// Accepts "algo1", "algo1-nocd", "algo2".
Algorithm parse_algorithm(std::string_view name);

/// Channel mode each protocol is designed for.
ChannelMode required_mode(Algorithm a) noexcept;

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
std::uint32_t ceil_log2(std::uint64_t x) noexcept;

/// Candidate probability 2^(index - bits) of the step at `index`.
inline double phase_probability(std::uint32_t index, std::uint32_t bits) noexcept
{
    return std::ldexp(1.0, static_cast<int>(index) - static_cast<int>(bits));
}

/// Static shape of one protocol run, shared by every node.
struct ProtocolConfig
{
    Algorithm algorithm = Algorithm::Algo1;
    std::uint32_t bits = 1;            // L = ceil(log2 n_upper) or ceil(log2 N) for algo2
    std::uint32_t steps_per_phase = 1; // M*L, or L_N + 1 for algo2
    std::uint32_t phase_count = 0;     // L + 1 phases; 0 means repeat until exit
    std::uint32_t window = 0;          // c*L contention slots, no-CD variant only
    std::uint32_t beep_slots = 0;      // floor(window / 2)

    /// Exchange 1 is (listen, act, listen); the no-CD variant replaces the
    /// act round with a coin round followed by `window` contention slots.
    std::uint32_t exchange1_rounds() const noexcept { return window == 0 ? 3 : window + 3; }
    std::uint32_t rounds_per_step() const noexcept { return exchange1_rounds() + 3; }
    bool uses_window() const noexcept { return algorithm == Algorithm::Algo1NoCd; }
};

inline constexpr std::uint32_t kDefaultStepFactor = 34; // M
inline constexpr std::uint32_t kDefaultWindowFactor = 8; // c

/// Algorithm 1 with collision detection. n_upper is the size bound the nodes
/// are given; L is clamped to at least 1 so a lone node still runs a phase.
ProtocolConfig algo1_config(std::uint64_t n_upper, std::uint32_t m = kDefaultStepFactor);
ProtocolConfig algo1_nocd_config(std::uint64_t n_upper, std::uint32_t m = kDefaultStepFactor,
                                 std::uint32_t c = kDefaultWindowFactor);
/// Algorithm 2, parameterized by L_N = ceil(log2 N) so that N up to 2^64
/// (and beyond) is representable.
ProtocolConfig algo2_config(std::uint32_t log2_big_n);

/// Where a running node is inside its loop nest. `round` is 1-based within
/// the exchange.
struct Coordinates
{
    std::uint64_t phase = 0;
    std::uint32_t step = 0;
    std::uint8_t exchange = 1;
    std::uint32_t round = 1;

    friend bool operator==(const Coordinates&, const Coordinates&) = default;
};

/// Anything that can hand out unit-uniform doubles and bounded integers.
template <class C>
concept CoinSource = requires(C& c, std::uint64_t bound) {
    { c.uniform() } -> std::convertible_to<double>;
    { c.below(bound) } -> std::convertible_to<std::uint64_t>;
};

/// Per-node MIS automaton covering all three protocols. The engine calls
/// act() once per awake round to obtain the node's action, then observe()
/// with the round's heard flag. Both are deterministic given the coin draws.
class MisNode
{
public:
    MisNode() = default;
    explicit MisNode(const ProtocolConfig& cfg) : cfg_(cfg) {}

    Stage stage() const noexcept { return stage_; }
    bool terminal() const noexcept { return is_terminal(stage_); }
    bool running() const noexcept { return stage_ == Stage::Running; }
    bool candidate() const noexcept { return candidate_; }
    bool suppressed() const noexcept { return suppressed_; }
    const ProtocolConfig& config() const noexcept { return cfg_; }

    Coordinates coordinates() const noexcept { return {phase_, step_, exchange_, round_}; }

    /// Number of phases this node has entered (0 before Running).
    std::uint64_t phases_started() const noexcept
    {
        switch (stage_) {
        case Stage::Asleep:
        case Stage::WakeBroadcast:
        case Stage::WaitRound:
            return 0;
        case Stage::Failed:
            return phase_;
        default:
            return phase_ + 1;
        }
    }

    /// Probability used by the current step's coin.
    double probability() const noexcept
    {
        const auto index = cfg_.algorithm == Algorithm::Algo2 ? step_ : static_cast<std::uint32_t>(phase_);
        return phase_probability(index, cfg_.bits);
    }

    /// True during the round in which the step coin is flipped.
    bool in_coin_round() const noexcept { return running() && exchange_ == 1 && round_ == 2; }

    /// True for the contention-window slots of the no-CD variant.
    bool in_window_slot() const noexcept
    {
        return running() && exchange_ == 1 && cfg_.window > 0 && round_ >= 3 && round_ < cfg_.window + 3;
    }

    /// Spontaneous wake-up.
    void wake() noexcept
    {
        if (stage_ == Stage::Asleep)
            stage_ = Stage::WakeBroadcast;
    }

    template <CoinSource Coins>
    RoundAction act(Coins& coins)
    {
        switch (stage_) {
        case Stage::WakeBroadcast:
            return RoundAction::Beep;
        case Stage::Running:
            break;
        default:
            return RoundAction::Listen;
        }

        if (exchange_ == 2)
            return round_ == 2 && candidate_ ? RoundAction::Beep : RoundAction::Listen;

        if (round_ == 2) {
            // one draw per step regardless of outcome
            candidate_ = coins.uniform() < probability();
            suppressed_ = false;
            if (cfg_.window == 0)
                return candidate_ ? RoundAction::Beep : RoundAction::Listen;
            if (candidate_)
                choose_slots(coins);
            return RoundAction::Listen;
        }
        if (cfg_.window > 0 && round_ >= 3 && round_ < cfg_.window + 3) {
            const bool mine = candidate_ && !suppressed_ && slots_[round_ - 3] != 0;
            return mine ? RoundAction::Beep : RoundAction::Listen;
        }
        return RoundAction::Listen;
    }

    void observe(bool heard) noexcept
    {
        switch (stage_) {
        case Stage::Asleep:
            if (heard)
                stage_ = Stage::WakeBroadcast;
            return;
        case Stage::WakeBroadcast:
            stage_ = Stage::WaitRound;
            return;
        case Stage::WaitRound:
            stage_ = Stage::Running;
            return;
        case Stage::Running:
            break;
        default:
            return;
        }

        if (exchange_ == 1) {
            if (heard) {
                candidate_ = false;
                suppressed_ = true;
            }
            if (++round_ > cfg_.exchange1_rounds()) {
                exchange_ = 2;
                round_ = 1;
            }
            return;
        }

        if (round_ == 2 && candidate_) {
            stage_ = Stage::InMIS;
            return;
        }
        if (heard) {
            stage_ = Stage::Inactive;
            return;
        }
        if (++round_ <= 3)
            return;

        exchange_ = 1;
        round_ = 1;
        candidate_ = false;
        if (++step_ < cfg_.steps_per_phase)
            return;
        step_ = 0;
        ++phase_;
        if (cfg_.phase_count != 0 && phase_ >= cfg_.phase_count)
            stage_ = Stage::Failed;
    }

private:
    template <CoinSource Coins>
    void choose_slots(Coins& coins)
    {
        // uniform beep_slots-subset of the window via partial Fisher-Yates
        slots_.assign(cfg_.window, 0);
        order_.resize(cfg_.window);
        for (std::uint32_t s = 0; s < cfg_.window; ++s)
            order_[s] = s;
        for (std::uint32_t k = 0; k < cfg_.beep_slots; ++k) {
            const auto pick = k + static_cast<std::uint32_t>(coins.below(cfg_.window - k));
            std::swap(order_[k], order_[pick]);
            slots_[order_[k]] = 1;
        }
    }

    ProtocolConfig cfg_{};
    Stage stage_ = Stage::Asleep;
    std::uint64_t phase_ = 0;
    std::uint32_t step_ = 0;
    std::uint8_t exchange_ = 1;
    std::uint32_t round_ = 1;
    bool candidate_ = false;
    bool suppressed_ = false;
    std::vector<std::uint8_t> slots_;
    std::vector<std::uint32_t> order_;
};

} // namespace misbeep

#endif
