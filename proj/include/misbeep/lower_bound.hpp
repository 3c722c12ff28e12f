#ifndef MISBEEP_LOWER_BOUND_HPP
#define MISBEEP_LOWER_BOUND_HPP

#include "misbeep/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace misbeep {

/// Probability that one K_{2^i,2^i} suffers a broadcast failure in a round
/// where every node beeps independently with probability p: either nobody
/// beeps, or both sides contain a beeper.
///   (1-p)^(2^(i+1)) + (1 - (1-p)^(2^i))^2
double failure_prob(double p, std::uint32_t i);

/// Largest component type that enters the per-round product: floor(log_n / 4).
std::uint32_t product_max_type(double log_n);

struct FailureProduct
{
    double log_n = 0;
    double p = 0;
    std::vector<double> per_type; // index j = 0..product_max_type(log_n)
    double log_product = 0;
    double product = 1;
};

/// Product of failure_prob(p, j) over j = 0..floor(log_n/4), accumulated
/// in log space.
FailureProduct round_failure_product(double p, double log_n);

struct ProductMinimum
{
    double p = 0;
    double product = 1;
    double log_product = 0;
};

/// Minimum of round_failure_product over p in [0, 1]: a uniform grid at
/// `resolution`, refined on a 100x finer grid around the coarse minimizer.
ProductMinimum min_product_over_p(double log_n, double resolution = 1e-4);

/// Minimum over an explicit set of probabilities (no refinement).
ProductMinimum min_product_over_grid(double log_n, std::span<const double> grid);

/// The integer k with 2^-(k+1) < p <= 2^-k, for p in (0, 1].
std::uint32_t probability_bracket(double p);

/// Per-factor inequalities for one p: the j = k factor exceeds 0.1 and each
/// j > k factor is at least 1 - 2 exp(-2^(j-k)).
struct FactorBoundCheck
{
    std::uint32_t k = 0;
    double k_factor = 1;
    bool k_factor_ok = true;
    std::uint32_t tail_checked = 0;
    std::uint32_t tail_violations = 0;
    double worst_tail_margin = 0; // min over j > k of factor - bound
};

FactorBoundCheck check_factor_bounds(double p, double log_n);

/// Per-round beep probabilities shared by every node.
struct UniformSchedule
{
    std::vector<double> p;
};

/// Number of rounds in the hard-instance experiment: ceil(0.01 log_n^2).
std::uint32_t hard_round_count(double log_n);

/// Schedule of `rounds` copies of the single probability minimizing the
/// per-round failure product.
UniformSchedule adversarial_schedule(double log_n, std::uint32_t rounds, double resolution = 1e-4);

/// Every node of `family` beeps with p_t in round t = 1..T. Returns, per
/// component, the first round in which exactly one side had a beeper, or
/// nullopt if every round was a broadcast failure.
std::vector<std::optional<std::uint32_t>> simulate_uniform_process(const BipartiteFamily& family,
                                                                   const UniformSchedule& schedule,
                                                                   std::uint64_t seed);

/// Monte-Carlo estimate of failure_prob(p, i) from `trials` independent
/// rounds on a single K_{2^i,2^i}.
double empirical_failure_rate(std::uint32_t i, double p, std::uint64_t trials, std::uint64_t seed);

} // namespace misbeep

#endif
