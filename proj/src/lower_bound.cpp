#include "misbeep/lower_bound.hpp"

#include "misbeep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace misbeep {

double failure_prob(double p, std::uint32_t i)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("probability must lie in [0, 1]");
    const double log_q = std::log1p(-p); // -inf at p = 1
    const double side = std::ldexp(1.0, static_cast<int>(i));
    const double silent = std::exp(2.0 * side * log_q);
    const double one_side = -std::expm1(side * log_q); // 1 - (1-p)^(2^i)
    return silent + one_side * one_side;
}

std::uint32_t product_max_type(double log_n)
{
    if (!(log_n > 0.0))
        throw std::invalid_argument("log_n must be positive");
    return static_cast<std::uint32_t>(std::floor(log_n / 4.0));
}

FailureProduct round_failure_product(double p, double log_n)
{
    FailureProduct fp;
    fp.log_n = log_n;
    fp.p = p;
    const auto top = product_max_type(log_n);
    fp.per_type.reserve(top + 1);
    for (std::uint32_t j = 0; j <= top; ++j) {
        const double f = failure_prob(p, j);
        fp.per_type.push_back(f);
        fp.log_product += std::log(f);
    }
    fp.product = std::exp(fp.log_product);
    return fp;
}

ProductMinimum min_product_over_grid(double log_n, std::span<const double> grid)
{
    if (grid.empty())
        throw std::invalid_argument("empty probability grid");
    ProductMinimum best;
    best.log_product = std::numeric_limits<double>::infinity();
    for (double p : grid) {
        const auto fp = round_failure_product(p, log_n);
        if (fp.log_product < best.log_product) {
            best.p = p;
            best.log_product = fp.log_product;
            best.product = fp.product;
        }
    }
    return best;
}

ProductMinimum min_product_over_p(double log_n, double resolution)
{
    if (!(resolution > 0.0 && resolution <= 1.0))
        throw std::invalid_argument("grid resolution must lie in (0, 1]");
    const auto steps = static_cast<std::size_t>(std::ceil(1.0 / resolution));
    std::vector<double> grid;
    grid.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        grid.push_back(std::min(1.0, static_cast<double>(k) * resolution));
    auto coarse = min_product_over_grid(log_n, grid);

    grid.clear();
    const double lo = std::max(0.0, coarse.p - resolution);
    const double hi = std::min(1.0, coarse.p + resolution);
    const double fine = resolution / 100.0;
    for (double p = lo; p <= hi; p += fine)
        grid.push_back(p);
    grid.push_back(hi);
    auto refined = min_product_over_grid(log_n, grid);
    return refined.log_product < coarse.log_product ? refined : coarse;
}

std::uint32_t probability_bracket(double p)
{
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("bracket needs p in (0, 1]");
    int e = 0;
    const double m = std::frexp(p, &e); // p = m 2^e, m in [0.5, 1)
    return static_cast<std::uint32_t>(m == 0.5 ? 1 - e : -e);
}

FactorBoundCheck check_factor_bounds(double p, double log_n)
{
    FactorBoundCheck c;
    c.k = probability_bracket(p);
    const auto top = product_max_type(log_n);
    c.k_factor = failure_prob(p, c.k);
    c.k_factor_ok = c.k_factor > 0.1;
    c.worst_tail_margin = std::numeric_limits<double>::infinity();
    for (std::uint32_t j = c.k + 1; j <= top; ++j) {
        const double bound = 1.0 - 2.0 * std::exp(-std::ldexp(1.0, static_cast<int>(j - c.k)));
        const double margin = failure_prob(p, j) - bound;
        ++c.tail_checked;
        if (margin < 0)
            ++c.tail_violations;
        c.worst_tail_margin = std::min(c.worst_tail_margin, margin);
    }
    return c;
}

std::uint32_t hard_round_count(double log_n)
{
    const double t = 0.01 * log_n * log_n;
    // guard against 0.01 * 12^2 = 1.4400000000000002 style rounding
    return static_cast<std::uint32_t>(std::ceil(t - 1e-9));
}

UniformSchedule adversarial_schedule(double log_n, std::uint32_t rounds, double resolution)
{
    const auto best = min_product_over_p(log_n, resolution);
    return UniformSchedule{std::vector<double>(rounds, best.p)};
}

std::vector<std::optional<std::uint32_t>> simulate_uniform_process(const BipartiteFamily& family,
                                                                   const UniformSchedule& schedule,
                                                                   std::uint64_t seed)
{
    const std::size_t comps = family.component_count();
    std::vector<std::optional<std::uint32_t>> first(comps);
    std::vector<std::uint8_t> beeped(2 * comps);
    const std::size_t n = family.graph.node_count();

    for (std::uint32_t t = 0; t < schedule.p.size(); ++t) {
        const double p = schedule.p[t];
        std::fill(beeped.begin(), beeped.end(), 0);
        for (NodeId v = 0; v < n; ++v) {
            Rng coin = Rng::substream(seed ^ mix64(t + 1), v);
            if (coin.uniform() < p)
                beeped[2 * family.component[v] + family.side[v]] = 1;
        }
        for (std::size_t c = 0; c < comps; ++c)
            if (!first[c] && beeped[2 * c] != beeped[2 * c + 1])
                first[c] = t + 1;
    }
    return first;
}

double empirical_failure_rate(std::uint32_t i, double p, std::uint64_t trials, std::uint64_t seed)
{
    if (trials < 1)
        throw std::invalid_argument("need at least one trial");
    const std::uint64_t side = std::uint64_t{1} << i;
    Rng rng(mix64(seed ^ 0x3c6ef372fe94f82bULL));
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool left = false, right = false;
        for (std::uint64_t k = 0; k < side; ++k)
            left |= rng.uniform() < p;
        for (std::uint64_t k = 0; k < side; ++k)
            right |= rng.uniform() < p;
        failures += left == right;
    }
    return static_cast<double>(failures) / static_cast<double>(trials);
}

} // namespace misbeep
