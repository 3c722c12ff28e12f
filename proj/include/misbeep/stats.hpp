#ifndef MISBEEP_STATS_HPP
#define MISBEEP_STATS_HPP

#include <Eigen/Dense>

#include <span>
#include <utility>

namespace misbeep {

struct LinearFit
{
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

/// Ordinary least squares y ~ slope * x + intercept.
template <typename Scalar>
LinearFit fit_line(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                   const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y)
{
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    eigen_assert(x.size() == y.size() && x.size() >= 2);

    Mat design(x.size(), 2);
    design.col(0) = x;
    design.col(1).setOnes();
    const Vec beta = design.colPivHouseholderQr().solve(y);
    const Vec resid = y - design * beta;
    const Scalar ss_res = resid.squaredNorm();
    const Scalar ss_tot = (y.array() - y.mean()).matrix().squaredNorm();

    LinearFit fit;
    fit.slope = static_cast<double>(beta(0));
    fit.intercept = static_cast<double>(beta(1));
    fit.r_squared = ss_tot > Scalar(0) ? static_cast<double>(1 - ss_res / ss_tot) : 1.0;
    return fit;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

double mean(std::span<const double> v);

} // namespace misbeep

#endif
