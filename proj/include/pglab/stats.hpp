#pragma once

#include <cstdint>
#include <vector>

namespace pglab::stats {

/// Two-sided 99% normal quantile used for every interval in the project.
inline constexpr double kZ99 = 2.576;

struct Interval {
    double lo = 0, hi = 0;
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Wilson score interval for successes / trials (trials > 0).
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ99);

/// center +- z * sqrt(variance / trials).
Interval normal_interval(double center, double variance, std::uint64_t trials, double z = kZ99);

/// Unbiased sample mean and variance.
struct MeanVar {
    double mean = 0, variance = 0;
};
MeanVar mean_var(const std::vector<double>& xs);

/// Pearson statistic sum (O - E)^2 / E with E = total * probs[i].
double chi_square_statistic(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs);

/// Upper-tail critical value: Pr(X > c) = alpha for X ~ chi^2(dof).
double chi_square_critical(unsigned dof, double alpha);

}  // namespace pglab::stats
