#include "pglab/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

namespace pglab::stats {

Interval wilson(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("wilson: no trials");
    const double n = double(trials), ph = double(successes) / n, z2 = z * z;
    const double denom = 1 + z2 / n;
    const double center = (ph + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Interval normal_interval(double center, double variance, std::uint64_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("normal_interval: no trials");
    const double half = z * std::sqrt(variance / double(trials));
    return {center - half, center + half};
}

MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar r;
    if (xs.empty()) return r;
    double s = 0;
    for (double x : xs) s += x;
    r.mean = s / double(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.variance = ss / double(xs.size() - 1);
    }
    return r;
}

double chi_square_statistic(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs) {
    if (observed.size() != probs.size()) throw std::invalid_argument("chi_square_statistic: size mismatch");
    double total = 0;
    for (auto o : observed) total += double(o);
    double stat = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = total * probs[i];
        if (e <= 0) throw std::invalid_argument("chi_square_statistic: empty cell");
        stat += (double(observed[i]) - e) * (double(observed[i]) - e) / e;
    }
    return stat;
}

double chi_square_critical(unsigned dof, double alpha) {
    boost::math::chi_squared dist(dof);
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace pglab::stats
