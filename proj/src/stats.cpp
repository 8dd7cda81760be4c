#include "percolab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace percolab {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_sd: needs >= 2 values");
    double m = mean(xs), s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty input");
    std::sort(xs.begin(), xs.end());
    size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

LeastSquares least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 matching points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("least_squares: degenerate x values");
    LeastSquares fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ssRes = 0, ssTot = 0, my = sy / n;
    for (size_t i = 0; i < xs.size(); ++i) {
        double pred = fit.slope * xs[i] + fit.intercept;
        ssRes += (ys[i] - pred) * (ys[i] - pred);
        ssTot += (ys[i] - my) * (ys[i] - my);
    }
    fit.r2 = ssTot == 0 ? 1.0 : 1.0 - ssRes / ssTot;
    return fit;
}

WilsonInterval wilson_interval(uint64_t successes, uint64_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return WilsonInterval{p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    std::set<double> distinct;
    for (auto& [d, v] : points) {
        if (!(d > 0.0) || !(v > 0.0))
            throw std::invalid_argument("fit_power_law: points must be positive");
        distinct.insert(d);
    }
    if (distinct.size() < 3) throw std::invalid_argument("fit_power_law: need >= 3 distinct d values");
    std::vector<double> lx, ly;
    for (auto& [d, v] : points) {
        lx.push_back(std::log(d));
        ly.push_back(std::log(v));
    }
    LeastSquares fit = least_squares(lx, ly);
    return PowerLawFit{fit.slope, fit.intercept, fit.r2};
}

} // namespace percolab
