#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Small statistics helpers shared by experiments and tests.

namespace percolab {

double mean(const std::vector<double>& xs);
double sample_sd(const std::vector<double>& xs);
double median(std::vector<double> xs); // by value: sorts a copy

struct LeastSquares {
    double slope;
    double intercept;
    double r2;
};

LeastSquares least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

struct WilsonInterval {
    double pHat;
    double low;
    double high;
};

WilsonInterval wilson_interval(uint64_t successes, uint64_t trials, double z = 1.96);

struct PowerLawFit {
    double exponent;
    double logIntercept;
    double r2;
};

// Least squares on (log d, log value); requires >= 3 distinct d and positive values.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

} // namespace percolab
