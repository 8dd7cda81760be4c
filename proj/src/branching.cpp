#include "percolab/branching.hpp"

#include <cmath>
#include <stdexcept>

namespace percolab {

namespace {

constexpr int kIterationCap = 1000000;
constexpr uint64_t kGwStream = 0x47574257ull; // domain tag for branching draws

SurvivalSolution iterate_smallest_fixed_point(OffspringKind kind, double mean, double tol,
                                              double (*pgf)(double q, double a, double b),
                                              double a, double b) {
    if (!(tol > 0.0)) throw std::invalid_argument("survival solver: tol must be positive");
    if (mean <= 1.0) {
        // Subcritical/critical: the smallest fixed point in [0,1] is 1.
        return SurvivalSolution{kind, 0.0, 1.0, std::abs(pgf(1.0, a, b) - 1.0), 0};
    }
    double q = 0.0;
    for (int it = 1; it <= kIterationCap; ++it) {
        double next = pgf(q, a, b);
        if (std::abs(next - q) < tol) {
            double residual = std::abs(pgf(next, a, b) - next);
            return SurvivalSolution{kind, 1.0 - next, next, residual, it};
        }
        q = next;
    }
    throw std::runtime_error("survival solver: no convergence within iteration cap (tol too small?)");
}

double poisson_pgf(double q, double c, double) { return std::exp(c * (q - 1.0)); }

double binomial_pgf(double q, double n, double p) {
    return std::exp(n * std::log1p(-p * (1.0 - q)));
}

} // namespace

SurvivalSolution solve_poisson_survival(double c, double tol) {
    if (!(c > 0.0)) throw std::invalid_argument("solve_poisson_survival: c must be positive");
    return iterate_smallest_fixed_point(OffspringKind::Poisson, c, tol, poisson_pgf, c, 0.0);
}

SurvivalSolution solve_binomial_survival(int64_t n, double p, double tol) {
    if (n < 1) throw std::invalid_argument("solve_binomial_survival: n must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("solve_binomial_survival: p out of [0,1]");
    return iterate_smallest_fixed_point(OffspringKind::Binomial, static_cast<double>(n) * p, tol,
                                        binomial_pgf, static_cast<double>(n), p);
}

double borel_weight(double c, uint64_t k) {
    if (!(c > 0.0)) throw std::invalid_argument("borel_weight: c must be positive");
    if (k < 1) throw std::invalid_argument("borel_weight: k must be >= 1");
    double kd = static_cast<double>(k);
    return std::exp(-c * kd + (kd - 1.0) * std::log(c * kd) - std::lgamma(kd + 1.0));
}

int64_t tail_cutoff(int64_t t, int64_t n, double c) {
    if (t < 1 || t > n) throw std::invalid_argument("tail_cutoff: need 1 <= t <= n");
    if (!(c > 1.0)) throw std::invalid_argument("tail_cutoff: needs c > 1");
    double x = std::exp(1.0) * c * std::exp(-c); // e c e^{-c} < 1 for c > 1
    double value = std::log(4.0 * static_cast<double>(n) / (static_cast<double>(t) * (1.0 - x))) /
                   (-std::log(x));
    return static_cast<int64_t>(std::ceil(value));
}

GwResult gw_sample(const Offspring& offspring, uint64_t sizeCap, uint64_t seed,
                   const PoissonSampler* table) {
    if (sizeCap < 1) throw std::invalid_argument("gw_sample: sizeCap must be >= 1");
    CounterRng rng(seed, kGwStream);

    PoissonSampler local(0.0);
    if (offspring.kind == OffspringKind::Poisson && table == nullptr) {
        local = PoissonSampler(offspring.c);
        table = &local;
    }
    if (offspring.kind == OffspringKind::Binomial && offspring.n > 100000)
        throw std::invalid_argument("gw_sample: binomial n too large for per-child sampling");

    uint64_t living = 1, settled = 0;
    while (living > 0) {
        uint64_t children = 0;
        if (offspring.kind == OffspringKind::Poisson) {
            children = table->sample(rng);
        } else {
            for (int64_t i = 0; i < offspring.n; ++i)
                if (rng.next_double() < offspring.p) ++children;
        }
        ++settled;
        living += children;
        --living;
        if (living + settled > sizeCap) return GwResult{true, 0};
    }
    return GwResult{false, settled};
}

double ProgenyStatistics::tail_at(uint64_t k) const {
    uint64_t count = 0;
    for (uint64_t s = k; s < histogram.size(); ++s) count += histogram[s];
    return static_cast<double>(count) / static_cast<double>(trials);
}

ProgenyStatistics progeny_monte_carlo(const Offspring& offspring, uint64_t trials,
                                      uint64_t sizeCap, uint64_t seed) {
    ProgenyStatistics stats;
    stats.offspring = offspring;
    stats.trials = trials;
    stats.sizeCap = sizeCap;
    stats.histogram.assign(sizeCap + 1, 0);

    PoissonSampler table(offspring.kind == OffspringKind::Poisson ? offspring.c : 0.0);
    const PoissonSampler* tp = offspring.kind == OffspringKind::Poisson ? &table : nullptr;

    for (uint64_t i = 0; i < trials; ++i) {
        uint64_t trialSeed = splitmix64_mix(seed + 0x9E3779B97F4A7C15ull * (i + 1));
        GwResult r = gw_sample(offspring, sizeCap, trialSeed, tp);
        if (r.capSurvived)
            ++stats.survivedCapCount;
        else
            ++stats.histogram[r.size];
    }
    return stats;
}

} // namespace percolab
