#pragma once

#include <cstdint>
#include <vector>

#include "percolab/rng.hpp"

// Branching-process side of the theory: survival probabilities for Poisson
// and Binomial offspring, Borel total-progeny weights, the tail cutoff used
// to truncate component-size sums, and a Galton-Watson Monte Carlo oracle.

namespace percolab {

enum class OffspringKind { Poisson, Binomial };

struct Offspring {
    OffspringKind kind;
    double c = 0;   // Poisson mean
    int64_t n = 0;  // Binomial trials
    double p = 0;   // Binomial success probability

    static Offspring poisson(double c) { return {OffspringKind::Poisson, c, 0, 0}; }
    static Offspring binomial(int64_t n, double p) { return {OffspringKind::Binomial, 0, n, p}; }
    double mean() const { return kind == OffspringKind::Poisson ? c : static_cast<double>(n) * p; }
};

struct SurvivalSolution {
    OffspringKind kind;
    double survival;   // 1 - extinction
    double extinction; // smallest fixed point of the offspring pgf in [0,1]
    double residual;   // |pgf(extinction) - extinction|
    int iterations;
};

// Monotone fixed-point iteration q <- e^{c(q-1)} from q0 = 0; the iterates
// increase to the smallest fixed point.  Subcritical means (mean <= 1) short-
// circuit to extinction 1, the known smallest fixed point.
SurvivalSolution solve_poisson_survival(double c, double tol = 1e-12);

// Same iteration for q <- (1 - p + p q)^n.
SurvivalSolution solve_binomial_survival(int64_t n, double p, double tol = 1e-12);

// e^{-ck} (ck)^{k-1} / k!, the probability that a Poisson(c) Galton-Watson
// tree has total progeny exactly k.  Log-space to survive large k.
double borel_weight(double c, uint64_t k);

// ceil( log(4n / (t (1 - e c e^{-c}))) / (-log(e c e^{-c})) ); needs c > 1 so
// that e c e^{-c} < 1.  Borel mass above the cutoff is at most t/(4n).
int64_t tail_cutoff(int64_t t, int64_t n, double c);

struct GwResult {
    bool capSurvived; // living + settled exceeded sizeCap
    uint64_t size;    // total progeny when finite
};

// Breadth-first simulation of the tree; aborts with capSurvived once the
// living population plus the settled count exceeds sizeCap.
GwResult gw_sample(const Offspring& offspring, uint64_t sizeCap, uint64_t seed,
                   const PoissonSampler* table = nullptr);

struct ProgenyStatistics {
    Offspring offspring;
    uint64_t trials = 0;
    uint64_t sizeCap = 0;
    uint64_t survivedCapCount = 0;
    std::vector<uint64_t> histogram; // histogram[s] = trials with total progeny s (s <= sizeCap)

    // Empirical P(progeny >= k, finite).
    double tail_at(uint64_t k) const;
};

ProgenyStatistics progeny_monte_carlo(const Offspring& offspring, uint64_t trials,
                                      uint64_t sizeCap, uint64_t seed);

} // namespace percolab
