#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "percolab/rng.hpp"

using namespace percolab;

TEST_SUITE("rng") {

TEST_CASE("philox matches pinned reference vectors") {
    // Known-answer vectors for Philox2x64-10; any drift in the round function
    // or constants would silently change every sample in the project.
    CHECK(philox2x64(0, 0, 0) == 0xca00a0459843d731ull);
    CHECK(philox2x64(1, 2, 3) == 0xdc4a47e4b0863b0aull);
    CHECK(philox2x64(7, 0x45444745ull, 42) == 0x2a42642bd0ba33e0ull);
}

TEST_CASE("philox is a pure function of (ctr, stream, key)") {
    CHECK(philox2x64(5, 6, 7) == philox2x64(5, 6, 7));
    CHECK(philox2x64(5, 6, 7) != philox2x64(6, 6, 7));
    CHECK(philox2x64(5, 6, 7) != philox2x64(5, 7, 7));
    CHECK(philox2x64(5, 6, 7) != philox2x64(5, 6, 8));
}

TEST_CASE("splitmix64_mix matches the reference finalizer") {
    CHECK(splitmix64_mix(0) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64_mix(1) == 0x910a2dec89025cc1ull);
    CHECK(splitmix64_mix(3) != splitmix64_mix(4));
}

TEST_CASE("CounterRng walks the counter and replays exactly") {
    CounterRng a(11, 22), b(11, 22);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    CHECK(a.counter() == 100);
    CounterRng c(11, 23);
    int diff = 0;
    CounterRng a2(11, 22);
    for (int i = 0; i < 100; ++i) diff += a2.next() != c.next();
    CHECK(diff > 90);
}

TEST_CASE("next_double lands in [0,1) with mean near 1/2") {
    CounterRng rng(123, 1);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // sd of the mean = 1/sqrt(12 n) ~ 0.00091; allow 5 sigma.
    CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("below stays in range and is close to uniform") {
    CounterRng rng(9, 9);
    CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
    std::vector<uint64_t> counts(8, 0);
    const int n = 80000;
    for (int i = 0; i < n; ++i) {
        uint64_t x = rng.below(8);
        REQUIRE(x < 8);
        ++counts[x];
    }
    // each bucket Binomial(80000, 1/8): sd ~ 93.5, allow 5 sigma.
    for (uint64_t k : counts) CHECK(std::abs(static_cast<double>(k) - 10000.0) < 470.0);
    // odd modulus exercises the rejection path
    for (int i = 0; i < 1000; ++i) REQUIRE(rng.below(7) < 7);
    CHECK(rng.below(1) == 0);
}

TEST_CASE("fisher_yates yields a deterministic permutation") {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    CounterRng rng(77, 3);
    fisher_yates(v, rng);
    std::vector<int> w(50);
    std::iota(w.begin(), w.end(), 0);
    CounterRng rng2(77, 3);
    fisher_yates(w, rng2);
    CHECK(v == w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
    // a different key gives a different shuffle
    std::vector<int> u(50);
    std::iota(u.begin(), u.end(), 0);
    CounterRng rng3(78, 3);
    fisher_yates(u, rng3);
    CHECK(u != v);
}

TEST_CASE("PoissonSampler rejects out-of-range means") {
    CHECK_THROWS_AS(PoissonSampler(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(PoissonSampler(701.0), std::invalid_argument);
    CHECK_NOTHROW(PoissonSampler(0.0));
}

TEST_CASE("PoissonSampler matches the first two moments of Poisson(2)") {
    PoissonSampler pois(2.0);
    CHECK(pois.mean() == 2.0);
    CounterRng rng(5, 8);
    const int n = 200000;
    double sum = 0, sumSq = 0;
    for (int i = 0; i < n; ++i) {
        double x = pois.sample(rng);
        sum += x;
        sumSq += x * x;
    }
    double m = sum / n;
    double var = sumSq / n - m * m;
    // sd of sample mean = sqrt(2/n) ~ 0.0032
    CHECK(std::abs(m - 2.0) < 0.016);
    CHECK(std::abs(var - 2.0) < 0.06);
}

TEST_CASE("PoissonSampler(0) always returns zero") {
    PoissonSampler pois(0.0);
    CounterRng rng(1, 1);
    for (int i = 0; i < 100; ++i) CHECK(pois.sample(rng) == 0);
}

} // TEST_SUITE
