#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

// Counter-based pseudo-randomness (Philox 2x64, 10 rounds).  Every random
// quantity in the project is a pure function of (key, stream, counter), which
// is what makes samples replayable without storing them and makes results
// independent of thread scheduling.

namespace percolab {

namespace rngdetail {

inline void mulhilo64(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<uint64_t>(prod >> 64);
    lo = static_cast<uint64_t>(prod);
}

constexpr uint64_t kPhiloxM = 0xD2B74407B1CE6E93ull;
constexpr uint64_t kPhiloxW = 0x9E3779B97F4A7C15ull;

} // namespace rngdetail

// One 64-bit word from the Philox2x64-10 block keyed by `key` at counter
// position (ctr, stream).
inline uint64_t philox2x64(uint64_t ctr, uint64_t stream, uint64_t key) {
    uint64_t x0 = ctr, x1 = stream, k = key;
    for (int round = 0; round < 10; ++round) {
        uint64_t hi, lo;
        rngdetail::mulhilo64(rngdetail::kPhiloxM, x0, hi, lo);
        x0 = hi ^ k ^ x1;
        x1 = lo;
        k += rngdetail::kPhiloxW;
    }
    return x0;
}

// Stateless splitmix64 finalizer; used for seed derivation.
inline uint64_t splitmix64_mix(uint64_t x) {
    uint64_t z = x + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Sequential convenience view over the counter space: fixed (key, stream),
// incrementing counter.
class CounterRng {
public:
    CounterRng(uint64_t key, uint64_t stream) : key_(key), stream_(stream) {}

    uint64_t next() { return philox2x64(ctr_++, stream_, key_); }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased uniform in [0, n) (Lemire multiply-shift with rejection).
    uint64_t below(uint64_t n) {
        if (n == 0) throw std::invalid_argument("below: n must be positive");
        uint64_t x = next();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
        uint64_t lo = static_cast<uint64_t>(m);
        if (lo < n) {
            uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next();
                m = static_cast<unsigned __int128>(x) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    uint64_t counter() const { return ctr_; }

private:
    uint64_t key_;
    uint64_t stream_;
    uint64_t ctr_ = 0;
};

template <typename T>
void fisher_yates(std::vector<T>& v, CounterRng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

// Poisson sampler by CDF inversion with a precomputed table; one uniform per
// draw, exact determinism for a fixed mean.
class PoissonSampler {
public:
    explicit PoissonSampler(double mean);
    uint32_t sample(CounterRng& rng) const {
        double u = rng.next_double();
        size_t k = 0;
        while (k + 1 < cdf_.size() && u >= cdf_[k]) ++k;
        return static_cast<uint32_t>(k);
    }
    double mean() const { return mean_; }

private:
    double mean_;
    std::vector<double> cdf_;
};

inline PoissonSampler::PoissonSampler(double mean) : mean_(mean) {
    if (!(mean >= 0.0) || mean > 700.0)
        throw std::invalid_argument("PoissonSampler: mean out of range");
    // pmf(0) = e^-mean; pmf(k) = pmf(k-1) * mean / k.  Extend until the
    // remaining tail is below 1e-17; draws past the table end return its
    // last index.
    double pmf = std::exp(-mean);
    double cum = pmf;
    cdf_.push_back(cum);
    size_t k = 1;
    while (1.0 - cum > 1e-17 && k < 4096) {
        pmf *= mean / static_cast<double>(k);
        cum += pmf;
        cdf_.push_back(cum);
        ++k;
    }
}

} // namespace percolab
