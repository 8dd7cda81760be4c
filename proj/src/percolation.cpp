#include "percolab/percolation.hpp"

#include <cmath>

namespace percolab {

PercolationParams make_params(int d, double c, uint64_t seed) {
    check_dim(d);
    if (!(c >= 0.0)) throw std::invalid_argument("make_params: c must be nonnegative");
    double p = c / static_cast<double>(d);
    if (p > 1.0) throw std::invalid_argument("make_params: p = c/d exceeds 1");
    if (std::abs(p * static_cast<double>(d) - c) > 1e-12)
        throw std::invalid_argument("make_params: p*d drifted from c");
    return PercolationParams{d, c, p, seed};
}

uint64_t open_threshold(double p) {
    if (p < 0.0 || p >= 1.0) throw std::invalid_argument("open_threshold: p must be in [0,1)");
    // p carries at most 53 significant bits, so p * 2^64 is exactly
    // representable in the 64-bit-mantissa long double; floorl is exact.
    return static_cast<uint64_t>(floorl(ldexpl(static_cast<long double>(p), 64)));
}

PercolationSample::PercolationSample(const PercolationParams& params)
    : params_(params), threshold_(0), allOpen_(params.p >= 1.0) {
    if (!allOpen_) threshold_ = open_threshold(params_.p);
}

SprinklingPair sprinkle_params(double c, double delta, int d, uint64_t sharedSeed) {
    if (!(delta > 0.0) || delta >= c) throw std::invalid_argument("sprinkle_params: need 0 < delta < c");
    PercolationParams base = make_params(d, c, sharedSeed);
    double p1 = (c - delta) / static_cast<double>(d);
    if (p1 >= 1.0) throw std::invalid_argument("sprinkle_params: p1 out of range");
    double p2 = (base.p - p1) / (1.0 - p1);
    SprinklingPair pair{base, delta, p1, p2, sharedSeed};
    if (std::abs((1.0 - p1) * (1.0 - p2) - (1.0 - base.p)) > 1e-12)
        throw std::logic_error("sprinkle_params: coupling identity violated");
    if (p2 * static_cast<double>(d) < delta - 1e-9)
        throw std::logic_error("sprinkle_params: p2*d fell below delta");
    return pair;
}

CoupledState coupled_edge_state(const SprinklingPair& pair, const EdgeId& e) {
    if (!e.canonical(pair.base.d)) throw std::invalid_argument("coupled_edge_state: non-canonical edge id");
    // One uniform decides both rounds; the G1 threshold equals the threshold
    // of a plain p1-sample with the shared seed, so G1 is pathwise a subgraph
    // of G2 and both marginals are exact.
    uint64_t r = philox2x64(e.index(pair.base.d), kEdgeStream, pair.sharedSeed);
    uint64_t t1 = open_threshold(pair.p1);
    uint64_t t2 = open_threshold(pair.base.p);
    if (r < t1) return CoupledState::InG1;
    if (r < t2) return CoupledState::InG2Only;
    return CoupledState::Closed;
}

} // namespace percolab
