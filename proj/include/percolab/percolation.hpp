#pragma once

#include <cstdint>
#include <vector>

#include "percolab/hypercube.hpp"
#include "percolab/rng.hpp"

// Bond percolation Q^d_p as a pure edge-state oracle: no edge list is ever
// stored, the state of an edge is recomputed from (seed, edge index) on every
// query.  Also the two-round sprinkling coupling G1 subseteq G2 realized from
// a single uniform per edge.

namespace percolab {

struct PercolationParams {
    int d;
    double c;     // mean-degree parameter, p = c/d
    double p;
    uint64_t seed;
};

PercolationParams make_params(int d, double c, uint64_t seed);

// Canonical name for the undirected edge {lower, lower XOR 2^coord}: lower is
// the endpoint whose bit `coord` is 0.  index = lower*d + coord < d*2^d.
struct EdgeId {
    VertexId lower;
    int coord;

    bool canonical(int d) const {
        return coord >= 0 && coord < d && lower < (1ull << d) && ((lower >> coord) & 1ull) == 0;
    }
    uint64_t index(int d) const { return lower * static_cast<uint64_t>(d) + static_cast<uint64_t>(coord); }
};

inline EdgeId edge_between(VertexId u, VertexId v, int d) {
    if (hamming(u, v) != 1) throw std::invalid_argument("edge_between: endpoints not adjacent");
    int coord = std::countr_zero(u ^ v);
    (void)d;
    return EdgeId{u < v ? u : v, coord};
}

// Domain tag separating edge-state draws from other counter streams.
inline constexpr uint64_t kEdgeStream = 0x45444745ull;

class PercolationSample {
public:
    explicit PercolationSample(const PercolationParams& params);

    bool edge_state(const EdgeId& e) const {
        if (!e.canonical(params_.d)) throw std::invalid_argument("edge_state: non-canonical edge id");
        return raw_open(e.index(params_.d));
    }

    bool edge_open(VertexId u, VertexId v) const { return edge_state(edge_between(u, v, params_.d)); }

    // Open neighbors of v in coordinate order; returns the count, fills `out`
    // (capacity must be >= d).  Both endpoints query the same canonical edge.
    int open_neighbors(VertexId v, VertexId* out) const {
        int n = 0;
        for (int i = 0; i < params_.d; ++i) {
            VertexId w = v ^ (1ull << i);
            VertexId lower = v < w ? v : w;
            if (raw_open(lower * static_cast<uint64_t>(params_.d) + static_cast<uint64_t>(i))) out[n++] = w;
        }
        return n;
    }

    std::vector<VertexId> open_neighbors(VertexId v) const {
        std::vector<VertexId> out(static_cast<size_t>(params_.d));
        out.resize(static_cast<size_t>(open_neighbors(v, out.data())));
        return out;
    }

    int open_degree(VertexId v) const {
        int n = 0;
        for (int i = 0; i < params_.d; ++i) {
            VertexId w = v ^ (1ull << i);
            VertexId lower = v < w ? v : w;
            if (raw_open(lower * static_cast<uint64_t>(params_.d) + static_cast<uint64_t>(i))) ++n;
        }
        return n;
    }

    const PercolationParams& params() const { return params_; }
    uint64_t threshold() const { return threshold_; }

private:
    bool raw_open(uint64_t edgeIndex) const {
        if (allOpen_) return true;
        return philox2x64(edgeIndex, kEdgeStream, params_.seed) < threshold_;
    }

    PercolationParams params_;
    uint64_t threshold_; // floor(p * 2^64); ties (r == threshold) are closed
    bool allOpen_;
};

// floor(p * 2^64) for p in [0,1); exact because p carries 53 significant bits.
uint64_t open_threshold(double p);

// Two-round exposure with p1 = (c-delta)/d and (1-p1)(1-p2) = 1-p.  Both
// rounds are read off one uniform per edge, so G1 subseteq G2 holds pathwise
// while G2 keeps the marginal law of Q^d_p.
struct SprinklingPair {
    PercolationParams base; // p = c/d, the G2 marginal
    double delta;
    double p1;
    double p2;
    uint64_t sharedSeed;

    PercolationSample g1() const { return PercolationSample(make_params(base.d, base.c - delta, sharedSeed)); }
    PercolationSample g2() const { return PercolationSample(base); }
};

SprinklingPair sprinkle_params(double c, double delta, int d, uint64_t sharedSeed);

enum class CoupledState { Closed, InG1, InG2Only };

CoupledState coupled_edge_state(const SprinklingPair& pair, const EdgeId& e);

} // namespace percolab
