#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "percolab/components.hpp"

// Lazy simple random walk on one component: stationary distribution, dense
// distribution evolution, total-variation decay, mixing-time estimation,
// conductance, the sampled conductance profile with its Fountoulakis-Reed
// sum, and edge-expansion scans.

namespace percolab {

struct ComponentGraph {
    int d = 0;                        // ambient cube dimension
    std::vector<VertexId> vertexIds;  // compact index -> cube vertex
    std::vector<uint32_t> offsets;    // CSR offsets, size m+1
    std::vector<uint32_t> nbrs;       // CSR adjacency
    uint64_t edgeCount = 0;

    size_t size() const { return vertexIds.size(); }
    uint32_t degree(uint32_t u) const { return offsets[u + 1] - offsets[u]; }
};

ComponentGraph build_component_graph(const ComponentLabeling& labeling,
                                     const PercolationSample& sample, uint32_t label);

// Synthetic graph over vertices 0..m-1 (tests and oracles).
ComponentGraph graph_from_edges(size_t m, const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                                int ambientD);

// BFS distances from src over the CSR graph; dist is resized and filled.
// Returns the farthest vertex (smallest index among ties) and its distance.
std::pair<uint32_t, int64_t> csr_bfs(const ComponentGraph& g, uint32_t src, std::vector<int32_t>& dist);

struct WalkDistribution {
    std::vector<double> probs;
    int64_t t = 0;
    double cumDrift = 0; // accumulated |1 - mass| renormalization, must stay < 1e-9
};

WalkDistribution stationary(const ComponentGraph& g);

// nu(v) = mu(v)/2 + sum_{u ~ v} mu(u) / (2 deg(u)); renormalizes and logs drift.
void lazy_step(const ComponentGraph& g, WalkDistribution& mu, std::vector<double>& scratch);

double tv_distance(const WalkDistribution& a, const WalkDistribution& b);

struct MixingEstimate {
    int64_t estimate = 0;              // max over starts of the first t with TV <= threshold
    bool mixed = false;                // false if some start never crossed within tMax
    std::vector<int64_t> perStart;
    std::vector<std::vector<double>> tvCurves; // one curve per start, tv at t = 0,1,...
};

// Lower bound on the sup-over-starts mixing time: evolves the walk from each
// sampled start until TV to stationarity drops to `threshold`.
MixingEstimate estimate_mixing(const ComponentGraph& g, const std::vector<uint32_t>& starts,
                               int64_t tMax, double threshold = 0.25);

// Start-selection policy for experiments: each start is the farthest vertex
// from an independent uniformly chosen source.  Uniform starts sit in the
// well-mixed bulk and saturate the estimate; eccentric starts tighten it.
std::vector<uint32_t> eccentric_starts(const ComponentGraph& g, int count, uint64_t seed);

struct ConductanceReport {
    uint64_t cutEdges = 0;      // e(S, V\S)
    uint64_t internalEdges = 0; // e(S)
    double piS = 0;             // (2 e(S) + cut) / (2 e(G))
    double piSByDegree = 0;     // independent recomputation from the degree sum
    double QS = 0;              // cut / (4 e(G))
    double phiS = 0;            // QS / (piS (1 - piS))
};

ConductanceReport conductance(const ComponentGraph& g, const std::vector<uint32_t>& S);

struct PhiProfile {
    int scales = 0;                    // ceil(log2(1 / pi_min))
    std::vector<double> phiByScale;    // min sampled Phi per scale j = 1..scales; 1 where no set landed
    std::vector<uint64_t> setsPerScaleFound;
    double frSum = 0;                  // sum of phi^{-2} over scales
    bool sweepUsed = false;
};

// Sampled conductance profile: BFS-prefix connected sets trimmed into each
// dyadic pi(S) window; below 1e5 vertices, sweep-cut prefixes of a
// power-iteration second eigenvector are merged in as extra candidates.
// Sampling can only overestimate each Phi(rho), so frSum is a lower bound on
// the true Fountoulakis-Reed sum.
PhiProfile phi_profile(const ComponentGraph& g, uint64_t samplerSeed, int setsPerScale);

struct ExpansionScan {
    std::vector<std::pair<uint64_t, double>> perSize; // size -> min d*cut/|S| over samples
    double globalMin = 0;                             // the empirical expansion constant
    double largeSetMin = 0;                           // same statistic over the large-set variant
};

// Connected BFS-prefix sets at each requested size, plus a large-set variant
// over |S| in [deltaBand, 1-deltaBand] of the component (complement-of-BFS
// and uniform random sets, not necessarily connected).
ExpansionScan expansion_scan(const ComponentGraph& g, int d, const std::vector<uint64_t>& sizes,
                             int setsPerSize, uint64_t seed, double deltaBand = 0.1);

} // namespace percolab
