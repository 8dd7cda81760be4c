#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "percolab/walk.hpp"

// Distances and diameter on the giant, the tame-path combinatorics on
// coordinate words, waypoint chains of far-apart vertices, and the antipodal
// connection experiment.

namespace percolab {

// Open-graph distance between u and v; nullopt when unreachable or beyond cap.
std::optional<int64_t> bfs_distance(const PercolationSample& sample, VertexId u, VertexId v,
                                    std::optional<int64_t> cap = std::nullopt);

struct DiameterReport {
    std::optional<int64_t> exact;
    int64_t lowerBound = 0;          // iterated double sweep
    std::vector<int64_t> eccSamples; // sampled eccentricities
    bool approximate = false;
    uint64_t bfsRuns = 0;
};

// Exact diameter when the giant has at most exactSizeLimit vertices
// (eccentricity search with level-based pruning, exact by construction);
// otherwise a 20-round double-sweep lower bound plus 64 sampled
// eccentricities, flagged approximate.
DiameterReport diameter(const ComponentLabeling& labeling, const PercolationSample& sample,
                        uint64_t exactSizeLimit = 40000);

DiameterReport diameter_of(const ComponentGraph& g, uint64_t exactSizeLimit, uint64_t seed);

// All-pairs BFS oracle for cross-checking the pruned exact path (small graphs).
int64_t diameter_all_pairs(const ComponentGraph& g);

// A word over [d] (0-based coordinates) of length k*d, each symbol exactly k
// times; the flip sequence phi(P) of a path in P_d(k).
struct PathWord {
    int d = 0;
    int k = 0;
    std::vector<int> word;
};

struct CubePath {
    std::vector<VertexId> vertices;
};

struct TameCheck {
    bool tame;
    std::string violation; // first violated condition, empty when tame
};

// P1: vertices at Hamming distance 1 must be consecutive on the path.
// P2: every window of l <= floor(d/k^3) consecutive symbols of phi(P) has at
// least l/2 symbols occurring exactly once in it.
TameCheck is_tame(const CubePath& path, int d, int k);

PathWord phi_encode(const CubePath& path, int d, int k);

struct DecodeResult {
    CubePath path;
    bool repeatedVertex; // decode replayed into a vertex repeat: not a path
};

DecodeResult phi_decode(const PathWord& word, VertexId start);

struct TameCount {
    uint64_t tame = 0;  // |P'_d(k)|
    uint64_t paths = 0; // |P_d(k)|
};

// Depth-first enumeration with prefix pruning; guard k odd and k*d <= 14.
TameCount enumerate_tame(int d, int k);

struct SequenceCount {
    bool exact;       // exact integer when k*d <= 20
    uint64_t value;   // valid when exact
    double logValue;  // natural log, always valid
};

// |S_d(k)| = (kd)! / (k!)^d.
SequenceCount sequence_count(int d, int k);

// Waypoint chain u = v_1, ..., v_l = v with l <= ceil(2/epsilon) and
// consecutive vertices differing in >= ceil((1 - epsilon/2) d) coordinates.
// Requires epsilon*d >= 4.
std::vector<VertexId> chain_waypoints(VertexId u, VertexId v, double epsilon, int d);

struct AntipodalResult {
    uint64_t trials = 0;
    uint64_t successes = 0;
    double pHat = 0;
    double wilsonLow = 0;
    double wilsonHigh = 0;
};

// Fraction of seeds in which 0 reaches the all-ones vertex within distance
// K1*d in Q^d_p, with a Wilson confidence interval.
AntipodalResult antipodal_experiment(int d, double c, int k1, uint64_t trials, uint64_t seed);

// Single-sample version: the discovered 0 -> all-ones path (for replay
// validation), or nullopt when not connected within the distance cap.
std::optional<std::vector<VertexId>> antipodal_path(const PercolationSample& sample, int k1);

} // namespace percolab
