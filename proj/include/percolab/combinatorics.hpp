#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "percolab/hypercube.hpp"
#include "percolab/rng.hpp"

// Executable versions of the counting/partitioning toolkit, validated by
// exhaustive enumeration at tiny scale: Harper checking, rooted subtree and
// forest counts, weighted tree decomposition, family sparsification, and the
// switching concentration bound checked by Monte Carlo.

namespace percolab {

struct HarperReport {
    int d;
    double minSlack;          // min over nonempty subsets of boundary - bound
    uint64_t argminMask;      // subset attaining it (bit i = vertex i)
    bool violation;           // true if any subset fell below the bound
    uint64_t zeroSlackSubcubes; // subcubes attaining the bound exactly
};

// Checks every one of the 2^(2^d) subsets of Q^d against the Harper bound.
HarperReport harper_check_exhaustive(int d); // d <= 4

// Exact number of k-vertex subtrees of Q^d containing v, by enumeration of
// (k-1)-edge subsets.  Feasible for d <= 4, k <= 6.
uint64_t count_rooted_subtrees(int d, VertexId v, int k);

// Bounds k^{k-2} (d-k)^{k-1} / (k-1)! <= t(v,k) <= k^{k-2} d^{k-1} / (k-1)!.
// The lower bound's hypothesis is k <= d.
double rooted_subtree_lower_bound(int d, int k);
double rooted_subtree_upper_bound(int d, int k);

// Exact number of k-edge forests F in Q^d with U subseteq V(F) and every
// component meeting U.  Feasible for d <= 3, |U| <= 2, k <= 4.
uint64_t count_forests(int d, const std::vector<VertexId>& U, int k);

// Upper bound (l+k)^k d^k / k! with l = |U|.
double forest_upper_bound(int d, int l, int k);

struct WeightedTree {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // n-1 edges, connected, acyclic
    std::vector<double> weight;             // each in (0, m0]
    double m0 = 0;

    int max_degree() const;
};

// Partitions V(T) into vertex-disjoint subtrees, each of total weight in
// [m0, (maxDegree+1) m0], by repeatedly detaching a deepest subtree whose
// weight has reached m0.  Requires total weight >= m0.
std::vector<std::vector<int>> decompose_weighted_tree(const WeightedTree& t);

struct DisjointSetFamily {
    int d = 0;
    std::vector<std::vector<VertexId>> sets; // pairwise disjoint

    uint64_t total_vertices() const;
    // Boundary counts in the full cube: eOut = edges leaving the union,
    // eIn = edges between distinct member sets.
    void boundary_counts(uint64_t& eOut, uint64_t& eIn) const;
    // e(C) = sum over member sets of their full-cube boundary = eOut + 2 eIn.
    uint64_t e_total() const;
};

struct SparsifyResult {
    bool ok = false;
    DisjointSetFamily family;
    int attempts = 0;
    std::string failure; // nonempty iff !ok ("AllRetriesFailed", precondition text)
};

// Randomized sparsification: keep each member set independently with
// probability epsilon0 = 1.5 epsilon, retry until the output C' satisfies
// v(C') >= epsilon v(C) and e_out(C') >= (1-2 epsilon) d v(C').  Honest about
// the asymptotic regime: failure is reported, never hidden.
SparsifyResult sparsify_family(const DisjointSetFamily& c, double epsilon, uint64_t seed,
                               uint64_t sizeFloor = 0, int retries = 200);

using SequenceStatistic = std::function<double(const std::vector<int>&)>;

struct SwitchingReport {
    double cLip;
    bool lipschitzCertified;
    double observedMaxStep;  // largest |delta f| over the certificate switches
    double sampleMean;
    double empiricalTail;    // P(|f - mean| >= t)
    double bound;            // 2 exp(-t^2 / (2 cLip^2 k d))
    double standardError;
    bool pass;               // empiricalTail <= bound + 3 SE
};

// Samples uniform words of S_d(k) (every symbol of [d] exactly k times, by
// Fisher-Yates shuffle of the multiset), certifies the per-switch Lipschitz
// constant on random transpositions, and compares the empirical deviation
// tail against the Azuma-style switching bound.
SwitchingReport mc_switching_concentration(const SequenceStatistic& f, double cLip, int k, int d,
                                           double t, uint64_t trials, uint64_t seed);

} // namespace percolab
