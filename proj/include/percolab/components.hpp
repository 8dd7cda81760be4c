#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "percolab/percolation.hpp"

// Component structure of Q^d_p: FIFO exploration with an optional size cap,
// full labeling by union-find over one sweep of the canonical edges, the
// size census with the M_alpha component families, epsilon-bad vertices, and
// bare (degree-2) paths.

namespace percolab {

enum class StopReason { Exhausted, SizeCapReached };

struct ExplorationRecord {
    VertexId root;
    std::vector<VertexId> settled;       // S, in settle order
    std::vector<VertexId> queueOrder;    // U, in enqueue order (includes root)
    std::vector<VertexId> frontierAtStop; // still queued when capped
    uint64_t touchedEdges = 0;           // open-edge queries that returned true
    StopReason stopReason = StopReason::Exhausted;

    size_t reached() const { return settled.size() + frontierAtStop.size(); }
};

// First-in-first-out exploration of the start's component.  With a cap, stops
// as soon as |settled| + |frontier| >= sizeCap.
ExplorationRecord explore_bfs(const PercolationSample& sample, VertexId start,
                              std::optional<uint64_t> sizeCap = std::nullopt);

struct ComponentLabeling {
    int d = 0;
    std::vector<uint32_t> label;      // label[v] = smallest vertex id in v's component
    std::vector<uint32_t> sizeAtRoot; // indexed by label value; 0 elsewhere
    uint32_t giantLabel = 0;          // max size, ties broken by smallest label
    uint64_t giantSize = 0;
    uint64_t componentCount = 0;

    uint64_t size_of(VertexId v) const { return sizeAtRoot[label[v]]; }
    bool in_giant(VertexId v) const { return label[v] == giantLabel; }
};

// Exact partition of all 2^d vertices (one oracle query per canonical edge).
ComponentLabeling label_components(const PercolationSample& sample);

// Components of order >= ceil(d^alpha) (or < for the band-below variant).
struct AlphaFamily {
    double alpha;
    uint64_t threshold;            // ceil(d^alpha)
    std::vector<uint32_t> labels;
    uint64_t totalVertices = 0;    // v(M_alpha)
    uint64_t componentCount() const { return labels.size(); }
};

AlphaFamily m_alpha(const ComponentLabeling& labeling, double alpha);
AlphaFamily m_below(const ComponentLabeling& labeling, double alpha);

struct ComponentCensus {
    std::map<uint64_t, uint64_t> countBySize; // size -> number of components
    AlphaFamily mQuarter;  // alpha = 1/4
    AlphaFamily mTwo;      // alpha = 2
    AlphaFamily mTen;      // alpha = 10
    AlphaFamily mBelowTwo; // components of order < d^2

    // |V_k|: vertices living in components of order exactly k.
    uint64_t vk_count(uint64_t k) const {
        auto it = countBySize.find(k);
        return it == countBySize.end() ? 0 : k * it->second;
    }
};

ComponentCensus census(const ComponentLabeling& labeling, int d);

// Vertices of Q^d with fewer than epsilon*d cube-neighbors inside V(M_2^-)
// of the given (first sprinkling round) labeling.
uint64_t bad_vertices(const ComponentLabeling& g1Labeling, double epsilon);

struct BarePathReport {
    uint64_t longestPath = 0;  // edges spanned by the longest degree-2 chain
    uint64_t chainCount = 0;
    uint64_t cycleCount = 0;   // pure degree-2 cycles, excluded from the path stat
    uint64_t longestCycle = 0; // edges
};

// Longest path inside the giant whose vertices all have degree exactly 2.
BarePathReport longest_bare_path(const ComponentLabeling& labeling, const PercolationSample& sample);

} // namespace percolab
