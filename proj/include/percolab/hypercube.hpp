#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Geometry of the hypercube Q^d.  Vertices are unsigned integers below 2^d
// with coordinate i stored in bit i, so neighbor iteration is a d-step XOR
// loop and coordinate support is a popcount.

namespace percolab {

using VertexId = uint64_t;

inline void check_dim(int d) {
    if (d < 1 || d > 63) throw std::invalid_argument("dimension must be in [1,63]");
}

inline uint64_t vertex_count(int d) {
    check_dim(d);
    return 1ull << d;
}

inline void check_vertex(VertexId v, int d) {
    check_dim(d);
    if (v >= (1ull << d)) throw std::invalid_argument("vertex out of range for dimension");
}

inline int hamming(VertexId u, VertexId v) {
    return std::popcount(u ^ v);
}

// Neighbors in coordinate order: v XOR 2^i for i = 0..d-1.
inline std::vector<VertexId> neighbors(VertexId v, int d) {
    check_vertex(v, d);
    std::vector<VertexId> out;
    out.reserve(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) out.push_back(v ^ (1ull << i));
    return out;
}

template <typename F>
inline void for_each_neighbor(VertexId v, int d, F&& f) {
    for (int i = 0; i < d; ++i) f(v ^ (1ull << i), i);
}

// Smallest subcube containing u and v: coordinates where they differ are
// free, the rest are fixed to their common values.
struct SubcubeSpan {
    VertexId base;      // fixed coordinates (zero on the free ones)
    uint64_t freeMask;  // varying coordinates
    int dim;            // popcount of freeMask

    bool contains(VertexId w) const { return (w & ~freeMask) == base; }
};

inline SubcubeSpan subcube_span(VertexId u, VertexId v, int d) {
    check_vertex(u, d);
    check_vertex(v, d);
    SubcubeSpan s;
    s.freeMask = u ^ v;
    s.base = u & ~s.freeMask;
    s.dim = std::popcount(s.freeMask);
    return s;
}

// Harper's isoperimetric lower bound |S|(d - log2|S|) on the full-cube edge
// boundary of any |S|-vertex set.  Real-valued; callers compare integer
// boundary counts with >=.  Equality holds exactly on subcubes.
inline double harper_bound(uint64_t s, int d) {
    check_dim(d);
    if (s < 1 || s > (1ull << d)) throw std::invalid_argument("harper_bound: set size out of range");
    return static_cast<double>(s) * (static_cast<double>(d) - std::log2(static_cast<double>(s)));
}

// Exact full-cube edge boundary of a vertex set.
uint64_t edge_boundary_full(const std::vector<VertexId>& S, int d);

} // namespace percolab
