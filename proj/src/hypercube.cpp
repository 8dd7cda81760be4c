#include "percolab/hypercube.hpp"

#include <unordered_set>

namespace percolab {

uint64_t edge_boundary_full(const std::vector<VertexId>& S, int d) {
    check_dim(d);
    std::unordered_set<VertexId> in(S.begin(), S.end());
    uint64_t count = 0;
    for (VertexId v : S) {
        check_vertex(v, d);
        for (int i = 0; i < d; ++i) {
            if (!in.count(v ^ (1ull << i))) ++count;
        }
    }
    return count;
}

} // namespace percolab
