#include "percolab/components.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <unordered_set>

namespace percolab {

namespace {

// Dense visited flags for small d, hashed for large d.
class VisitedSet {
public:
    VisitedSet(int d) {
        if (d <= 26) dense_.assign(1ull << d, 0);
    }
    bool test_and_set(VertexId v) {
        if (!dense_.empty()) {
            if (dense_[v]) return true;
            dense_[v] = 1;
            return false;
        }
        return !sparse_.insert(v).second;
    }

private:
    std::vector<uint8_t> dense_;
    std::unordered_set<VertexId> sparse_;
};

} // namespace

ExplorationRecord explore_bfs(const PercolationSample& sample, VertexId start,
                              std::optional<uint64_t> sizeCap) {
    const int d = sample.params().d;
    check_vertex(start, d);
    if (sizeCap && *sizeCap < 1) throw std::invalid_argument("explore_bfs: sizeCap must be >= 1");

    ExplorationRecord rec;
    rec.root = start;
    VisitedSet seen(d);
    std::deque<VertexId> queue;

    seen.test_and_set(start);
    queue.push_back(start);
    rec.queueOrder.push_back(start);
    uint64_t reached = 1; // |settled| + |queued|
    bool capped = sizeCap && reached >= *sizeCap;

    std::vector<VertexId> nbr(static_cast<size_t>(d));
    while (!queue.empty() && !capped) {
        VertexId u = queue.front();
        queue.pop_front();
        rec.settled.push_back(u);
        int n = sample.open_neighbors(u, nbr.data());
        rec.touchedEdges += static_cast<uint64_t>(n);
        for (int i = 0; i < n && !capped; ++i) {
            if (seen.test_and_set(nbr[i])) continue;
            queue.push_back(nbr[i]);
            rec.queueOrder.push_back(nbr[i]);
            ++reached;
            if (sizeCap && reached >= *sizeCap) capped = true;
        }
    }
    rec.stopReason = capped ? StopReason::SizeCapReached : StopReason::Exhausted;
    rec.frontierAtStop.assign(queue.begin(), queue.end());
    return rec;
}

ComponentLabeling label_components(const PercolationSample& sample) {
    const int d = sample.params().d;
    if (d > 28) throw std::invalid_argument("label_components: d too large for dense labeling");
    const uint64_t n = 1ull << d;

    // Union-find over one sweep of the canonical edges.
    std::vector<uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    std::vector<uint32_t> rank(n, 0);

    auto find = [&](uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]]; // path halving
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
    };

    for (uint64_t v = 0; v < n; ++v) {
        for (int i = 0; i < d; ++i) {
            if ((v >> i) & 1ull) continue; // canonical edges only
            if (sample.edge_state(EdgeId{v, i}))
                unite(static_cast<uint32_t>(v), static_cast<uint32_t>(v | (1ull << i)));
        }
    }

    ComponentLabeling out;
    out.d = d;
    out.label.assign(n, 0);
    out.sizeAtRoot.assign(n, 0);

    // Smallest vertex id in each component becomes its label; ascending scan
    // guarantees the representative is seen before any other member.
    std::vector<uint32_t> smallest(n, UINT32_MAX);
    for (uint64_t v = 0; v < n; ++v) {
        uint32_t r = find(static_cast<uint32_t>(v));
        if (smallest[r] == UINT32_MAX) smallest[r] = static_cast<uint32_t>(v);
        out.label[v] = smallest[r];
        ++out.sizeAtRoot[smallest[r]];
    }

    out.giantLabel = 0;
    out.giantSize = 0;
    for (uint64_t v = 0; v < n; ++v) {
        if (out.sizeAtRoot[v] > 0) {
            ++out.componentCount;
            if (out.sizeAtRoot[v] > out.giantSize) { // ties keep the smaller label
                out.giantSize = out.sizeAtRoot[v];
                out.giantLabel = static_cast<uint32_t>(v);
            }
        }
    }
    return out;
}

namespace {

AlphaFamily alpha_family(const ComponentLabeling& labeling, double alpha, bool atLeast) {
    AlphaFamily fam;
    fam.alpha = alpha;
    fam.threshold = static_cast<uint64_t>(std::ceil(std::pow(static_cast<double>(labeling.d), alpha)));
    for (uint64_t v = 0; v < labeling.sizeAtRoot.size(); ++v) {
        uint64_t s = labeling.sizeAtRoot[v];
        if (s == 0) continue;
        bool in = atLeast ? s >= fam.threshold : s < fam.threshold;
        if (in) {
            fam.labels.push_back(static_cast<uint32_t>(v));
            fam.totalVertices += s;
        }
    }
    return fam;
}

} // namespace

AlphaFamily m_alpha(const ComponentLabeling& labeling, double alpha) {
    return alpha_family(labeling, alpha, true);
}

AlphaFamily m_below(const ComponentLabeling& labeling, double alpha) {
    return alpha_family(labeling, alpha, false);
}

ComponentCensus census(const ComponentLabeling& labeling, int d) {
    if (d != labeling.d) throw std::invalid_argument("census: dimension mismatch");
    ComponentCensus c;
    for (uint64_t v = 0; v < labeling.sizeAtRoot.size(); ++v) {
        if (labeling.sizeAtRoot[v] > 0) ++c.countBySize[labeling.sizeAtRoot[v]];
    }
    c.mQuarter = m_alpha(labeling, 0.25);
    c.mTwo = m_alpha(labeling, 2.0);
    c.mTen = m_alpha(labeling, 10.0);
    c.mBelowTwo = m_below(labeling, 2.0);
    return c;
}

uint64_t bad_vertices(const ComponentLabeling& g1Labeling, double epsilon) {
    if (!(epsilon > 0.0) || epsilon >= 1.0) throw std::invalid_argument("bad_vertices: epsilon in (0,1)");
    const int d = g1Labeling.d;
    const uint64_t n = 1ull << d;
    const uint64_t threshold = static_cast<uint64_t>(d) * static_cast<uint64_t>(d); // ceil(d^2)

    std::vector<uint8_t> inM2(n, 0);
    for (uint64_t v = 0; v < n; ++v)
        inM2[v] = g1Labeling.size_of(v) >= threshold ? 1 : 0;

    const double cut = epsilon * static_cast<double>(d);
    uint64_t bad = 0;
    for (uint64_t v = 0; v < n; ++v) {
        int cnt = 0;
        for (int i = 0; i < d; ++i) cnt += inM2[v ^ (1ull << i)];
        if (static_cast<double>(cnt) < cut) ++bad;
    }
    return bad;
}

BarePathReport longest_bare_path(const ComponentLabeling& labeling, const PercolationSample& sample) {
    const int d = labeling.d;
    const uint64_t n = 1ull << d;
    if (labeling.giantSize == 0) throw std::invalid_argument("longest_bare_path: empty labeling");

    // Open neighbors of a giant vertex stay in the giant, so degree inside the
    // giant equals open degree.
    std::vector<uint8_t> deg2(n, 0);
    for (uint64_t v = 0; v < n; ++v)
        if (labeling.label[v] == labeling.giantLabel && sample.open_degree(v) == 2) deg2[v] = 1;

    // Each degree-2 vertex has at most two neighbors inside the degree-2 set,
    // so the induced components are paths or cycles.  A path component with
    // m vertices spans m-1 edges; a cycle component spans m.
    BarePathReport rep;
    std::vector<uint8_t> used(n, 0);
    std::vector<VertexId> nbr(static_cast<size_t>(d));
    std::vector<VertexId> stack;

    for (uint64_t v = 0; v < n; ++v) {
        if (!deg2[v] || used[v]) continue;
        uint64_t vertices = 0, inducedDegreeSum = 0;
        stack.assign(1, v);
        used[v] = 1;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            ++vertices;
            int cnt = sample.open_neighbors(u, nbr.data());
            for (int i = 0; i < cnt; ++i) {
                if (!deg2[nbr[i]]) continue;
                ++inducedDegreeSum;
                if (!used[nbr[i]]) {
                    used[nbr[i]] = 1;
                    stack.push_back(nbr[i]);
                }
            }
        }
        uint64_t edges = inducedDegreeSum / 2;
        if (edges == vertices) {
            ++rep.cycleCount;
            rep.longestCycle = std::max(rep.longestCycle, edges);
        } else {
            ++rep.chainCount;
            rep.longestPath = std::max(rep.longestPath, vertices - 1);
        }
    }
    return rep;
}

} // namespace percolab
