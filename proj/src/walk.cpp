#include "percolab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace percolab {

namespace {

constexpr uint64_t kStartStream = 0x45434354ull;
constexpr uint64_t kPhiStream = 0x50484950ull;
constexpr uint64_t kExpandStream = 0x45585053ull;

} // namespace

ComponentGraph build_component_graph(const ComponentLabeling& labeling,
                                     const PercolationSample& sample, uint32_t label) {
    if (label >= labeling.sizeAtRoot.size() || labeling.sizeAtRoot[label] == 0)
        throw std::invalid_argument("build_component_graph: not a component label");
    ComponentGraph g;
    g.d = labeling.d;
    g.vertexIds.reserve(labeling.sizeAtRoot[label]);
    const VertexId n = vertex_count(labeling.d);
    for (VertexId v = 0; v < n; ++v)
        if (labeling.label[v] == label) g.vertexIds.push_back(v);

    const size_t m = g.vertexIds.size();
    auto compact = [&](VertexId w) -> uint32_t {
        auto it = std::lower_bound(g.vertexIds.begin(), g.vertexIds.end(), w);
        return static_cast<uint32_t>(it - g.vertexIds.begin());
    };

    std::vector<VertexId> buf(static_cast<size_t>(labeling.d));
    g.offsets.assign(m + 1, 0);
    for (size_t i = 0; i < m; ++i) {
        int cnt = sample.open_neighbors(g.vertexIds[i], buf.data());
        // open neighbors of a component vertex stay in the component
        g.offsets[i + 1] = g.offsets[i] + static_cast<uint32_t>(cnt);
    }
    g.nbrs.resize(g.offsets[m]);
    for (size_t i = 0; i < m; ++i) {
        int cnt = sample.open_neighbors(g.vertexIds[i], buf.data());
        for (int j = 0; j < cnt; ++j) g.nbrs[g.offsets[i] + static_cast<uint32_t>(j)] = compact(buf[j]);
    }
    g.edgeCount = g.nbrs.size() / 2;
    return g;
}

ComponentGraph graph_from_edges(size_t m, const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                                int ambientD) {
    ComponentGraph g;
    g.d = ambientD;
    g.vertexIds.resize(m);
    std::iota(g.vertexIds.begin(), g.vertexIds.end(), VertexId{0});
    std::vector<uint32_t> deg(m, 0);
    for (auto& [a, b] : edges) {
        if (a >= m || b >= m || a == b) throw std::invalid_argument("graph_from_edges: bad edge");
        ++deg[a];
        ++deg[b];
    }
    g.offsets.assign(m + 1, 0);
    for (size_t i = 0; i < m; ++i) g.offsets[i + 1] = g.offsets[i] + deg[i];
    g.nbrs.resize(g.offsets[m]);
    std::vector<uint32_t> fill(m, 0);
    for (auto& [a, b] : edges) {
        g.nbrs[g.offsets[a] + fill[a]++] = b;
        g.nbrs[g.offsets[b] + fill[b]++] = a;
    }
    g.edgeCount = edges.size();
    return g;
}

std::pair<uint32_t, int64_t> csr_bfs(const ComponentGraph& g, uint32_t src, std::vector<int32_t>& dist) {
    const size_t m = g.size();
    if (src >= m) throw std::invalid_argument("csr_bfs: source out of range");
    dist.assign(m, -1);
    std::vector<uint32_t> queue;
    queue.reserve(m);
    queue.push_back(src);
    dist[src] = 0;
    uint32_t far = src;
    for (size_t head = 0; head < queue.size(); ++head) {
        uint32_t u = queue[head];
        for (uint32_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            uint32_t w = g.nbrs[e];
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                if (dist[w] > dist[far] || (dist[w] == dist[far] && w < far)) far = w;
                queue.push_back(w);
            }
        }
    }
    return {far, dist[far]};
}

WalkDistribution stationary(const ComponentGraph& g) {
    if (g.size() == 0) throw std::invalid_argument("stationary: empty graph");
    if (g.edgeCount == 0) throw std::invalid_argument("stationary: no edges");
    WalkDistribution pi;
    pi.probs.resize(g.size());
    const double denom = 2.0 * static_cast<double>(g.edgeCount);
    for (uint32_t v = 0; v < g.size(); ++v) pi.probs[v] = static_cast<double>(g.degree(v)) / denom;
    return pi;
}

void lazy_step(const ComponentGraph& g, WalkDistribution& mu, std::vector<double>& scratch) {
    const size_t m = g.size();
    if (mu.probs.size() != m) throw std::invalid_argument("lazy_step: distribution size mismatch");
    scratch.assign(m, 0.0);
    for (uint32_t v = 0; v < m; ++v) {
        double mass = mu.probs[v];
        if (mass == 0.0) continue;
        scratch[v] += mass * 0.5;
        double share = mass / (2.0 * static_cast<double>(g.degree(v)));
        for (uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) scratch[g.nbrs[e]] += share;
    }
    double total = 0.0;
    for (double x : scratch) total += x;
    mu.cumDrift += std::abs(1.0 - total);
    if (mu.cumDrift > 1e-9) throw std::logic_error("lazy_step: cumulative mass drift exceeded 1e-9");
    double inv = 1.0 / total;
    for (double& x : scratch) x *= inv;
    mu.probs.swap(scratch);
    ++mu.t;
}

double tv_distance(const WalkDistribution& a, const WalkDistribution& b) {
    if (a.probs.size() != b.probs.size()) throw std::invalid_argument("tv_distance: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.probs.size(); ++i) s += std::abs(a.probs[i] - b.probs[i]);
    return 0.5 * s;
}

MixingEstimate estimate_mixing(const ComponentGraph& g, const std::vector<uint32_t>& starts,
                               int64_t tMax, double threshold) {
    if (starts.empty()) throw std::invalid_argument("estimate_mixing: no start vertices");
    if (tMax < 1) throw std::invalid_argument("estimate_mixing: tMax must be >= 1");
    WalkDistribution pi = stationary(g);
    MixingEstimate est;
    est.mixed = true;
    std::vector<double> scratch;
    for (uint32_t s : starts) {
        if (s >= g.size()) throw std::invalid_argument("estimate_mixing: start out of range");
        WalkDistribution mu;
        mu.probs.assign(g.size(), 0.0);
        mu.probs[s] = 1.0;
        std::vector<double> curve{tv_distance(mu, pi)};
        int64_t hit = curve.back() <= threshold ? 0 : -1;
        while (hit < 0 && mu.t < tMax) {
            double prev = curve.back();
            lazy_step(g, mu, scratch);
            double tv = tv_distance(mu, pi);
            if (tv > prev + 1e-12) throw std::logic_error("estimate_mixing: TV distance increased");
            curve.push_back(tv);
            if (tv <= threshold) hit = mu.t;
        }
        if (hit < 0) {
            est.mixed = false;
            hit = tMax; // crossing not seen; tMax keeps the estimate a lower bound
        }
        est.perStart.push_back(hit);
        est.tvCurves.push_back(std::move(curve));
    }
    est.estimate = *std::max_element(est.perStart.begin(), est.perStart.end());
    return est;
}

std::vector<uint32_t> eccentric_starts(const ComponentGraph& g, int count, uint64_t seed) {
    if (count < 1) throw std::invalid_argument("eccentric_starts: count must be >= 1");
    CounterRng rng(seed, kStartStream);
    std::vector<uint32_t> starts;
    std::vector<int32_t> dist;
    for (int i = 0; i < count; ++i) {
        uint32_t src = static_cast<uint32_t>(rng.below(g.size()));
        starts.push_back(csr_bfs(g, src, dist).first);
    }
    return starts;
}

ConductanceReport conductance(const ComponentGraph& g, const std::vector<uint32_t>& S) {
    const size_t m = g.size();
    if (S.empty() || S.size() >= m) throw std::invalid_argument("conductance: S must be a proper nonempty subset");
    std::vector<uint8_t> inS(m, 0);
    for (uint32_t v : S) {
        if (v >= m) throw std::invalid_argument("conductance: vertex out of range");
        if (inS[v]) throw std::invalid_argument("conductance: repeated vertex in S");
        inS[v] = 1;
    }
    ConductanceReport rep;
    uint64_t degSum = 0, internalDoubled = 0;
    for (uint32_t v : S) {
        degSum += g.degree(v);
        for (uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
            if (inS[g.nbrs[e]])
                ++internalDoubled;
            else
                ++rep.cutEdges;
        }
    }
    rep.internalEdges = internalDoubled / 2;
    const double twoE = 2.0 * static_cast<double>(g.edgeCount);
    rep.piS = static_cast<double>(2 * rep.internalEdges + rep.cutEdges) / twoE;
    rep.piSByDegree = static_cast<double>(degSum) / twoE;
    rep.QS = static_cast<double>(rep.cutEdges) / (2.0 * twoE);
    rep.phiS = rep.QS / (rep.piS * (1.0 - rep.piS));
    return rep;
}

namespace {

// Runs one incremental prefix sweep over `order`; every proper prefix is a
// candidate set.  visit(prefixLen, piS, phi) is called for each.
template <typename F>
void prefix_sweep(const ComponentGraph& g, const std::vector<uint32_t>& order, F&& visit,
                  std::vector<uint8_t>& inS) {
    std::fill(inS.begin(), inS.end(), 0);
    const double twoE = 2.0 * static_cast<double>(g.edgeCount);
    int64_t cut = 0;
    uint64_t degSum = 0;
    for (size_t i = 0; i + 1 < order.size(); ++i) {
        uint32_t v = order[i];
        int64_t insideNbrs = 0;
        for (uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
            if (inS[g.nbrs[e]]) ++insideNbrs;
        cut += static_cast<int64_t>(g.degree(v)) - 2 * insideNbrs;
        degSum += g.degree(v);
        inS[v] = 1;
        double piS = static_cast<double>(degSum) / twoE;
        if (piS <= 0.0 || piS >= 1.0) continue;
        double qS = static_cast<double>(cut) / (2.0 * twoE);
        visit(i + 1, piS, qS / (piS * (1.0 - piS)));
    }
}

// BFS order from src with the per-vertex neighbor scan rotated by `salt` so
// repeated sweeps explore different prefixes.
std::vector<uint32_t> rotated_bfs_order(const ComponentGraph& g, uint32_t src, uint64_t salt,
                                        std::vector<int32_t>& mark) {
    const size_t m = g.size();
    mark.assign(m, 0);
    std::vector<uint32_t> order;
    order.reserve(m);
    order.push_back(src);
    mark[src] = 1;
    for (size_t head = 0; head < order.size(); ++head) {
        uint32_t u = order[head];
        uint32_t deg = g.degree(u);
        uint32_t off = g.offsets[u];
        uint32_t rot = deg ? static_cast<uint32_t>((salt + u) % deg) : 0;
        for (uint32_t j = 0; j < deg; ++j) {
            uint32_t w = g.nbrs[off + ((j + rot) % deg)];
            if (!mark[w]) {
                mark[w] = 1;
                order.push_back(w);
            }
        }
    }
    return order;
}

} // namespace

PhiProfile phi_profile(const ComponentGraph& g, uint64_t samplerSeed, int setsPerScale) {
    const size_t m = g.size();
    if (m == 0 || g.edgeCount == 0) throw std::invalid_argument("phi_profile: graph has no edges");
    if (setsPerScale < 1) throw std::invalid_argument("phi_profile: setsPerScale must be >= 1");

    uint32_t minDeg = g.degree(0);
    for (uint32_t v = 1; v < m; ++v) minDeg = std::min(minDeg, g.degree(v));
    const double piMin = static_cast<double>(minDeg) / (2.0 * static_cast<double>(g.edgeCount));
    PhiProfile prof;
    prof.scales = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / piMin) - 1e-12)));
    const double inf = std::numeric_limits<double>::infinity();
    prof.phiByScale.assign(static_cast<size_t>(prof.scales), inf);
    prof.setsPerScaleFound.assign(static_cast<size_t>(prof.scales), 0);

    auto record = [&](size_t, double piS, double phi) {
        // piS lands in window j when 2^{-j-1} <= piS <= 2^{-j}; boundary
        // values credit both adjacent windows.
        int jf = static_cast<int>(std::floor(-std::log2(piS)));
        for (int j = std::max(1, jf - 1); j <= std::min(prof.scales, jf + 1); ++j) {
            if (piS >= std::ldexp(1.0, -j - 1) && piS <= std::ldexp(1.0, -j)) {
                ++prof.setsPerScaleFound[j - 1];
                prof.phiByScale[j - 1] = std::min(prof.phiByScale[j - 1], phi);
            }
        }
    };

    CounterRng rng(samplerSeed, kPhiStream);
    std::vector<int32_t> mark;
    std::vector<uint8_t> inS(m, 0);
    for (int round = 0; round < setsPerScale; ++round) {
        uint32_t src = static_cast<uint32_t>(rng.below(m));
        uint64_t salt = rng.next();
        auto order = rotated_bfs_order(g, src, salt, mark);
        if (order.size() != m) throw std::invalid_argument("phi_profile: graph is disconnected");
        prefix_sweep(g, order, record, inS);
    }

    if (m <= 100000) {
        // Sweep cut over an approximate second eigenvector of the lazy walk.
        prof.sweepUsed = true;
        std::vector<double> f(m), nf(m);
        WalkDistribution pi = stationary(g);
        for (uint32_t v = 0; v < m; ++v)
            f[v] = static_cast<double>(rng.next() >> 11) * 0x1.0p-53 - 0.5;
        for (int it = 0; it < 200; ++it) {
            for (uint32_t v = 0; v < m; ++v) {
                double acc = 0.5 * f[v];
                double inv = 1.0 / (2.0 * static_cast<double>(g.degree(v)));
                for (uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) acc += f[g.nbrs[e]] * inv;
                nf[v] = acc;
            }
            double meanPi = 0;
            for (uint32_t v = 0; v < m; ++v) meanPi += pi.probs[v] * nf[v];
            double norm = 0;
            for (uint32_t v = 0; v < m; ++v) {
                nf[v] -= meanPi;
                norm += nf[v] * nf[v];
            }
            if (norm < 1e-300) break;
            norm = 1.0 / std::sqrt(norm);
            for (uint32_t v = 0; v < m; ++v) f[v] = nf[v] * norm;
        }
        std::vector<uint32_t> order(m);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            if (f[a] != f[b]) return f[a] < f[b];
            return a < b;
        });
        prefix_sweep(g, order, record, inS);
    }

    prof.frSum = 0;
    for (int j = 1; j <= prof.scales; ++j) {
        double& phi = prof.phiByScale[j - 1];
        if (!std::isfinite(phi)) phi = 1.0; // empty scale convention
        prof.frSum += 1.0 / (phi * phi);
    }
    return prof;
}

ExpansionScan expansion_scan(const ComponentGraph& g, int d, const std::vector<uint64_t>& sizes,
                             int setsPerSize, uint64_t seed, double deltaBand) {
    const size_t m = g.size();
    if (m < 2) throw std::invalid_argument("expansion_scan: graph too small");
    if (setsPerSize < 1) throw std::invalid_argument("expansion_scan: setsPerSize must be >= 1");
    for (uint64_t s : sizes)
        if (s < 1 || s > m / 2) throw std::invalid_argument("expansion_scan: sizes must lie in [1, m/2]");

    CounterRng rng(seed, kExpandStream);
    std::vector<uint8_t> inS(m, 0);
    std::vector<int32_t> mark;

    // Cut of the first `take` vertices of a rotated BFS order from src.
    auto bfs_prefix_cut = [&](uint32_t src, uint64_t salt, size_t take) -> uint64_t {
        mark.assign(m, 0);
        std::fill(inS.begin(), inS.end(), 0);
        std::vector<uint32_t> order;
        order.reserve(take);
        order.push_back(src);
        mark[src] = 1;
        for (size_t head = 0; head < order.size() && order.size() < take; ++head) {
            uint32_t u = order[head];
            uint32_t deg = g.degree(u);
            uint32_t off = g.offsets[u];
            uint32_t rot = deg ? static_cast<uint32_t>((salt + u) % deg) : 0;
            for (uint32_t j = 0; j < deg && order.size() < take; ++j) {
                uint32_t w = g.nbrs[off + ((j + rot) % deg)];
                if (!mark[w]) {
                    mark[w] = 1;
                    order.push_back(w);
                }
            }
        }
        int64_t cut = 0;
        for (uint32_t v : order) {
            int64_t inside = 0;
            for (uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
                if (inS[g.nbrs[e]]) ++inside;
            cut += static_cast<int64_t>(g.degree(v)) - 2 * inside;
            inS[v] = 1;
        }
        return static_cast<uint64_t>(cut);
    };

    ExpansionScan scan;
    scan.globalMin = std::numeric_limits<double>::infinity();
    for (uint64_t s : sizes) {
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < setsPerSize; ++rep) {
            uint32_t src = static_cast<uint32_t>(rng.below(m));
            uint64_t salt = rng.next();
            uint64_t cut = bfs_prefix_cut(src, salt, static_cast<size_t>(s));
            best = std::min(best, static_cast<double>(d) * static_cast<double>(cut) / static_cast<double>(s));
        }
        scan.perSize.emplace_back(s, best);
        scan.globalMin = std::min(scan.globalMin, best);
    }

    // Large-set variant: |S| anywhere in the middle band, connectivity not
    // required; complements of BFS prefixes alternate with uniform subsets.
    scan.largeSetMin = std::numeric_limits<double>::infinity();
    uint64_t lo = static_cast<uint64_t>(std::ceil(deltaBand * static_cast<double>(m)));
    uint64_t hi = static_cast<uint64_t>(std::floor((1.0 - deltaBand) * static_cast<double>(m)));
    lo = std::max<uint64_t>(lo, 1);
    hi = std::min<uint64_t>(hi, m - 1);
    if (lo <= hi) {
        std::vector<uint32_t> perm(m);
        for (int rep = 0; rep < setsPerSize; ++rep) {
            uint64_t s = lo + rng.below(hi - lo + 1);
            uint64_t cut;
            if (rep % 2 == 0) {
                uint32_t src = static_cast<uint32_t>(rng.below(m));
                uint64_t salt = rng.next();
                // cut(prefix) = cut(complement); report it against |S| = s
                cut = bfs_prefix_cut(src, salt, static_cast<size_t>(m - s));
            } else {
                std::iota(perm.begin(), perm.end(), 0u);
                std::fill(inS.begin(), inS.end(), 0);
                for (uint64_t i = 0; i < s; ++i) {
                    uint64_t j = i + rng.below(m - i);
                    std::swap(perm[i], perm[j]);
                    inS[perm[i]] = 1;
                }
                int64_t c = 0;
                for (uint64_t i = 0; i < s; ++i) {
                    uint32_t v = perm[i];
                    for (uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
                        if (!inS[g.nbrs[e]]) ++c;
                }
                cut = static_cast<uint64_t>(c);
            }
            scan.largeSetMin = std::min(
                scan.largeSetMin, static_cast<double>(d) * static_cast<double>(cut) / static_cast<double>(s));
        }
    }
    return scan;
}

} // namespace percolab
