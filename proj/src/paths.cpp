#include "percolab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "percolab/stats.hpp"

namespace percolab {

namespace {

constexpr uint64_t kDiamStream = 0x4449414Dull;
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

} // namespace

std::optional<int64_t> bfs_distance(const PercolationSample& sample, VertexId u, VertexId v,
                                    std::optional<int64_t> cap) {
    const int d = sample.params().d;
    check_vertex(u, d);
    check_vertex(v, d);
    if (u == v) return 0;
    std::unordered_map<VertexId, int64_t> dist;
    dist.emplace(u, 0);
    std::deque<VertexId> queue{u};
    std::vector<VertexId> buf(static_cast<size_t>(d));
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        int64_t dx = dist[x];
        if (cap && dx >= *cap) continue; // children would exceed the cap
        int cnt = sample.open_neighbors(x, buf.data());
        for (int i = 0; i < cnt; ++i) {
            VertexId w = buf[i];
            if (dist.count(w)) continue;
            if (w == v) return dx + 1;
            dist.emplace(w, dx + 1);
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

namespace {

// BFS recording parents; returns (farthest vertex, its distance).
std::pair<uint32_t, int64_t> bfs_with_parents(const ComponentGraph& g, uint32_t src,
                                              std::vector<int32_t>& dist, std::vector<uint32_t>& parent) {
    const size_t m = g.size();
    dist.assign(m, -1);
    parent.assign(m, src);
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
                parent[w] = u;
                if (dist[w] > dist[far] || (dist[w] == dist[far] && w < far)) far = w;
                queue.push_back(w);
            }
        }
    }
    return {far, dist[far]};
}

uint32_t halfway_up(uint32_t from, int64_t steps, const std::vector<uint32_t>& parent) {
    uint32_t x = from;
    for (int64_t i = 0; i < steps; ++i) x = parent[x];
    return x;
}

} // namespace

DiameterReport diameter_of(const ComponentGraph& g, uint64_t exactSizeLimit, uint64_t seed) {
    const size_t m = g.size();
    if (m == 0) throw std::invalid_argument("diameter_of: empty graph");
    DiameterReport rep;
    if (m == 1) {
        rep.exact = 0;
        return rep;
    }

    CounterRng rng(seed, kDiamStream);
    std::vector<int32_t> dist;
    std::vector<uint32_t> parent;

    // Two double sweeps; the second starts from the midpoint of the first.
    uint32_t r0 = static_cast<uint32_t>(rng.below(m));
    uint32_t a1 = csr_bfs(g, r0, dist).first;
    auto [b1, e1] = bfs_with_parents(g, a1, dist, parent);
    uint32_t mid1 = halfway_up(b1, e1 / 2, parent);
    uint32_t a2 = csr_bfs(g, mid1, dist).first;
    auto [b2, e2] = bfs_with_parents(g, a2, dist, parent);
    uint32_t mid2 = halfway_up(b2, e2 / 2, parent);
    rep.bfsRuns = 4;
    int64_t sweepLb = std::max(e1, e2);
    rep.eccSamples.push_back(e1);
    rep.eccSamples.push_back(e2);
    rep.lowerBound = sweepLb;

    if (m <= exactSizeLimit) {
        // Eccentricity search from the sweep midpoint with level pruning: once
        // every vertex at BFS depth >= i has been scanned, any pair realizing a
        // distance > 2(i-1) would have had an endpoint among them.
        auto [fu, eccU] = csr_bfs(g, mid2, dist);
        (void)fu;
        ++rep.bfsRuns;
        rep.eccSamples.push_back(eccU);
        std::vector<std::vector<uint32_t>> levels(static_cast<size_t>(eccU) + 1);
        for (uint32_t v = 0; v < m; ++v) levels[static_cast<size_t>(dist[v])].push_back(v);
        int64_t lb = std::max(sweepLb, eccU);
        int64_t ub = 2 * eccU;
        std::vector<int32_t> dv;
        for (int64_t i = eccU; i >= 1 && ub > lb; --i) {
            for (uint32_t v : levels[static_cast<size_t>(i)]) {
                lb = std::max(lb, csr_bfs(g, v, dv).second);
                ++rep.bfsRuns;
            }
            if (lb > 2 * (i - 1)) break;
            ub = 2 * (i - 1);
        }
        rep.exact = lb;
    } else {
        rep.approximate = true;
        int64_t lb = sweepLb;
        for (int round = 0; round < 20; ++round) {
            uint32_t src = static_cast<uint32_t>(rng.below(m));
            uint32_t a = csr_bfs(g, src, dist).first;
            int64_t e = csr_bfs(g, a, dist).second;
            rep.bfsRuns += 2;
            lb = std::max(lb, e);
        }
        for (int j = 0; j < 64; ++j) {
            uint32_t src = static_cast<uint32_t>(rng.below(m));
            int64_t ecc = csr_bfs(g, src, dist).second;
            ++rep.bfsRuns;
            rep.eccSamples.push_back(ecc);
            lb = std::max(lb, ecc);
        }
        rep.lowerBound = lb;
    }
    return rep;
}

DiameterReport diameter(const ComponentLabeling& labeling, const PercolationSample& sample,
                        uint64_t exactSizeLimit) {
    if (labeling.giantSize == 0) throw std::invalid_argument("diameter: empty giant");
    ComponentGraph g = build_component_graph(labeling, sample, labeling.giantLabel);
    return diameter_of(g, exactSizeLimit, sample.params().seed);
}

int64_t diameter_all_pairs(const ComponentGraph& g) {
    if (g.size() == 0) throw std::invalid_argument("diameter_all_pairs: empty graph");
    std::vector<int32_t> dist;
    int64_t diam = 0;
    for (uint32_t v = 0; v < g.size(); ++v) diam = std::max(diam, csr_bfs(g, v, dist).second);
    return diam;
}

namespace {

std::vector<int> flips_of(const CubePath& path, int d) {
    if (path.vertices.size() < 2) throw std::invalid_argument("path too short");
    std::vector<int> word;
    word.reserve(path.vertices.size() - 1);
    for (size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        VertexId a = path.vertices[i], b = path.vertices[i + 1];
        check_vertex(a, d);
        check_vertex(b, d);
        if (hamming(a, b) != 1) throw std::invalid_argument("consecutive vertices not adjacent");
        word.push_back(std::countr_zero(a ^ b));
    }
    return word;
}

void check_multiplicities(const std::vector<int>& word, int d, int k) {
    if (word.size() != static_cast<size_t>(d) * static_cast<size_t>(k))
        throw std::invalid_argument("word length is not k*d");
    std::vector<int> mult(static_cast<size_t>(d), 0);
    for (int s : word) {
        if (s < 0 || s >= d) throw std::invalid_argument("symbol out of range");
        ++mult[static_cast<size_t>(s)];
    }
    for (int m : mult)
        if (m != k) throw std::invalid_argument("some coordinate is not used exactly k times");
}

// P2 window check for the window of length l ending at position end (exclusive).
bool window_ok(const std::vector<int>& word, size_t end, size_t l, std::vector<int>& scratch) {
    std::fill(scratch.begin(), scratch.end(), 0);
    for (size_t i = end - l; i < end; ++i) ++scratch[static_cast<size_t>(word[i])];
    size_t once = 0;
    for (size_t i = end - l; i < end; ++i)
        if (scratch[static_cast<size_t>(word[i])] == 1) ++once;
    return 2 * once >= l;
}

} // namespace

TameCheck is_tame(const CubePath& path, int d, int k) {
    std::vector<int> word = flips_of(path, d);
    check_multiplicities(word, d, k);
    const auto& vs = path.vertices;

    // vertex distinctness first: a repeat disqualifies the walk as a path
    std::unordered_map<VertexId, size_t> seen;
    for (size_t i = 0; i < vs.size(); ++i) {
        auto [it, fresh] = seen.emplace(vs[i], i);
        if (!fresh)
            return {false, "repeated vertex at steps " + std::to_string(it->second) + "," + std::to_string(i)};
    }

    // P1: cube-adjacent path vertices must be path-consecutive
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 2; j < vs.size(); ++j)
            if (hamming(vs[i], vs[j]) == 1)
                return {false,
                        "P1: positions " + std::to_string(i) + "," + std::to_string(j) +
                            " are adjacent but not consecutive"};

    // P2: windows up to floor(d/k^3) need at least half once-occurring symbols
    const size_t maxLen = static_cast<size_t>(d / (k * k * k));
    std::vector<int> scratch(static_cast<size_t>(d), 0);
    for (size_t l = 1; l <= maxLen; ++l)
        for (size_t end = l; end <= word.size(); ++end)
            if (!window_ok(word, end, l, scratch))
                return {false,
                        "P2: window [" + std::to_string(end - l) + "," + std::to_string(end) +
                            ") lacks once-occurring symbols"};
    return {true, ""};
}

PathWord phi_encode(const CubePath& path, int d, int k) {
    PathWord w;
    w.d = d;
    w.k = k;
    w.word = flips_of(path, d);
    check_multiplicities(w.word, d, k);
    return w;
}

DecodeResult phi_decode(const PathWord& word, VertexId start) {
    check_vertex(start, word.d);
    DecodeResult res;
    res.repeatedVertex = false;
    res.path.vertices.reserve(word.word.size() + 1);
    res.path.vertices.push_back(start);
    std::unordered_set<VertexId> seen{start};
    VertexId cur = start;
    for (int s : word.word) {
        if (s < 0 || s >= word.d) throw std::invalid_argument("phi_decode: symbol out of range");
        cur ^= 1ull << s;
        res.path.vertices.push_back(cur);
        if (!seen.insert(cur).second) res.repeatedVertex = true;
    }
    return res;
}

namespace {

struct TameDfs {
    int d;
    int k;
    size_t len;      // k*d
    size_t maxWin;   // floor(d/k^3)
    bool enforceTame;
    uint64_t count = 0;

    std::vector<int> word;
    std::vector<int> mult;
    std::vector<VertexId> verts;
    std::vector<uint8_t> visited; // over all 2^d vertices
    std::vector<int> winScratch;

    void run() {
        word.clear();
        mult.assign(static_cast<size_t>(d), 0);
        verts.assign(1, 0);
        visited.assign(size_t{1} << d, 0);
        visited[0] = 1;
        winScratch.assign(static_cast<size_t>(d), 0);
        extend();
    }

    bool new_windows_ok() {
        size_t n = word.size();
        for (size_t l = 1; l <= std::min(maxWin, n); ++l)
            if (!window_ok(word, n, l, winScratch)) return false;
        return true;
    }

    void extend() {
        if (word.size() == len) {
            ++count;
            return;
        }
        VertexId cur = verts.back();
        for (int s = 0; s < d; ++s) {
            if (mult[static_cast<size_t>(s)] == k) continue;
            VertexId nxt = cur ^ (1ull << s);
            if (visited[nxt]) continue;
            if (enforceTame) {
                // incremental P1: nxt may be cube-adjacent only to cur
                bool clash = false;
                for (size_t i = 0; i + 1 < verts.size() && !clash; ++i)
                    if (hamming(verts[i], nxt) == 1) clash = true;
                if (clash) continue;
            }
            word.push_back(s);
            ++mult[static_cast<size_t>(s)];
            verts.push_back(nxt);
            visited[nxt] = 1;
            if (!enforceTame || new_windows_ok()) extend();
            visited[nxt] = 0;
            verts.pop_back();
            --mult[static_cast<size_t>(s)];
            word.pop_back();
        }
    }
};

} // namespace

TameCount enumerate_tame(int d, int k) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("enumerate_tame: k must be a positive odd integer");
    check_dim(d);
    if (static_cast<int64_t>(k) * d > 14) throw std::invalid_argument("enumerate_tame: k*d must be <= 14");

    TameDfs dfs;
    dfs.d = d;
    dfs.k = k;
    dfs.len = static_cast<size_t>(k) * static_cast<size_t>(d);
    dfs.maxWin = static_cast<size_t>(d / (k * k * k));

    TameCount out;
    dfs.enforceTame = false;
    dfs.run();
    out.paths = dfs.count;
    dfs.enforceTame = true;
    dfs.count = 0;
    dfs.run();
    out.tame = dfs.count;

    SequenceCount seq = sequence_count(d, k);
    if (out.tame > out.paths) throw std::logic_error("enumerate_tame: tame count exceeds path count");
    if (seq.exact && out.paths > seq.value)
        throw std::logic_error("enumerate_tame: path count exceeds the word count");
    // The companion lower bound k^-40 * |S_d(k)| is far below 1 at any
    // enumerable size except k=1, where it demands all monotone paths tame.
    double lower = std::exp(seq.logValue - 40.0 * std::log(static_cast<double>(k)));
    if (lower >= 1.0 && static_cast<double>(out.tame) < lower - 1e-6)
        throw std::logic_error("enumerate_tame: tame count below the lower bound");
    return out;
}

SequenceCount sequence_count(int d, int k) {
    if (d < 1 || k < 1) throw std::invalid_argument("sequence_count: d and k must be >= 1");
    SequenceCount out;
    out.logValue = std::lgamma(static_cast<double>(k) * d + 1.0) - d * std::lgamma(static_cast<double>(k) + 1.0);
    out.exact = static_cast<int64_t>(k) * d <= 20;
    out.value = 0;
    if (out.exact) {
        // (kd)!/(k!)^d = prod_{i=1..d} C(ik, k), each factor an integer
        unsigned __int128 acc = 1;
        for (int i = 1; i <= d; ++i) {
            unsigned __int128 binom = 1;
            for (int j = 1; j <= k; ++j) {
                binom = binom * static_cast<unsigned>((i - 1) * k + j);
                binom /= static_cast<unsigned>(j); // divisible: running binomial
            }
            acc *= binom;
        }
        if (acc > std::numeric_limits<uint64_t>::max()) {
            out.exact = false;
        } else {
            out.value = static_cast<uint64_t>(acc);
        }
    }
    return out;
}

namespace {

// Lowest `take` set bits of mask.
uint64_t low_bits(uint64_t mask, int take) {
    uint64_t out = 0;
    while (take-- > 0) {
        uint64_t b = mask & (~mask + 1);
        out |= b;
        mask ^= b;
    }
    return out;
}

// Midpoint w between x and y with hamming(x,y) <= 2*(d-need): flips the whole
// agreement set plus half the disagreement set, so both hops reach `need`.
VertexId hop_midpoint(VertexId x, VertexId y, int d) {
    uint64_t diff = x ^ y;
    int h = std::popcount(diff);
    uint64_t full = d == 64 ? ~0ull : (1ull << d) - 1;
    uint64_t flip = (full & ~diff) | low_bits(diff, h / 2);
    return x ^ flip;
}

} // namespace

std::vector<VertexId> chain_waypoints(VertexId u, VertexId v, double epsilon, int d) {
    check_vertex(u, d);
    check_vertex(v, d);
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("chain_waypoints: epsilon must be in (0,1)");
    if (epsilon * d < 4.0) throw std::invalid_argument("chain_waypoints: requires epsilon*d >= 4");

    const int64_t need = static_cast<int64_t>(std::ceil((1.0 - epsilon / 2.0) * d));
    const int64_t slack = d - need; // = floor(epsilon*d/2)
    const size_t maxLen = static_cast<size_t>(std::ceil(2.0 / epsilon));
    const uint64_t full = d == 64 ? ~0ull : (1ull << d) - 1;

    std::vector<VertexId> chain;
    const int64_t h = hamming(u, v);
    if (h >= need) {
        chain = {u, v};
    } else if (h <= 2 * slack) {
        chain = {u, hop_midpoint(u, v, d), v};
    } else {
        // Eat the difference set in chunks of <= 2*slack, one midpoint hop per
        // chunk; when that needs too many hops, first jump to (almost) the
        // antipode of u, shrinking the difference to d-h <= 2*slack*pairs.
        auto even_chain = [&](VertexId from, VertexId to) {
            uint64_t diff = from ^ to;
            VertexId cur = from;
            while (diff) {
                int take = static_cast<int>(std::min<int64_t>(std::popcount(diff), 2 * slack));
                uint64_t chunk = low_bits(diff, take);
                VertexId nxt = cur ^ chunk;
                chain.push_back(hop_midpoint(cur, nxt, d));
                chain.push_back(nxt);
                cur = nxt;
                diff ^= chunk;
            }
        };
        int64_t evenSteps = 2 * ((h + 2 * slack - 1) / (2 * slack));
        int64_t hC = d - h;
        int64_t rest = std::max<int64_t>(hC - slack, 0);
        int64_t oddSteps = 1 + 2 * ((rest + 2 * slack - 1) / (2 * slack));
        int64_t budget = static_cast<int64_t>(maxLen) - 1;
        if (evenSteps > budget && oddSteps > budget)
            // Provably unreachable hamming range at this exact (d, epsilon):
            // with only two hops, flip sets of size >= need have symmetric
            // difference <= 2*(d-need).  Occurs for epsilon > 2/3 at small d
            // where the floor in (d-need) bites; the target is asymptotic in d.
            throw std::invalid_argument("chain_waypoints: rounding gap makes this (d, epsilon, hamming) infeasible");
        chain.push_back(u);
        if (evenSteps <= budget && evenSteps <= oddSteps) {
            even_chain(u, v);
        } else {
            uint64_t keep = low_bits(full & ~(u ^ v), static_cast<int>(std::min(hC, slack)));
            VertexId t = u ^ (full & ~keep);
            chain.push_back(t);
            even_chain(t, v);
        }
    }

    if (chain.size() > maxLen || chain.front() != u || chain.back() != v)
        throw std::logic_error("chain_waypoints: construction broke the length contract");
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        if (hamming(chain[i], chain[i + 1]) < need)
            throw std::logic_error("chain_waypoints: construction broke the distance contract");
    return chain;
}

std::optional<std::vector<VertexId>> antipodal_path(const PercolationSample& sample, int k1) {
    const int d = sample.params().d;
    const VertexId target = d == 64 ? ~0ull : (1ull << d) - 1;
    const int64_t cap = static_cast<int64_t>(k1) * d;
    std::unordered_map<VertexId, VertexId> parent;
    std::unordered_map<VertexId, int64_t> dist;
    parent.emplace(0, 0);
    dist.emplace(0, 0);
    std::deque<VertexId> queue{0};
    std::vector<VertexId> buf(static_cast<size_t>(d));
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        int64_t dx = dist[x];
        if (dx >= cap) continue;
        int cnt = sample.open_neighbors(x, buf.data());
        for (int i = 0; i < cnt; ++i) {
            VertexId w = buf[i];
            if (parent.count(w)) continue;
            parent.emplace(w, x);
            dist.emplace(w, dx + 1);
            if (w == target) {
                std::vector<VertexId> path{w};
                while (path.back() != 0) path.push_back(parent[path.back()]);
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

AntipodalResult antipodal_experiment(int d, double c, int k1, uint64_t trials, uint64_t seed) {
    if (k1 < 1) throw std::invalid_argument("antipodal_experiment: k1 must be >= 1");
    if (trials < 1) throw std::invalid_argument("antipodal_experiment: trials must be >= 1");
    const VertexId target = d == 64 ? ~0ull : (1ull << d) - 1;
    AntipodalResult res;
    res.trials = trials;
    for (uint64_t t = 0; t < trials; ++t) {
        uint64_t trialSeed = splitmix64_mix(seed + kGolden * (t + 1));
        PercolationSample sample(make_params(d, c, trialSeed));
        auto dist = bfs_distance(sample, 0, target, static_cast<int64_t>(k1) * d);
        if (dist) ++res.successes;
    }
    res.pHat = static_cast<double>(res.successes) / static_cast<double>(res.trials);
    WilsonInterval wi = wilson_interval(res.successes, res.trials);
    res.wilsonLow = wi.low;
    res.wilsonHigh = wi.high;
    return res;
}

} // namespace percolab
