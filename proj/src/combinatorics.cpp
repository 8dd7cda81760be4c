#include "percolab/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

namespace percolab {

namespace {

constexpr uint64_t kSparsifyStream = 0x53505253ull;
constexpr uint64_t kSwitchStream = 0x53574354ull;

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // Returns false when x and y were already connected (a cycle).
    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        parent[y] = x;
        return true;
    }
};

std::vector<std::pair<VertexId, VertexId>> all_cube_edges(int d) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId v = 0; v < (1ull << d); ++v)
        for (int i = 0; i < d; ++i)
            if (((v >> i) & 1ull) == 0) edges.emplace_back(v, v | (1ull << i));
    return edges;
}

// Calls fn for every size-r subset of {0..m-1} via a selection mask.
template <typename F>
void for_each_combination(int m, int r, F&& fn) {
    std::vector<int> pick(static_cast<size_t>(m), 0);
    std::fill(pick.begin(), pick.begin() + r, 1);
    std::sort(pick.begin(), pick.end(), std::greater<int>());
    do {
        fn(pick);
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

} // namespace

HarperReport harper_check_exhaustive(int d) {
    if (d < 1 || d > 4) throw std::invalid_argument("harper_check_exhaustive: d must be in [1,4]");
    const int n = 1 << d;
    std::vector<uint32_t> nbrMask(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < d; ++i) nbrMask[v] |= 1u << (v ^ (1 << i));

    // All subcube vertex masks, for the equality bookkeeping.
    std::set<uint32_t> subcubes;
    for (int freeMask = 0; freeMask < n; ++freeMask) {
        for (int base = 0; base < n; ++base) {
            if (base & freeMask) continue;
            uint32_t mask = 0;
            for (int x = freeMask;; x = (x - 1) & freeMask) {
                mask |= 1u << (base | x);
                if (x == 0) break;
            }
            subcubes.insert(mask);
        }
    }

    HarperReport rep{d, 0.0, 0, false, 0};
    bool first = true;
    const uint32_t full = n == 32 ? 0xFFFFFFFFu : ((1u << n) - 1);
    for (uint32_t S = 1; S != 0 && S <= full; ++S) {
        int size = std::popcount(S);
        uint64_t boundary = 0;
        for (uint32_t rest = S; rest; rest &= rest - 1)
            boundary += std::popcount(nbrMask[std::countr_zero(rest)] & ~S);
        double slack = static_cast<double>(boundary) - harper_bound(static_cast<uint64_t>(size), d);
        if (first || slack < rep.minSlack) {
            rep.minSlack = slack;
            rep.argminMask = S;
            first = false;
        }
        if (slack < -1e-9) rep.violation = true;
        if (std::abs(slack) <= 1e-9 && subcubes.count(S)) ++rep.zeroSlackSubcubes;
    }
    return rep;
}

double rooted_subtree_lower_bound(int d, int k) {
    if (k > d) throw std::invalid_argument("rooted_subtree_lower_bound: hypothesis needs k <= d");
    return std::pow(static_cast<double>(k), k - 2) * std::pow(static_cast<double>(d - k), k - 1) /
           std::tgamma(static_cast<double>(k));
}

double rooted_subtree_upper_bound(int d, int k) {
    return std::pow(static_cast<double>(k), k - 2) * std::pow(static_cast<double>(d), k - 1) /
           std::tgamma(static_cast<double>(k));
}

uint64_t count_rooted_subtrees(int d, VertexId v, int k) {
    if (d > 4 || k > 6) throw std::invalid_argument("count_rooted_subtrees: instance too large");
    if (k < 1) throw std::invalid_argument("count_rooted_subtrees: k must be >= 1");
    check_vertex(v, d);

    uint64_t count = 0;
    if (k == 1) {
        count = 1;
    } else {
        auto edges = all_cube_edges(d);
        const int m = static_cast<int>(edges.size());
        const int n = 1 << d;
        for_each_combination(m, k - 1, [&](const std::vector<int>& pick) {
            UnionFind uf(n);
            std::vector<VertexId> verts;
            bool acyclic = true;
            for (int e = 0; e < m && acyclic; ++e) {
                if (!pick[e]) continue;
                auto [a, b] = edges[e];
                verts.push_back(a);
                verts.push_back(b);
                acyclic = uf.unite(static_cast<int>(a), static_cast<int>(b));
            }
            if (!acyclic) return;
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
            // k-1 acyclic edges with k distinct endpoints form a tree.
            if (verts.size() != static_cast<size_t>(k)) return;
            if (!std::binary_search(verts.begin(), verts.end(), v)) return;
            ++count;
        });
    }

    double upper = rooted_subtree_upper_bound(d, k);
    if (static_cast<double>(count) > upper + 1e-6)
        throw std::logic_error("count_rooted_subtrees: upper bound violated");
    if (k <= d) {
        double lower = rooted_subtree_lower_bound(d, k);
        if (static_cast<double>(count) < lower - 1e-6)
            throw std::logic_error("count_rooted_subtrees: lower bound violated");
    }
    return count;
}

double forest_upper_bound(int d, int l, int k) {
    return std::pow(static_cast<double>(l + k), k) * std::pow(static_cast<double>(d), k) /
           std::tgamma(static_cast<double>(k) + 1.0);
}

uint64_t count_forests(int d, const std::vector<VertexId>& U, int k) {
    if (d > 3 || U.size() > 2 || k > 4) throw std::invalid_argument("count_forests: instance too large");
    if (k < 0) throw std::invalid_argument("count_forests: k must be >= 0");
    for (VertexId u : U) check_vertex(u, d);
    std::set<VertexId> uset(U.begin(), U.end());
    if (uset.size() != U.size()) throw std::invalid_argument("count_forests: U has repeats");

    uint64_t count = 0;
    if (k == 0) {
        count = 1; // the empty forest on U
    } else {
        auto edges = all_cube_edges(d);
        const int m = static_cast<int>(edges.size());
        const int n = 1 << d;
        for_each_combination(m, k, [&](const std::vector<int>& pick) {
            UnionFind uf(n);
            std::vector<VertexId> verts(U.begin(), U.end());
            bool acyclic = true;
            for (int e = 0; e < m && acyclic; ++e) {
                if (!pick[e]) continue;
                auto [a, b] = edges[e];
                verts.push_back(a);
                verts.push_back(b);
                acyclic = uf.unite(static_cast<int>(a), static_cast<int>(b));
            }
            if (!acyclic) return;
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
            // Every component of (V(F), F) must meet U.
            std::set<int> rootsWithU;
            for (VertexId u : U) rootsWithU.insert(uf.find(static_cast<int>(u)));
            for (VertexId w : verts)
                if (!rootsWithU.count(uf.find(static_cast<int>(w)))) return;
            ++count;
        });
    }

    double upper = forest_upper_bound(d, static_cast<int>(U.size()), k);
    if (static_cast<double>(count) > upper + 1e-6)
        throw std::logic_error("count_forests: upper bound violated");
    return count;
}

int WeightedTree::max_degree() const {
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (auto& [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<std::vector<int>> decompose_weighted_tree(const WeightedTree& t) {
    if (t.n < 1) throw std::invalid_argument("decompose_weighted_tree: empty tree");
    if (static_cast<int>(t.edges.size()) != t.n - 1)
        throw std::invalid_argument("decompose_weighted_tree: not a tree (edge count)");
    double total = 0;
    for (int v = 0; v < t.n; ++v) {
        if (!(t.weight[v] > 0.0) || t.weight[v] > t.m0 + 1e-12)
            throw std::invalid_argument("decompose_weighted_tree: weights must lie in (0, m0]");
        total += t.weight[v];
    }
    if (total < t.m0 - 1e-12) throw std::invalid_argument("decompose_weighted_tree: total weight below m0");

    std::vector<std::vector<int>> adj(static_cast<size_t>(t.n));
    {
        UnionFind uf(t.n);
        for (auto& [a, b] : t.edges) {
            if (!uf.unite(a, b)) throw std::invalid_argument("decompose_weighted_tree: cycle detected");
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    }

    // Root at 0; parent/depth via BFS.
    std::vector<int> parent(static_cast<size_t>(t.n), -1), depth(static_cast<size_t>(t.n), 0);
    std::vector<int> order; // BFS order; reversed it is leaf-first
    order.reserve(static_cast<size_t>(t.n));
    order.push_back(0);
    parent[0] = 0;
    for (size_t head = 0; head < order.size(); ++head) {
        int u = order[head];
        for (int w : adj[u]) {
            if (parent[w] == -1) {
                parent[w] = u;
                depth[w] = depth[u] + 1;
                order.push_back(w);
            }
        }
    }
    if (static_cast<int>(order.size()) != t.n)
        throw std::invalid_argument("decompose_weighted_tree: disconnected input");
    parent[0] = -1;

    const int delta = t.max_degree();
    const double cap = (static_cast<double>(delta) + 1.0) * t.m0;

    std::vector<int> part(static_cast<size_t>(t.n), -1);
    std::vector<std::vector<int>> parts;
    double remaining = total;

    auto alive_subtree_weights = [&](std::vector<double>& w) {
        w.assign(static_cast<size_t>(t.n), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int u = *it;
            if (part[u] != -1) continue;
            w[u] += t.weight[u];
            if (parent[u] >= 0 && part[parent[u]] == -1) w[parent[u]] += w[u];
        }
    };

    std::vector<double> sub;
    while (remaining > cap + 1e-12) {
        alive_subtree_weights(sub);
        // Deepest alive vertex whose alive subtree has reached m0.  Its alive
        // children subtrees all weigh < m0, so the detached part stays below
        // (delta+1) m0.
        int pick = -1;
        for (int v = 0; v < t.n; ++v) {
            if (part[v] != -1 || sub[v] < t.m0) continue;
            if (pick == -1 || depth[v] > depth[pick] || (depth[v] == depth[pick] && v < pick)) pick = v;
        }
        if (pick == -1) throw std::logic_error("decompose_weighted_tree: no detachable subtree");
        // Collect the alive subtree of pick.
        std::vector<int> newPart;
        std::vector<int> stack{pick};
        int id = static_cast<int>(parts.size());
        part[pick] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            newPart.push_back(u);
            for (int w : adj[u]) {
                if (w != parent[u] && part[w] == -1) {
                    // only alive descendants
                    part[w] = id;
                    stack.push_back(w);
                }
            }
        }
        remaining -= sub[pick];
        parts.push_back(std::move(newPart));
    }

    // The remainder is connected (contains the root) and weighs in [m0, cap].
    std::vector<int> rest;
    for (int v = 0; v < t.n; ++v)
        if (part[v] == -1) {
            part[v] = static_cast<int>(parts.size());
            rest.push_back(v);
        }
    if (!rest.empty()) parts.push_back(std::move(rest));

    // Postcondition check on every call: disjoint connected cover with part
    // weights in [m0, (delta+1) m0].
    std::vector<int> seen(static_cast<size_t>(t.n), 0);
    for (auto& p : parts) {
        double w = 0;
        UnionFind uf(t.n);
        std::set<int> inPart(p.begin(), p.end());
        int links = 0;
        for (int v : p) {
            if (seen[v]++) throw std::logic_error("decompose_weighted_tree: overlapping parts");
            w += t.weight[v];
        }
        for (auto& [a, b] : t.edges)
            if (inPart.count(a) && inPart.count(b) && uf.unite(a, b)) ++links;
        if (links != static_cast<int>(p.size()) - 1)
            throw std::logic_error("decompose_weighted_tree: part not connected");
        if (w < t.m0 - 1e-9 || w > cap + 1e-9)
            throw std::logic_error("decompose_weighted_tree: part weight out of range");
    }
    for (int v = 0; v < t.n; ++v)
        if (!seen[v]) throw std::logic_error("decompose_weighted_tree: vertex not covered");
    return parts;
}

uint64_t DisjointSetFamily::total_vertices() const {
    uint64_t v = 0;
    for (auto& s : sets) v += s.size();
    return v;
}

void DisjointSetFamily::boundary_counts(uint64_t& eOut, uint64_t& eIn) const {
    std::unordered_map<VertexId, int> setOf;
    for (size_t i = 0; i < sets.size(); ++i)
        for (VertexId v : sets[i])
            if (!setOf.emplace(v, static_cast<int>(i)).second)
                throw std::invalid_argument("DisjointSetFamily: sets are not disjoint");
    eOut = 0;
    uint64_t eInDoubled = 0;
    for (auto& [v, id] : setOf) {
        for (int i = 0; i < d; ++i) {
            auto it = setOf.find(v ^ (1ull << i));
            if (it == setOf.end())
                ++eOut;
            else if (it->second != id)
                ++eInDoubled;
        }
    }
    eIn = eInDoubled / 2;
}

uint64_t DisjointSetFamily::e_total() const {
    // Independent route: sum of full-cube boundaries of the member sets.
    uint64_t total = 0;
    for (auto& s : sets) total += edge_boundary_full(s, d);
    return total;
}

SparsifyResult sparsify_family(const DisjointSetFamily& c, double epsilon, uint64_t seed,
                               uint64_t sizeFloor, int retries) {
    if (c.sets.empty()) throw std::invalid_argument("sparsify_family: empty family");
    if (!(epsilon > 0.0) || epsilon > 0.5)
        throw std::invalid_argument("sparsify_family: epsilon must be in (0, 0.5]");
    const double maxSet = std::pow(static_cast<double>(c.d), 10.0);
    for (auto& s : c.sets)
        if (static_cast<double>(s.size()) > maxSet)
            throw std::invalid_argument("sparsify_family: member set larger than d^10");

    SparsifyResult res;
    const uint64_t vTotal = c.total_vertices();
    if (vTotal < sizeFloor) {
        res.failure = "family below the configured size floor";
        return res;
    }

    const double eps0 = 1.5 * epsilon; // in (epsilon, 2 epsilon)
    for (int attempt = 1; attempt <= retries; ++attempt) {
        CounterRng rng(seed, kSparsifyStream + static_cast<uint64_t>(attempt));
        DisjointSetFamily sub;
        sub.d = c.d;
        for (auto& s : c.sets)
            if (rng.next_double() < eps0) sub.sets.push_back(s);
        res.attempts = attempt;
        if (sub.sets.empty()) continue;
        uint64_t vSub = sub.total_vertices();
        if (static_cast<double>(vSub) < epsilon * static_cast<double>(vTotal)) continue;
        uint64_t eOut, eIn;
        sub.boundary_counts(eOut, eIn);
        if (static_cast<double>(eOut) >=
            (1.0 - 2.0 * epsilon) * static_cast<double>(c.d) * static_cast<double>(vSub)) {
            res.ok = true;
            res.family = std::move(sub);
            return res;
        }
    }
    res.failure = "AllRetriesFailed";
    return res;
}

SwitchingReport mc_switching_concentration(const SequenceStatistic& f, double cLip, int k, int d,
                                           double t, uint64_t trials, uint64_t seed) {
    if (k < 1 || d < 1) throw std::invalid_argument("mc_switching_concentration: bad k or d");
    if (!(cLip > 0.0)) throw std::invalid_argument("mc_switching_concentration: cLip must be positive");
    if (trials < 100) throw std::invalid_argument("mc_switching_concentration: too few trials");

    const size_t len = static_cast<size_t>(k) * static_cast<size_t>(d);
    std::vector<int> base(len);
    for (size_t i = 0; i < len; ++i) base[i] = static_cast<int>(i / static_cast<size_t>(k));

    SwitchingReport rep{};
    rep.cLip = cLip;

    // Lipschitz certificate over random single switchings.
    CounterRng certRng(seed, kSwitchStream);
    rep.observedMaxStep = 0;
    rep.lipschitzCertified = true;
    for (int it = 0; it < 10000; ++it) {
        std::vector<int> word = base;
        fisher_yates(word, certRng);
        size_t i = static_cast<size_t>(certRng.below(len));
        size_t j = static_cast<size_t>(certRng.below(len));
        double before = f(word);
        std::swap(word[i], word[j]);
        double step = std::abs(f(word) - before);
        rep.observedMaxStep = std::max(rep.observedMaxStep, step);
        if (step > cLip + 1e-12) rep.lipschitzCertified = false;
    }

    CounterRng rng(seed, kSwitchStream + 1);
    std::vector<double> values;
    values.reserve(trials);
    for (uint64_t it = 0; it < trials; ++it) {
        std::vector<int> word = base;
        fisher_yates(word, rng);
        values.push_back(f(word));
    }
    double m = 0;
    for (double v : values) m += v;
    m /= static_cast<double>(trials);
    rep.sampleMean = m;
    uint64_t hits = 0;
    for (double v : values)
        if (std::abs(v - m) >= t) ++hits;
    rep.empiricalTail = static_cast<double>(hits) / static_cast<double>(trials);
    rep.bound = 2.0 * std::exp(-t * t / (2.0 * cLip * cLip * static_cast<double>(k) * static_cast<double>(d)));
    rep.standardError =
        std::sqrt(rep.empiricalTail * (1.0 - rep.empiricalTail) / static_cast<double>(trials));
    rep.pass = rep.lipschitzCertified && rep.empiricalTail <= rep.bound + 3.0 * rep.standardError;
    return rep;
}

} // namespace percolab
