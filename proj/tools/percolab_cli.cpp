// percolab: supercritical hypercube percolation lab.
//
//   percolab theory y --c 2
//   percolab giant --d 12 --d 14 --c 2 --trials 20 --seed 1 --out giant.csv
//   percolab verify harper --d 3
//
// Every subcommand accepts --config <file> with key=value lines; command-line
// flags override file values.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <numeric>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percolab/branching.hpp"
#include "percolab/combinatorics.hpp"
#include "percolab/components.hpp"
#include "percolab/lab.hpp"
#include "percolab/paths.hpp"
#include "percolab/percolation.hpp"
#include "percolab/walk.hpp"

namespace {

using namespace percolab;

void print_summary(const SummaryReport& rep) {
    std::printf("# %s\n", rep.canonicalConfig.c_str());
    for (auto& [d, cols] : rep.perD) {
        std::printf("d=%d\n", d);
        for (auto& name : rep.columns) {
            const Aggregate& a = cols.at(name);
            std::printf("  %-18s mean=%-12.6g median=%-12.6g se=%-10.4g min=%-12.6g max=%.6g\n",
                        name.c_str(), a.mean, a.median, a.se, a.minV, a.maxV);
        }
    }
    if (!rep.theory.empty()) {
        std::printf("theory:");
        for (auto& [k, v] : rep.theory) std::printf(" %s=%.10g", k.c_str(), v);
        std::printf("\n");
    }
    for (auto& [name, pass] : rep.verdicts)
        std::printf("verdict %s: %s\n", name.c_str(), pass ? "pass" : "FAIL");
    if (!rep.config.outPath.empty())
        std::printf("wrote %s (%s)\n", rep.config.outPath.c_str(), rep.config.format.c_str());
}

// Experiment subcommand with the shared flag set; knobs beyond the shared ones
// are wired by the caller.
CLI::App* experiment_cmd(CLI::App& app, ExperimentConfig& cfg, const std::string& name,
                         const std::string& desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--d", cfg.dList, "cube dimension(s)")->required();
    cmd->add_option("--c", cfg.c, "mean-degree parameter, p = c/d");
    cmd->add_option("--trials", cfg.trials, "trials per dimension");
    cmd->add_option("--seed", cfg.rootSeed, "root seed");
    cmd->add_option("--threads", cfg.threads, "worker threads (trial-level)");
    cmd->add_option("--out", cfg.outPath, "report file path");
    cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->set_config("--config");
    cmd->callback([&cfg, name]() {
        cfg.experiment = name;
        print_summary(run(cfg));
    });
    return cmd;
}

int run_verify_trees(int d, int kmax) {
    for (int k = 1; k <= kmax; ++k) {
        uint64_t n = count_rooted_subtrees(d, 0, k);
        double up = rooted_subtree_upper_bound(d, k);
        if (k <= d)
            std::printf("d=%d k=%d subtrees(root 0)=%" PRIu64 "  bounds [%.6g, %.6g]\n", d, k, n,
                        rooted_subtree_lower_bound(d, k), up);
        else
            std::printf("d=%d k=%d subtrees(root 0)=%" PRIu64 "  upper bound %.6g\n", d, k, n, up);
    }
    std::printf("bounds asserted inside count_rooted_subtrees on every call\n");
    return 0;
}

int run_verify_forests(int d, int kmax) {
    const std::vector<std::vector<VertexId>> uSets = {{}, {0}, {0, 1}};
    for (const auto& u : uSets) {
        for (int k = 0; k <= kmax; ++k) {
            uint64_t n = count_forests(d, u, k);
            std::printf("d=%d |U|=%zu k=%d forests=%" PRIu64 "  bound %.6g\n", d, u.size(), k, n,
                        forest_upper_bound(d, static_cast<int>(u.size()), k));
        }
    }
    return 0;
}

int run_verify_decompose() {
    // path, star, and a bushy tree; weights stress both ends of (0, m0]
    std::vector<WeightedTree> cases;
    WeightedTree path;
    path.n = 9;
    path.m0 = 1.0;
    path.weight.assign(9, 0.4);
    for (int i = 0; i + 1 < 9; ++i) path.edges.emplace_back(i, i + 1);
    cases.push_back(path);
    WeightedTree star;
    star.n = 7;
    star.m0 = 0.5;
    star.weight.assign(7, 0.5);
    for (int i = 1; i < 7; ++i) star.edges.emplace_back(0, i);
    cases.push_back(star);
    WeightedTree bushy;
    bushy.n = 15;
    bushy.m0 = 1.0;
    for (int i = 0; i < 15; ++i) bushy.weight.push_back(0.1 + 0.05 * (i % 7));
    for (int i = 1; i < 15; ++i) bushy.edges.emplace_back((i - 1) / 2, i);
    cases.push_back(bushy);
    for (size_t i = 0; i < cases.size(); ++i) {
        auto parts = decompose_weighted_tree(cases[i]);
        std::printf("tree %zu: n=%d maxdeg=%d m0=%.2f -> %zu parts (postconditions asserted)\n", i,
                    cases[i].n, cases[i].max_degree(), cases[i].m0, parts.size());
    }
    return 0;
}

int run_verify_switching(int d, int k, uint64_t trials, uint64_t seed) {
    // statistic: adjacent equal symbols; one transposition moves it by <= 4
    SequenceStatistic f = [](const std::vector<int>& w) {
        double n = 0;
        for (size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i] == w[i + 1]) n += 1;
        return n;
    };
    double t = 0.5 * std::sqrt(static_cast<double>(k) * d);
    SwitchingReport rep = mc_switching_concentration(f, 4.0, k, d, t, trials, seed);
    std::printf("switching d=%d k=%d trials=%" PRIu64 " t=%.3f\n", d, k, trials, t);
    std::printf("  lipschitz certified=%d observed max step=%.3f (cLip=4)\n", rep.lipschitzCertified,
                rep.observedMaxStep);
    std::printf("  empirical tail=%.6f bound=%.6f se=%.6f -> %s\n", rep.empiricalTail, rep.bound,
                rep.standardError, rep.pass ? "pass" : "FAIL");
    return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"supercritical bond percolation lab on the hypercube"};
    app.require_subcommand(1);

    // theory ------------------------------------------------------------
    CLI::App* theory = app.add_subcommand("theory", "closed-form and solver values");
    theory->require_subcommand(1);
    double thC = 2.0;
    int thKmax = 5, thD = 12;
    int64_t thT = 1;
    CLI::App* ty = theory->add_subcommand("y", "survival probability y(c)");
    ty->add_option("--c", thC, "offspring mean")->required();
    ty->callback([&]() {
        auto sol = solve_poisson_survival(thC);
        std::printf("y(%.10g) = %.12f  (extinction %.12f, residual %.3g, iterations %d)\n", thC,
                    sol.survival, sol.extinction, sol.residual, sol.iterations);
    });
    CLI::App* tb = theory->add_subcommand("borel", "Borel progeny weights");
    tb->add_option("--c", thC, "offspring mean")->required();
    tb->add_option("--kmax", thKmax, "largest progeny size");
    tb->callback([&]() {
        double sum = 0;
        for (int k = 1; k <= thKmax; ++k) {
            double w = borel_weight(thC, static_cast<uint64_t>(k));
            sum += w;
            std::printf("P(progeny = %d) = %.12f\n", k, w);
        }
        std::printf("partial sum %.12f  (1 - y = %.12f)\n", sum, solve_poisson_survival(thC).extinction);
    });
    CLI::App* tc = theory->add_subcommand("cutoff", "component-size tail cutoff f(t, 2^d)");
    tc->add_option("--c", thC, "mean-degree parameter")->required();
    tc->add_option("--d", thD, "cube dimension")->required();
    tc->add_option("--t", thT, "precision parameter")->required();
    tc->callback([&]() {
        int64_t n = static_cast<int64_t>(vertex_count(thD));
        std::printf("f(t=%" PRId64 ", n=2^%d) = %" PRId64 "\n", thT, thD, tail_cutoff(thT, n, thC));
    });

    // experiments --------------------------------------------------------
    ExperimentConfig cfg;
    experiment_cmd(app, cfg, "giant", "giant component census");
    CLI::App* censusCmd = experiment_cmd(app, cfg, "census", "component size census vs Borel weights");
    censusCmd->add_option("--kmax", cfg.kmax, "largest exact component size tracked");
    CLI::App* diamCmd = experiment_cmd(app, cfg, "diameter", "giant diameter");
    diamCmd->add_option("--exact-limit", cfg.exactSizeLimit, "exact diameter up to this giant size");
    CLI::App* mixCmd = experiment_cmd(app, cfg, "mixing", "lazy-walk mixing time estimate");
    mixCmd->add_option("--starts", cfg.starts, "sampled start vertices");
    mixCmd->add_option("--tmax", cfg.tMax, "evolution cap");
    CLI::App* expCmd = experiment_cmd(app, cfg, "expansion", "edge expansion scan");
    expCmd->add_option("--sizes", cfg.sizes, "set sizes to scan");
    expCmd->add_option("--sets-per-size", cfg.setsPerSize, "samples per size");
    CLI::App* sprCmd = experiment_cmd(app, cfg, "sprinkle", "two-round coupling audit");
    sprCmd->add_option("--delta", cfg.delta, "first-round slack, p1 = (c-delta)/d");
    sprCmd->add_option("--epsilon", cfg.epsilon, "bad-vertex neighbor fraction");
    CLI::App* antCmd = experiment_cmd(app, cfg, "antipodal", "0-to-antipode connection probability");
    antCmd->add_option("--k1", cfg.k1, "distance cap multiplier K1");

    // tame ----------------------------------------------------------------
    int tameD = 3, tameK = 1;
    CLI::App* tame = app.add_subcommand("tame", "enumerate tame 0-to-antipode paths");
    tame->add_option("--d", tameD, "cube dimension")->required();
    tame->add_option("--k", tameK, "uses of each coordinate (odd)")->required();
    tame->callback([&]() {
        TameCount tcnt = enumerate_tame(tameD, tameK);
        SequenceCount sc = sequence_count(tameD, tameK);
        std::printf("d=%d k=%d: |P'| = %" PRIu64 "  |P| = %" PRIu64 "  |S| = ", tameD, tameK, tcnt.tame,
                    tcnt.paths);
        if (sc.exact)
            std::printf("%" PRIu64 "\n", sc.value);
        else
            std::printf("exp(%.6f)\n", sc.logValue);
    });

    // conductance ----------------------------------------------------------
    int conD = 12;
    double conC = 2.0;
    uint64_t conSeed = 1, conBall = 500;
    int conSets = 8;
    CLI::App* con = app.add_subcommand("conductance", "conductance of a BFS ball and the profile sum");
    con->add_option("--d", conD, "cube dimension")->required();
    con->add_option("--c", conC, "mean-degree parameter");
    con->add_option("--seed", conSeed, "percolation seed");
    con->add_option("--ball", conBall, "BFS ball size");
    con->add_option("--sets-per-scale", conSets, "profile samples per dyadic scale");
    con->callback([&]() {
        PercolationSample sample(make_params(conD, conC, conSeed));
        ComponentLabeling labeling = label_components(sample);
        ComponentGraph g = build_component_graph(labeling, sample, labeling.giantLabel);
        uint64_t ball = std::min<uint64_t>(conBall, g.size() / 2);
        std::vector<int32_t> dist;
        csr_bfs(g, 0, dist);
        std::vector<uint32_t> byDist(g.size());
        std::iota(byDist.begin(), byDist.end(), 0u);
        std::sort(byDist.begin(), byDist.end(), [&](uint32_t a, uint32_t b) {
            if (dist[a] != dist[b]) return dist[a] < dist[b];
            return a < b;
        });
        std::vector<uint32_t> S(byDist.begin(), byDist.begin() + static_cast<size_t>(std::max<uint64_t>(ball, 1)));
        ConductanceReport rep = conductance(g, S);
        std::printf("giant m=%zu e=%" PRIu64 "  |S|=%zu cut=%" PRIu64 " pi=%.6f Q=%.6g Phi=%.6f\n",
                    g.size(), g.edgeCount, S.size(), rep.cutEdges, rep.piS, rep.QS, rep.phiS);
        PhiProfile prof = phi_profile(g, conSeed, conSets);
        std::printf("profile: %d scales, FR sum = %.4f, FRsum/d^2 = %.4f (sweep %sused)\n", prof.scales,
                    prof.frSum, prof.frSum / (conD * conD), prof.sweepUsed ? "" : "not ");
    });

    // verify ----------------------------------------------------------------
    CLI::App* verify = app.add_subcommand("verify", "exhaustive small-scale checks");
    verify->require_subcommand(1);
    int vD = 3, vK = 3;
    uint64_t vTrials = 20000, vSeed = 1;
    CLI::App* vh = verify->add_subcommand("harper", "edge-isoperimetry over all subsets");
    vh->add_option("--d", vD, "cube dimension (<= 4)")->required();
    vh->callback([&]() {
        HarperReport rep = harper_check_exhaustive(vD);
        std::printf("d=%d min slack %.6f at mask %#" PRIx64 "; zero-slack subcubes %" PRIu64 "; %s\n",
                    rep.d, rep.minSlack, rep.argminMask, rep.zeroSlackSubcubes,
                    rep.violation ? "VIOLATION" : "no violation");
        if (rep.violation) throw std::runtime_error("harper bound violated");
    });
    CLI::App* vt = verify->add_subcommand("trees", "rooted subtree counts vs bounds");
    vt->add_option("--d", vD, "cube dimension (<= 4)")->required();
    vt->add_option("--k", vK, "max subtree size (<= 6)");
    vt->callback([&]() {
        if (run_verify_trees(vD, vK)) throw std::runtime_error("tree bounds violated");
    });
    CLI::App* vf = verify->add_subcommand("forests", "anchored forest counts vs bounds");
    vf->add_option("--d", vD, "cube dimension (<= 3)")->required();
    vf->add_option("--k", vK, "max edge count (<= 4)");
    vf->callback([&]() {
        if (run_verify_forests(vD, vK)) throw std::runtime_error("forest bounds violated");
    });
    CLI::App* vd = verify->add_subcommand("decompose", "weighted tree decomposition samples");
    vd->callback([&]() {
        if (run_verify_decompose()) throw std::runtime_error("decomposition failed");
    });
    CLI::App* vs = verify->add_subcommand("switching", "switching concentration Monte Carlo");
    vs->add_option("--d", vD, "alphabet size")->required();
    vs->add_option("--k", vK, "multiplicity");
    vs->add_option("--trials", vTrials, "sample size");
    vs->add_option("--seed", vSeed, "rng seed");
    vs->callback([&]() {
        if (run_verify_switching(vD, vK, vTrials, vSeed))
            throw std::runtime_error("switching concentration failed");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
