#include "percolab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "percolab/branching.hpp"
#include "percolab/components.hpp"
#include "percolab/paths.hpp"
#include "percolab/percolation.hpp"
#include "percolab/walk.hpp"

namespace percolab {

namespace {

const std::vector<std::string> kExperiments = {"giant",     "census",   "diameter", "mixing",
                                               "expansion", "sprinkle", "antipodal"};

std::string fmt_double(double x) {
    // shortest roundtrip representation; integers print without a point
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string fmt_u64(uint64_t x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void validate(const ExperimentConfig& cfg) {
    bool known = false;
    for (auto& e : kExperiments) known = known || e == cfg.experiment;
    if (!known) throw std::invalid_argument("config: unknown experiment '" + cfg.experiment + "'");
    if (cfg.dList.empty()) throw std::invalid_argument("config: d list must be nonempty");
    for (int d : cfg.dList) check_dim(d);
    if (!(cfg.c > 0.0)) throw std::invalid_argument("config: c must be positive");
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (cfg.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("config: format must be csv or json");
    if (cfg.experiment == "sprinkle") {
        if (!(cfg.delta > 0.0) || !(cfg.delta < cfg.c))
            throw std::invalid_argument("config: delta must lie in (0, c)");
        if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 1.0))
            throw std::invalid_argument("config: epsilon must lie in (0, 1)");
    }
    if (cfg.experiment == "census" && cfg.kmax < 1)
        throw std::invalid_argument("config: kmax must be >= 1");
    if (cfg.experiment == "mixing" && (cfg.starts < 1 || cfg.tMax < 1))
        throw std::invalid_argument("config: starts and tMax must be >= 1");
    if (cfg.experiment == "expansion" && cfg.setsPerSize < 1)
        throw std::invalid_argument("config: setsPerSize must be >= 1");
    if (cfg.experiment == "antipodal" && cfg.k1 < 1)
        throw std::invalid_argument("config: k1 must be >= 1");
}

std::vector<std::string> columns_for(const ExperimentConfig& cfg) {
    if (cfg.experiment == "giant")
        return {"giantSize", "giantFraction", "secondSize", "componentCount", "barePathLen"};
    if (cfg.experiment == "census") {
        std::vector<std::string> cols{"giantFraction", "componentCount"};
        for (int k = 1; k <= cfg.kmax; ++k) cols.push_back("vk" + std::to_string(k));
        cols.insert(cols.end(), {"mQuarter", "mTwo", "mTen", "mBelowTwo"});
        return cols;
    }
    if (cfg.experiment == "diameter") return {"giantSize", "diameter", "exactFlag", "lowerBound"};
    if (cfg.experiment == "mixing") return {"giantSize", "tMix", "mixedFlag"};
    if (cfg.experiment == "expansion") return {"giantSize", "expansionMin", "largeSetMin"};
    if (cfg.experiment == "sprinkle")
        return {"inG1", "inG2Only", "closed", "couplingViolations", "badVertices", "g1Giant", "g2Giant"};
    return {"connected", "distance"}; // antipodal
}

uint64_t second_component_size(const ComponentLabeling& labeling) {
    uint64_t second = 0;
    for (uint32_t l = 0; l < labeling.sizeAtRoot.size(); ++l)
        if (l != labeling.giantLabel && labeling.sizeAtRoot[l] > second) second = labeling.sizeAtRoot[l];
    return second;
}

std::vector<double> run_trial(const ExperimentConfig& cfg, int d, uint64_t seed) {
    const double scale = static_cast<double>(vertex_count(d));
    if (cfg.experiment == "sprinkle") {
        SprinklingPair pair = sprinkle_params(cfg.c, cfg.delta, d, seed);
        PercolationSample g1 = pair.g1();
        PercolationSample g2 = pair.g2();
        uint64_t n1 = 0, n2 = 0, n0 = 0, violations = 0;
        for (VertexId lo = 0; lo < vertex_count(d); ++lo) {
            for (int i = 0; i < d; ++i) {
                if ((lo >> i) & 1ull) continue;
                EdgeId e{lo, i};
                CoupledState st = coupled_edge_state(pair, e);
                bool s1 = g1.edge_state(e), s2 = g2.edge_state(e);
                if (s1 && !s2) ++violations; // G1 must be a subgraph of G2
                CoupledState expect = s1 ? CoupledState::InG1
                                         : (s2 ? CoupledState::InG2Only : CoupledState::Closed);
                if (st != expect) ++violations;
                if (st == CoupledState::InG1)
                    ++n1;
                else if (st == CoupledState::InG2Only)
                    ++n2;
                else
                    ++n0;
            }
        }
        ComponentLabeling lab1 = label_components(g1);
        ComponentLabeling lab2 = label_components(g2);
        double bad = static_cast<double>(bad_vertices(lab1, cfg.epsilon));
        return {static_cast<double>(n1),        static_cast<double>(n2),
                static_cast<double>(n0),        static_cast<double>(violations),
                bad,                            static_cast<double>(lab1.giantSize),
                static_cast<double>(lab2.giantSize)};
    }
    if (cfg.experiment == "antipodal") {
        PercolationSample sample(make_params(d, cfg.c, seed));
        const VertexId target = vertex_count(d) - 1;
        auto dist = bfs_distance(sample, 0, target, static_cast<int64_t>(cfg.k1) * d);
        return {dist ? 1.0 : 0.0, dist ? static_cast<double>(*dist) : -1.0};
    }

    PercolationSample sample(make_params(d, cfg.c, seed));
    ComponentLabeling labeling = label_components(sample);
    if (cfg.experiment == "giant") {
        BarePathReport bare = longest_bare_path(labeling, sample);
        return {static_cast<double>(labeling.giantSize),
                static_cast<double>(labeling.giantSize) / scale,
                static_cast<double>(second_component_size(labeling)),
                static_cast<double>(labeling.componentCount), static_cast<double>(bare.longestPath)};
    }
    if (cfg.experiment == "census") {
        ComponentCensus cen = census(labeling, d);
        std::vector<double> vals{static_cast<double>(labeling.giantSize) / scale,
                                 static_cast<double>(labeling.componentCount)};
        for (int k = 1; k <= cfg.kmax; ++k)
            vals.push_back(static_cast<double>(cen.vk_count(static_cast<uint64_t>(k))) / scale);
        vals.push_back(static_cast<double>(cen.mQuarter.totalVertices) / scale);
        vals.push_back(static_cast<double>(cen.mTwo.totalVertices) / scale);
        vals.push_back(static_cast<double>(cen.mTen.totalVertices) / scale);
        vals.push_back(static_cast<double>(cen.mBelowTwo.totalVertices) / scale);
        return vals;
    }
    if (cfg.experiment == "diameter") {
        DiameterReport rep = diameter(labeling, sample, cfg.exactSizeLimit);
        double diam = rep.exact ? static_cast<double>(*rep.exact) : static_cast<double>(rep.lowerBound);
        return {static_cast<double>(labeling.giantSize), diam, rep.exact ? 1.0 : 0.0,
                static_cast<double>(rep.lowerBound)};
    }
    if (cfg.experiment == "mixing") {
        ComponentGraph g = build_component_graph(labeling, sample, labeling.giantLabel);
        auto starts = eccentric_starts(g, cfg.starts, seed);
        MixingEstimate est = estimate_mixing(g, starts, cfg.tMax);
        return {static_cast<double>(labeling.giantSize), static_cast<double>(est.estimate),
                est.mixed ? 1.0 : 0.0};
    }
    // expansion
    ComponentGraph g = build_component_graph(labeling, sample, labeling.giantLabel);
    const uint64_t m = g.size();
    std::vector<uint64_t> sizes;
    if (cfg.sizes.empty()) {
        for (uint64_t s = 16; s <= 4096; s *= 2)
            if (s <= m / 2) sizes.push_back(s);
    } else {
        for (uint64_t s : cfg.sizes)
            if (s >= 1 && s <= m / 2) sizes.push_back(s);
    }
    if (sizes.empty() && m >= 2) sizes.push_back(std::max<uint64_t>(1, m / 2));
    if (sizes.empty())
        return {static_cast<double>(labeling.giantSize), -1.0, -1.0};
    ExpansionScan scan = expansion_scan(g, d, sizes, cfg.setsPerSize, seed);
    double global = std::isfinite(scan.globalMin) ? scan.globalMin : -1.0;
    double large = std::isfinite(scan.largeSetMin) ? scan.largeSetMin : -1.0;
    return {static_cast<double>(labeling.giantSize), global, large};
}

std::string canonical_config(const ExperimentConfig& cfg) {
    // thread count and output path are excluded on purpose: bytes must depend
    // only on the experiment inputs
    std::ostringstream os;
    os << "experiment=" << cfg.experiment << " d=";
    for (size_t i = 0; i < cfg.dList.size(); ++i) os << (i ? "," : "") << cfg.dList[i];
    os << " c=" << fmt_double(cfg.c) << " trials=" << fmt_u64(cfg.trials)
       << " rootSeed=" << fmt_u64(cfg.rootSeed);
    if (cfg.experiment == "sprinkle")
        os << " delta=" << fmt_double(cfg.delta) << " epsilon=" << fmt_double(cfg.epsilon);
    if (cfg.experiment == "census") os << " kmax=" << cfg.kmax;
    if (cfg.experiment == "diameter") os << " exactLimit=" << fmt_u64(cfg.exactSizeLimit);
    if (cfg.experiment == "mixing") os << " starts=" << cfg.starts << " tMax=" << cfg.tMax;
    if (cfg.experiment == "expansion") {
        os << " sizes=";
        if (cfg.sizes.empty())
            os << "auto";
        else
            for (size_t i = 0; i < cfg.sizes.size(); ++i) os << (i ? "," : "") << cfg.sizes[i];
        os << " setsPerSize=" << cfg.setsPerSize;
    }
    if (cfg.experiment == "antipodal") os << " k1=" << cfg.k1;
    return os.str();
}

std::map<std::string, double> theory_sidecar(const ExperimentConfig& cfg) {
    std::map<std::string, double> theory;
    theory["y"] = solve_poisson_survival(cfg.c).survival;
    if (cfg.experiment == "census")
        for (int k = 1; k <= cfg.kmax; ++k)
            theory["borel" + std::to_string(k)] = borel_weight(cfg.c, static_cast<uint64_t>(k));
    if (cfg.experiment == "giant" || cfg.experiment == "sprinkle")
        for (int d : cfg.dList)
            theory["b" + std::to_string(d)] =
                solve_binomial_survival(d, cfg.c / static_cast<double>(d)).survival;
    if (cfg.experiment == "sprinkle") {
        SprinklingPair pair = sprinkle_params(cfg.c, cfg.delta, cfg.dList.front(), 0);
        theory["p1"] = pair.p1;
        theory["p2"] = pair.p2;
    }
    return theory;
}

} // namespace

uint64_t trial_seed(uint64_t rootSeed, int d, uint64_t trialIndex) {
    // fixed derivation: two finalizer rounds mixing dimension and index under
    // distinct odd constants
    uint64_t a = splitmix64_mix(rootSeed + 0xD1B54A32D192ED03ull * static_cast<uint64_t>(d));
    return splitmix64_mix(a ^ (0x9E3779B97F4A7C15ull * (trialIndex + 1)));
}

SummaryReport run(const ExperimentConfig& config) {
    validate(config);
    SummaryReport report;
    report.config = config;
    report.canonicalConfig = canonical_config(config);
    report.columns = columns_for(config);
    report.theory = theory_sidecar(config);

    const size_t total = config.dList.size() * static_cast<size_t>(config.trials);
    report.rows.assign(total, TrialRow{});

    std::atomic<size_t> next{0};
    std::mutex errMutex;
    std::exception_ptr firstError;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= total) return;
            {
                std::lock_guard<std::mutex> lock(errMutex);
                if (firstError) return;
            }
            size_t di = i / config.trials;
            uint64_t ti = i % config.trials;
            int d = config.dList[di];
            TrialRow row;
            row.d = d;
            row.trialIndex = ti;
            row.seed = trial_seed(config.rootSeed, d, ti);
            try {
                row.values = run_trial(config, d, row.seed);
                if (row.values.size() != report.columns.size())
                    throw std::logic_error("run: row width mismatch");
            } catch (...) {
                std::lock_guard<std::mutex> lock(errMutex);
                if (!firstError) firstError = std::current_exception();
                return;
            }
            report.rows[i] = std::move(row); // slot-indexed: order independent of scheduling
        }
    };

    int nThreads = std::min<int>(config.threads, static_cast<int>(total));
    if (nThreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nThreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (firstError) std::rethrow_exception(firstError);

    for (const TrialRow& row : report.rows)
        for (double v : row.values)
            if (std::isnan(v)) throw std::logic_error("run: NaN in trial output");

    for (int d : config.dList) {
        for (size_t col = 0; col < report.columns.size(); ++col) {
            std::vector<double> xs;
            for (const TrialRow& row : report.rows)
                if (row.d == d) xs.push_back(row.values[col]);
            Aggregate agg;
            agg.mean = mean(xs);
            agg.median = median(xs);
            agg.se = xs.size() > 1 ? sample_sd(xs) / std::sqrt(static_cast<double>(xs.size())) : 0.0;
            agg.minV = *std::min_element(xs.begin(), xs.end());
            agg.maxV = *std::max_element(xs.begin(), xs.end());
            report.perD[d][report.columns[col]] = agg;
        }
    }

    auto col_index = [&](const std::string& name) {
        for (size_t i = 0; i < report.columns.size(); ++i)
            if (report.columns[i] == name) return i;
        throw std::logic_error("run: missing column " + name);
    };
    if (config.experiment == "giant") {
        double y = report.theory.at("y");
        for (int d : config.dList) {
            double m = report.perD[d]["giantFraction"].mean;
            report.verdicts.emplace_back("giant_mean_near_y_d" + std::to_string(d),
                                         std::abs(m - y) <= 0.05);
        }
    } else if (config.experiment == "diameter" && config.dList.size() >= 3) {
        std::vector<std::pair<double, double>> pts;
        for (int d : config.dList) pts.emplace_back(d, report.perD[d]["diameter"].median);
        PowerLawFit fit = fit_power_law(pts);
        report.verdicts.emplace_back("diameter_exponent_band",
                                     fit.exponent >= 0.7 && fit.exponent <= 1.4 && fit.r2 >= 0.9);
    } else if (config.experiment == "mixing" && config.dList.size() >= 3) {
        std::vector<std::pair<double, double>> pts;
        for (int d : config.dList) pts.emplace_back(d, report.perD[d]["tMix"].median);
        PowerLawFit fit = fit_power_law(pts);
        report.verdicts.emplace_back("mixing_exponent_band",
                                     fit.exponent >= 1.5 && fit.exponent <= 2.8 && fit.r2 >= 0.85);
    } else if (config.experiment == "expansion") {
        size_t col = col_index("expansionMin");
        bool allPositive = true;
        for (const TrialRow& row : report.rows) allPositive = allPositive && row.values[col] > 0.0;
        report.verdicts.emplace_back("expansion_positive", allPositive);
    } else if (config.experiment == "sprinkle") {
        size_t col = col_index("couplingViolations");
        bool clean = true;
        for (const TrialRow& row : report.rows) clean = clean && row.values[col] == 0.0;
        report.verdicts.emplace_back("coupling_exact", clean);
    } else if (config.experiment == "antipodal") {
        for (int d : config.dList)
            report.verdicts.emplace_back("antipodal_connects_d" + std::to_string(d),
                                         report.perD[d]["connected"].mean > 0.0);
    }

    write_report(report);
    return report;
}

std::string to_csv(const SummaryReport& report) {
    std::ostringstream os;
    os << "# config: " << report.canonicalConfig << "\n";
    os << "d,trial,seed";
    for (auto& c : report.columns) os << "," << c;
    os << "\n";
    for (const TrialRow& row : report.rows) {
        os << row.d << "," << fmt_u64(row.trialIndex) << "," << fmt_u64(row.seed);
        for (double v : row.values) os << "," << fmt_double(v);
        os << "\n";
    }
    return os.str();
}

std::string to_json(const SummaryReport& report) {
    nlohmann::json j;
    j["config"] = report.canonicalConfig;
    j["columns"] = report.columns;
    j["rows"] = nlohmann::json::array();
    for (const TrialRow& row : report.rows) {
        nlohmann::json r;
        r["d"] = row.d;
        r["trial"] = row.trialIndex;
        r["seed"] = row.seed;
        r["values"] = row.values;
        j["rows"].push_back(std::move(r));
    }
    for (auto& [d, cols] : report.perD) {
        nlohmann::json block;
        for (auto& [name, agg] : cols) {
            block[name] = {{"mean", agg.mean},
                           {"median", agg.median},
                           {"se", agg.se},
                           {"min", agg.minV},
                           {"max", agg.maxV}};
        }
        j["perD"][std::to_string(d)] = std::move(block);
    }
    j["theory"] = report.theory;
    for (auto& [name, pass] : report.verdicts) j["verdicts"][name] = pass;
    return j.dump(2) + "\n";
}

std::vector<TrialRow> parse_csv_rows(const std::string& csv, size_t valueColumns) {
    std::vector<TrialRow> rows;
    std::istringstream is(csv);
    std::string line;
    bool headerSeen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!headerSeen) {
            headerSeen = true;
            continue;
        }
        TrialRow row;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != valueColumns + 3) throw std::invalid_argument("parse_csv_rows: bad row width");
        row.d = std::stoi(fields[0]);
        row.trialIndex = std::stoull(fields[1]);
        row.seed = std::stoull(fields[2]);
        for (size_t i = 3; i < fields.size(); ++i) row.values.push_back(std::stod(fields[i]));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_report(const SummaryReport& report) {
    if (report.config.outPath.empty()) return;
    std::ofstream out(report.config.outPath, std::ios::binary);
    if (!out) throw std::runtime_error("write_report: cannot open " + report.config.outPath);
    out << (report.config.format == "json" ? to_json(report) : to_csv(report));
    if (!out) throw std::runtime_error("write_report: write failed for " + report.config.outPath);
}

} // namespace percolab
