#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "percolab/stats.hpp"

// Experiment harness: named experiments over (d, c, seed) grids with
// deterministic per-trial seed derivation, trial-level threading, and CSV/JSON
// reports whose bytes depend only on the config.

namespace percolab {

struct ExperimentConfig {
    std::string experiment;     // giant, census, diameter, mixing, expansion, sprinkle, antipodal
    std::vector<int> dList;
    double c = 2.0;
    double delta = 0.5;         // sprinkling second-round slack
    double epsilon = 0.1;       // bad-vertex threshold fraction
    uint64_t trials = 1;
    uint64_t rootSeed = 1;
    int threads = 1;
    std::string outPath;        // empty: no file emitted
    std::string format = "csv"; // csv | json
    // experiment-specific knobs
    int kmax = 5;               // census
    uint64_t exactSizeLimit = 40000; // diameter
    int starts = 8;             // mixing
    int64_t tMax = 20000;       // mixing
    std::vector<uint64_t> sizes;     // expansion; default 16..4096 powers of two
    int setsPerSize = 16;       // expansion
    int k1 = 5;                 // antipodal
};

struct TrialRow {
    int d = 0;
    uint64_t trialIndex = 0;
    uint64_t seed = 0;
    std::vector<double> values;
};

struct Aggregate {
    double mean = 0, median = 0, se = 0, minV = 0, maxV = 0;
};

struct SummaryReport {
    ExperimentConfig config;
    std::string canonicalConfig;       // single-line config echo
    std::vector<std::string> columns;  // value column names
    std::vector<TrialRow> rows;        // sorted by (d, trialIndex)
    std::map<int, std::map<std::string, Aggregate>> perD;
    std::map<std::string, double> theory; // solver/oracle sidecar values
    std::vector<std::pair<std::string, bool>> verdicts;
};

// Documented, fixed seed derivation: one splitmix64 finalizer over the root
// seed, the dimension, and the trial index.
uint64_t trial_seed(uint64_t rootSeed, int d, uint64_t trialIndex);

SummaryReport run(const ExperimentConfig& config);

std::string to_csv(const SummaryReport& report);
std::string to_json(const SummaryReport& report);

// Parses the CSV back into rows (determinism/roundtrip checks).
std::vector<TrialRow> parse_csv_rows(const std::string& csv, size_t valueColumns);

// Writes report.outPath in the configured format; no-op when outPath empty.
void write_report(const SummaryReport& report);

} // namespace percolab
