#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace appr {

/// Everything needed to rerun a task; persisted as a TOML-like key=value
/// file next to the outputs so results are self-describing.
struct ExperimentSpec {
    std::string task;      // stats | sparsify | solve | onl | cluster | verify
    std::string dataset;   // edge-list path (unused by verify)
    std::string labels;    // optional label file
    bool weighted = false;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_dir = ".";

    // solver parameters
    double alpha = 0.15;
    double epsilon = 1e-6;
    std::vector<double> epsilon_sweep;  // non-empty: solve sweeps over these
    int seed_node = 0;

    // online sparsification
    bool online = false;
    int q_bar = 0;            // absolute neighbor budget
    double q_bar_mult = 0.0;  // multiplier over median degree (overrides q_bar)
    std::string weighting = "uniform";  // uniform | edge | degree
    double c = 0.9;
    int period = 5;
    int trials = 1;

    // offline sparsify
    std::string scheme = "uniform";  // uniform | influencer | resistive
    double keep_prob = 0.5;
    double resistive_target = 0.5;

    // onl
    std::string method = "relax";  // relax | reg | wma | wmastar
    std::string solver = "exact";  // exact | appr | random
    double gamma = 0.0;
    std::string order = "natural";  // natural | shuffled:SEED
    bool argmax = false;

    // cluster
    int n_seeds = 0;  // 0: number of label classes
    double shift = 0.0;  // 0: default embedding shift

    // verify
    std::string suite = "all";

    std::string to_toml() const;
    static ExperimentSpec from_toml_file(const std::string& path);
    static ExperimentSpec from_toml(const std::string& text);
};

/// Executes the task; writes results CSV, JSON summary and the persisted spec
/// into out_dir. Returns a process exit status; partial outputs are removed
/// on failure. Deterministic given (spec, seed).
int run_experiment(const ExperimentSpec& spec);

/// Effective q_bar: q_bar_mult * median degree when the multiplier is set.
int effective_q_bar(const ExperimentSpec& spec, double median_degree);

}  // namespace appr
