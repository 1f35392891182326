#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "appr/rng.hpp"
#include "appr/sparse_vec.hpp"

namespace appr {

enum class Weighting { Uniform, EdgeWeighted, DegreeWeighted };

struct SamplerConfig {
    int q_bar = 1;
    Weighting weighting = Weighting::Uniform;
    std::uint64_t rng_seed = 0;
};

/// Exact inclusion probabilities for a without-replacement design of size
/// q_bar with selection weights pi > 0: p_i = min(1, c*pi_i) with capped
/// entries redistributed so that sum(p) == q_bar and every p_i <= 1.
std::vector<double> inclusion_probabilities(const std::vector<double>& pi, int q_bar);

/// Systematic (ordered) sampling: selects exactly sum(incl) items, item i
/// with probability incl[i]. u is the uniform start in [0,1).
std::vector<int> systematic_sample(const std::vector<double>& incl, double u);

/// q_bar distinct indices of {0..n-1}, uniformly over all subsets; ascending.
std::vector<int> uniform_subset(int n, int q_bar, KeyedRng& rng);

struct SampleDraw {
    std::vector<int> positions;  // ascending candidate positions kept
    std::vector<double> probs;   // inclusion probability per kept position
    bool subsampled = false;     // false when all candidates were kept
};

/// Without-replacement draw over `values.size()` candidates. Subsampling
/// activates only when there are more than q_bar candidates; otherwise all
/// are kept with probability 1. target_degrees is required for the
/// DegreeWeighted scheme (degree of each candidate's target node).
SampleDraw draw_subset(std::span<const double> values,
                       std::span<const double> target_degrees,
                       const SamplerConfig& cfg, KeyedRng& rng);

/// w~ with w~_i = w_i / p_i on the sampled support, 0 elsewhere; E[w~|w] = w.
SparseVec sampler(const SparseVec& w, const SamplerConfig& cfg, KeyedRng& rng,
                  const std::vector<double>* target_degrees = nullptr);

/// Convenience overload drawing from a stream keyed only by cfg.rng_seed.
SparseVec sampler(const SparseVec& w, const SamplerConfig& cfg,
                  const std::vector<double>* target_degrees = nullptr);

}  // namespace appr
