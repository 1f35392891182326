#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "appr/appr.hpp"
#include "appr/graph.hpp"
#include "appr/sampler.hpp"
#include "appr/sparse_vec.hpp"

namespace appr {

/// Push pass over `active` (in order) with neighbor subsampling: for each u,
/// x_u += a*z_u/sqrt(d_u), the transition column of u is subsampled and
/// reweighted by 1/p, z gets (1-a)/2 times that estimate, z_u is rescaled.
/// With q_bar >= deg(u) for all active u this is bit-identical to the
/// deterministic push sequence. Returns the number of pushes performed.
/// RNG streams are keyed by (cfg.rng_seed, epoch, push index, node).
std::uint64_t push_appr(const Graph& g, SparseVec& x, SparseVec& z,
                        const SamplerConfig& cfg, std::span<const int> active,
                        const ApprParams& params, std::uint64_t epoch = 0,
                        std::uint64_t push_index0 = 0);

/// Unbiased estimate of (1+a)/(2a) D^{1/2} Q x built by scattering each
/// node of supp(x) through a subsampled transition column; E[z~] equals the
/// exact value, and q_bar >= d_max makes it exact. supp(x) is processed in
/// ascending order in batches of q_bar (batching sets RNG keys only).
SparseVec dual_correct(const Graph& g, const SparseVec& x,
                       const SamplerConfig& cfg, const ApprParams& params,
                       std::uint64_t epoch = 0, std::uint64_t correction_id = 0,
                       std::uint64_t* nodes_queried = nullptr);

struct RandomApprOptions {
    double c = 0.9;          // active-set deflation, in (0,1]
    int correction_period = 5;  // dual correction every this many epochs
    // Budget multiplier for the correction's sampler (>= 1). The correction
    // estimate must be tighter than the push noise it removes, so its
    // neighbor budget is q_bar * correction_q_factor.
    double correction_q_factor = 4.0;
    std::uint64_t push_cap = 0;  // 0 = default guard
    bool stop_at_cap = false;    // stop cleanly at the cap instead of throwing
    bool record_exact_residual = false;  // fill l1/l2 residual columns
};

struct EpochStats {
    std::uint64_t epoch = 0;
    std::uint64_t pushes = 0;  // cumulative
    double l1_residual_exact = -1.0;  // -1 when not recorded
    double l2_residual_exact = -1.0;
    double z_l1 = 0.0;  // |z|_1 of the working residual (z_bar at corrections)
    std::size_t support_x = 0;  // of x_bar + x
    bool correction = false;
};

struct RandomApprResult {
    SparseVec x;  // x_bar + x^{(T)}
    SparseVec z;  // final working residual
    std::vector<EpochStats> trace;
    std::uint64_t push_count = 0;
    std::uint64_t nodes_queried = 0;
    std::uint64_t epochs = 0;
    std::uint64_t corrections = 0;
    bool stopped_by_safeguard = false;  // stalled z_bar after two corrections
};

/// Online-sparsified APPR with periodic dual correction. The active set per
/// epoch is {k : |z_k| >= c * d_k * epsilon}, drained FIFO; with
/// q_bar >= d_max the push sequence and output are bit-identical to
/// appr_solve at tolerance c*epsilon.
RandomApprResult random_appr(const Graph& g, int s, const ApprParams& params,
                             const SamplerConfig& cfg,
                             const RandomApprOptions& opts = {});

}  // namespace appr
