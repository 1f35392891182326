#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "appr/graph.hpp"

namespace appr {

/// Per-edge keep probability schemes for the offline sparsifier.
struct UniformScheme {
    double keep_prob = 1.0;  // in (0,1]
};
struct InfluencerScheme {
    double q_bar = 1.0;  // > 0; p = min(1, q_bar / max(d_u, d_v))
};
struct ResistiveScheme {
    double scale = 1.0;  // > 0; p = min(1, scale * w * R_uv)
};
using EdgeProbabilityScheme =
    std::variant<UniformScheme, InfluencerScheme, ResistiveScheme>;

/// Keep probability of every undirected edge, in row order (u < v, u
/// ascending, then v ascending). For Resistive this computes the dense
/// resistance matrix and is subject to its size cap.
std::vector<double> edge_probabilities(const Graph& g,
                                       const EdgeProbabilityScheme& scheme);

/// One independent Bernoulli per undirected edge, keyed by (seed, u, v);
/// kept edges reweighted to w/p so E[A~] = A. Edges with p = 1 are kept
/// deterministically with their original weight.
Graph sparsify_offline(const Graph& g, const EdgeProbabilityScheme& scheme,
                       std::uint64_t seed);

/// Effective resistance R_ij = Ldag_ii + Ldag_jj - 2 Ldag_ij for the
/// unnormalized Laplacian D - A, via a dense eigendecomposition. On a
/// disconnected graph the values are per-component (cross-component entries
/// are finite but not resistances). Guarded by a node-count cap.
Eigen::MatrixXd resistive_distances(const Graph& g, int n_cap = 5000);

/// Weighted cross-label / same-label edge mass. Returns +infinity when no
/// same-label mass exists.
double edge_ratio(const Graph& g, const LabelSet& labels);

/// x^T L~ x - x^T L x where both normalized Laplacians use the ORIGINAL
/// graph's degrees, so the sparsifier's unbiasedness is exact.
double quadratic_form_deviation(const Graph& g, const Graph& g_sparse,
                                const std::vector<double>& x, double beta);

/// Bisection on `scale` so the expected kept-edge count is
/// target_ratio * edge_count.
double calibrate_resistive_scale(const Graph& g, double target_ratio,
                                 int n_cap = 5000);

/// Per-edge (max endpoint degree, 1/R) pairs for correlation studies.
std::vector<std::pair<double, double>> degree_resistance_pairs(const Graph& g,
                                                               int n_cap = 5000);

}  // namespace appr
