#pragma once

#include <cstdint>

#include "appr/graph.hpp"

namespace appr::synth {

// Deterministic graph builders used by the verify suites and tests.
// Everything is keyed off an explicit seed; no global RNG state.

Graph path_graph(int n);
Graph star_graph(int leaves);    // node 0 is the center
Graph complete_graph(int n);
Graph barbell(int clique_size);  // two cliques joined by one bridge edge

/// G(n, p) with a guaranteed spanning path so no node is isolated.
Graph erdos_renyi(int n, double p, std::uint64_t seed);

/// Preferential attachment, `attach` edges per new node; heavy-tailed degrees.
Graph power_law(int n, int attach, std::uint64_t seed);

/// Two blocks of n/2 nodes, intra-block edge prob p_in, cross prob p_out.
/// Spanning path per block plus one bridge keeps everything connected.
Graph planted_partition(int n, double p_in, double p_out, std::uint64_t seed);

/// Block labels for a planted_partition graph (0 for first half, 1 after).
LabelSet planted_labels(int n);

}  // namespace appr::synth
