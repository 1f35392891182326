#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "appr/graph.hpp"
#include "appr/sparse_vec.hpp"

namespace appr {

struct ApprParams {
    double alpha = 0.15;    // teleportation parameter, in (0,1)
    double epsilon = 1e-6;  // per-coordinate residual tolerance, > 0

    double beta() const { return (1.0 - alpha) / (1.0 + alpha); }
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Whole mutable state of one local push solve.
struct ApprState {
    SparseVec x;  // primal
    SparseVec z;  // scaled residual, z = (1+a)/(2a) D^{1/2} (b - Q x)
    std::deque<int> queue;            // FIFO of active nodes
    std::vector<std::uint8_t> in_queue;
    std::uint64_t push_count = 0;
    std::uint64_t nodes_queried = 0;  // neighbor touches

    void init(const Graph& g, const SparseVec& z0, double epsilon);
};

/// One push on node u: moves alpha*z_u/sqrt(d_u) into x_u, spreads
/// (1-alpha)/2 of z_u to the neighbors, rescales z_u, and enqueues any node
/// whose residual newly crossed the d_v*epsilon threshold.
void push(ApprState& state, const Graph& g, int u, const ApprParams& params);

struct ApprResult {
    SparseVec x;
    SparseVec z;
    std::uint64_t push_count = 0;
    std::uint64_t nodes_queried = 0;
};

/// Default non-termination guard; roughly the Lemma-1 push budget with slack.
std::uint64_t default_push_cap(const ApprParams& params);

/// APPR with seed right-hand side b = (2a/(1+a)) D^{-1/2} e_s, i.e. z0 = e_s.
ApprResult appr_solve(const Graph& g, int s, const ApprParams& params,
                      std::uint64_t push_cap = 0);

/// General nonnegative right-hand side, given as the initial scaled residual
/// z0 = (1+a)/(2a) D^{1/2} b. Lemma-1 conservation applies only when
/// ||z0||_1 = 1 (the seed case).
ApprResult appr_solve_z0(const Graph& g, const SparseVec& z0,
                         const ApprParams& params, std::uint64_t push_cap = 0);

/// Recomputes z = (1+a)/(2a) D^{1/2} (b - Q x) from scratch, matrix-free.
SparseVec residual_exact(const Graph& g, const SparseVec& x, const SparseVec& b,
                         const ApprParams& params);

/// Scaled residual z0 corresponding to right-hand side b.
SparseVec z_from_b(const Graph& g, const SparseVec& b, const ApprParams& params);

/// r = (2a/(1+a)) D^{-1/2} z, the unscaled residual (derived accessor).
SparseVec unscaled_residual(const Graph& g, const SparseVec& z,
                            const ApprParams& params);

/// pi = D x, the PPR vector (derived accessor).
SparseVec ppr_vector(const Graph& g, const SparseVec& x);

}  // namespace appr
