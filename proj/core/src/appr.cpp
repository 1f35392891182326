#include "appr/appr.hpp"

#include <cmath>
#include <string>

namespace appr {

namespace {

void check_params(const ApprParams& params) {
    if (!(params.alpha > 0.0) || !(params.alpha < 1.0)) {
        throw SolverError("alpha must lie in (0,1), got " +
                          std::to_string(params.alpha));
    }
    if (!(params.epsilon > 0.0)) {
        throw SolverError("epsilon must be positive, got " +
                          std::to_string(params.epsilon));
    }
}

}  // namespace

void ApprState::init(const Graph& g, const SparseVec& z0, double epsilon) {
    x = SparseVec{};
    z = z0;
    queue.clear();
    in_queue.assign(static_cast<std::size_t>(g.node_count()), 0);
    push_count = 0;
    nodes_queried = 0;
    for (const auto& [u, zu] : z0.sorted_entries()) {
        if (std::abs(zu) >= g.degree(u) * epsilon) {
            queue.push_back(u);
            in_queue[static_cast<std::size_t>(u)] = 1;
        }
    }
}

void push(ApprState& state, const Graph& g, int u, const ApprParams& params) {
    const double alpha = params.alpha;
    const double zu = state.z.get(u);
    const double du = g.degree(u);

    state.x.add(u, alpha * zu / std::sqrt(du));

    const auto nbrs = g.neighbors(u);
    const auto wgts = g.weights(u);
    const double spread = 0.5 * (1.0 - alpha) * zu;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const int v = nbrs[i];
        state.z.add(v, spread * (wgts[i] / du));
        ++state.nodes_queried;
        if (!state.in_queue[static_cast<std::size_t>(v)] &&
            std::abs(state.z.get(v)) >= g.degree(v) * params.epsilon) {
            state.queue.push_back(v);
            state.in_queue[static_cast<std::size_t>(v)] = 1;
        }
    }

    state.z.set(u, 0.5 * (1.0 - alpha) * zu);
    ++state.push_count;
    if (!state.in_queue[static_cast<std::size_t>(u)] &&
        std::abs(state.z.get(u)) >= du * params.epsilon) {
        state.queue.push_back(u);
        state.in_queue[static_cast<std::size_t>(u)] = 1;
    }
}

std::uint64_t default_push_cap(const ApprParams& params) {
    // Lemma 1 bounds pushes by 1/(alpha * epsilon * d_min); with d_min >= 1
    // (every node in a deduplicated edge list has a neighbor) a 10x slack on
    // 1/(alpha*epsilon) catches runaway loops without tripping honest runs.
    const double bound = 10.0 / (params.alpha * params.epsilon);
    if (bound > 1e18) return static_cast<std::uint64_t>(1e18);
    return static_cast<std::uint64_t>(bound) + 1000;
}

ApprResult appr_solve_z0(const Graph& g, const SparseVec& z0,
                         const ApprParams& params, std::uint64_t push_cap) {
    check_params(params);
    if (push_cap == 0) push_cap = default_push_cap(params);

    ApprState state;
    state.init(g, z0, params.epsilon);

    while (!state.queue.empty()) {
        const int u = state.queue.front();
        state.queue.pop_front();
        state.in_queue[static_cast<std::size_t>(u)] = 0;
        // Lazy re-check: the residual may have decayed below threshold since
        // this node was enqueued.
        if (std::abs(state.z.get(u)) < g.degree(u) * params.epsilon) continue;
        if (state.push_count >= push_cap) {
            throw SolverError("push cap exceeded (" + std::to_string(push_cap) +
                              " pushes); solver is not converging");
        }
        push(state, g, u, params);
    }

    ApprResult res;
    res.x = std::move(state.x);
    res.z = std::move(state.z);
    res.push_count = state.push_count;
    res.nodes_queried = state.nodes_queried;
    return res;
}

ApprResult appr_solve(const Graph& g, int s, const ApprParams& params,
                      std::uint64_t push_cap) {
    if (s < 0 || s >= g.node_count()) {
        throw SolverError("seed node " + std::to_string(s) + " out of range");
    }
    return appr_solve_z0(g, unit_vec(s), params, push_cap);
}

SparseVec z_from_b(const Graph& g, const SparseVec& b, const ApprParams& params) {
    const double scale = (1.0 + params.alpha) / (2.0 * params.alpha);
    SparseVec z;
    for (const auto& [i, bi] : b.sorted_entries()) {
        z.set(i, scale * std::sqrt(g.degree(i)) * bi);
    }
    return z;
}

SparseVec residual_exact(const Graph& g, const SparseVec& x, const SparseVec& b,
                         const ApprParams& params) {
    // z = (1+a)/(2a) D^{1/2} (b - Q x),  Q = I - beta D^{-1/2} A D^{-1/2}.
    const double beta = params.beta();
    const double scale = (1.0 + params.alpha) / (2.0 * params.alpha);
    SparseVec r = b;  // accumulates b - Qx
    for (const auto& [u, xu] : x.sorted_entries()) {
        r.add(u, -xu);
        const auto nbrs = g.neighbors(u);
        const auto wgts = g.weights(u);
        const double du = g.degree(u);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const int v = nbrs[i];
            r.add(v, beta * wgts[i] * xu / std::sqrt(du * g.degree(v)));
        }
    }
    SparseVec z;
    for (const auto& [i, ri] : r.sorted_entries()) {
        z.set(i, scale * std::sqrt(g.degree(i)) * ri);
    }
    return z;
}

SparseVec unscaled_residual(const Graph& g, const SparseVec& z,
                            const ApprParams& params) {
    const double scale = 2.0 * params.alpha / (1.0 + params.alpha);
    SparseVec r;
    for (const auto& [i, zi] : z.sorted_entries()) {
        r.set(i, scale * zi / std::sqrt(g.degree(i)));
    }
    return r;
}

SparseVec ppr_vector(const Graph& g, const SparseVec& x) {
    SparseVec pi;
    for (const auto& [i, xi] : x.sorted_entries()) {
        pi.set(i, g.degree(i) * xi);
    }
    return pi;
}

}  // namespace appr
