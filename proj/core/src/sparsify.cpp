#include "appr/sparsify.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "appr/rng.hpp"

namespace appr {

namespace {

/// Undirected edges in canonical row order: u < v, u ascending then v.
std::vector<Edge> undirected_edges(const Graph& g) {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(g.edge_count()));
    for (int u = 0; u < g.node_count(); ++u) {
        auto nb = g.neighbors(u);
        auto wt = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k)
            if (nb[k] > u) out.push_back({u, nb[k], wt[k]});
    }
    return out;
}

}  // namespace

std::vector<double> edge_probabilities(const Graph& g,
                                       const EdgeProbabilityScheme& scheme) {
    const auto edges = undirected_edges(g);
    std::vector<double> p(edges.size());

    if (const auto* uni = std::get_if<UniformScheme>(&scheme)) {
        if (!(uni->keep_prob > 0.0) || uni->keep_prob > 1.0)
            throw GraphError("uniform keep probability must lie in (0,1]");
        for (auto& pe : p) pe = uni->keep_prob;
    } else if (const auto* inf = std::get_if<InfluencerScheme>(&scheme)) {
        if (!(inf->q_bar > 0.0))
            throw GraphError("influencer q_bar must be positive");
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const double dmax = std::max(g.degree(static_cast<int>(edges[k].u)),
                                         g.degree(static_cast<int>(edges[k].v)));
            p[k] = std::min(1.0, inf->q_bar / dmax);
        }
    } else {
        const auto& res = std::get<ResistiveScheme>(scheme);
        if (!(res.scale > 0.0))
            throw GraphError("resistive scale must be positive");
        const Eigen::MatrixXd R = resistive_distances(g);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            p[k] = std::min(1.0, res.scale * edges[k].w *
                                     R(edges[k].u, edges[k].v));
        }
    }
    for (double pe : p)
        if (!(pe > 0.0) || pe > 1.0)
            throw GraphError("edge keep probability outside (0,1]");
    return p;
}

Graph sparsify_offline(const Graph& g, const EdgeProbabilityScheme& scheme,
                       std::uint64_t seed) {
    const auto edges = undirected_edges(g);
    const auto p = edge_probabilities(g, scheme);

    std::vector<Edge> kept;
    kept.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (p[k] >= 1.0) {
            kept.push_back(edges[k]);  // deterministic, no reweighting
            continue;
        }
        KeyedRng rng(seed, static_cast<std::uint64_t>(edges[k].u),
                     static_cast<std::uint64_t>(edges[k].v), 0);
        if (rng.next_double() < p[k])
            kept.push_back({edges[k].u, edges[k].v, edges[k].w / p[k]});
    }
    Graph out = Graph::from_edges(g.node_count(), kept);
    return out;
}

Eigen::MatrixXd resistive_distances(const Graph& g, int n_cap) {
    const int n = g.node_count();
    if (n > n_cap)
        throw GraphError("resistive_distances: graph has " + std::to_string(n) +
                         " nodes, above the dense cap " + std::to_string(n_cap) +
                         "; use the influencer scheme instead");
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u) {
        L(u, u) = g.degree(u);
        auto nb = g.neighbors(u);
        auto wt = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) L(u, nb[k]) = -wt[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    const double tol = 1e-10 * std::max(1.0, vals.cwiseAbs().maxCoeff());
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if (vals(i) > tol) inv(i) = 1.0 / vals(i);
    Eigen::MatrixXd pinv = vecs * inv.asDiagonal() * vecs.transpose();

    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            R(i, j) = pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j);
    // symmetrize and zero the diagonal against round-off
    R = 0.5 * (R + R.transpose()).eval();
    R.diagonal().setZero();
    return R.cwiseMax(0.0);
}

double edge_ratio(const Graph& g, const LabelSet& labels) {
    if (static_cast<int>(labels.labels.size()) != g.node_count())
        throw GraphError("edge_ratio: label count does not match node count");
    double same = 0.0, cross = 0.0;
    for (const auto& e : undirected_edges(g)) {
        if (labels.labels[e.u] == labels.labels[e.v])
            same += e.w;
        else
            cross += e.w;
    }
    if (same == 0.0) return std::numeric_limits<double>::infinity();
    return cross / same;
}

double quadratic_form_deviation(const Graph& g, const Graph& g_sparse,
                                const std::vector<double>& x, double beta) {
    if (g.node_count() != g_sparse.node_count())
        throw GraphError("quadratic_form_deviation: node sets differ");
    if (static_cast<int>(x.size()) != g.node_count())
        throw GraphError("quadratic_form_deviation: dimension mismatch");
    // Both normalized Laplacians share the ORIGINAL degrees, so the identity
    // parts cancel and only the adjacency cross terms differ.
    auto cross_term = [&](const Graph& h) {
        double cross = 0.0;
        for (int u = 0; u < h.node_count(); ++u) {
            if (x[u] == 0.0) continue;
            auto nb = h.neighbors(u);
            auto wt = h.weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                const int v = nb[k];
                if (x[v] == 0.0) continue;
                cross += x[u] * x[v] * wt[k] / std::sqrt(g.degree(u) * g.degree(v));
            }
        }
        return cross;
    };
    return -beta * (cross_term(g_sparse) - cross_term(g));
}

double calibrate_resistive_scale(const Graph& g, double target_ratio, int n_cap) {
    if (!(target_ratio > 0.0) || target_ratio > 1.0)
        throw GraphError("target keep ratio must lie in (0,1]");
    const auto edges = undirected_edges(g);
    const Eigen::MatrixXd R = resistive_distances(g, n_cap);
    const double target = target_ratio * static_cast<double>(edges.size());

    auto expected_kept = [&](double scale) {
        double s = 0.0;
        for (const auto& e : edges)
            s += std::min(1.0, scale * e.w * R(e.u, e.v));
        return s;
    };

    double hi = 1.0;
    while (expected_kept(hi) < target && hi < 1e18) hi *= 2.0;
    if (expected_kept(hi) < target) return hi;  // all-ones saturation
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (expected_kept(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

std::vector<std::pair<double, double>> degree_resistance_pairs(const Graph& g,
                                                               int n_cap) {
    const Eigen::MatrixXd R = resistive_distances(g, n_cap);
    std::vector<std::pair<double, double>> out;
    for (const auto& e : undirected_edges(g)) {
        const double dmax = std::max(g.degree(static_cast<int>(e.u)),
                                     g.degree(static_cast<int>(e.v)));
        const double r = R(e.u, e.v);
        out.emplace_back(dmax, r > 0.0 ? 1.0 / r : 0.0);
    }
    return out;
}

}  // namespace appr
