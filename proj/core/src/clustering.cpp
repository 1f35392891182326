#include "appr/clustering.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace appr {

std::vector<int> select_seeds(const Graph& g, int count) {
    if (count < 1) throw GraphError("select_seeds: count must be >= 1");
    if (count > g.node_count())
        throw GraphError("select_seeds: count " + std::to_string(count) +
                         " exceeds node count");
    std::vector<int> nodes(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) nodes[i] = i;
    std::stable_sort(nodes.begin(), nodes.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });
    nodes.resize(count);
    return nodes;
}

std::map<int, SparseVec> embed_columns(const Graph& g,
                                       const std::vector<int>& seeds,
                                       double shift, SolverChoice solver,
                                       double beta_laplacian,
                                       std::uint64_t* nodes_queried) {
    if (seeds.empty()) throw GraphError("embed_columns: no seeds");
    KernelSolver ks =
        KernelSolver::embedding_kernel(g, shift, beta_laplacian, std::move(solver));
    std::map<int, SparseVec> out;
    for (int s : seeds) {
        try {
            out[s] = ks.column(s);
        } catch (const SolverError& e) {
            throw SolverError("embedding seed " + std::to_string(s) + ": " +
                              e.what());
        }
    }
    if (nodes_queried) *nodes_queried += ks.nodes_queried();
    return out;
}

ClusterAssignment assign_clusters(const std::map<int, SparseVec>& columns, int n) {
    if (columns.empty()) throw GraphError("assign_clusters: no seed columns");
    ClusterAssignment out;
    for (const auto& [s, col] : columns) out.seeds.push_back(s);
    out.assignment.assign(n, ClusterAssignment::kUnreached);

    std::vector<double> best(n, 0.0);
    // std::map iterates seeds ascending, so strict improvement keeps the
    // smallest seed id on ties.
    for (const auto& [s, col] : columns) {
        for (const auto& [u, v] : col.sorted_entries()) {
            if (v > best[u]) {
                best[u] = v;
                out.assignment[u] = s;
            }
        }
    }
    for (int u = 0; u < n; ++u)
        if (out.assignment[u] == ClusterAssignment::kUnreached) ++out.unreached;
    return out;
}

double purity_score(const ClusterAssignment& assignment, const LabelSet& labels) {
    const int n = static_cast<int>(assignment.assignment.size());
    if (static_cast<int>(labels.labels.size()) != n)
        throw GraphError("purity_score: label vector does not cover assignment");
    // per-cluster class counts; unreached nodes contribute nothing
    std::unordered_map<int, std::vector<std::int64_t>> counts;
    for (int u = 0; u < n; ++u) {
        const int s = assignment.assignment[u];
        if (s == ClusterAssignment::kUnreached) continue;
        auto& c = counts[s];
        if (c.empty()) c.assign(labels.k_classes, 0);
        ++c[labels.labels[u]];
    }
    double total = 0.0;
    for (const auto& [s, c] : counts)
        total += static_cast<double>(*std::max_element(c.begin(), c.end()));
    return total / static_cast<double>(n);
}

}  // namespace appr
