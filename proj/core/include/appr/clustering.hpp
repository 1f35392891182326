#pragma once

#include <map>
#include <vector>

#include "appr/graph.hpp"
#include "appr/onl.hpp"

namespace appr {

struct ClusterAssignment {
    std::vector<int> seeds;       // ordered, descending degree
    std::vector<int> assignment;  // node -> seed id, kUnreached when all-zero
    double score = 0.0;           // purity, filled by purity_score
    int unreached = 0;

    static constexpr int kUnreached = -1;
};

/// Default embedding shift: 1/0.85 - 1, the teleport-style discount.
inline double default_embedding_shift() { return 1.0 / 0.85 - 1.0; }

/// The `count` highest-degree nodes, ties broken by smaller id.
std::vector<int> select_seeds(const Graph& g, int count);

/// Columns Z_{:,j} = (L + shift*I)^{-1} e_j for each seed j.
std::map<int, SparseVec> embed_columns(const Graph& g,
                                       const std::vector<int>& seeds,
                                       double shift, SolverChoice solver,
                                       double beta_laplacian = 1.0,
                                       std::uint64_t* nodes_queried = nullptr);

/// Each node goes to the seed with the largest embedding entry; ties to the
/// smallest seed id; all-zero rows go to the unreached pseudo-cluster.
ClusterAssignment assign_clusters(const std::map<int, SparseVec>& columns, int n);

/// Sum over clusters of the majority-class count, divided by n. Unreached
/// nodes contribute zero.
double purity_score(const ClusterAssignment& assignment, const LabelSet& labels);

}  // namespace appr
