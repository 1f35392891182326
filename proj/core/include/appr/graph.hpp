#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "appr/sparse_vec.hpp"

namespace appr {

namespace detail {
struct GraphBuilder;
}

struct Edge {
    std::int64_t u;
    std::int64_t v;
    double w = 1.0;
};

struct DegreeStats {
    std::int64_t n = 0;
    std::int64_t m = 0;  // undirected edge count
    double avg_degree = 0.0;
    double median_degree = 0.0;
    double max_degree = 0.0;
    double max_over_n = 0.0;
    double max_over_avg = 0.0;
};

struct LabelSet {
    std::vector<int> labels;  // class ids in {0,...,k_classes-1}, length n
    int k_classes = 0;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable symmetric CSR graph. Neighbor lists are sorted ascending with
/// no duplicates; weights are strictly positive; no self-loops.
class Graph {
public:
    Graph() = default;

    /// Symmetrizes, drops self-loops, dedups (last weight wins). Node ids must
    /// already be dense 0..n-1; use load_edge_list for raw files.
    static Graph from_edges(int n, const std::vector<Edge>& edges);

    int node_count() const { return n_; }
    std::int64_t edge_count() const { return m_; }  // undirected

    double degree(int u) const { return degree_[u]; }
    const std::vector<double>& degrees() const { return degree_; }
    double max_degree() const;

    std::span<const int> neighbors(int u) const {
        return {adj_.data() + offset_[u],
                static_cast<std::size_t>(offset_[u + 1] - offset_[u])};
    }
    std::span<const double> weights(int u) const {
        return {wgt_.data() + offset_[u],
                static_cast<std::size_t>(offset_[u + 1] - offset_[u])};
    }
    std::int64_t neighbor_count(int u) const { return offset_[u + 1] - offset_[u]; }

    /// Weight of edge (u,v), 0 if absent. Binary search on the sorted row.
    double edge_weight(int u, int v) const;

    /// Original file ids; original_ids()[u] is the raw id of dense node u.
    /// Identity when constructed via from_edges.
    const std::vector<std::int64_t>& original_ids() const { return orig_ids_; }

private:
    int n_ = 0;
    std::int64_t m_ = 0;
    std::vector<std::int64_t> offset_;  // size n+1
    std::vector<int> adj_;
    std::vector<double> wgt_;
    std::vector<double> degree_;
    std::vector<std::int64_t> orig_ids_;

    friend Graph load_edge_list(const std::string& path, bool weighted);
    friend struct detail::GraphBuilder;
};

/// Whitespace-separated "u v" or "u v w" lines; '#' comments. Sparse node ids
/// are remapped to dense 0..n-1 (ascending by raw id).
Graph load_edge_list(const std::string& path, bool weighted);

/// One "node_id label" pair per line, raw ids matching the edge-list file.
/// Labels are remapped to contiguous class ids 0..K-1 (ascending label value).
LabelSet load_labels(const std::string& path, const Graph& g);

void save_edge_list(const Graph& g, const std::string& path);
void save_id_map(const Graph& g, const std::string& path);  // two-column CSV

/// Column A D^{-1} e_u; entries sum to 1. Throws on isolated u.
SparseVec transition_column(const Graph& g, int u);

/// x^T L x with L = I - beta D^{-1/2} A D^{-1/2}.
double laplacian_quadratic(const Graph& g, const std::vector<double>& x, double beta);

/// Lower median for even-length degree lists.
DegreeStats degree_stats(const Graph& g);

double volume(const Graph& g, std::span<const int> nodes);

}  // namespace appr
