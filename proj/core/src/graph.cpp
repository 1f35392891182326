#include "appr/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace appr {

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
        return std::hash<std::int64_t>{}(p.first * 0x9e3779b97f4a7c15LL + p.second);
    }
};

}  // namespace

namespace detail {

struct GraphBuilder {
    template <class DedupMap>
    static Graph build(int n, const DedupMap& dedup,
                       std::vector<std::int64_t> orig_ids);
};

}  // namespace detail

Graph Graph::from_edges(int n, const std::vector<Edge>& edges) {
    std::unordered_map<std::pair<std::int64_t, std::int64_t>, double, PairHash> dedup;
    for (const auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw GraphError("edge endpoint out of range");
        if (e.w < 0.0) throw GraphError("negative edge weight");
        if (e.w == 0.0) throw GraphError("zero edge weight");
        if (e.u == e.v) continue;  // self-loops dropped
        auto key = std::minmax(e.u, e.v);
        dedup[{key.first, key.second}] = e.w;  // last weight wins
    }
    std::vector<std::int64_t> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    return detail::GraphBuilder::build(n, dedup, std::move(ids));
}

namespace detail {

template <class DedupMap>
Graph GraphBuilder::build(int n, const DedupMap& dedup,
                          std::vector<std::int64_t> orig_ids) {
    Graph g;
    g.n_ = n;
    g.m_ = static_cast<std::int64_t>(dedup.size());
    g.orig_ids_ = std::move(orig_ids);
    std::vector<std::int64_t> count(n, 0);
    for (const auto& [uv, w] : dedup) {
        ++count[uv.first];
        ++count[uv.second];
    }
    g.offset_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) g.offset_[i + 1] = g.offset_[i] + count[i];
    g.adj_.resize(g.offset_[n]);
    g.wgt_.resize(g.offset_[n]);
    std::vector<std::int64_t> cursor(g.offset_.begin(), g.offset_.end() - 1);
    for (const auto& [uv, w] : dedup) {
        auto [u, v] = uv;
        g.adj_[cursor[u]] = static_cast<int>(v);
        g.wgt_[cursor[u]++] = w;
        g.adj_[cursor[v]] = static_cast<int>(u);
        g.wgt_[cursor[v]++] = w;
    }
    // sort each row by neighbor id
    for (int u = 0; u < n; ++u) {
        const auto lo = g.offset_[u], hi = g.offset_[u + 1];
        std::vector<std::pair<int, double>> row;
        row.reserve(hi - lo);
        for (auto k = lo; k < hi; ++k) row.emplace_back(g.adj_[k], g.wgt_[k]);
        std::sort(row.begin(), row.end());
        for (auto k = lo; k < hi; ++k) {
            g.adj_[k] = row[k - lo].first;
            g.wgt_[k] = row[k - lo].second;
        }
    }
    g.degree_.assign(n, 0.0);
    for (int u = 0; u < n; ++u) {
        double d = 0.0;
        for (double w : g.weights(u)) d += w;
        g.degree_[u] = d;
    }
    return g;
}

}  // namespace detail

double Graph::max_degree() const {
    double d = 0.0;
    for (double x : degree_) d = std::max(d, x);
    return d;
}

double Graph::edge_weight(int u, int v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return 0.0;
    return wgt_[offset_[u] + (it - nb.begin())];
}

Graph load_edge_list(const std::string& path, bool weighted) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open edge list: " + path);

    std::vector<Edge> raw;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::int64_t u, v;
        if (!(ls >> u >> v) || u < 0 || v < 0)
            throw GraphError("parse error at line " + std::to_string(lineno) +
                             " of " + path);
        double w = 1.0;
        double col3;
        if (ls >> col3) {
            if (weighted) w = col3;  // unweighted files keep weight 1.0
        } else if (!ls.eof()) {
            throw GraphError("parse error at line " + std::to_string(lineno) +
                             " of " + path);
        }
        if (w < 0.0)
            throw GraphError("negative weight at line " + std::to_string(lineno) +
                             " of " + path);
        raw.push_back({u, v, w});
    }

    // remap sparse ids to dense 0..n-1, ascending by raw id
    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (const auto& e : raw) {
        ids.push_back(e.u);
        ids.push_back(e.v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::unordered_map<std::int64_t, int> remap;
    remap.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) remap[ids[i]] = static_cast<int>(i);

    std::vector<Edge> dense;
    dense.reserve(raw.size());
    for (const auto& e : raw) dense.push_back({remap[e.u], remap[e.v], e.w});
    Graph g = Graph::from_edges(static_cast<int>(ids.size()), dense);
    g.orig_ids_ = std::move(ids);
    return g;
}

LabelSet load_labels(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open label file: " + path);
    std::unordered_map<std::int64_t, int> remap;
    for (int i = 0; i < g.node_count(); ++i) remap[g.original_ids()[i]] = i;

    std::vector<std::int64_t> raw_labels(g.node_count());
    std::vector<bool> seen(g.node_count(), false);
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::int64_t id, lab;
        if (!(ls >> id >> lab))
            throw GraphError("label parse error at line " + std::to_string(lineno));
        auto it = remap.find(id);
        if (it == remap.end()) continue;  // labels for nodes not in the graph
        raw_labels[it->second] = lab;
        seen[it->second] = true;
    }
    for (int i = 0; i < g.node_count(); ++i)
        if (!seen[i]) throw GraphError("missing label for node " + std::to_string(i));

    std::vector<std::int64_t> classes(raw_labels);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::unordered_map<std::int64_t, int> cmap;
    for (std::size_t c = 0; c < classes.size(); ++c) cmap[classes[c]] = static_cast<int>(c);

    LabelSet ls;
    ls.k_classes = static_cast<int>(classes.size());
    ls.labels.resize(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) ls.labels[i] = cmap[raw_labels[i]];
    return ls;
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write edge list: " + path);
    char buf[64];
    for (int u = 0; u < g.node_count(); ++u) {
        auto nb = g.neighbors(u);
        auto wt = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (nb[k] < u) continue;  // each undirected edge once
            std::snprintf(buf, sizeof(buf), "%.17g", wt[k]);
            out << g.original_ids()[u] << ' ' << g.original_ids()[nb[k]] << ' '
                << buf << '\n';
        }
    }
}

void save_id_map(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write id map: " + path);
    out << "dense_id,original_id\n";
    for (int i = 0; i < g.node_count(); ++i)
        out << i << ',' << g.original_ids()[i] << '\n';
}

SparseVec transition_column(const Graph& g, int u) {
    if (g.degree(u) <= 0.0)
        throw GraphError("transition column of isolated node " + std::to_string(u));
    SparseVec col;
    auto nb = g.neighbors(u);
    auto wt = g.weights(u);
    for (std::size_t k = 0; k < nb.size(); ++k) col.set(nb[k], wt[k] / g.degree(u));
    return col;
}

double laplacian_quadratic(const Graph& g, const std::vector<double>& x, double beta) {
    if (static_cast<int>(x.size()) != g.node_count())
        throw GraphError("laplacian_quadratic: dimension mismatch");
    double diag = 0.0;
    for (double xi : x) diag += xi * xi;
    double cross = 0.0;
    for (int u = 0; u < g.node_count(); ++u) {
        if (x[u] == 0.0) continue;
        auto nb = g.neighbors(u);
        auto wt = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const int v = nb[k];
            if (x[v] == 0.0) continue;
            cross += x[u] * x[v] * wt[k] / std::sqrt(g.degree(u) * g.degree(v));
        }
    }
    return diag - beta * cross;
}

DegreeStats degree_stats(const Graph& g) {
    if (g.node_count() < 1) throw GraphError("degree_stats: empty graph");
    DegreeStats s;
    s.n = g.node_count();
    s.m = g.edge_count();
    std::vector<double> d(g.degrees());
    std::sort(d.begin(), d.end());
    double sum = 0.0;
    for (double x : d) sum += x;
    s.avg_degree = sum / static_cast<double>(s.n);
    s.median_degree = d[(d.size() - 1) / 2];  // lower median
    s.max_degree = d.back();
    s.max_over_n = s.max_degree / static_cast<double>(s.n);
    s.max_over_avg = s.avg_degree > 0.0 ? s.max_degree / s.avg_degree : 0.0;
    return s;
}

double volume(const Graph& g, std::span<const int> nodes) {
    double v = 0.0;
    for (int u : nodes) v += g.degree(u);
    return v;
}

}  // namespace appr
