#include "appr/synth.hpp"

#include <vector>

#include "appr/rng.hpp"

namespace appr::synth {

Graph path_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    return Graph::from_edges(n, e);
}

Graph star_graph(int leaves) {
    std::vector<Edge> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i, 1.0});
    return Graph::from_edges(leaves + 1, e);
}

Graph complete_graph(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
    return Graph::from_edges(n, e);
}

Graph barbell(int clique_size) {
    const int n = 2 * clique_size;
    std::vector<Edge> e;
    for (int i = 0; i < clique_size; ++i)
        for (int j = i + 1; j < clique_size; ++j) {
            e.push_back({i, j, 1.0});
            e.push_back({clique_size + i, clique_size + j, 1.0});
        }
    e.push_back({clique_size - 1, clique_size, 1.0});  // bridge
    return Graph::from_edges(n, e);
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            KeyedRng rng(seed, static_cast<std::uint64_t>(i),
                         static_cast<std::uint64_t>(j));
            if (rng.next_double() < p) e.push_back({i, j, 1.0});
        }
    return Graph::from_edges(n, e);
}

Graph power_law(int n, int attach, std::uint64_t seed) {
    // Barabasi-Albert style: each new node attaches to `attach` targets drawn
    // from the running endpoint list (degree-proportional).
    std::vector<Edge> e;
    std::vector<int> endpoints;
    const int seed_nodes = attach + 1;
    for (int i = 0; i < seed_nodes; ++i)
        for (int j = i + 1; j < seed_nodes; ++j) {
            e.push_back({i, j, 1.0});
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    KeyedRng rng(seed, 0x70776cULL);
    for (int v = seed_nodes; v < n; ++v) {
        std::vector<int> targets;
        int guard = 0;
        while (static_cast<int>(targets.size()) < attach && guard++ < 64 * attach) {
            int t = endpoints[rng.next_below(endpoints.size())];
            bool dup = false;
            for (int x : targets) dup = dup || (x == t);
            if (!dup) targets.push_back(t);
        }
        if (targets.empty()) targets.push_back(v - 1);
        for (int t : targets) {
            e.push_back({v, t, 1.0});
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }
    return Graph::from_edges(n, e);
}

Graph planted_partition(int n, double p_in, double p_out, std::uint64_t seed) {
    const int half = n / 2;
    std::vector<Edge> e;
    for (int i = 0; i + 1 < half; ++i) e.push_back({i, i + 1, 1.0});
    for (int i = half; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    e.push_back({half - 1, half, 1.0});
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            const bool same = (i < half) == (j < half);
            KeyedRng rng(seed, static_cast<std::uint64_t>(i),
                         static_cast<std::uint64_t>(j));
            if (rng.next_double() < (same ? p_in : p_out)) e.push_back({i, j, 1.0});
        }
    return Graph::from_edges(n, e);
}

LabelSet planted_labels(int n) {
    LabelSet ls;
    ls.k_classes = 2;
    ls.labels.assign(n, 0);
    for (int i = n / 2; i < n; ++i) ls.labels[i] = 1;
    return ls;
}

}  // namespace appr::synth
