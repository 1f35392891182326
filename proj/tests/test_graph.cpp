#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "appr/graph.hpp"
#include "appr/synth.hpp"

using namespace appr;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

}  // namespace

TEST_CASE("from_edges symmetrizes, dedups and drops self-loops") {
    const Graph g = Graph::from_edges(3, {{0, 1, 1.0}, {1, 0, 2.0}, {1, 1, 5.0}, {1, 2, 1.0}});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.edge_weight(0, 1) == 2.0);  // last weight wins
    CHECK(g.edge_weight(1, 0) == 2.0);
    CHECK(g.edge_weight(1, 1) == 0.0);
    CHECK(g.degree(1) == 3.0);
}

TEST_CASE("from_edges rejects bad weights and out-of-range endpoints") {
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, -1.0}}), GraphError);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 1, 0.0}}), GraphError);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 5, 1.0}}), GraphError);
}

TEST_CASE("neighbor lists are sorted") {
    const Graph g = Graph::from_edges(4, {{2, 0, 1.0}, {2, 3, 1.0}, {2, 1, 1.0}});
    auto nb = g.neighbors(2);
    REQUIRE(nb.size() == 3);
    CHECK(nb[0] == 0);
    CHECK(nb[1] == 1);
    CHECK(nb[2] == 3);
}

TEST_CASE("load_edge_list remaps sparse ids and keeps comments out") {
    const auto path = write_temp("g1.txt", "# header\n10 20\n20 30\n\n10 30\n");
    const Graph g = load_edge_list(path, false);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.original_ids() == std::vector<std::int64_t>{10, 20, 30});
    std::remove(path.c_str());
}

TEST_CASE("load_edge_list weighted flag controls the third column") {
    const auto path = write_temp("g2.txt", "0 1 2.5\n1 2 4\n");
    const Graph gw = load_edge_list(path, true);
    CHECK(gw.edge_weight(0, 1) == 2.5);
    const Graph gu = load_edge_list(path, false);
    CHECK(gu.edge_weight(0, 1) == 1.0);
    std::remove(path.c_str());
}

TEST_CASE("load_edge_list reports parse errors with line numbers") {
    const auto path = write_temp("g3.txt", "0 1\nnot numbers\n");
    CHECK_THROWS_WITH_AS(load_edge_list(path, false),
                         doctest::Contains("line 2"), GraphError);
    std::remove(path.c_str());
}

TEST_CASE("load_labels remaps classes and requires full coverage") {
    const auto gpath = write_temp("g4.txt", "5 6\n6 7\n");
    const Graph g = load_edge_list(gpath, false);
    const auto lpath = write_temp("l4.txt", "5 10\n6 -3\n7 10\n");
    const LabelSet ls = load_labels(lpath, g);
    CHECK(ls.k_classes == 2);
    CHECK(ls.labels == std::vector<int>{1, 0, 1});  // -3 -> class 0

    const auto lbad = write_temp("l4b.txt", "5 10\n6 -3\n");
    CHECK_THROWS_AS(load_labels(lbad, g), GraphError);
    std::remove(gpath.c_str());
    std::remove(lpath.c_str());
    std::remove(lbad.c_str());
}

TEST_CASE("degree_stats uses the lower median") {
    const Graph g = synth::star_graph(3);  // degrees 3,1,1,1
    const DegreeStats st = degree_stats(g);
    CHECK(st.n == 4);
    CHECK(st.m == 3);
    CHECK(st.median_degree == 1.0);  // sorted 1,1,1,3 -> lower median
    CHECK(st.max_degree == 3.0);
    CHECK(st.avg_degree == doctest::Approx(1.5));
}

TEST_CASE("transition_column sums to one and rejects isolated nodes") {
    const Graph g = synth::star_graph(3);
    const SparseVec col = transition_column(g, 0);
    double sum = 0.0;
    for (const auto& [i, v] : col.sorted_entries()) sum += v;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(col.get(1) == doctest::Approx(1.0 / 3.0));

    const Graph iso = Graph::from_edges(3, {{0, 1, 1.0}});
    CHECK_THROWS_AS(transition_column(iso, 2), GraphError);
}

TEST_CASE("laplacian_quadratic on K2") {
    const Graph g = synth::path_graph(2);
    // x^T(I - beta*S)x with x=(1,1): 2 - beta*2/sqrt(1*1)
    CHECK(laplacian_quadratic(g, {1.0, 1.0}, 1.0) == doctest::Approx(0.0));
    CHECK(laplacian_quadratic(g, {1.0, -1.0}, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("save/load edge list round-trips") {
    const Graph g = synth::barbell(3);
    const auto path = (std::filesystem::temp_directory_path() / "rt.txt").string();
    save_edge_list(g, path);
    const Graph g2 = load_edge_list(path, true);
    REQUIRE(g2.node_count() == g.node_count());
    REQUIRE(g2.edge_count() == g.edge_count());
    for (int u = 0; u < g.node_count(); ++u)
        for (int v : g.neighbors(u)) CHECK(g2.edge_weight(u, v) == g.edge_weight(u, v));
    std::remove(path.c_str());
}

TEST_CASE("synthetic generators are deterministic and isolated-free") {
    const Graph a = synth::erdos_renyi(50, 0.1, 7);
    const Graph b = synth::erdos_renyi(50, 0.1, 7);
    CHECK(a.edge_count() == b.edge_count());
    for (int u = 0; u < a.node_count(); ++u) CHECK(a.degree(u) > 0.0);

    const Graph pl = synth::power_law(200, 3, 1);
    CHECK(pl.node_count() == 200);
    for (int u = 0; u < pl.node_count(); ++u) CHECK(pl.degree(u) > 0.0);
    CHECK(pl.max_degree() > 3.0 * degree_stats(pl).median_degree);
}
