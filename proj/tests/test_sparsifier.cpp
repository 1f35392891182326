#include <doctest.h>

#include <cmath>
#include <limits>

#include "appr/graph.hpp"
#include "appr/sparsify.hpp"
#include "appr/synth.hpp"

using namespace appr;

namespace {

bool same_graph(const Graph& a, const Graph& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count())
        return false;
    for (int u = 0; u < a.node_count(); ++u) {
        auto na = a.neighbors(u), nb = b.neighbors(u);
        auto wa = a.weights(u), wb = b.weights(u);
        if (na.size() != nb.size()) return false;
        for (std::size_t i = 0; i < na.size(); ++i)
            if (na[i] != nb[i] || wa[i] != wb[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("uniform scheme with keep_prob 1 is the identity") {
    const Graph g = synth::erdos_renyi(30, 0.2, 5);
    const Graph gs = sparsify_offline(g, UniformScheme{1.0}, 7);
    CHECK(same_graph(g, gs));
}

TEST_CASE("influencer scheme with q_bar >= max degree is the identity") {
    const Graph g = synth::power_law(50, 2, 11);
    const Graph gs =
        sparsify_offline(g, InfluencerScheme{g.max_degree()}, 13);
    CHECK(same_graph(g, gs));
}

TEST_CASE("kept edges are reweighted to w/p") {
    const Graph g = synth::star_graph(3);  // all degrees: center 3, leaves 1
    const InfluencerScheme scheme{1.0};    // every edge has p = 1/3
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Graph gs = sparsify_offline(g, scheme, seed);
        for (int u = 0; u < gs.node_count(); ++u)
            for (double w : gs.weights(u)) CHECK(w == doctest::Approx(3.0));
    }
}

TEST_CASE("sparsified adjacency is unbiased (Monte Carlo)") {
    const Graph g = synth::star_graph(3);
    const int trials = 4000;
    double sum = 0.0;  // weight of edge (0,1) across trials, 0 when dropped
    for (int t = 0; t < trials; ++t) {
        const Graph gs =
            sparsify_offline(g, InfluencerScheme{1.0}, static_cast<std::uint64_t>(t));
        sum += gs.edge_weight(0, 1);
    }
    CHECK(sum / trials == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("edge probabilities follow the row order and the scheme formulas") {
    const Graph g = synth::star_graph(2);  // edges (0,1), (0,2); d0=2, leaves 1
    const auto pu = edge_probabilities(g, UniformScheme{0.4});
    REQUIRE(pu.size() == 2);
    CHECK(pu[0] == doctest::Approx(0.4));
    CHECK(pu[1] == doctest::Approx(0.4));
    const auto pi = edge_probabilities(g, InfluencerScheme{1.0});
    CHECK(pi[0] == doctest::Approx(0.5));
    CHECK(pi[1] == doctest::Approx(0.5));
}

TEST_CASE("effective resistances on small closed-form graphs") {
    SUBCASE("path endpoints") {
        const Graph g = synth::path_graph(3);
        const Eigen::MatrixXd r = resistive_distances(g);
        CHECK(r(0, 2) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(r(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r(1, 0) == doctest::Approx(r(0, 1)));
        CHECK(r(0, 0) == doctest::Approx(0.0));
    }
    SUBCASE("triangle") {
        const Graph g = synth::complete_graph(3);
        const Eigen::MatrixXd r = resistive_distances(g);
        CHECK(r(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    }
    SUBCASE("bridge edge in a tree has resistance 1") {
        const Graph g = synth::star_graph(4);
        const Eigen::MatrixXd r = resistive_distances(g);
        for (int leaf = 1; leaf <= 4; ++leaf)
            CHECK(r(0, leaf) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("node cap throws") {
        const Graph g = synth::path_graph(10);
        CHECK_THROWS(resistive_distances(g, 5));
    }
}

TEST_CASE("edge_ratio cases") {
    const Graph g = synth::barbell(3);  // bridge between cliques
    LabelSet split;
    split.labels = {0, 0, 0, 1, 1, 1};
    split.k_classes = 2;
    // Bridge is the only cross edge; each clique has 3 internal edges.
    CHECK(edge_ratio(g, split) == doctest::Approx(1.0 / 6.0));

    LabelSet all_same;
    all_same.labels = {0, 0, 0, 0, 0, 0};
    all_same.k_classes = 1;
    CHECK(edge_ratio(g, all_same) == doctest::Approx(0.0));

    const Graph k2 = synth::complete_graph(2);
    LabelSet diff;
    diff.labels = {0, 1};
    diff.k_classes = 2;
    CHECK(edge_ratio(k2, diff) == std::numeric_limits<double>::infinity());
}

TEST_CASE("quadratic form deviation is zero on the identity and unbiased") {
    const Graph g = synth::erdos_renyi(20, 0.3, 2);
    std::vector<double> x(20);
    for (int i = 0; i < 20; ++i) x[i] = std::sin(i + 1.0);

    const Graph same = sparsify_offline(g, UniformScheme{1.0}, 1);
    CHECK(quadratic_form_deviation(g, same, x, 0.7) == doctest::Approx(0.0));

    double mean = 0.0;
    const int trials = 3000;
    for (int t = 0; t < trials; ++t) {
        const Graph gs =
            sparsify_offline(g, UniformScheme{0.5}, static_cast<std::uint64_t>(t));
        mean += quadratic_form_deviation(g, gs, x, 0.7);
    }
    mean /= trials;
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("calibrated resistive scale hits the expected edge budget") {
    const Graph g = synth::erdos_renyi(25, 0.3, 4);
    const double target = 0.6;
    const double scale = calibrate_resistive_scale(g, target);
    const auto probs = edge_probabilities(g, ResistiveScheme{scale});
    double expected = 0.0;
    for (double p : probs) expected += p;
    CHECK(expected / probs.size() == doctest::Approx(target).epsilon(1e-6));
}
