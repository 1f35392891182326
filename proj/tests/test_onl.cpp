#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "appr/onl.hpp"
#include "appr/synth.hpp"

using namespace appr;

namespace {

std::vector<int> natural_order(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace

TEST_CASE("waterfill projects onto the probability simplex") {
    SUBCASE("dominant coordinate saturates") {
        const auto p = waterfill({2.0, 0.0});
        CHECK(p[0] == doctest::Approx(1.0));
        CHECK(p[1] == doctest::Approx(0.0));
    }
    SUBCASE("already on the simplex is a fixed point") {
        const auto p = waterfill({0.5, 0.5});
        CHECK(p[0] == doctest::Approx(0.5));
        CHECK(p[1] == doctest::Approx(0.5));
    }
    SUBCASE("partial saturation") {
        const auto p = waterfill({1.5, 0.5, 0.0});
        CHECK(p[0] == doctest::Approx(1.0));
        CHECK(p[1] == doctest::Approx(0.0));
        CHECK(p[2] == doctest::Approx(0.0));
    }
    SUBCASE("interior projection") {
        const auto p = waterfill({0.8, 0.6, 0.0});
        CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
        CHECK(p[0] == doctest::Approx(0.6));
        CHECK(p[1] == doctest::Approx(0.4));
        CHECK(p[2] == doctest::Approx(0.0));
    }
    SUBCASE("output is a distribution and keeps the argmax") {
        const std::vector<double> z = {0.3, -1.0, 2.2, 0.9};
        const auto p = waterfill(z);
        double s = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(s == doctest::Approx(1.0));
        CHECK(p[2] >= p[0]);
        CHECK(p[2] >= p[3]);
    }
}

TEST_CASE("approximate kernel columns agree with the exact solver") {
    const Graph g = synth::complete_graph(3);
    SolverChoice exact;  // Exact
    SolverChoice approx;
    approx.kind = SolverKind::Appr;
    approx.params = ApprParams{0.15, 1e-12};
    KernelSolver me = KernelSolver::labeling_kernel(g, 1.0, 0.9, exact);
    KernelSolver ma = KernelSolver::labeling_kernel(g, 1.0, 0.9, approx);
    for (int t = 0; t < 3; ++t) {
        const SparseVec& ce = me.column(t);
        const SparseVec& ca = ma.column(t);
        for (int i = 0; i < 3; ++i)
            CHECK(ca.get(i) == doctest::Approx(ce.get(i)).epsilon(1e-6));
    }
}

TEST_CASE("labeling kernel is symmetric positive with dominant diagonal") {
    const Graph g = synth::barbell(4);
    SolverChoice exact;
    KernelSolver m = KernelSolver::labeling_kernel(g, 2.0, 1.0, exact);
    const int n = g.node_count();
    for (int t = 0; t < n; ++t) {
        CHECK(m.diagonal(t) > 0.0);
        for (int i = 0; i < n; ++i) {
            CHECK(m.column(t).get(i) == doctest::Approx(m.column(i).get(t)).epsilon(1e-9));
            CHECK(m.diagonal(t) >= m.column(t).get(i) - 1e-12);
        }
    }
}

TEST_CASE("smoothness formulas") {
    SUBCASE("edgeless labels are maximally smooth only via the identity term") {
        const Graph g = Graph::from_edges(4, {});
        LabelSet y;
        y.labels = {0, 1, 0, 1};
        y.k_classes = 2;
        CHECK(smoothness(g, y, 1.0) == doctest::Approx(4.0));
    }
    SUBCASE("one same-label edge on K2") {
        const Graph g = synth::complete_graph(2);
        LabelSet y;
        y.labels = {0, 0};
        y.k_classes = 1;
        // n - beta * 2 * w / sqrt(1*1) = 2 - 2*beta
        CHECK(smoothness(g, y, 1.0) == doctest::Approx(0.0));
        CHECK(smoothness(g, y, 0.5) == doctest::Approx(1.0));
        LabelSet diff;
        diff.labels = {0, 1};
        diff.k_classes = 2;
        CHECK(smoothness(g, diff, 1.0) == doctest::Approx(2.0));
    }
}

TEST_CASE("regret bound formula and rho") {
    // n=1000, gamma=10 => rho = 1/3, bound = D*sqrt(2*1000^{4/3}) + sqrt(eps*n/(1-beta))
    CHECK(regret_rho(1000, 10.0) == doctest::Approx(1.0 / 3.0));
    const double b = regret_bound_sparsified(1000, 10.0, 0.0, 0.5, 2.0, 1.0 / 3.0);
    CHECK(b == doctest::Approx(2.0 * std::sqrt(2.0 * std::pow(1000.0, 4.0 / 3.0))));
    const double bs = regret_bound_sparsified(1000, 10.0, 0.002, 0.5, 2.0, 1.0 / 3.0);
    CHECK(bs == doctest::Approx(b + std::sqrt(0.002 * 1000.0 / 0.5)));
}

TEST_CASE("relaxation makes few mistakes on a well-separated graph") {
    const Graph g = synth::planted_partition(40, 0.6, 0.02, 3);
    const LabelSet y = synth::planted_labels(40);
    OnlConfig cfg;
    cfg.argmax_predict = true;
    const RegretTrace tr = relaxation_run(g, y, cfg, natural_order(40));
    CHECK(tr.mistakes < 20);
    CHECK(tr.mistakes == tr.cumulative_loss.back());
    CHECK(static_cast<int>(tr.predictions.size()) == 40);
    CHECK(tr.gamma_used > 0.0);
    CHECK(tr.regret_bound > 0.0);
    CHECK(tr.trace_bound > 0.0);
}

TEST_CASE("regularize perfectly labels an all-same-label graph after one reveal") {
    const Graph g = synth::complete_graph(6);
    LabelSet y;
    y.labels = std::vector<int>(6, 0);
    y.k_classes = 2;  // class 1 never appears
    OnlConfig cfg;
    cfg.argmax_predict = true;
    cfg.k_classes = 2;
    const RegretTrace tr = regularize_run(g, y, cfg, natural_order(6));
    // After the first reveal every later prediction must be class 0.
    for (std::size_t t = 1; t < tr.predictions.size(); ++t)
        CHECK(tr.predictions[t] == 0);
}

TEST_CASE("relaxation and regularize are deterministic given a seed") {
    const Graph g = synth::planted_partition(30, 0.5, 0.05, 9);
    const LabelSet y = synth::planted_labels(30);
    OnlConfig cfg;
    cfg.seed = 42;
    const RegretTrace a = relaxation_run(g, y, cfg, natural_order(30));
    const RegretTrace b = relaxation_run(g, y, cfg, natural_order(30));
    CHECK(a.predictions == b.predictions);
    const RegretTrace c = regularize_run(g, y, cfg, natural_order(30));
    const RegretTrace d = regularize_run(g, y, cfg, natural_order(30));
    CHECK(c.predictions == d.predictions);
}

TEST_CASE("wma predicts the revealed neighbor majority") {
    const Graph g = synth::star_graph(3);
    std::vector<int> revealed = {-1, 0, 0, 1};
    CHECK(wma_predict(g, revealed, 0, 2) == 0);
    revealed = {-1, 1, 1, 0};
    CHECK(wma_predict(g, revealed, 0, 2) == 1);
    // Ties break to the smallest class id.
    revealed = {-1, 0, 1, -1};
    CHECK(wma_predict(g, revealed, 0, 2) == 0);
}

TEST_CASE("wma_star sees beyond immediate neighbors") {
    // Path 0-1-2-3; predicting node 0 with only node 2 revealed: one-hop
    // majority has no information, the discounted two-hop walk does.
    const Graph g = synth::path_graph(4);
    const std::vector<int> revealed = {-1, -1, 1, -1};
    CHECK(wma_star_predict(g, revealed, 0, 2, 0.5, 3) == 1);
}

TEST_CASE("wma_run agrees with stepwise wma_predict") {
    const Graph g = synth::planted_partition(20, 0.5, 0.1, 1);
    const LabelSet y = synth::planted_labels(20);
    OnlConfig cfg;
    cfg.k_classes = 2;
    cfg.seed = 7;
    const auto order = natural_order(20);
    const RegretTrace tr = wma_run(g, y, cfg, order, false);
    std::vector<int> revealed(20, -1);
    for (int t = 0; t < 20; ++t) {
        CHECK(tr.predictions[t] == wma_predict(g, revealed, order[t], 2, 7));
        revealed[order[t]] = y.labels[order[t]];
    }
}

TEST_CASE("invalid configurations are rejected") {
    const Graph g = synth::path_graph(4);
    LabelSet y;
    y.labels = {0, 0, 0, 0};
    y.k_classes = 1;  // K must be >= 2
    OnlConfig cfg;
    CHECK_THROWS(relaxation_run(g, y, cfg, natural_order(4)));
}
