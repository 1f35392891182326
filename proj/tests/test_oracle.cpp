#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "appr/oracle.hpp"
#include "appr/synth.hpp"

using namespace appr;

TEST_CASE("dense solver basics") {
    const Graph g = synth::barbell(3);
    const ApprParams params{0.2, 1e-6};
    SUBCASE("zero right-hand side") {
        const Eigen::VectorXd x =
            oracle::dense_solve(g, Eigen::VectorXd::Zero(g.node_count()), params);
        CHECK(x.norm() == doctest::Approx(0.0));
    }
    SUBCASE("edgeless graph has Q = I") {
        const Graph e = Graph::from_edges(3, {});
        Eigen::VectorXd b(3);
        b << 1.0, -2.0, 0.5;
        const Eigen::VectorXd x = oracle::dense_solve(e, b, params);
        for (int i = 0; i < 3; ++i) CHECK(x(i) == doctest::Approx(b(i)));
    }
    SUBCASE("residual of the solve is tiny") {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(g.node_count());
        b(0) = 1.0;
        const Eigen::VectorXd x = oracle::dense_solve(g, b, params);
        const Eigen::MatrixXd q = oracle::dense_Q(g, params);
        CHECK((q * x - b).norm() < 1e-10);
    }
    SUBCASE("node cap throws") {
        CHECK_THROWS(oracle::dense_solve(g, Eigen::VectorXd::Zero(g.node_count()),
                                         params, 2));
    }
}

TEST_CASE("subgaussian constant closed form") {
    CHECK(oracle::bernoulli_subgauss_constant(1.0) == doctest::Approx(0.25));
    CHECK(oracle::bernoulli_subgauss_constant(1.0 / std::exp(1.0)) ==
          doctest::Approx(0.25));
    // -(p-2)^2/(4 ln p) at p = 0.001
    const double p = 0.001;
    CHECK(oracle::bernoulli_subgauss_constant(p) ==
          doctest::Approx(-(p - 2.0) * (p - 2.0) / (4.0 * std::log(p))));
    CHECK(oracle::bernoulli_subgauss_constant(0.01) < 0.25);
    CHECK_THROWS(oracle::bernoulli_subgauss_constant(0.0));
    CHECK_THROWS(oracle::bernoulli_subgauss_constant(1.5));
}

TEST_CASE("analytic sigma bound scales with support and 1/p^2") {
    const double s1 = oracle::analytic_sigma_bound(0.5, 4);
    const double s2 = oracle::analytic_sigma_bound(0.5, 8);
    CHECK(s2 == doctest::Approx(2.0 * s1));
    CHECK(oracle::analytic_sigma_bound(1.0, 3) == doctest::Approx(0.25 * 3.0));
}

TEST_CASE("uniform outcome enumeration on a two-entry vector") {
    SparseVec w;
    w.set(0, 1.0);
    w.set(1, 1.0);
    SamplerConfig cfg;
    cfg.q_bar = 1;
    const auto outcomes = oracle::enumerate_sampler_outcomes(w, cfg);
    REQUIRE(outcomes.size() == 2);
    double psum = 0.0;
    SparseVec mean;
    for (const auto& o : outcomes) {
        CHECK(o.probability == doctest::Approx(0.5));
        CHECK(o.value.support_size() == 1);
        CHECK(o.value.l1() == doctest::Approx(2.0));  // reweighted by 1/p = 2
        psum += o.probability;
        for (const auto& [i, v] : o.value.sorted_entries())
            mean.add(i, o.probability * v);
    }
    CHECK(psum == doctest::Approx(1.0));
    CHECK(mean.get(0) == doctest::Approx(1.0));
    CHECK(mean.get(1) == doctest::Approx(1.0));
}

TEST_CASE("weighted outcome enumeration is an exact expectation certificate") {
    SparseVec w;
    w.set(2, 0.5);
    w.set(5, 0.25);
    w.set(7, 0.25);
    for (Weighting scheme : {Weighting::EdgeWeighted, Weighting::DegreeWeighted}) {
        SamplerConfig cfg;
        cfg.q_bar = 2;
        cfg.weighting = scheme;
        const std::vector<double> degs = {0, 0, 3.0, 0, 0, 1.0, 0, 2.0};
        const auto outcomes = oracle::enumerate_sampler_outcomes(w, cfg, &degs);
        double psum = 0.0;
        SparseVec mean;
        for (const auto& o : outcomes) {
            psum += o.probability;
            for (const auto& [i, v] : o.value.sorted_entries())
                mean.add(i, o.probability * v);
        }
        CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
        for (const auto& [i, v] : w.sorted_entries())
            CHECK(mean.get(i) == doctest::Approx(v).epsilon(1e-10));
    }
}

TEST_CASE("gradient trace starts at |b|^2 and running min is monotone") {
    const Graph g = synth::path_graph(5);
    const ApprParams params{0.3, 1e-8};
    Eigen::VectorXd b = Eigen::VectorXd::Zero(5);
    b(2) = 0.7;
    std::vector<SparseVec> snaps;
    snaps.emplace_back();  // x = 0
    SparseVec x1;
    x1.set(2, 0.3);
    snaps.push_back(x1);
    const auto tr = oracle::gradient_norm_trace(snaps, g, b, params);
    REQUIRE(tr.values.size() == 2);
    CHECK(tr.values[0] == doctest::Approx(b.squaredNorm()));
    CHECK(tr.running_min[0] >= tr.running_min[1]);
    CHECK(tr.running_min[1] == doctest::Approx(std::min(tr.values[0], tr.values[1])));
}

TEST_CASE("diagnostics: deterministic replicas have zero spread") {
    std::vector<std::vector<SparseVec>> reps;
    SparseVec z;
    z.set(0, 0.5);
    z.set(3, -0.1);
    for (int r = 0; r < 30; ++r) reps.push_back({z, z});
    const auto d = oracle::estimate_diagnostics(reps);
    CHECK(d.sigma_max_hat == doctest::Approx(0.0));
    CHECK(d.r_hat == doctest::Approx(0.5));
    CHECK_THROWS(oracle::estimate_diagnostics(
        std::vector<std::vector<SparseVec>>(10, {z})));
}

TEST_CASE("diagnostics pad ragged traces with the final state") {
    std::vector<std::vector<SparseVec>> reps;
    SparseVec a, b;
    a.set(0, 1.0);
    b.set(0, 2.0);
    for (int r = 0; r < 15; ++r) reps.push_back({a, a});  // length 2
    for (int r = 0; r < 15; ++r) reps.push_back({b});     // padded to {b, b}
    const auto d = oracle::estimate_diagnostics(reps);
    REQUIRE(d.sigma_t_hat.size() == 2);
    CHECK(d.sigma_t_hat[0] == doctest::Approx(d.sigma_t_hat[1]));
    CHECK(d.sigma_max_hat > 0.0);
    CHECK(d.r_hat == doctest::Approx(2.0));
}

TEST_CASE("offline concentration report structure") {
    const Graph g = synth::star_graph(4);
    std::vector<double> x(5, 0.0);
    x[0] = 1.0;
    const auto rep = oracle::offline_concentration_check(g, 1.0, x, 200,
                                                         {0.5, 1.0, 4.0}, 3);
    REQUIRE(rep.cells.size() == 3);
    CHECK(rep.randomized_pairs == 8);  // all 4 edges randomized (p = 1/4)
    for (const auto& cell : rep.cells) {
        CHECK(cell.empirical >= 0.0);
        CHECK(cell.empirical <= 1.0);
        CHECK(cell.bound >= 0.0);
    }
    // At a huge threshold nothing exceeds and the cell passes.
    CHECK(rep.cells.back().empirical == doctest::Approx(0.0));
    CHECK(rep.cells.back().pass);
}

TEST_CASE("built-in verification suites pass") {
    for (const std::string& name : oracle::suite_names()) {
        CAPTURE(name);
        const auto report = oracle::run_suite(name, 12345);
        for (const auto& c : report.checks) {
            CAPTURE(c.name);
            CAPTURE(c.details);
            CHECK(c.pass);
        }
        CHECK(report.pass);
    }
    CHECK_THROWS(oracle::run_suite("no-such-suite", 0));
}
