#include <doctest.h>

#include <cmath>

#include "appr/appr.hpp"
#include "appr/synth.hpp"

using namespace appr;

TEST_CASE("single push on the star center matches the hand computation") {
    // S3, seed center, alpha = 0.5: x_0 = 0.5/sqrt(3), z_0 = 0.25,
    // each leaf gets (1-a)/2 * 1/3 = 1/12.
    const Graph g = synth::star_graph(3);
    const ApprParams params{0.5, 1e-6};
    ApprState st;
    st.init(g, unit_vec(0), params.epsilon);
    push(st, g, 0, params);

    CHECK(st.x.get(0) == doctest::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(st.z.get(0) == doctest::Approx(0.25).epsilon(1e-15));
    for (int leaf = 1; leaf <= 3; ++leaf)
        CHECK(st.z.get(leaf) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(st.push_count == 1);
    CHECK(st.nodes_queried == 3);
}

TEST_CASE("each push removes exactly alpha * z_u of residual mass") {
    const Graph g = synth::erdos_renyi(40, 0.15, 3);
    const ApprParams params{0.3, 1e-4};
    ApprState st;
    st.init(g, unit_vec(0), params.epsilon);
    while (!st.queue.empty()) {
        const int u = st.queue.front();
        st.queue.pop_front();
        st.in_queue[static_cast<std::size_t>(u)] = 0;
        const double zu = st.z.get(u);
        if (std::abs(zu) < g.degree(u) * params.epsilon) continue;
        const double before = st.z.l1();
        push(st, g, u, params);
        CHECK(st.z.l1() == doctest::Approx(before - params.alpha * zu).epsilon(1e-12));
    }
    CHECK(st.push_count > 0);
}

TEST_CASE("appr_solve terminates below the per-coordinate threshold") {
    const Graph g = synth::barbell(4);
    const ApprParams params{0.2, 1e-5};
    const ApprResult res = appr_solve(g, 0, params);
    for (const auto& [i, v] : res.z.sorted_entries())
        CHECK(std::abs(v) < g.degree(i) * params.epsilon);
    CHECK(res.push_count > 0);
    CHECK(res.x.get(0) > 0.0);
}

TEST_CASE("residual_exact reproduces the maintained residual") {
    const Graph g = synth::power_law(60, 2, 9);
    const ApprParams params{0.15, 1e-6};
    const ApprResult res = appr_solve(g, 5, params);
    SparseVec b;
    b.set(5, (2.0 * params.alpha / (1.0 + params.alpha)) / std::sqrt(g.degree(5)));
    const SparseVec zex = residual_exact(g, res.x, b, params);
    for (const auto& [i, v] : zex.sorted_entries())
        CHECK(v == doctest::Approx(res.z.get(i)).epsilon(1e-9));
}

TEST_CASE("derived accessors scale as documented") {
    const Graph g = synth::path_graph(4);
    const ApprParams params{0.4, 1e-6};
    const ApprResult res = appr_solve(g, 1, params);
    const SparseVec r = unscaled_residual(g, res.z, params);
    const double scale = 2.0 * params.alpha / (1.0 + params.alpha);
    for (const auto& [i, v] : r.sorted_entries())
        CHECK(v == doctest::Approx(scale * res.z.get(i) / std::sqrt(g.degree(i))));
    const SparseVec pi = ppr_vector(g, res.x);
    for (const auto& [i, v] : pi.sorted_entries())
        CHECK(v == doctest::Approx(g.degree(i) * res.x.get(i)));
}

TEST_CASE("parameter validation") {
    const Graph g = synth::path_graph(3);
    CHECK_THROWS_AS(appr_solve(g, 0, ApprParams{0.0, 1e-6}), SolverError);
    CHECK_THROWS_AS(appr_solve(g, 0, ApprParams{1.0, 1e-6}), SolverError);
    CHECK_THROWS_AS(appr_solve(g, 0, ApprParams{0.5, 0.0}), SolverError);
    CHECK_THROWS_AS(appr_solve(g, 9, ApprParams{0.5, 1e-6}), SolverError);
}

TEST_CASE("beta is the documented function of alpha") {
    CHECK(ApprParams{0.5, 1e-6}.beta() == doctest::Approx(1.0 / 3.0));
    CHECK(ApprParams{0.15, 1e-6}.beta() == doctest::Approx(0.85 / 1.15));
}
