#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "appr/appr.hpp"
#include "appr/graph.hpp"
#include "appr/sampler.hpp"

namespace appr::oracle {

/// Dense Q = I - beta * D^{-1/2} A D^{-1/2}; isolated nodes get Q_uu = 1.
Eigen::MatrixXd dense_Q(const Graph& g, const ApprParams& params);

/// Direct factorization solve of Q x = b. Q is SPD (eigenvalues in
/// [2a/(1+a), 1+beta]), so LDLT applies.
Eigen::VectorXd dense_solve(const Graph& g, const Eigen::VectorXd& b,
                            const ApprParams& params, int n_cap = 5000);

/// min(1/4, -(p-2)^2 / (4 ln p)); the subgaussian constant of a reweighted
/// Bernoulli(p). p = 1 returns 1/4 (the limit).
double bernoulli_subgauss_constant(double p);

/// Analytic per-coordinate bound S(p)/p^2 * supp from the variance lemma.
double analytic_sigma_bound(double p, std::size_t supp_size);

struct ConcentrationCell {
    double epsilon = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // 3 binomial standard errors of the bound
    bool pass = false;
};

struct ConcentrationReport {
    std::vector<ConcentrationCell> cells;
    bool pass = true;
    std::int64_t randomized_pairs = 0;  // |S_I|, ordered pairs
};

/// Monte-Carlo check of the offline sparsification tail bound
/// Pr(x^T L~ x - x^T L x >= eps) <= exp(-eps^2 q^2 / (dmax^2 |x|_inf^4 |S_I|))
/// under the influencer scheme at q_bar, with beta = 1 Laplacians.
ConcentrationReport offline_concentration_check(const Graph& g, double q_bar,
                                                const std::vector<double>& x,
                                                int trials,
                                                const std::vector<double>& eps_grid,
                                                std::uint64_t seed);

struct SamplerOutcome {
    SparseVec value;
    double probability = 0.0;
};

/// Exhaustive outcome distribution of the sampler on w: combinatorial for the
/// uniform design, breakpoint-interval enumeration for the systematic
/// weighted designs. Support capped at 12.
std::vector<SamplerOutcome> enumerate_sampler_outcomes(
    const SparseVec& w, const SamplerConfig& cfg,
    const std::vector<double>* target_degrees = nullptr);

struct GradientTrace {
    std::vector<double> values;       // |Qx - b|_2^2 per checkpoint
    std::vector<double> running_min;
};

/// Gradient norms of f(x) = x^T Q x / 2 - b^T x along primal snapshots.
GradientTrace gradient_norm_trace(const std::vector<SparseVec>& snapshots,
                                  const Graph& g, const Eigen::VectorXd& b,
                                  const ApprParams& params);

struct DiagnosticStats {
    std::vector<double> sigma_t_hat;  // per checkpoint, max over coordinates
    double sigma_max_hat = 0.0;
    double r_hat = 0.0;  // max observed |z|_inf
};

/// Sample-std proxies from replicate residual traces; replicas[r][t] is the
/// residual vector of replicate r at checkpoint t (ragged traces allowed:
/// shorter replicas are padded with their final state).
DiagnosticStats estimate_diagnostics(
    const std::vector<std::vector<SparseVec>>& replicas);

struct EarlyStopReport {
    double frequency = 0.0;   // premature-termination rate
    double sigma_hat = 0.0;
    double bound = 0.0;       // exp(-(1-c)^2 eps^2 / (2 sigma^2))
    double slack = 0.0;
    bool pass = false;
};

/// Replicated random_appr runs at deflation c; a run is premature when the
/// sampled residual dropped below c*d*eps everywhere while the exact residual
/// of the returned primal still exceeds d*eps somewhere.
EarlyStopReport early_stopping_check(const Graph& g, int s,
                                     const ApprParams& params,
                                     const SamplerConfig& cfg, double c,
                                     int replicates, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string details;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass = true;
};

/// Named verification suites over built-in test graphs:
/// lemma1 | offline | sampler | rates | early-stop.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, int threads = 1);

std::vector<std::string> suite_names();

}  // namespace appr::oracle
