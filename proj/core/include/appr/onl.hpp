#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "appr/appr.hpp"
#include "appr/graph.hpp"
#include "appr/random_appr.hpp"
#include "appr/sampler.hpp"

namespace appr {

enum class SolverKind { Exact, Appr, RandomAppr };

struct SolverChoice {
    SolverKind kind = SolverKind::Exact;
    ApprParams params{0.15, 1e-8};       // used by Appr / RandomAppr
    SamplerConfig sampler{};             // used by RandomAppr
    RandomApprOptions random_opts{};     // used by RandomAppr
    int dense_cap = 5000;                // used by Exact
};

/// Columns of (factor_num) * (I - beta_prime * D^{-1/2} A D^{-1/2})^{-1}.
/// Both the labeling kernel M = (L/(2g) + I/(2n))^{-1} and the clustering
/// embedding Z = (L + b I)^{-1} reduce to this form. Columns are cached;
/// with a RandomAppr solver, solve order therefore fixes the RNG streams.
class KernelSolver {
public:
    KernelSolver(const Graph& g, double factor, double beta_prime,
                 SolverChoice solver);

    /// Kernel for online labeling: M = (L/(2*gamma) + I/(2n))^{-1} with
    /// L = I - beta * D^{-1/2} A D^{-1/2}.
    static KernelSolver labeling_kernel(const Graph& g, double gamma,
                                        double beta, SolverChoice solver);

    /// Embedding kernel: Z = (L + shift*I)^{-1}, L as above with
    /// discount beta_laplacian.
    static KernelSolver embedding_kernel(const Graph& g, double shift,
                                         double beta_laplacian,
                                         SolverChoice solver);

    /// Column t of the kernel (cached after the first call).
    const SparseVec& column(int t);

    double diagonal(int t) { return column(t).get(t); }

    /// Exact trace via the dense inverse (Exact solver) or the sum of cached
    /// per-column diagonal estimates after presolving all columns.
    double trace_from_columns(const std::vector<int>& order);

    std::uint64_t nodes_queried() const { return nodes_queried_; }
    double factor() const { return factor_; }
    double beta_prime() const { return beta_prime_; }

private:
    const Graph& g_;
    double factor_;
    double beta_prime_;
    double alpha_prime_;
    SolverChoice solver_;
    std::unordered_map<int, SparseVec> cache_;
    std::uint64_t nodes_queried_ = 0;
    std::uint64_t column_counter_ = 0;  // keys RandomAppr RNG streams
};

enum class OnlMethod { Relaxation, Regularize, Wma, WmaStar };

struct OnlConfig {
    double gamma = 0.0;   // <= 0 means "use measured smoothness"
    double beta = 1.0;    // Laplacian discount in L = I - beta*S
    OnlMethod method = OnlMethod::Relaxation;
    SolverChoice solver{};
    double d_const = 0.0;  // regret constant D; <= 0 means K
    int k_classes = 0;     // 0 means take from labels
    std::uint64_t seed = 0;
    bool argmax_predict = false;  // true: deterministic argmax instead of sampling
    double wma_star_beta = 0.5;
    int wma_star_hops = 3;
};

struct RegretTrace {
    std::vector<int> predictions;
    std::vector<int> losses;               // 0/1 per step
    std::vector<std::int64_t> cumulative_loss;
    double comparator_loss = 0.0;          // zero-comparator surrogate
    double regret_bound = 0.0;             // D*sqrt(2 n^{1+rho})
    double trace_bound = 0.0;              // sqrt(tr(M)), Exact/presolved only
    double gamma_used = 0.0;
    std::int64_t mistakes = 0;
    std::uint64_t nodes_queried = 0;
};

/// max(0, z - tau) with tau solving sum = 1 (simplex projection keeping the
/// input argmax).
std::vector<double> waterfill(const std::vector<double>& z);

/// One column solve of the labeling kernel; see KernelSolver.
SparseVec kernel_column(const Graph& g, int t, double gamma, double beta,
                        SolverChoice solver);

RegretTrace relaxation_run(const Graph& g, const LabelSet& labels,
                           const OnlConfig& cfg,
                           const std::vector<int>& visit_order);

RegretTrace regularize_run(const Graph& g, const LabelSet& labels,
                           const OnlConfig& cfg,
                           const std::vector<int>& visit_order);

/// Weighted-majority prediction from revealed neighbor labels
/// (revealed[v] = -1 when hidden). Ties break to the smallest class id;
/// isolated nodes draw uniformly with the seeded RNG.
int wma_predict(const Graph& g, const std::vector<int>& revealed, int t,
                int k_classes, std::uint64_t seed = 0);

/// Discounted multi-hop variant: per-class score
/// (1/beta) * sum_{k=0}^{k_hops} e_t^T (beta A D^{-1})^k y_class.
int wma_star_predict(const Graph& g, const std::vector<int>& revealed, int t,
                     int k_classes, double beta, int k_hops);

/// Sequential run of either baseline over visit_order.
RegretTrace wma_run(const Graph& g, const LabelSet& labels, const OnlConfig& cfg,
                    const std::vector<int>& visit_order, bool star);

/// tr(Y^T L Y) for one-hot Y, L = I - beta * D^{-1/2} A D^{-1/2}.
double smoothness(const Graph& g, const LabelSet& labels, double beta);

/// D*sqrt(2 n^{1+rho}) + sqrt(epsilon*n/(1-beta)); epsilon = 0 recovers the
/// unsparsified bound.
double regret_bound_sparsified(std::int64_t n, double gamma, double epsilon,
                               double beta, double d_const, double rho);

/// rho = log(gamma)/log(n).
double regret_rho(std::int64_t n, double gamma);

}  // namespace appr
