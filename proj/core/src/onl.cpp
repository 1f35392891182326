#include "appr/onl.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "appr/rng.hpp"

namespace appr {

namespace {

// Dense inverses are shared across copies cheaply and computed at most once
// per KernelSolver.
Eigen::MatrixXd dense_kernel(const Graph& g, double factor, double beta_prime,
                             int cap) {
    const int n = g.node_count();
    if (n > cap)
        throw SolverError("exact kernel solve: " + std::to_string(n) +
                          " nodes exceeds dense cap " + std::to_string(cap));
    Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n);
    for (int u = 0; u < n; ++u) {
        auto nb = g.neighbors(u);
        auto wt = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const int v = nb[k];
            K(u, v) -= beta_prime * wt[k] / std::sqrt(g.degree(u) * g.degree(v));
        }
        if (g.degree(u) <= 0.0) K(u, u) = 1.0;  // isolated: S row is zero
    }
    return factor * K.inverse();
}

}  // namespace

KernelSolver::KernelSolver(const Graph& g, double factor, double beta_prime,
                           SolverChoice solver)
    : g_(g), factor_(factor), beta_prime_(beta_prime), solver_(std::move(solver)) {
    if (!(beta_prime_ > 0.0) || beta_prime_ >= 1.0)
        throw SolverError("kernel discount must lie in (0,1), got " +
                          std::to_string(beta_prime_));
    alpha_prime_ = (1.0 - beta_prime_) / (1.0 + beta_prime_);
}

KernelSolver KernelSolver::labeling_kernel(const Graph& g, double gamma,
                                           double beta, SolverChoice solver) {
    if (!(gamma > 0.0)) throw SolverError("gamma must be positive");
    const double n = static_cast<double>(g.node_count());
    // L/(2g) + I/(2n) = (1+g/n)/(2g) * (I - beta/(1+g/n) * S)
    const double denom = 1.0 + gamma / n;
    return KernelSolver(g, 2.0 * gamma / denom, beta / denom, std::move(solver));
}

KernelSolver KernelSolver::embedding_kernel(const Graph& g, double shift,
                                            double beta_laplacian,
                                            SolverChoice solver) {
    if (!(shift > 0.0)) throw SolverError("embedding shift must be positive");
    // L + s*I = (1+s) * (I - beta_L/(1+s) * S)
    return KernelSolver(g, 1.0 / (1.0 + shift), beta_laplacian / (1.0 + shift),
                        std::move(solver));
}

const SparseVec& KernelSolver::column(int t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;

    SparseVec col;
    try {
        if (solver_.kind == SolverKind::Exact) {
            // dense once, then every column comes from the cache
            const Eigen::MatrixXd m =
                dense_kernel(g_, factor_, beta_prime_, solver_.dense_cap);
            for (int j = 0; j < g_.node_count(); ++j) {
                SparseVec cj;
                for (int i = 0; i < g_.node_count(); ++i)
                    if (m(i, j) != 0.0) cj.set(i, m(i, j));
                cache_.emplace(j, std::move(cj));
            }
            return cache_.at(t);
        }
        if (g_.degree(t) <= 0.0)
            throw SolverError("kernel column of isolated node");
        const ApprParams eff{alpha_prime_, solver_.params.epsilon};
        if (solver_.kind == SolverKind::Appr) {
            SparseVec z0;
            z0.set(t, (1.0 + alpha_prime_) / (2.0 * alpha_prime_) *
                          std::sqrt(g_.degree(t)));
            ApprResult res = appr_solve_z0(g_, z0, eff);
            nodes_queried_ += res.nodes_queried;
            for (const auto& [i, v] : res.x.sorted_entries())
                col.set(i, factor_ * v);
        } else {
            SamplerConfig scfg = solver_.sampler;
            scfg.rng_seed =
                KeyedRng(solver_.sampler.rng_seed, 0xC01u, column_counter_)
                    .next_u64();
            RandomApprResult res =
                random_appr(g_, t, eff, scfg, solver_.random_opts);
            nodes_queried_ += res.nodes_queried;
            const double rescale = factor_ *
                                   (1.0 + alpha_prime_) / (2.0 * alpha_prime_) *
                                   std::sqrt(g_.degree(t));
            for (const auto& [i, v] : res.x.sorted_entries())
                col.set(i, rescale * v);
        }
    } catch (const SolverError& e) {
        throw SolverError("kernel column " + std::to_string(t) + ": " + e.what());
    }
    ++column_counter_;
    return cache_.emplace(t, std::move(col)).first->second;
}

double KernelSolver::trace_from_columns(const std::vector<int>& order) {
    double tr = 0.0;
    for (int t : order) tr += diagonal(t);
    return tr;
}

std::vector<double> waterfill(const std::vector<double>& z) {
    const std::size_t k = z.size();
    if (k == 0) throw SolverError("waterfill: empty score vector");
    std::vector<double> u(z);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = u[0] - 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        cum += u[i];
        const double cand = (cum - 1.0) / static_cast<double>(i + 1);
        if (i + 1 == k || u[i + 1] <= cand) {
            tau = cand;
            break;
        }
    }
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = std::max(0.0, z[i] - tau);
    return out;
}

SparseVec kernel_column(const Graph& g, int t, double gamma, double beta,
                        SolverChoice solver) {
    KernelSolver ks = KernelSolver::labeling_kernel(g, gamma, beta, std::move(solver));
    return ks.column(t);
}

namespace {

int pick_prediction(const std::vector<double>& p, std::uint64_t seed,
                    std::uint64_t step, bool argmax) {
    if (argmax) {
        return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    }
    KeyedRng rng(seed, 0x0e1u, step);
    double r = rng.next_double();
    for (std::size_t k = 0; k < p.size(); ++k) {
        r -= p[k];
        if (r < 0.0) return static_cast<int>(k);
    }
    return static_cast<int>(p.size()) - 1;  // round-off fallthrough
}

struct RunSetup {
    int n = 0;
    int K = 0;
    double gamma = 0.0;
    double D = 0.0;
};

RunSetup setup_run(const Graph& g, const LabelSet& labels, const OnlConfig& cfg,
                   const std::vector<int>& visit_order) {
    RunSetup s;
    s.n = g.node_count();
    if (static_cast<int>(labels.labels.size()) != s.n)
        throw SolverError("label vector does not cover the graph");
    if (static_cast<int>(visit_order.size()) != s.n)
        throw SolverError("visit order must be a permutation of all nodes");
    s.K = cfg.k_classes > 0 ? cfg.k_classes : labels.k_classes;
    if (s.K < 2) throw SolverError("need at least 2 classes");
    s.gamma = cfg.gamma > 0.0 ? cfg.gamma
                              : std::max(smoothness(g, labels, cfg.beta), 1e-9);
    s.D = cfg.d_const > 0.0 ? cfg.d_const : static_cast<double>(s.K);
    return s;
}

void finish_trace(RegretTrace& tr, const RunSetup& s) {
    tr.gamma_used = s.gamma;
    const double rho =
        regret_rho(static_cast<std::int64_t>(s.n), s.gamma);
    tr.regret_bound =
        regret_bound_sparsified(s.n, s.gamma, 0.0, 0.5, s.D, rho);
}

}  // namespace

RegretTrace relaxation_run(const Graph& g, const LabelSet& labels,
                           const OnlConfig& cfg,
                           const std::vector<int>& visit_order) {
    const RunSetup s = setup_run(g, labels, cfg, visit_order);
    KernelSolver solver =
        KernelSolver::labeling_kernel(g, s.gamma, cfg.beta, cfg.solver);

    // tau_1 = tr(M); columns presolved in visit order so RandomAppr streams
    // are fixed by the order alone.
    double tau = solver.trace_from_columns(visit_order);
    double a = 0.0;

    RegretTrace tr;
    tr.trace_bound = std::sqrt(std::max(0.0, tau));
    std::vector<double> G(static_cast<std::size_t>(s.K) * s.n, 0.0);
    std::vector<double> u(s.K), z(s.K), grad(s.K);

    std::uint64_t step = 0;
    for (int t : visit_order) {
        const SparseVec& col = solver.column(t);
        std::fill(u.begin(), u.end(), 0.0);
        for (const auto& [v, mv] : col.sorted_entries())
            for (int k = 0; k < s.K; ++k)
                u[k] += G[static_cast<std::size_t>(k) + s.K * v] * mv;

        const double den = a + s.D * s.D * tau;
        if (!(den > 0.0))
            throw SolverError("relaxation guard: a + D^2*tau = " +
                              std::to_string(den) + " at step " +
                              std::to_string(step));
        const double inv = 1.0 / std::sqrt(den);
        for (int k = 0; k < s.K; ++k) z[k] = -2.0 * u[k] * inv;
        const double zmin = *std::min_element(z.begin(), z.end());
        for (int k = 0; k < s.K; ++k) z[k] -= zmin;  // argmax-preserving shift
        const std::vector<double> p = waterfill(z);

        const int pred = pick_prediction(p, cfg.seed, step, cfg.argmax_predict);
        const int y = labels.labels[t];
        const int loss = pred == y ? 0 : 1;
        tr.predictions.push_back(pred);
        tr.losses.push_back(loss);
        tr.mistakes += loss;
        tr.cumulative_loss.push_back(tr.mistakes);

        double gnorm2 = 0.0, gu = 0.0;
        for (int k = 0; k < s.K; ++k) {
            grad[k] = p[k] - (k == y ? 1.0 : 0.0);
            gnorm2 += grad[k] * grad[k];
            gu += grad[k] * u[k];
        }
        const double mtt = col.get(t);
        a += 2.0 * gu + mtt * gnorm2;
        tau -= mtt;
        for (int k = 0; k < s.K; ++k)
            G[static_cast<std::size_t>(k) + s.K * t] = grad[k];
        ++step;
    }
    tr.nodes_queried = solver.nodes_queried();
    finish_trace(tr, s);
    return tr;
}

RegretTrace regularize_run(const Graph& g, const LabelSet& labels,
                           const OnlConfig& cfg,
                           const std::vector<int>& visit_order) {
    const RunSetup s = setup_run(g, labels, cfg, visit_order);
    KernelSolver solver =
        KernelSolver::labeling_kernel(g, s.gamma, cfg.beta, cfg.solver);

    RegretTrace tr;
    std::vector<double> G(static_cast<std::size_t>(s.K) * s.n, 0.0);
    std::vector<double> u(s.K), z(s.K);

    std::uint64_t step = 0;
    for (int t : visit_order) {
        const SparseVec& col = solver.column(t);
        std::fill(u.begin(), u.end(), 0.0);
        for (const auto& [v, mv] : col.sorted_entries())
            for (int k = 0; k < s.K; ++k)
                u[k] += G[static_cast<std::size_t>(k) + s.K * v] * mv;

        // The one-hot G makes +2*G*M the label-mass score; the raw -2 sign
        // would invert the argmax.
        for (int k = 0; k < s.K; ++k) z[k] = 2.0 * u[k];
        const double zmin = *std::min_element(z.begin(), z.end());
        for (int k = 0; k < s.K; ++k) z[k] -= zmin;
        const std::vector<double> p = waterfill(z);

        const int pred = pick_prediction(p, cfg.seed, step, cfg.argmax_predict);
        const int y = labels.labels[t];
        const int loss = pred == y ? 0 : 1;
        tr.predictions.push_back(pred);
        tr.losses.push_back(loss);
        tr.mistakes += loss;
        tr.cumulative_loss.push_back(tr.mistakes);

        G[static_cast<std::size_t>(y) + s.K * t] = 1.0;
        ++step;
    }
    tr.nodes_queried = solver.nodes_queried();
    finish_trace(tr, s);
    return tr;
}

int wma_predict(const Graph& g, const std::vector<int>& revealed, int t,
                int k_classes, std::uint64_t seed) {
    if (g.degree(t) <= 0.0) {
        KeyedRng rng(seed, 0x37au, static_cast<std::uint64_t>(t));
        return static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k_classes)));
    }
    std::vector<double> mass(k_classes, 0.0);
    const auto nb = g.neighbors(t);
    const auto wt = g.weights(t);
    for (std::size_t i = 0; i < nb.size(); ++i) {
        const int v = nb[i];
        if (revealed[v] >= 0) mass[revealed[v]] += wt[i] / g.degree(v);
    }
    return static_cast<int>(std::max_element(mass.begin(), mass.end()) -
                            mass.begin());  // ties: smallest class id
}

int wma_star_predict(const Graph& g, const std::vector<int>& revealed, int t,
                     int k_classes, double beta, int k_hops) {
    if (k_hops < 1) throw SolverError("wma_star: k_hops must be >= 1");
    const int n = g.node_count();
    std::vector<double> score(k_classes, 0.0);
    std::vector<double> cur(n), next(n);
    for (int c = 0; c < k_classes; ++c) {
        for (int v = 0; v < n; ++v) cur[v] = revealed[v] == c ? 1.0 : 0.0;
        score[c] += cur[t];  // k = 0 term
        for (int hop = 1; hop <= k_hops; ++hop) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int v = 0; v < n; ++v) {
                if (cur[v] == 0.0 || g.degree(v) <= 0.0) continue;
                const double out = beta * cur[v] / g.degree(v);
                auto nb = g.neighbors(v);
                auto wt = g.weights(v);
                for (std::size_t i = 0; i < nb.size(); ++i)
                    next[nb[i]] += out * wt[i];
            }
            score[c] += next[t];
            std::swap(cur, next);
        }
        score[c] /= beta;
    }
    return static_cast<int>(std::max_element(score.begin(), score.end()) -
                            score.begin());
}

RegretTrace wma_run(const Graph& g, const LabelSet& labels, const OnlConfig& cfg,
                    const std::vector<int>& visit_order, bool star) {
    const RunSetup s = setup_run(g, labels, cfg, visit_order);
    RegretTrace tr;
    std::vector<int> revealed(s.n, -1);
    for (int t : visit_order) {
        const int pred =
            star ? wma_star_predict(g, revealed, t, s.K, cfg.wma_star_beta,
                                    cfg.wma_star_hops)
                 : wma_predict(g, revealed, t, s.K, cfg.seed);
        const int y = labels.labels[t];
        const int loss = pred == y ? 0 : 1;
        tr.predictions.push_back(pred);
        tr.losses.push_back(loss);
        tr.mistakes += loss;
        tr.cumulative_loss.push_back(tr.mistakes);
        revealed[t] = y;
        tr.nodes_queried += static_cast<std::uint64_t>(g.neighbor_count(t));
    }
    finish_trace(tr, s);
    return tr;
}

double smoothness(const Graph& g, const LabelSet& labels, double beta) {
    const int n = g.node_count();
    if (static_cast<int>(labels.labels.size()) != n)
        throw SolverError("smoothness: label vector does not cover the graph");
    double cross = 0.0;
    for (int u = 0; u < n; ++u) {
        auto nb = g.neighbors(u);
        auto wt = g.weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const int v = nb[k];
            if (labels.labels[u] == labels.labels[v])
                cross += wt[k] / std::sqrt(g.degree(u) * g.degree(v));
        }
    }
    return static_cast<double>(n) - beta * cross;
}

double regret_rho(std::int64_t n, double gamma) {
    if (n < 2) return 0.0;
    return std::log(gamma) / std::log(static_cast<double>(n));
}

double regret_bound_sparsified(std::int64_t n, double gamma, double epsilon,
                               double beta, double d_const, double rho) {
    if (beta >= 1.0) throw SolverError("regret bound requires beta < 1");
    if (epsilon < 0.0) throw SolverError("regret bound requires epsilon >= 0");
    (void)gamma;
    const double nn = static_cast<double>(n);
    return d_const * std::sqrt(2.0 * std::pow(nn, 1.0 + rho)) +
           std::sqrt(epsilon * nn / (1.0 - beta));
}

}  // namespace appr
