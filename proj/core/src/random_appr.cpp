#include "appr/random_appr.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "appr/rng.hpp"

namespace appr {

namespace {

constexpr std::uint64_t kCorrectionTag = 1ULL << 63;

/// One sampled push on u. Expression shapes deliberately match appr::push so
/// the p = 1 path is bit-identical to the deterministic solver. Returns true
/// when the neighbor set was actually subsampled.
template <class Enqueue>
bool push_sampled(const Graph& g, SparseVec& x, SparseVec& z, int u,
                  const ApprParams& params, const SamplerConfig& cfg,
                  std::uint64_t epoch, std::uint64_t push_index,
                  std::uint64_t& nodes_queried, Enqueue&& enqueue) {
    const double alpha = params.alpha;
    const double zu = z.get(u);
    const double du = g.degree(u);

    x.add(u, alpha * zu / std::sqrt(du));

    const auto nbrs = g.neighbors(u);
    const auto wgts = g.weights(u);
    std::vector<double> tcol(nbrs.size());
    for (std::size_t i = 0; i < nbrs.size(); ++i) tcol[i] = wgts[i] / du;
    std::vector<double> tdeg;
    if (cfg.weighting == Weighting::DegreeWeighted) {
        tdeg.resize(nbrs.size());
        for (std::size_t i = 0; i < nbrs.size(); ++i) tdeg[i] = g.degree(nbrs[i]);
    }

    KeyedRng rng(cfg.rng_seed, epoch, push_index, static_cast<std::uint64_t>(u));
    const SampleDraw draw = draw_subset(tcol, tdeg, cfg, rng);

    const double spread = 0.5 * (1.0 - alpha) * zu;
    for (std::size_t j = 0; j < draw.positions.size(); ++j) {
        const int idx = draw.positions[j];
        const int v = nbrs[idx];
        z.add(v, spread * (tcol[idx] / draw.probs[j]));
        ++nodes_queried;
        enqueue(v);
    }
    z.set(u, 0.5 * (1.0 - alpha) * zu);
    enqueue(u);
    return draw.subsampled;
}

}  // namespace

std::uint64_t push_appr(const Graph& g, SparseVec& x, SparseVec& z,
                        const SamplerConfig& cfg, std::span<const int> active,
                        const ApprParams& params, std::uint64_t epoch,
                        std::uint64_t push_index0) {
    if (active.empty()) throw SolverError("push_appr: empty active list");
    std::uint64_t queried = 0;
    std::uint64_t count = 0;
    for (int u : active) {
        if (g.degree(u) <= 0.0)
            throw SolverError("push_appr: isolated active node " + std::to_string(u));
        push_sampled(g, x, z, u, params, cfg, epoch, push_index0 + count, queried,
                     [](int) {});
        ++count;
    }
    return count;
}

SparseVec dual_correct(const Graph& g, const SparseVec& x,
                       const SamplerConfig& cfg, const ApprParams& params,
                       std::uint64_t epoch, std::uint64_t correction_id,
                       std::uint64_t* nodes_queried) {
    const auto entries = x.sorted_entries();
    if (entries.empty()) throw SolverError("dual_correct: empty primal support");
    const double alpha = params.alpha;

    SparseVec zt;
    std::uint64_t queried = 0;
    for (const auto& [k, xk] : entries) {
        const double dk = g.degree(k);
        const double sdk = std::sqrt(dk);
        zt.add(k, (1.0 + alpha) * sdk * xk / (2.0 * alpha));

        const auto nbrs = g.neighbors(k);
        const auto wgts = g.weights(k);
        std::vector<double> tcol(nbrs.size());
        for (std::size_t i = 0; i < nbrs.size(); ++i) tcol[i] = wgts[i] / dk;
        std::vector<double> tdeg;
        if (cfg.weighting == Weighting::DegreeWeighted) {
            tdeg.resize(nbrs.size());
            for (std::size_t i = 0; i < nbrs.size(); ++i)
                tdeg[i] = g.degree(nbrs[i]);
        }
        KeyedRng rng(cfg.rng_seed, epoch, kCorrectionTag | correction_id,
                     static_cast<std::uint64_t>(k));
        const SampleDraw draw = draw_subset(tcol, tdeg, cfg, rng);

        const double coef = (1.0 - alpha) * xk * sdk / (2.0 * alpha);
        for (std::size_t j = 0; j < draw.positions.size(); ++j) {
            const int idx = draw.positions[j];
            zt.add(nbrs[idx], -coef * (tcol[idx] / draw.probs[j]));
            ++queried;
        }
    }
    if (nodes_queried) *nodes_queried += queried;
    return zt;
}

RandomApprResult random_appr(const Graph& g, int s, const ApprParams& params,
                             const SamplerConfig& cfg,
                             const RandomApprOptions& opts) {
    if (s < 0 || s >= g.node_count())
        throw SolverError("seed node " + std::to_string(s) + " out of range");
    if (g.degree(s) <= 0.0)
        throw SolverError("seed node " + std::to_string(s) + " is isolated");
    if (!(opts.c > 0.0) || opts.c > 1.0)
        throw SolverError("active-set deflation c must lie in (0,1]");
    if (opts.correction_period < 1)
        throw SolverError("correction period must be >= 1");
    if (cfg.q_bar < 1) throw SolverError("q_bar must be >= 1");
    if (opts.correction_q_factor < 1.0)
        throw SolverError("correction_q_factor must be >= 1");

    SamplerConfig corr_cfg = cfg;  // boosted budget for the dual estimate
    corr_cfg.q_bar = static_cast<int>(
        std::llround(std::ceil(opts.correction_q_factor * cfg.q_bar)));

    const double eps_eff = opts.c * params.epsilon;
    const ApprParams eff{params.alpha, eps_eff};
    std::uint64_t push_cap =
        opts.push_cap != 0 ? opts.push_cap : default_push_cap(eff);

    RandomApprResult res;
    SparseVec x;                       // current sub-problem primal
    SparseVec x_bar;                   // accumulated primal
    SparseVec z = unit_vec(s);         // working residual
    SparseVec z_bar = unit_vec(s);     // corrected dual at last restart
    std::deque<int> queue;
    std::vector<std::uint8_t> in_queue(static_cast<std::size_t>(g.node_count()), 0);
    if (std::abs(z.get(s)) >= g.degree(s) * eps_eff) {
        queue.push_back(s);
        in_queue[static_cast<std::size_t>(s)] = 1;
    }

    auto enqueue = [&](int v) {
        if (!in_queue[static_cast<std::size_t>(v)] &&
            std::abs(z.get(v)) >= g.degree(v) * eps_eff) {
            queue.push_back(v);
            in_queue[static_cast<std::size_t>(v)] = 1;
        }
    };

    // seed right-hand side, for optional exact-residual tracing
    SparseVec b;
    b.set(s, (2.0 * params.alpha / (1.0 + params.alpha)) / std::sqrt(g.degree(s)));
    auto record = [&](bool correction) {
        EpochStats st;
        st.epoch = res.epochs;
        st.pushes = res.push_count;
        st.correction = correction;
        st.z_l1 = z.l1();
        SparseVec total = x_bar;
        for (const auto& [i, v] : x.sorted_entries()) total.add(i, v);
        st.support_x = total.support_size();
        if (opts.record_exact_residual) {
            const SparseVec zex = residual_exact(g, total, b, params);
            const SparseVec r = unscaled_residual(g, zex, params);
            double l1 = 0.0, l2 = 0.0;
            for (const auto& [i, v] : r.sorted_entries()) {
                l1 += std::abs(v);
                l2 += v * v;
            }
            st.l1_residual_exact = l1;
            st.l2_residual_exact = std::sqrt(l2);
        }
        res.trace.push_back(st);
    };

    bool stochastic_dirty = false;  // any subsampling since last correction
    double prev_zbar_l1 = -1.0;
    int stall_count = 0;

    while (!queue.empty()) {
        ++res.epochs;
        const std::size_t qlen = queue.size();
        for (std::size_t i = 0; i < qlen; ++i) {
            const int u = queue.front();
            queue.pop_front();
            in_queue[static_cast<std::size_t>(u)] = 0;
            if (std::abs(z.get(u)) < g.degree(u) * eps_eff) continue;
            if (res.push_count >= push_cap) {
                if (opts.stop_at_cap) {
                    queue.clear();
                    break;
                }
                throw SolverError(
                    "push cap exceeded (" + std::to_string(push_cap) +
                    " pushes over " + std::to_string(res.epochs) + " epochs)");
            }
            stochastic_dirty |= push_sampled(g, x, z, u, eff, cfg, res.epochs,
                                             res.push_count, res.nodes_queried,
                                             enqueue);
            ++res.push_count;
        }
        record(false);

        // Dual correction. Skipped while every draw so far was degenerate
        // (nothing to debias; keeps q_bar >= d_max runs bit-identical to the
        // deterministic solver).
        if (res.epochs % static_cast<std::uint64_t>(opts.correction_period) == 0 &&
            stochastic_dirty && x.support_size() > 0) {
            const SparseVec zt = dual_correct(g, x, corr_cfg, params, res.epochs,
                                              res.corrections, &res.nodes_queried);
            ++res.corrections;
            for (const auto& [i, v] : x.sorted_entries()) x_bar.add(i, v);
            x.clear();
            for (const auto& [i, v] : zt.sorted_entries()) z_bar.add(i, -v);
            z = z_bar;
            stochastic_dirty = false;

            queue.clear();
            std::fill(in_queue.begin(), in_queue.end(), 0);
            for (const auto& [k, zk] : z.sorted_entries()) {
                if (std::abs(zk) >= g.degree(k) * eps_eff) {
                    queue.push_back(k);
                    in_queue[static_cast<std::size_t>(k)] = 1;
                }
            }
            record(true);

            const double l1 = z_bar.l1();
            if (prev_zbar_l1 >= 0.0 && std::abs(l1 - prev_zbar_l1) <= 1e-12) {
                if (++stall_count >= 2) {
                    res.stopped_by_safeguard = true;
                    break;
                }
            } else {
                stall_count = 0;
            }
            prev_zbar_l1 = l1;
        }
    }

    res.x = std::move(x_bar);
    for (const auto& [i, v] : x.sorted_entries()) res.x.add(i, v);
    res.z = std::move(z);
    return res;
}

}  // namespace appr
