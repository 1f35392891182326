#include "appr/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace appr {

std::vector<double> inclusion_probabilities(const std::vector<double>& pi, int q_bar) {
    const int n = static_cast<int>(pi.size());
    if (q_bar < 1) throw std::invalid_argument("q_bar must be >= 1");
    if (q_bar >= n) return std::vector<double>(n, 1.0);
    for (double x : pi)
        if (!(x > 0.0)) throw std::invalid_argument("selection weights must be > 0");

    std::vector<double> p(n, 0.0);
    std::vector<char> capped(n, 0);
    int q_rem = q_bar;
    double sum_rem = std::accumulate(pi.begin(), pi.end(), 0.0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (capped[i]) continue;
            if (static_cast<double>(q_rem) * pi[i] >= sum_rem) {
                capped[i] = 1;
                p[i] = 1.0;
                --q_rem;
                sum_rem -= pi[i];
                changed = true;
            }
        }
        if (q_rem == 0) break;
    }
    if (q_rem > 0) {
        for (int i = 0; i < n; ++i)
            if (!capped[i]) p[i] = static_cast<double>(q_rem) * pi[i] / sum_rem;
    }
    return p;
}

std::vector<int> systematic_sample(const std::vector<double>& incl, double u) {
    const int n = static_cast<int>(incl.size());
    int q = static_cast<int>(std::llround(std::accumulate(incl.begin(), incl.end(), 0.0)));
    std::vector<int> sel;
    sel.reserve(q);
    double cum = 0.0;
    double next = u;
    for (int i = 0; i < n && static_cast<int>(sel.size()) < q; ++i) {
        cum += incl[i];
        if (next < cum) {
            sel.push_back(i);
            next += 1.0;
        }
    }
    // rounding can leave the final pointer epsilon past the last cumsum
    for (int i = n - 1; static_cast<int>(sel.size()) < q && i >= 0; --i)
        if (std::find(sel.begin(), sel.end(), i) == sel.end()) sel.push_back(i);
    std::sort(sel.begin(), sel.end());
    return sel;
}

std::vector<int> uniform_subset(int n, int q_bar, KeyedRng& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < q_bar; ++k) {
        const int j = k + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - k)));
        std::swap(idx[k], idx[j]);
    }
    idx.resize(q_bar);
    std::sort(idx.begin(), idx.end());
    return idx;
}

SampleDraw draw_subset(std::span<const double> values,
                       std::span<const double> target_degrees,
                       const SamplerConfig& cfg, KeyedRng& rng) {
    const int n = static_cast<int>(values.size());
    if (cfg.q_bar < 1) throw std::invalid_argument("q_bar must be >= 1");
    SampleDraw d;
    if (n <= cfg.q_bar) {
        d.positions.resize(n);
        std::iota(d.positions.begin(), d.positions.end(), 0);
        d.probs.assign(n, 1.0);
        d.subsampled = false;
        return d;
    }
    d.subsampled = true;
    if (cfg.weighting == Weighting::Uniform) {
        d.positions = uniform_subset(n, cfg.q_bar, rng);
        d.probs.assign(d.positions.size(),
                       static_cast<double>(cfg.q_bar) / static_cast<double>(n));
        return d;
    }
    std::vector<double> pi(n);
    if (cfg.weighting == Weighting::EdgeWeighted) {
        for (int i = 0; i < n; ++i) pi[i] = std::abs(values[i]);
    } else {
        if (static_cast<int>(target_degrees.size()) != n)
            throw std::invalid_argument("DegreeWeighted sampling needs target degrees");
        for (int i = 0; i < n; ++i) pi[i] = target_degrees[i];
    }
    const auto incl = inclusion_probabilities(pi, cfg.q_bar);
    d.positions = systematic_sample(incl, rng.next_double());
    d.probs.reserve(d.positions.size());
    for (int i : d.positions) d.probs.push_back(incl[i]);
    return d;
}

SparseVec sampler(const SparseVec& w, const SamplerConfig& cfg, KeyedRng& rng,
                  const std::vector<double>* target_degrees) {
    const auto entries = w.sorted_entries();
    if (entries.empty()) throw std::invalid_argument("sampler: empty support");
    std::vector<double> values(entries.size());
    std::vector<double> degs;
    for (std::size_t i = 0; i < entries.size(); ++i) values[i] = entries[i].second;
    if (target_degrees) {
        degs.reserve(entries.size());
        for (const auto& [idx, v] : entries) degs.push_back((*target_degrees)[idx]);
    }
    const auto d = draw_subset(values, degs, cfg, rng);
    SparseVec out;
    for (std::size_t k = 0; k < d.positions.size(); ++k) {
        const auto& [idx, v] = entries[d.positions[k]];
        out.set(idx, v / d.probs[k]);
    }
    return out;
}

SparseVec sampler(const SparseVec& w, const SamplerConfig& cfg,
                  const std::vector<double>* target_degrees) {
    KeyedRng rng(cfg.rng_seed);
    return sampler(w, cfg, rng, target_degrees);
}

}  // namespace appr
