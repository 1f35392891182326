#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

namespace appr {

/// Sparse map node -> value. Zero-valued entries may exist transiently
/// (after signed corrections); support_size() and sorted_entries() skip them.
class SparseVec {
public:
    SparseVec() = default;

    double get(int i) const {
        auto it = m_.find(i);
        return it == m_.end() ? 0.0 : it->second;
    }

    void set(int i, double v) { m_[i] = v; }
    void add(int i, double v) { m_[i] += v; }
    void scale(int i, double c) {
        auto it = m_.find(i);
        if (it != m_.end()) it->second *= c;
    }

    bool contains(int i) const { return m_.count(i) != 0; }
    std::size_t stored_size() const { return m_.size(); }

    std::size_t support_size() const {
        std::size_t k = 0;
        for (const auto& [i, v] : m_)
            if (v != 0.0) ++k;
        return k;
    }

    double l1() const {
        // sum over sorted keys so the reduction order is deterministic
        double s = 0.0;
        for (const auto& [i, v] : sorted_entries()) s += std::abs(v);
        return s;
    }

    double linf() const {
        double s = 0.0;
        for (const auto& [i, v] : m_) s = std::max(s, std::abs(v));
        return s;
    }

    double min_value() const {
        double s = 0.0;
        bool first = true;
        for (const auto& [i, v] : m_) {
            if (first || v < s) s = v;
            first = false;
        }
        return s;
    }

    /// Nonzero entries sorted by index.
    std::vector<std::pair<int, double>> sorted_entries() const {
        std::vector<std::pair<int, double>> out;
        out.reserve(m_.size());
        for (const auto& [i, v] : m_)
            if (v != 0.0) out.emplace_back(i, v);
        std::sort(out.begin(), out.end());
        return out;
    }

    void clear() { m_.clear(); }

    auto begin() const { return m_.begin(); }
    auto end() const { return m_.end(); }

private:
    std::unordered_map<int, double> m_;
};

inline SparseVec unit_vec(int i) {
    SparseVec v;
    v.set(i, 1.0);
    return v;
}

}  // namespace appr
