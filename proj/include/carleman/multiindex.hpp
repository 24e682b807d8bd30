#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "carleman/numeric.hpp"

namespace carleman {

// Multi-index in {0,1,...}^s with cached total degree.  Ordering is
// graded-lexicographic: degree first, then the exponent tuple
// lexicographically with the first coordinate most significant.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
        for (int e : exps_) {
            if (e < 0) fail(ErrorCode::domain, "negative exponent in multi-index");
            deg_ += e;
        }
    }

    static MultiIndex zero(int s) { return MultiIndex(std::vector<int>(s, 0)); }
    static MultiIndex unit(int s, int i) {
        std::vector<int> e(s, 0);
        e.at(i) = 1;
        return MultiIndex(std::move(e));
    }

    int dim() const { return static_cast<int>(exps_.size()); }
    int degree() const { return deg_; }
    int operator[](int i) const { return exps_[i]; }
    const std::vector<int>& exponents() const { return exps_; }
    bool is_zero() const { return deg_ == 0; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.exps_ == b.exps_;
    }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        if (a.deg_ != b.deg_) return a.deg_ < b.deg_;
        return a.exps_ < b.exps_;
    }
    friend bool operator<=(const MultiIndex& a, const MultiIndex& b) { return a < b || a == b; }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        std::vector<int> e(a.exps_);
        for (size_t i = 0; i < e.size(); ++i) e[i] += b.exps_[i];
        return MultiIndex(std::move(e));
    }
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
        std::vector<int> e(a.exps_);
        for (size_t i = 0; i < e.size(); ++i) {
            e[i] -= b.exps_[i];
            if (e[i] < 0) fail(ErrorCode::internal, "multi-index subtraction went negative");
        }
        return MultiIndex(std::move(e));
    }

    // componentwise a_i <= b_i
    friend bool leq_componentwise(const MultiIndex& a, const MultiIndex& b) {
        for (int i = 0; i < a.dim(); ++i)
            if (a[i] > b[i]) return false;
        return true;
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dim(); ++i) {
            if (i) s += ",";
            s += std::to_string(exps_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> exps_;
    int deg_ = 0;
};

// Number of multi-indices in s variables with degree <= order.
inline std::uint64_t index_count(int s, int order) {
    // C(order + s, s), saturating
    std::uint64_t r = 1;
    for (int i = 1; i <= s; ++i) {
        r = r * static_cast<std::uint64_t>(order + i) / static_cast<std::uint64_t>(i);
        if (r > (1ull << 62)) return 1ull << 62;
    }
    return r;
}

namespace detail {
inline void indices_of_degree_rec(int s, int pos, int rem, std::vector<int>& cur,
                                  std::vector<MultiIndex>& out) {
    if (pos == s - 1) {
        cur[pos] = rem;
        out.emplace_back(cur);
        return;
    }
    // descending first coordinate keeps exponent tuples... we want ascending
    // lexicographic order: first coordinate from 0 up would put (0,d) before
    // (d,0); the comparator uses std::vector's lexicographic order, so emit
    // in that same order.
    for (int e = 0; e <= rem; ++e) {
        cur[pos] = e;
        indices_of_degree_rec(s, pos + 1, rem - e, cur, out);
    }
}
}  // namespace detail

inline std::vector<MultiIndex> indices_of_degree(int s, int d) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(s, 0);
    detail::indices_of_degree_rec(s, 0, d, cur, out);
    return out;
}

inline std::vector<MultiIndex> indices_up_to(int s, int min_deg, int max_deg) {
    std::vector<MultiIndex> out;
    for (int d = min_deg; d <= max_deg; ++d) {
        auto layer = indices_of_degree(s, d);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace carleman
