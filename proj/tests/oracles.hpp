#pragma once

// Independent brute-force oracles for the test suites.  These deliberately
// re-derive quantities by direct enumeration, not by the implementation's
// dynamic programs or closed recursions.

#include <functional>
#include <vector>

#include "carleman/linearize.hpp"
#include "carleman/weight.hpp"

namespace oracles {

using namespace carleman;

// sigma_n by direct enumeration of ordered compositions with r >= 2 parts.
inline std::vector<Int> sigma_by_enumeration(int n_max) {
    std::vector<Int> sigma(n_max + 1, Int(0));
    sigma[1] = 1;
    for (int n = 2; n <= n_max; ++n) {
        // walk all ordered compositions of n with parts >= 1
        Int total(0);
        std::function<void(int, int, Int)> walk = [&](int rem, int parts, Int prod) {
            if (rem == 0) {
                if (parts >= 2) total += prod;
                return;
            }
            for (int j = 1; j <= rem; ++j) walk(rem - j, parts + 1, Int(prod * sigma[j]));
        };
        walk(n, 0, Int(1));
        sigma[n] = total;
    }
    return sigma;
}

// Delta_k by recursive maximum over ALL ordered decompositions (no canonical
// ordering, no shared DP state with the implementation).
template <class Mag>
struct DeltaOracle {
    std::function<Mag(const MultiIndex&)> E;
    std::map<MultiIndex, Mag> memo;

    Mag delta(const MultiIndex& k) {
        if (k.degree() == 1) {
            if constexpr (std::is_same_v<Mag, SqrtRat>)
                return SqrtRat(Rat(1));
            else
                return Mag(1);
        }
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        std::optional<Mag> best;
        auto parts_pool = indices_up_to(k.dim(), 1, k.degree() - 1);
        std::function<void(const MultiIndex&, int, Mag)> walk = [&](const MultiIndex& rem, int parts,
                                                                    Mag prod) {
            if (rem.is_zero()) {
                if (parts >= 2 && (!best || mag_lt(*best, prod))) best = prod;
                return;
            }
            for (const auto& p : parts_pool) {
                if (!leq_componentwise(p, rem)) continue;
                if (parts == 0 && p == rem) continue;
                walk(rem - p, parts + 1, Mag(prod * delta(p)));
            }
        };
        Mag one = [&] {
            if constexpr (std::is_same_v<Mag, SqrtRat>)
                return SqrtRat(Rat(1));
            else
                return Mag(1);
        }();
        walk(k, 0, one);
        Mag result = Mag(E(k) * *best);
        memo.emplace(k, result);
        return result;
    }
};

// all partitions of n (nonincreasing part lists), for predicate cross-checks
inline void partitions_of(int n, int max_part, std::vector<int>& cur,
                          const std::function<void(const std::vector<int>&)>& emit) {
    if (n == 0) {
        emit(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_of(n - p, p, cur, emit);
        cur.pop_back();
    }
}

// ASM / FDB maxima by direct enumeration over all partitions.
template <class S>
S asm_max_by_enumeration(const Weight<S>& w, int k) {
    std::optional<S> best;
    std::vector<int> cur;
    partitions_of(k, k, cur, [&](const std::vector<int>& parts) {
        S prod(1);
        for (int p : parts) prod *= w.m(p);
        if (!best || prod > *best) best = prod;
    });
    return *best;
}

template <class S>
S fdb_max_by_enumeration(const Weight<S>& w, int k, bool strict, const S& lambda) {
    // max over r and partitions of m_r prod m_{k_i} / lambda-budget; returns the
    // max of lhs/budget so callers compare against m_k
    std::optional<S> best;
    std::vector<int> cur;
    partitions_of(k, k, cur, [&](const std::vector<int>& parts) {
        S prod = w.m(static_cast<int>(parts.size()));
        for (int p : parts) prod *= w.m(p);
        S budget = strict ? carleman::detail::pow_scalar(lambda, static_cast<long>(parts.size()))
                          : carleman::detail::pow_scalar(lambda, k);
        S val = prod / budget;
        if (!best || val > *best) best = val;
    });
    return *best;
}

// lower convex hull value at n via the O(N^3) chord scan on (i, log M_i):
// the envelope at n is the minimum over all chords a <= n <= b.
inline Real chord_min_at(const std::vector<Real>& logM, int n) {
    using std::exp;
    const int N = static_cast<int>(logM.size());
    Real best = logM[n - 1];
    for (int a = 1; a <= n; ++a)
        for (int b = n; b <= N; ++b) {
            if (a == b) continue;
            Real t = Real(n - a) / Real(b - a);
            Real v = logM[a - 1] * (Real(1) - t) + logM[b - 1] * t;
            if (v < best) best = v;
        }
    return exp(best);
}

}  // namespace oracles
