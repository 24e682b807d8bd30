#pragma once

#include <map>
#include <string>
#include <vector>

#include "carleman/numeric.hpp"

namespace carleman {

struct Generator {
    std::string kind;  // "", "constant", "gevrey", "logpow", "custom-table",
                       // "asm-not-fdb", "fdb-not-log", "fdb-not-asm", "asm-not-diff"
    std::map<std::string, std::string> params;
};

// Weight sequence m = (m_1 .. m_N) with the derived sequences M_n = n! m_n and
// mu_n = M_n / M_{n-1} (mu_1 = M_1).  Immutable after construction.
template <class S>
class Weight {
public:
    Weight(std::vector<S> values, Generator gen = {}) : m_(std::move(values)), gen_(std::move(gen)) {
        if (m_.size() < 2) fail(ErrorCode::domain, "weight horizon must be >= 2");
        for (const S& v : m_)
            if (!(v > 0)) fail(ErrorCode::domain, "weight values must be positive");
        M_.resize(m_.size());
        mu_.resize(m_.size());
        for (size_t i = 0; i < m_.size(); ++i) {
            S fac = scalar_from_rat<S>(Rat(factorial(static_cast<unsigned>(i + 1))));
            M_[i] = fac * m_[i];
            mu_[i] = i == 0 ? M_[0] : S(M_[i] / M_[i - 1]);
        }
    }

    int horizon() const { return static_cast<int>(m_.size()); }
    const Generator& generator() const { return gen_; }

    // all accessors are 1-based, matching the sequence indexing
    const S& m(int n) const { return m_.at(n - 1); }
    const S& M(int n) const { return M_.at(n - 1); }
    const S& mu(int n) const { return mu_.at(n - 1); }
    const std::vector<S>& values() const { return m_; }

    // successive quotients alpha_n = m_n / m_{n-1}; alpha_1 = m_1
    S alpha(int n) const { return n == 1 ? m(1) : S(m(n) / m(n - 1)); }

    bool mu_increasing() const {
        for (int n = 2; n <= horizon(); ++n)
            if (!(mu_[n - 1] >= mu_[n - 2])) return false;
        return true;
    }

private:
    std::vector<S> m_;
    std::vector<S> M_;
    std::vector<S> mu_;
    Generator gen_;
};

inline Weight<Rat> constant_weight(int N) {
    return Weight<Rat>(std::vector<Rat>(N, Rat(1)), Generator{"constant", {}});
}

namespace detail {

inline bool rat_is_integer(const Rat& q) { return denominator(q) == 1; }

// Smallest dyadic rational >= x (rounded at 2^-24), then nudged up until the
// exact predicate `ok` accepts it.
template <class Pred>
inline Rat rat_upper_bound(const Real& x, Pred ok) {
    using std::ceil;
    Int num = ceil(x * Real(1 << 24)).convert_to<Int>();
    Rat r(num, Int(1) << 24);
    while (!ok(r)) r += Rat(1, 1 << 24);
    return r;
}

}  // namespace detail

// Gevrey weight m_n = n!^{s-1}; exact when s is an integer.
inline Weight<Rat> gevrey_weight_exact(int N, long s) {
    std::vector<Rat> v(N);
    for (int n = 1; n <= N; ++n) v[n - 1] = pow_rat(Rat(factorial(n)), s - 1);
    return Weight<Rat>(std::move(v), Generator{"gevrey", {{"s", std::to_string(s)}}});
}

inline Weight<Real> gevrey_weight(int N, const Real& s) {
    using std::pow;
    std::vector<Real> v(N);
    for (int n = 1; n <= N; ++n) v[n - 1] = pow(to_real(Rat(factorial(n))), s - 1);
    return Weight<Real>(std::move(v), Generator{"gevrey", {{"s", real_to_string(s)}}});
}

// m_n = log^{-n}(1+n): the strictly-FDB-but-not-ASM example weight.
inline Weight<Real> logpow_weight(int N) {
    using std::log;
    using std::pow;
    std::vector<Real> v(N);
    for (int n = 1; n <= N; ++n) v[n - 1] = pow(log(Real(1 + n)), Real(-n));
    return Weight<Real>(std::move(v), Generator{"logpow", {}});
}

// Weight from the mu sequence (M_n = mu_1 ... mu_n, m_n = M_n / n!).
template <class S>
inline Weight<S> weight_from_mu(const std::vector<S>& mu, Generator gen) {
    std::vector<S> m(mu.size());
    S M(1);
    for (size_t i = 0; i < mu.size(); ++i) {
        M *= mu[i];
        m[i] = M / scalar_from_rat<S>(Rat(factorial(static_cast<unsigned>(i + 1))));
    }
    return Weight<S>(std::move(m), std::move(gen));
}

// Weight from successive quotients alpha_n (m_n = alpha_1 ... alpha_n).
template <class S>
inline Weight<S> weight_from_alpha(const std::vector<S>& alpha, Generator gen) {
    std::vector<S> m(alpha.size());
    S acc(1);
    for (size_t i = 0; i < alpha.size(); ++i) {
        acc *= alpha[i];
        m[i] = acc;
    }
    return Weight<S>(std::move(m), std::move(gen));
}

// Log-convex weight with mu_n = 2^{n^2}; mu_n^{1/n} = 2^n is unbounded, so the
// weight is FDB and ASM but not diff-stable.
inline Weight<Rat> asm_not_diff_weight(int N) {
    std::vector<Rat> mu(N);
    for (int n = 1; n <= N; ++n)
        mu[n - 1] = Rat(pow_int(Int(2), static_cast<unsigned long>(n) * n));
    return weight_from_mu<Rat>(mu, Generator{"asm-not-diff", {}});
}

// Block-convex quotient sequence with a spike at the head of each dyadic
// block: alpha drops by the super-exponential factor H_nu = 2^{nu 2^nu} right
// after each spike, so no log-convex weight can be equivalent to it.
inline Weight<Rat> fdb_not_log_weight(int N) {
    std::vector<Rat> alpha(N, Rat(1));
    Rat base(1);
    for (int nu = 1; (1 << nu) < N; ++nu) {
        int lo = (1 << nu) + 1;              // first position of block nu
        int hi = std::min(N, 1 << (nu + 1)); // last position of block nu
        Rat spike = base * Rat(pow_int(Int(2), static_cast<unsigned long>(nu) << nu));
        if (lo <= N) alpha[lo - 1] = spike;
        for (int k = lo + 1; k <= hi; ++k) alpha[k - 1] = base;
        base = spike;  // next block's floor is this block's spike
    }
    return weight_from_alpha<Rat>(alpha, Generator{"fdb-not-log", {}});
}

// The inductive mu-block construction of an almost-increasing weight whose
// FDB defect grows along the blocks.  lambda is taken minimal, 8 m_nbar^{1/nbar},
// times `multiplier`; each real root is rounded up to an exact rational so the
// whole table stays rational and the defining inequalities hold exactly.
inline Weight<Rat> asm_not_fdb_weight(int N, const Rat& multiplier = Rat(1)) {
    if (N < 4) fail(ErrorCode::domain, "asm-not-fdb needs horizon >= 4");
    std::vector<Rat> mu;
    mu.reserve(N);
    mu.push_back(Rat(1));  // mu_1 = 1
    Rat M_nbar(1);         // M at the current nbar
    int nbar = 1;
    Rat m_nbar(1);
    while (static_cast<int>(mu.size()) < N) {
        // lambda >= 8 * m_nbar^{1/nbar} * multiplier, exactly
        Real approx = Real(8) * root_real(m_nbar, static_cast<unsigned>(nbar)) * to_real(multiplier);
        const Rat m_nbar_c = m_nbar;
        const int nbar_c = nbar;
        Rat lam = detail::rat_upper_bound(approx, [&](const Rat& r) {
            return pow_rat(r, nbar_c) >= pow_rat(Rat(8) * multiplier, nbar_c) * m_nbar_c;
        });
        // minimal n > nbar with M_n >= (lam n / 4)^n, where mu_k = lam k in between
        Rat M_n = M_nbar;
        int n = nbar;
        while (true) {
            ++n;
            M_n *= lam * n;
            if (M_n >= pow_rat(lam * Rat(n) / 4, n)) break;
            if (n > 64 * (nbar + 2) + 64)
                fail(ErrorCode::internal, "asm-not-fdb block search did not terminate");
        }
        for (int k = nbar + 1; k <= n && static_cast<int>(mu.size()) < N; ++k)
            mu.push_back(lam * k);
        if (static_cast<int>(mu.size()) >= N) break;
        // staircase block: mu_k = 2^6 ceil(k/n) B with B >= M_n^{1/n}
        Rat B = detail::rat_upper_bound(root_real(M_n, static_cast<unsigned>(n)),
                                        [&](const Rat& r) { return pow_rat(r, n) >= M_n; });
        Rat M_acc = M_n;
        for (int k = n + 1; k <= n * n && static_cast<int>(mu.size()) < N; ++k) {
            Rat v = Rat(64) * Rat((k + n - 1) / n) * B;
            mu.push_back(v);
            M_acc *= v;
        }
        nbar = n * n;
        M_nbar = M_acc;
        m_nbar = M_nbar / Rat(factorial(static_cast<unsigned>(std::min(nbar, N))));
        if (nbar >= N) break;
    }
    mu.resize(N);
    return weight_from_mu<Rat>(mu, Generator{"asm-not-fdb", {{"multiplier", rat_to_string(multiplier)}}});
}

inline Weight<Real> fdb_not_asm_weight(int N) {
    if (N < 2) fail(ErrorCode::domain, "fdb-not-asm needs horizon >= 2");
    auto w = logpow_weight(N);
    return Weight<Real>(w.values(), Generator{"fdb-not-asm", {}});
}

// --- elementary weight operations -----------------------------------------

template <class S>
inline Weight<S> left_shift(const Weight<S>& w) {
    if (w.horizon() < 3) fail(ErrorCode::domain, "left shift needs horizon >= 3");
    std::vector<S> v(w.values().begin() + 1, w.values().end());
    Generator g = w.generator();
    if (!g.kind.empty()) g.params["shifted"] = "1";
    return Weight<S>(std::move(v), std::move(g));
}

template <class S>
inline Weight<S> star_product(const Weight<S>& m, const Weight<S>& w) {
    if (m.horizon() != w.horizon()) fail(ErrorCode::domain, "star product needs equal horizons");
    std::vector<S> v(m.horizon());
    for (int n = 1; n <= m.horizon(); ++n) v[n - 1] = m.m(n) * w.m(n);
    return Weight<S>(std::move(v), Generator{"custom-table", {{"origin", "star"}}});
}

inline Weight<Real> to_real_weight(const Weight<Rat>& w) {
    std::vector<Real> v(w.horizon());
    for (int n = 1; n <= w.horizon(); ++n) v[n - 1] = to_real(w.m(n));
    return Weight<Real>(std::move(v), w.generator());
}

inline const Weight<Real>& to_real_weight(const Weight<Real>& w) { return w; }

}  // namespace carleman
