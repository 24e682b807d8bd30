#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "carleman/majorant.hpp"
#include "carleman/series.hpp"
#include "carleman/weight.hpp"

namespace carleman {

template <class C>
struct scalar_of;
template <>
struct scalar_of<CRat> {
    using type = Rat;
};
template <>
struct scalar_of<CReal> {
    using type = Real;
};

// Semi-simple diagonal linear part, given by its eigenvalue tuple.
template <class C>
class LinearPart {
public:
    using Mag = typename mag_of<C>::type;

    explicit LinearPart(std::vector<C> eigenvalues) : eigen_(std::move(eigenvalues)) {
        if (eigen_.empty()) fail(ErrorCode::domain, "empty eigenvalue tuple");
        for (const C& l : eigen_)
            if (l.is_zero()) fail(ErrorCode::domain, "zero eigenvalue");
        eta_ = mag_of<C>::norm(eigen_[0] / eigen_[0]);  // = 1
        for (size_t i = 0; i < eigen_.size(); ++i)
            for (size_t j = 0; j < eigen_.size(); ++j) {
                Mag r = mag_of<C>::norm(eigen_[i] / eigen_[j]);
                if (mag_lt(eta_, r)) eta_ = r;
            }
    }

    int dim() const { return static_cast<int>(eigen_.size()); }
    const C& lambda(int i) const { return eigen_.at(i); }
    const std::vector<C>& eigenvalues() const { return eigen_; }

    C lambda_pow(const MultiIndex& k) const {
        C r{typename scalar_of<C>::type(1)};
        for (int i = 0; i < dim(); ++i)
            for (int e = 0; e < k[i]; ++e) r *= eigen_[i];
        return r;
    }

    // eta = 4 max_{i,j} |lambda_i / lambda_j| >= 4
    Mag eta() const {
        if constexpr (std::is_same_v<Mag, SqrtRat>)
            return eta_.scaled(Rat(4));
        else
            return Mag(eta_ * 4);
    }

    Series<C> as_series(int order) const {
        Series<C> out(dim(), dim(), order, false);
        for (int i = 0; i < dim(); ++i) out.set_coeff(MultiIndex::unit(dim(), i), i, eigen_[i]);
        return out;
    }

private:
    std::vector<C> eigen_;
    Mag eta_;
};

template <class C>
struct ResonanceReport {
    using Mag = typename mag_of<C>::type;
    bool resonant = false;
    bool numerically_resonant = false;  // float mode: a divisor fell below tolerance
    std::optional<std::pair<MultiIndex, int>> witness;  // (k, i) with lambda^k = lambda_i
    std::map<MultiIndex, Mag> E;  // E_k = max_i |lambda^k - lambda_i|^{-1}, 2 <= |k| <= Q
    std::vector<Mag> omega;       // omega[q - 2] = Omega(q), q = 2..Q
    int Q = 0;

    const Mag& Omega(int q) const {
        if (q < 2 || q - 2 >= static_cast<int>(omega.size()))
            fail(ErrorCode::domain, "Omega(q) outside the tabulated range");
        return omega[q - 2];
    }
};

// Exhaustive nonresonance scan over 2 <= |k| <= Q: exact zero test for exact
// eigenvalues, |.| < 1e-30 flags "numerically resonant" otherwise.
template <class C>
ResonanceReport<C> check_nonresonance(const LinearPart<C>& L, int Q) {
    using Mag = typename mag_of<C>::type;
    if (Q < 2) fail(ErrorCode::domain, "nonresonance scan needs Q >= 2");
    ResonanceReport<C> rep;
    rep.Q = Q;
    std::optional<Mag> omega_running;
    for (int q = 2; q <= Q; ++q) {
        for (const auto& k : indices_of_degree(L.dim(), q)) {
            C pk = L.lambda_pow(k);
            std::optional<Mag> ek;
            for (int i = 0; i < L.dim(); ++i) {
                C diff = pk - L.lambda(i);
                if constexpr (std::is_same_v<C, CRat>) {
                    if (diff.is_zero()) {
                        rep.resonant = true;
                        if (!rep.witness) rep.witness = {k, i};
                        continue;
                    }
                } else {
                    if (mag_of<C>::norm(diff) < real_tol()) {
                        rep.resonant = true;
                        rep.numerically_resonant = true;
                        if (!rep.witness) rep.witness = {k, i};
                        continue;
                    }
                }
                Mag e = [&] {
                    if constexpr (std::is_same_v<C, CRat>)
                        return SqrtRat::norm_of(diff).reciprocal();
                    else
                        return Mag(Real(1) / mag_of<C>::norm(diff));
                }();
                if (!ek || mag_lt(*ek, e)) ek = e;
            }
            if (ek) {
                rep.E.emplace(k, *ek);
                if (!omega_running || mag_lt(*omega_running, *ek)) omega_running = *ek;
            }
        }
        rep.omega.push_back(omega_running ? *omega_running : mag_of<C>::one());
    }
    return rep;
}

// Formal solution of g o phi = phi o Lambda for g = Lambda + ghat: phi = id +
// phihat with (lambda^k - lambda_i) phi_{k,i} = [ghat o phi]_{k,i}, solved
// degree by degree.  The conjugacy identity is re-verified before returning.
template <class C>
Series<C> formal_linearize(const LinearPart<C>& L, const Series<C>& ghat, int order) {
    const int s = L.dim();
    if (ghat.dim_in() != s || ghat.dim_out() != s) fail(ErrorCode::domain, "map dimension mismatch");
    if (ghat.has_constant() || ghat.min_degree() < 2)
        fail(ErrorCode::domain, "ghat must contain only terms of degree >= 2");

    auto res = check_nonresonance(L, order);
    if (res.resonant) {
        auto [k, i] = *res.witness;
        fail(ErrorCode::resonance, "resonance lambda^" + k.str() + " = lambda_" + std::to_string(i + 1) +
                                       (res.numerically_resonant ? " (numerically)" : ""));
    }

    Series<C> phi = Series<C>::identity(s, order);
    Series<C> ghat_phi(s, s, order);
    for (int d = 2; d <= order; ++d) {
        // degrees <= d of ghat o phi only involve phi below degree d, so the
        // last pass leaves the complete composition behind
        ghat_phi = compose(ghat, phi, d == order ? order : d);
        for (const auto& k : indices_of_degree(s, d)) {
            C pk = L.lambda_pow(k);
            for (int i = 0; i < s; ++i) {
                C num = ghat_phi.coeff(k, i);
                if (num == C(typename scalar_of<C>::type(0))) continue;
                phi.set_coeff(k, i, C(num / (pk - L.lambda(i))));
            }
        }
    }

    // conjugacy re-check: (Lambda + ghat) o phi = phi o Lambda is, coefficient
    // by coefficient, lambda_i phi_{k,i} + [ghat o phi]_{k,i} = lambda^k phi_{k,i}
    for (const auto& k : indices_up_to(s, 1, order)) {
        C pk = L.lambda_pow(k);
        for (int i = 0; i < s; ++i) {
            C residual = L.lambda(i) * phi.coeff(k, i) + ghat_phi.coeff(k, i) - pk * phi.coeff(k, i);
            if constexpr (std::is_same_v<C, CRat>) {
                if (!residual.is_zero()) fail(ErrorCode::internal, "conjugacy residual is nonzero");
            } else {
                if (!(mag_of<C>::norm(residual) < real_tol()))
                    fail(ErrorCode::internal, "conjugacy residual above tolerance");
            }
        }
    }
    return phi;
}

// ---------------------------------------------------------------------------
// Siegel / Bruno accumulation: sigma_n counts the recursion mass, Delta_k the
// worst product of divisor reciprocals over decomposition trees.

inline std::vector<Int> sigma_sequence(int n_max) {
    // sigma_1 = 1, sigma_n = sum_{r>=2} sum_{n_1+...+n_r=n} sigma_{n_1}...sigma_{n_r};
    // with T_n the same sum over r >= 1, T_n = 2 sigma_n for n >= 2.
    std::vector<Int> sigma(n_max + 1, Int(0)), T(n_max + 1, Int(0));
    if (n_max >= 1) sigma[1] = T[1] = 1;
    for (int n = 2; n <= n_max; ++n) {
        Int acc(0);
        for (int j = 1; j < n; ++j) acc += sigma[j] * T[n - j];
        sigma[n] = acc;
        T[n] = 2 * acc;
    }
    return sigma;
}

template <class C>
struct AccumulationLedger {
    using Mag = typename mag_of<C>::type;
    int order = 0;
    std::vector<Int> sigma;                              // sigma[n], 1 <= n <= max(order, 12)
    std::map<MultiIndex, Mag> delta;                     // Delta_k, 1 <= |k| <= order
    std::map<MultiIndex, std::vector<MultiIndex>> tree;  // argmax decomposition per k, |k| >= 2
    ResonanceReport<C> resonance;

    const Mag& Delta(const MultiIndex& k) const {
        auto it = delta.find(k);
        if (it == delta.end()) fail(ErrorCode::domain, "Delta not tabulated at " + k.str());
        return it->second;
    }

    // factors E_{l_0} E_{l_1} ... of the recorded tree: the indices of degree
    // >= 2 reached by recursively expanding the argmax decompositions
    std::vector<MultiIndex> flattened_factors(const MultiIndex& k) const {
        std::vector<MultiIndex> out;
        flatten_into(k, out);
        return out;
    }

    void flatten_into(const MultiIndex& k, std::vector<MultiIndex>& out) const {
        if (k.degree() < 2) return;
        out.push_back(k);
        for (const auto& p : tree.at(k)) flatten_into(p, out);
    }
};

namespace detail {

// Enumerate canonical decompositions of k into >= 2 nonzero parts, parts
// nonincreasing in graded-lex order, emitting tuples in ascending tuple order
// so that first-strict-max tie-breaking selects the graded-lex smallest
// argmax.
template <class Mag, class F>
void enum_decompositions(const MultiIndex& rem, const MultiIndex& bound,
                         const std::vector<MultiIndex>& candidates,
                         const std::map<MultiIndex, Mag>& delta, std::vector<MultiIndex>& parts,
                         const Mag& prod, const F& emit) {
    if (rem.is_zero()) {
        if (parts.size() >= 2) emit(parts, prod);
        return;
    }
    for (const auto& p : candidates) {
        if (bound < p) break;  // parts must not exceed the previous one
        if (!leq_componentwise(p, rem)) continue;
        if (parts.empty() && p == rem) continue;  // r >= 2: first part must be proper
        parts.push_back(p);
        enum_decompositions(rem - p, p, candidates, delta, parts, Mag(prod * delta.at(p)), emit);
        parts.pop_back();
    }
}

}  // namespace detail

// Build sigma, Delta, and one argmax decomposition tree per index.  Ties are
// broken toward the graded-lex smallest part tuple.
template <class C>
AccumulationLedger<C> accumulation_ledger(const LinearPart<C>& L, int order) {
    using Mag = typename mag_of<C>::type;
    AccumulationLedger<C> led;
    led.order = order;
    led.sigma = sigma_sequence(std::max(order, 12));
    led.resonance = check_nonresonance(L, std::max(order, 2));
    if (led.resonance.resonant) {
        auto [k, i] = *led.resonance.witness;
        fail(ErrorCode::resonance,
             "resonance lambda^" + k.str() + " = lambda_" + std::to_string(i + 1));
    }

    const int s = L.dim();
    for (const auto& e : indices_of_degree(s, 1)) led.delta.emplace(e, mag_of<C>::one());

    std::vector<MultiIndex> candidates = indices_up_to(s, 1, order - 1);
    for (int d = 2; d <= order; ++d) {
        for (const auto& k : indices_of_degree(s, d)) {
            std::optional<Mag> best;
            std::vector<MultiIndex> best_parts;
            std::vector<MultiIndex> parts;
            detail::enum_decompositions<Mag>(
                k, k, candidates, led.delta, parts, mag_of<C>::one(),
                [&](const std::vector<MultiIndex>& tuple, const Mag& prod) {
                    if (!best || mag_lt(*best, prod)) {
                        best = prod;
                        best_parts = tuple;
                    }
                });
            if (!best) fail(ErrorCode::internal, "no decomposition found for " + k.str());
            led.delta.emplace(k, Mag(led.resonance.E.at(k) * *best));
            led.tree.emplace(k, std::move(best_parts));
        }
    }
    return led;
}

struct CountingReport {
    int n = 0;
    MultiIndex k;
    int count = 0;          // N_n(k): tree factors exceeding eta Omega(n)
    Rat bound;              // max(0, 2|k|/n - 1)
    bool holds = false;
    int siegel_pairs = 0;   // comparable counted pairs checked for separation
    bool siegel_holds = false;
};

// Counting Lemma: N_n(k) <= 0 for |k| <= n and <= 2|k|/n - 1 otherwise; the
// Siegel separation step is re-verified on every comparable pair of counted
// factors: both E's above eta Omega(n) forces the indices at least n apart.
template <class C>
CountingReport counting_lemma_check(const AccumulationLedger<C>& led, const LinearPart<C>& L, int n,
                                    const MultiIndex& k) {
    using Mag = typename mag_of<C>::type;
    if (n < 2) fail(ErrorCode::domain, "counting lemma needs n >= 2");
    if (k.degree() < 2) fail(ErrorCode::domain, "counting lemma needs |k| >= 2");
    if (n > led.resonance.Q) fail(ErrorCode::domain, "Omega(n) not tabulated");

    CountingReport rep;
    rep.n = n;
    rep.k = k;
    Mag threshold = Mag(L.eta() * led.resonance.Omega(n));

    std::vector<MultiIndex> counted;
    for (const auto& l : led.flattened_factors(k))
        if (mag_lt(threshold, led.resonance.E.at(l))) counted.push_back(l);
    rep.count = static_cast<int>(counted.size());
    rep.bound = k.degree() <= n ? Rat(0) : Rat(2 * k.degree(), n) - 1;
    rep.holds = Rat(rep.count) <= rep.bound;

    rep.siegel_holds = true;
    for (size_t a = 0; a < counted.size(); ++a)
        for (size_t b = 0; b < counted.size(); ++b) {
            if (a == b) continue;
            const MultiIndex &hi = counted[a], &lo = counted[b];
            if (hi == lo || !leq_componentwise(lo, hi)) continue;
            ++rep.siegel_pairs;
            if (hi.degree() - lo.degree() < n) rep.siegel_holds = false;
        }
    return rep;
}

// ---------------------------------------------------------------------------

template <class C>
struct SiegelBoundReport {
    bool holds = false;
    std::optional<MultiIndex> violation_index;
    int violation_component = -1;
    Rat map_scale{1};     // ghat was conjugated by this coordinate scaling
    Rat weight_scale{1};  // m was replaced by the equivalent weight (scale^n m_n)
    std::string lhs, rhs;
    int order = 0;
    std::optional<Series<C>> phi;  // linearization of the rescaled map
};

// |phi_k| / m_k <= sigma_{|k|} Delta_k for the linearization of the rescaled
// map.  The rescale enforces the normalization ||ghat||^m_{0,1} <= 1 (which
// implies |g_l| <= m_l termwise), and m_1 >= 1 so the |k| = 1 base case holds.
template <class C>
SiegelBoundReport<C> siegel_bound_check(const LinearPart<C>& L,
                                        const Weight<typename scalar_of<C>::type>& m_in,
                                        const Series<C>& ghat, int order,
                                        const AccumulationLedger<C>* ready_ledger = nullptr) {
    using S = typename scalar_of<C>::type;
    using Mag = typename mag_of<C>::type;
    SiegelBoundReport<C> rep;
    rep.order = order;
    if (m_in.horizon() < order) fail(ErrorCode::domain, "weight horizon below order");

    {
        CheckOptions opt;  // default grid
        auto sf = check_property(m_in, WeightProperty::strict_fdb, opt);
        if (!sf.holds) fail(ErrorCode::domain, "weight is not strictly FDB within the lambda grid");
    }

    // equivalent weight with m_1 >= 1
    Weight<S> m = m_in;
    if (m_in.m(1) < 1) {
        if constexpr (std::is_same_v<S, Rat>)
            rep.weight_scale = Rat(1) / m_in.m(1);
        else
            rep.weight_scale = Rat(2);  // any factor >= 1/m_1 works; cheap dyadic bound
        while (scalar_from_rat<S>(rep.weight_scale) * m_in.m(1) < 1) rep.weight_scale *= 2;
        std::vector<S> vals(m_in.horizon());
        S f(1);
        for (int n = 1; n <= m_in.horizon(); ++n) {
            f *= scalar_from_rat<S>(rep.weight_scale);
            vals[n - 1] = f * m_in.m(n);
        }
        m = Weight<S>(std::move(vals), m_in.generator());
    }

    // coordinate scaling x -> c x sends g_l to c^{|l|-1} g_l; c = 2^{-p} is
    // exact and leaves the eigenvalues untouched
    auto upper_mag = [](const C& z) -> S {
        if constexpr (std::is_same_v<C, CRat>)
            return detail::abs_coeff(z.re) + detail::abs_coeff(z.im);  // >= |z|
        else
            return mag_of<C>::norm(z);
    };
    Series<C> g = ghat;
    for (int p = 0;; ++p) {
        S worst(0);
        for (int i = 0; i < ghat.dim_out(); ++i) {
            S acc(0);
            for (const auto& [l, v] : g.coeffs()) acc += upper_mag(v[i]) / m.m(l.degree());
            if (acc > worst) worst = acc;
        }
        if (leq(worst, S(1))) break;
        if (p > 512) fail(ErrorCode::internal, "map rescale did not converge");
        rep.map_scale /= 2;
        Series<C> scaled(g.dim_in(), g.dim_out(), g.order(), false);
        for (const auto& [l, v] : ghat.coeffs()) {
            std::vector<C> nv = v;
            Rat f = pow_rat(rep.map_scale, l.degree() - 1);
            for (C& c : nv) c *= C(scalar_from_rat<S>(f));
            scaled.set_coeff(l, std::move(nv));
        }
        g = std::move(scaled);
    }

    Series<C> phi = formal_linearize(L, g, order);
    rep.phi = phi;
    AccumulationLedger<C> local;
    const AccumulationLedger<C>* led = ready_ledger;
    if (!led) {
        local = accumulation_ledger(L, order);
        led = &local;
    }

    rep.holds = true;
    for (const auto& [k, v] : phi.coeffs()) {
        const Mag& dk = led->Delta(k);
        S sm = scalar_from_rat<S>(Rat(led->sigma[k.degree()])) * m.m(k.degree());
        for (int i = 0; i < phi.dim_out(); ++i) {
            bool ok;
            if constexpr (std::is_same_v<C, CRat>)
                ok = v[i].norm_sq() <= sm * sm * dk.sq;
            else
                ok = leq(mag_of<C>::norm(v[i]), Real(sm * dk));
            if (!ok) {
                rep.holds = false;
                rep.violation_index = k;
                rep.violation_component = i;
                rep.lhs = scalar_to_string(mag_to_real(mag_of<C>::norm(v[i])));
                rep.rhs = scalar_to_string(Real(to_real(sm) * mag_to_real(dk)));
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace carleman
