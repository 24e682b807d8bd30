#pragma once

#include <optional>

#include "carleman/properties.hpp"
#include "carleman/series.hpp"

namespace carleman {

namespace detail {
inline Rat abs_coeff(const Rat& q) { return q < 0 ? Rat(-q) : q; }
inline Real abs_coeff(const Real& x) {
    using std::abs;
    return abs(x);
}
}  // namespace detail

// Weighted majorant series Mdot^m f: entry at k is |f_k| / m_{|k|}, constant
// term dropped.  Exact for rational input.
template <class S>
Series<S> majorant(const Series<S>& f, const Weight<S>& m) {
    if (m.horizon() < f.order()) fail(ErrorCode::domain, "weight horizon below series order");
    Series<S> out(f.dim_in(), f.dim_out(), f.order(), false);
    for (const auto& [k, v] : f.coeffs()) {
        if (k.is_zero()) continue;
        std::vector<S> nv(v.size());
        for (size_t i = 0; i < v.size(); ++i) nv[i] = detail::abs_coeff(v[i]) / m.m(k.degree());
        out.set_coeff(k, std::move(nv));
    }
    return out;
}

inline Series<Real> majorant(const Series<CReal>& f, const Weight<Real>& m) {
    if (m.horizon() < f.order()) fail(ErrorCode::domain, "weight horizon below series order");
    Series<Real> out(f.dim_in(), f.dim_out(), f.order(), false);
    for (const auto& [k, v] : f.coeffs()) {
        if (k.is_zero()) continue;
        std::vector<Real> nv(v.size());
        for (size_t i = 0; i < v.size(); ++i) nv[i] = mag_of<CReal>::norm(v[i]) / m.m(k.degree());
        out.set_coeff(k, std::move(nv));
    }
    return out;
}

// A complex-rational series with exactly real entries, if it is one.
inline std::optional<Series<Rat>> series_real_part(const Series<CRat>& f) {
    Series<Rat> out(f.dim_in(), f.dim_out(), f.order(), f.has_constant());
    for (const auto& [k, v] : f.coeffs()) {
        std::vector<Rat> nv(v.size());
        for (size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_real()) return std::nullopt;
            nv[i] = v[i].re;
        }
        out.set_coeff(k, std::move(nv));
    }
    return out;
}

// Anisotropic 2-block weight for flows: the index (a, b) carries weight
// mt_a * mx_b, with the empty index weighing 1.
template <class S>
S product_weight_at(const Weight<S>& m_time, const Weight<S>& m_space, const MultiIndex& k) {
    S w(1);
    if (k[0] > 0) w *= m_time.m(k[0]);
    if (k[1] > 0) w *= m_space.m(k[1]);
    return w;
}

template <class S>
Series<S> majorant_time_space(const Series<S>& f, const Weight<S>& m_time, const Weight<S>& m_space,
                              bool keep_constant) {
    if (f.dim_in() != 2 || f.dim_out() != 1)
        fail(ErrorCode::domain, "time-space majorant expects a scalar series in (t, x)");
    if (m_time.horizon() < f.order() || m_space.horizon() < f.order())
        fail(ErrorCode::domain, "weight horizon below series order");
    Series<S> out(2, 1, f.order(), keep_constant);
    for (const auto& [k, v] : f.coeffs()) {
        if (k.is_zero() && !keep_constant) continue;
        out.set_coeff(k, 0, S(detail::abs_coeff(v[0]) / product_weight_at(m_time, m_space, k)));
    }
    return out;
}

// Seminorm ||f||^m_{a,r} = sum_{k != 0} |f_k| / m_{|k|} r^{|k|}, maximised over
// the output components; evaluated on the truncation.
template <class C, class S>
S seminorm(const Series<C>& f, const Weight<S>& m, const S& radius) {
    Series<S> maj = majorant(f, m);
    S best(0);
    for (int i = 0; i < f.dim_out(); ++i) {
        S acc(0);
        for (const auto& [k, v] : maj.coeffs()) {
            S term = v[i];
            for (int d = 0; d < k.degree(); ++d) term *= radius;
            acc += term;
        }
        if (acc > best) best = acc;
    }
    return best;
}

// ---------------------------------------------------------------------------

struct MainLemmaReport {
    bool hypothesis_holds = false;
    std::optional<Witness> hypothesis_witness;  // (k, r, parts...)
    bool conclusion_holds = false;
    std::optional<MultiIndex> violation_index;
    int violation_component = -1;
    std::string lhs, rhs;
    bool equality_everywhere = false;
    int order = 0;
};

// Hypothesis of the composition Main Lemma: w_r m_{k_1} ... m_{k_r} <= lambda^k m_k
// for every r >= 1 and every tuple with k_1 + ... + k_r = k <= order.
template <class S>
bool weights_satisfy_composition_hypothesis(const Weight<S>& w, const Weight<S>& m, const Rat& lambda,
                                            int order, std::optional<Witness>* witness = nullptr) {
    if (w.horizon() < order || m.horizon() < order)
        fail(ErrorCode::domain, "weight horizon below requested order");
    S lam = scalar_from_rat<S>(lambda);
    PartitionMaxByCount<S> dp(m);
    for (int k = 1; k <= order; ++k) {
        S rhs = detail::pow_scalar(lam, k) * m.m(k);
        for (int r = 1; r <= k; ++r) {
            S lhs = w.m(r) * dp.best[k][r];
            if (!leq(lhs, rhs)) {
                if (witness) {
                    auto parts = dp.parts(k, r);
                    std::vector<int> idx{k, r};
                    idx.insert(idx.end(), parts.begin(), parts.end());
                    *witness = Witness{idx, scalar_to_string(lhs), scalar_to_string(rhs)};
                }
                return false;
            }
        }
    }
    return true;
}

// Mdot^m(g o h) <= Mdot^w g o Mdot^m h o lambda, checked coefficientwise up to
// `order`; the trailing "o lambda" substitutes lambda x into the inner
// majorant.
template <class C, class S>
MainLemmaReport main_lemma_check(const Series<C>& g, const Series<C>& h, const Weight<S>& w,
                                 const Weight<S>& m, const Rat& lambda, int order) {
    MainLemmaReport rep;
    rep.order = order;
    if (g.min_degree() < 1 || h.min_degree() < 1 || g.has_constant() || h.has_constant())
        fail(ErrorCode::domain, "main lemma needs series without constant terms");
    std::optional<Witness> hw;
    rep.hypothesis_holds = weights_satisfy_composition_hypothesis(w, m, lambda, order, &hw);
    rep.hypothesis_witness = hw;
    if (!rep.hypothesis_holds) return rep;

    Series<S> lhs = majorant(compose(g, h, order), m);
    Series<S> rhs = compose(majorant(g, w), majorant(h, m).scaled_vars(scalar_from_rat<S>(lambda)), order);

    rep.conclusion_holds = true;
    rep.equality_everywhere = true;
    for (const auto& k : indices_up_to(h.dim_in(), 1, order)) {
        for (int i = 0; i < g.dim_out(); ++i) {
            S a = lhs.coeff(k, i);
            S b = rhs.coeff(k, i);
            if (!(a == b)) rep.equality_everywhere = false;
            if (!leq(a, b)) {
                rep.conclusion_holds = false;
                rep.violation_index = k;
                rep.violation_component = i;
                rep.lhs = scalar_to_string(a);
                rep.rhs = scalar_to_string(b);
                return rep;
            }
        }
    }
    return rep;
}

struct SeminormBoundReport {
    bool hypothesis_holds = false;
    std::optional<Witness> hypothesis_witness;
    bool holds = false;
    std::string lhs;          // ||g o h||^m_{a,r}
    std::string rho;          // ||h||^m_{a,lambda r}
    std::string rhs;          // ||g||^w_{h(a),rho}
};

// ||g o h||^m_{a,r} <= ||g||^w_{h(a),rho} with rho = ||h||^m_{a,lambda r}.
// g is given by its coefficients at h(a), h by its coefficients at a.
template <class C, class S>
SeminormBoundReport composition_seminorm_bound(const Series<C>& g, const Series<C>& h, const Weight<S>& w,
                                               const Weight<S>& m, const Rat& lambda, const S& radius) {
    SeminormBoundReport rep;
    const int order = std::min(g.order(), h.order());
    std::optional<Witness> hw;
    rep.hypothesis_holds = weights_satisfy_composition_hypothesis(w, m, lambda, order, &hw);
    rep.hypothesis_witness = hw;
    if (!rep.hypothesis_holds) return rep;

    Series<C> hd = h.dotted();
    Series<C> gd = g.dotted();
    S rho = seminorm(hd, m, S(scalar_from_rat<S>(lambda) * radius));
    S lhs = seminorm(compose(gd, hd, order), m, radius);
    S rhs = seminorm(gd, w, rho);
    rep.rho = scalar_to_string(rho);
    rep.lhs = scalar_to_string(lhs);
    rep.rhs = scalar_to_string(rhs);
    rep.holds = leq(lhs, rhs);
    return rep;
}

// ---------------------------------------------------------------------------
// Flow of a 1-space-dimensional time-dependent field: d/dt phi = v(t, phi),
// phi(0, x) = x, solved degree by degree in t; the comparison series g runs
// the same recursion on the weighted majorant of v, and Mdot phi <= T g.

template <class S>
Series<S> flow_series(const Series<S>& v, int order) {
    if (v.dim_in() != 2 || v.dim_out() != 1)
        fail(ErrorCode::domain, "flow expects a scalar field in (t, x); s = 1 space dimension only");
    Series<S> phi(2, 1, order, false);
    phi.set_coeff(MultiIndex({0, 1}), 0, S(1));  // phi(0, x) = x
    for (int n = 0; n + 1 <= order; ++n) {
        Series<S> H(2, 2, order, false);
        H.set_coeff(MultiIndex({1, 0}), 0, S(1));  // first slot carries t itself
        H.set_component(1, phi.component(0));
        Series<S> rhs = compose(v, H, order);
        for (int b = 0; n + 1 + b <= order; ++b) {
            S c = rhs.coeff(MultiIndex({n, b}), 0);
            if (!(c == S(0))) phi.set_coeff(MultiIndex({n + 1, b}), 0, S(c / S(n + 1)));
        }
    }
    return phi;
}

struct FlowMajorantReport {
    bool holds = false;
    bool equality_everywhere = false;
    std::optional<MultiIndex> violation_index;
    std::string lhs, rhs;
    int order = 0;
};

template <class S>
struct FlowCheckData {
    Series<S> phi;        // flow coefficients
    Series<S> comparison; // majorant-side comparison series g
    FlowMajorantReport report;
};

template <class S>
FlowCheckData<S> flow_majorant_check(const Series<S>& v, const Weight<S>& m_time,
                                     const Weight<S>& m_space, int order) {
    Series<S> phi = flow_series(v, order);
    Series<S> mv = majorant_time_space(v, m_time, m_space, /*keep_constant=*/true);
    Series<S> g = flow_series(mv, order);

    FlowMajorantReport rep;
    rep.order = order;
    rep.holds = true;
    rep.equality_everywhere = true;
    for (const auto& k : indices_up_to(2, 1, order)) {
        S lhs = detail::abs_coeff(phi.coeff(k, 0)) / product_weight_at(m_time, m_space, k);
        S rhs = g.coeff(k, 0);
        if (!(lhs == rhs)) rep.equality_everywhere = false;
        if (!leq(lhs, rhs)) {
            rep.holds = false;
            rep.violation_index = k;
            rep.lhs = scalar_to_string(lhs);
            rep.rhs = scalar_to_string(rhs);
            break;
        }
    }
    return FlowCheckData<S>{std::move(phi), std::move(g), std::move(rep)};
}

}  // namespace carleman
