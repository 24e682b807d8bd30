#pragma once

#include <map>
#include <vector>

#include "carleman/multiindex.hpp"
#include "carleman/numeric.hpp"

namespace carleman {

// Sparse polynomial in graded-lex key order; values are scalars of one ring.
template <class C>
using Poly = std::map<MultiIndex, C>;

namespace detail {

template <class C>
void poly_add_scaled(Poly<C>& dst, const Poly<C>& src, const C& factor) {
    for (const auto& [k, v] : src) {
        C& slot = dst[k];
        slot += factor * v;
        if (slot == C(0)) dst.erase(k);
    }
}

template <class C>
Poly<C> poly_mul(const Poly<C>& a, const Poly<C>& b, int order) {
    Poly<C> out;
    for (const auto& [ka, va] : a) {
        if (ka.degree() > order) continue;
        for (const auto& [kb, vb] : b) {
            if (ka.degree() + kb.degree() > order) continue;
            C prod = va * vb;
            if (prod == C(0)) continue;
            C& slot = out[ka + kb];
            slot += prod;
            if (slot == C(0)) out.erase(ka + kb);
        }
    }
    return out;
}

}  // namespace detail

// Truncated formal power series of a map from s-space to s'-space: a sparse
// coefficient table over multi-indices of total degree <= order.  Constant
// terms are only stored when has_constant is set.
template <class C>
class Series {
public:
    Series(int dim_in, int dim_out, int order, bool has_constant = false)
        : dim_in_(dim_in), dim_out_(dim_out), order_(order), has_constant_(has_constant) {
        if (dim_in < 1 || dim_out < 1) fail(ErrorCode::domain, "series dimensions must be positive");
        if (order < 1) fail(ErrorCode::domain, "series order must be >= 1");
        if (index_count(dim_in, order) > 1000000ull)
            fail(ErrorCode::domain, "truncation would exceed the 10^6-term guard");
    }

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    int order() const { return order_; }
    bool has_constant() const { return has_constant_; }

    const std::map<MultiIndex, std::vector<C>>& coeffs() const { return coeffs_; }

    std::vector<C> coeff(const MultiIndex& k) const {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) return std::vector<C>(dim_out_, C(0));
        return it->second;
    }
    C coeff(const MultiIndex& k, int i) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? C(0) : it->second.at(i);
    }

    void set_coeff(const MultiIndex& k, std::vector<C> v) {
        if (k.dim() != dim_in_) fail(ErrorCode::domain, "multi-index dimension mismatch");
        if (static_cast<int>(v.size()) != dim_out_) fail(ErrorCode::domain, "coefficient vector dimension mismatch");
        if (k.degree() > order_) return;
        if (k.is_zero() && !has_constant_)
            fail(ErrorCode::domain, "constant term on a series without one");
        bool all_zero = true;
        for (const C& c : v)
            if (!(c == C(0))) { all_zero = false; break; }
        if (all_zero)
            coeffs_.erase(k);
        else
            coeffs_[k] = std::move(v);
    }
    void set_coeff(const MultiIndex& k, int i, const C& c) {
        auto v = coeff(k);
        v[i] = c;
        set_coeff(k, std::move(v));
    }

    void add_coeff(const MultiIndex& k, int i, const C& c) { set_coeff(k, i, C(coeff(k, i) + c)); }

    Poly<C> component(int i) const {
        Poly<C> out;
        for (const auto& [k, v] : coeffs_)
            if (!(v[i] == C(0))) out[k] = v[i];
        return out;
    }
    void set_component(int i, const Poly<C>& p) {
        for (auto& [k, v] : coeffs_) v[i] = C(0);
        for (const auto& [k, c] : p) {
            if (k.degree() > order_) continue;
            add_coeff(k, i, c);
        }
        prune();
    }

    Series truncated(int order) const {
        Series out(dim_in_, dim_out_, order, has_constant_);
        for (const auto& [k, v] : coeffs_)
            if (k.degree() <= order) out.coeffs_[k] = v;
        return out;
    }

    // drop the constant term (the dot of T_a f)
    Series dotted() const {
        Series out(dim_in_, dim_out_, order_, false);
        for (const auto& [k, v] : coeffs_)
            if (!k.is_zero()) out.coeffs_[k] = v;
        return out;
    }

    int min_degree() const {
        int d = order_ + 1;
        for (const auto& [k, v] : coeffs_) d = std::min(d, k.degree());
        return d;
    }
    int max_degree() const {
        int d = 0;
        for (const auto& [k, v] : coeffs_) d = std::max(d, k.degree());
        return d;
    }

    bool linear_part_is_identity() const {
        if (dim_in_ != dim_out_) return false;
        for (int i = 0; i < dim_in_; ++i)
            for (int j = 0; j < dim_out_; ++j) {
                C c = coeff(MultiIndex::unit(dim_in_, i), j);
                if (!(c == (i == j ? C(1) : C(0)))) return false;
            }
        return true;
    }

    // substitute x -> lambda x: coefficient at k picks up lambda^{|k|}
    template <class S>
    Series scaled_vars(const S& lambda) const {
        Series out(dim_in_, dim_out_, order_, has_constant_);
        for (const auto& [k, v] : coeffs_) {
            std::vector<C> nv = v;
            S f(1);
            for (int d = 0; d < k.degree(); ++d) f *= lambda;
            for (C& c : nv) c *= C(f);
            out.coeffs_[k] = std::move(nv);
        }
        return out;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.dim_in_ == b.dim_in_ && a.dim_out_ == b.dim_out_ && a.coeffs_ == b.coeffs_;
    }

    static Series identity(int s, int order) {
        Series out(s, s, order, false);
        for (int i = 0; i < s; ++i) out.set_coeff(MultiIndex::unit(s, i), i, C(1));
        return out;
    }

    Series operator-(const Series& b) const {
        Series out(dim_in_, dim_out_, std::min(order_, b.order_), has_constant_ || b.has_constant_);
        for (const auto& [k, v] : coeffs_) {
            if (k.degree() > out.order_) continue;
            auto bv = b.coeff(k);
            std::vector<C> nv(dim_out_);
            for (int i = 0; i < dim_out_; ++i) nv[i] = v[i] - bv[i];
            out.set_coeff(k, std::move(nv));
        }
        for (const auto& [k, v] : b.coeffs_) {
            if (k.degree() > out.order_ || coeffs_.count(k)) continue;
            std::vector<C> nv(dim_out_);
            for (int i = 0; i < dim_out_; ++i) nv[i] = C(0) - v[i];
            out.set_coeff(k, std::move(nv));
        }
        return out;
    }

    bool is_zero() const { return coeffs_.empty(); }

private:
    void prune() {
        for (auto it = coeffs_.begin(); it != coeffs_.end();) {
            bool all_zero = true;
            for (const C& c : it->second)
                if (!(c == C(0))) { all_zero = false; break; }
            it = all_zero ? coeffs_.erase(it) : std::next(it);
        }
    }

    int dim_in_, dim_out_, order_;
    bool has_constant_;
    std::map<MultiIndex, std::vector<C>> coeffs_;
};

// Composition g(h(x)) truncated at `order`.  The coefficient of x^k collects
// g_l times the multinomial expansion of prod_j h_j^{l_j}, which enumerates
// exactly the ordered tuples k_1 + ... + k_r = k with r = |l| of the
// composition rule.  Exact over exact coefficient rings.
template <class C>
Series<C> compose(const Series<C>& g, const Series<C>& h, int order) {
    if (h.coeffs().count(MultiIndex::zero(h.dim_in())))
        fail(ErrorCode::domain, "inner series must have no constant term");
    if (h.dim_out() != g.dim_in()) fail(ErrorCode::domain, "composition dimension mismatch");

    Series<C> out(h.dim_in(), g.dim_out(), order, g.has_constant());
    const int s_mid = g.dim_in();

    // powers of the components of h, computed on demand
    std::vector<std::vector<Poly<C>>> pw(s_mid);
    for (int j = 0; j < s_mid; ++j) {
        pw[j].resize(1);
        pw[j][0] = Poly<C>{{MultiIndex::zero(h.dim_in()), C(1)}};
    }
    auto power_of = [&](int j, int p) -> const Poly<C>& {
        while (static_cast<int>(pw[j].size()) <= p) {
            Poly<C> comp = h.component(j);
            pw[j].push_back(detail::poly_mul(pw[j].back(), comp, order));
        }
        return pw[j][p];
    };

    for (const auto& [l, gl] : g.coeffs()) {
        if (l.degree() > order) continue;  // h has no constant: these terms vanish below `order`
        Poly<C> term{{MultiIndex::zero(h.dim_in()), C(1)}};
        for (int j = 0; j < s_mid; ++j)
            if (l[j] > 0) term = detail::poly_mul(term, power_of(j, l[j]), order);
        for (const auto& [k, c] : term) {
            for (int i = 0; i < g.dim_out(); ++i) {
                if (gl[i] == C(0)) continue;
                if (k.is_zero() && !out.has_constant()) continue;
                out.add_coeff(k, i, C(gl[i] * c));
            }
        }
    }
    return out;
}

// Inverse of g = id + ghat under composition: the unique rho = id + rhohat with
// g(rho(x)) = x up to `order`.  Same graded recursion as the linearization
// solve, with every divisor equal to 1.
template <class C>
Series<C> inverse_series(const Series<C>& g, int order) {
    if (g.dim_in() != g.dim_out()) fail(ErrorCode::domain, "inverse needs equal dimensions");
    if (g.has_constant()) fail(ErrorCode::domain, "inverse needs a fixed point at the origin");
    if (!g.linear_part_is_identity())
        fail(ErrorCode::domain, "inverse recursion needs identity linear part; conjugate first");
    const int s = g.dim_in();
    Series<C> ghat = g - Series<C>::identity(s, g.order());
    Series<C> rho = Series<C>::identity(s, order);
    for (int d = 2; d <= order; ++d) {
        Series<C> c = compose(ghat, rho, d);
        for (const auto& k : indices_of_degree(s, d))
            for (int i = 0; i < s; ++i) {
                C v = c.coeff(k, i);
                if (!(v == C(0))) rho.set_coeff(k, i, C(C(0) - v));
            }
    }
    Series<C> check = compose(g, rho, order);
    if (!(check == Series<C>::identity(s, order)))
        fail(ErrorCode::internal, "inverse series failed its composition check");
    return rho;
}

template <class C>
Series<C> to_complex_series(const Series<C>& s) { return s; }

inline Series<CRat> to_complex_series(const Series<Rat>& s) {
    Series<CRat> out(s.dim_in(), s.dim_out(), s.order(), s.has_constant());
    for (const auto& [k, v] : s.coeffs()) {
        std::vector<CRat> nv(v.size());
        for (size_t i = 0; i < v.size(); ++i) nv[i] = CRat(v[i]);
        out.set_coeff(k, std::move(nv));
    }
    return out;
}

inline Series<Real> to_real_series(const Series<Rat>& s) {
    Series<Real> out(s.dim_in(), s.dim_out(), s.order(), s.has_constant());
    for (const auto& [k, v] : s.coeffs()) {
        std::vector<Real> nv(v.size());
        for (size_t i = 0; i < v.size(); ++i) nv[i] = to_real(v[i]);
        out.set_coeff(k, std::move(nv));
    }
    return out;
}

inline Series<CReal> to_creal_series(const Series<CRat>& s) {
    Series<CReal> out(s.dim_in(), s.dim_out(), s.order(), s.has_constant());
    for (const auto& [k, v] : s.coeffs()) {
        std::vector<CReal> nv(v.size());
        for (size_t i = 0; i < v.size(); ++i) nv[i] = to_creal(v[i]);
        out.set_coeff(k, std::move(nv));
    }
    return out;
}

}  // namespace carleman
