#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "carleman/weight.hpp"

namespace carleman {

enum class WeightProperty {
    log_convex,
    block_convex,
    strongly_submult,
    strict_fdb,
    fdb,
    asm_prop,
    almost_increasing,
    diff_stable,
    strongly_nonanalytic,
    analytic_type,
};

inline const char* property_name(WeightProperty p) {
    switch (p) {
        case WeightProperty::log_convex: return "log_convex";
        case WeightProperty::block_convex: return "block_convex";
        case WeightProperty::strongly_submult: return "strongly_submult";
        case WeightProperty::strict_fdb: return "strict_fdb";
        case WeightProperty::fdb: return "fdb";
        case WeightProperty::asm_prop: return "asm";
        case WeightProperty::almost_increasing: return "almost_increasing";
        case WeightProperty::diff_stable: return "diff_stable";
        case WeightProperty::strongly_nonanalytic: return "strongly_nonanalytic";
        case WeightProperty::analytic_type: return "analytic_type";
    }
    return "?";
}

inline std::optional<WeightProperty> property_from_name(const std::string& s) {
    for (auto p : {WeightProperty::log_convex, WeightProperty::block_convex,
                   WeightProperty::strongly_submult, WeightProperty::strict_fdb, WeightProperty::fdb,
                   WeightProperty::asm_prop, WeightProperty::almost_increasing,
                   WeightProperty::diff_stable, WeightProperty::strongly_nonanalytic,
                   WeightProperty::analytic_type})
        if (s == property_name(p)) return p;
    return std::nullopt;
}

inline bool property_takes_lambda(WeightProperty p) {
    switch (p) {
        case WeightProperty::asm_prop:
        case WeightProperty::fdb:
        case WeightProperty::strict_fdb:
        case WeightProperty::almost_increasing:
        case WeightProperty::strongly_submult: return true;
        default: return false;
    }
}

struct Witness {
    std::vector<int> indices;
    std::string lhs;
    std::string rhs;
};

struct PropertyReport {
    WeightProperty property{};
    bool holds = false;
    int horizon = 0;
    std::optional<std::string> lambda;
    std::optional<Witness> witness;
    std::optional<std::string> constant;
    std::string note;
};

inline std::vector<Rat> default_lambda_grid() { return {Rat(1), Rat(2), Rat(4), Rat(8), Rat(16)}; }

struct CheckOptions {
    std::optional<Rat> lambda;          // fixed lambda for parameterized predicates
    std::vector<Rat> grid = default_lambda_grid();  // searched when lambda is absent
};

// ---------------------------------------------------------------------------
// Max-product dynamic programs over integer partitions.  These compute the
// exact maxima of the tuple products appearing in the ASM / FDB inequalities,
// which is equivalent to enumerating every index tuple with k_1+...+k_r = k.

// best[k] = max over partitions of k into r >= 1 parts of prod m_{k_i}
template <class S>
struct PartitionMax {
    std::vector<S> best;   // 1-based: best[k]
    std::vector<int> cut;  // 0: the single part k; j: first part of an argmax

    explicit PartitionMax(const Weight<S>& w) {
        const int N = w.horizon();
        best.assign(N + 1, S(0));
        cut.assign(N + 1, 0);
        for (int k = 1; k <= N; ++k) {
            best[k] = w.m(k);
            cut[k] = 0;
            for (int j = 1; j < k; ++j) {
                S cand = w.m(j) * best[k - j];
                if (cand > best[k]) {
                    best[k] = cand;
                    cut[k] = j;
                }
            }
        }
    }

    std::vector<int> parts(int k) const {
        std::vector<int> out;
        while (cut[k] != 0) {
            out.push_back(cut[k]);
            k -= cut[k];
        }
        out.push_back(k);
        std::sort(out.begin(), out.end(), std::greater<int>());
        return out;
    }
};

// best[k][r] = max over partitions of k into exactly r parts of prod m_{k_i}
template <class S>
struct PartitionMaxByCount {
    std::vector<std::vector<S>> best;  // best[k][r], 1 <= r <= k <= N
    std::vector<std::vector<int>> cut;

    explicit PartitionMaxByCount(const Weight<S>& w) {
        const int N = w.horizon();
        best.assign(N + 1, {});
        cut.assign(N + 1, {});
        for (int k = 1; k <= N; ++k) {
            best[k].assign(k + 1, S(0));
            cut[k].assign(k + 1, 0);
            best[k][1] = w.m(k);
            cut[k][1] = k;
            for (int r = 2; r <= k; ++r) {
                for (int j = 1; j <= k - r + 1; ++j) {
                    S cand = w.m(j) * best[k - j][r - 1];
                    if (cut[k][r] == 0 || cand > best[k][r]) {
                        best[k][r] = cand;
                        cut[k][r] = j;
                    }
                }
            }
        }
    }

    std::vector<int> parts(int k, int r) const {
        std::vector<int> out;
        while (r > 0) {
            int j = cut[k][r];
            out.push_back(j);
            k -= j;
            --r;
        }
        std::sort(out.begin(), out.end(), std::greater<int>());
        return out;
    }
};

// ---------------------------------------------------------------------------

namespace detail {

template <class S>
PropertyReport check_log_convex(const Weight<S>& w) {
    PropertyReport rep{WeightProperty::log_convex, true, w.horizon()};
    for (int n = 2; n + 1 <= w.horizon(); ++n) {
        S lhs = w.m(n) * w.m(n);
        S rhs = w.m(n - 1) * w.m(n + 1);
        if (!leq(lhs, rhs)) {
            rep.holds = false;
            rep.witness = Witness{{n - 1, n, n + 1}, scalar_to_string(lhs), scalar_to_string(rhs)};
            return rep;
        }
    }
    return rep;
}

template <class S>
PropertyReport check_block_convex(const Weight<S>& w) {
    PropertyReport rep{WeightProperty::block_convex, true, w.horizon()};
    const int N = w.horizon();
    for (int nu = 0; (1 << nu) < N; ++nu) {
        const int c = 1 << nu;
        int arg_hi = 1;
        S hi = w.alpha(1);
        for (int n = 2; n <= c && n <= N; ++n)
            if (S a = w.alpha(n); a > hi) { hi = a; arg_hi = n; }
        int arg_lo = c + 1;
        S lo = w.alpha(c + 1);
        for (int n = c + 2; n <= N; ++n)
            if (S a = w.alpha(n); a < lo) { lo = a; arg_lo = n; }
        if (!leq(hi, lo)) {
            rep.holds = false;
            rep.witness = Witness{{arg_hi, arg_lo}, scalar_to_string(hi), scalar_to_string(lo)};
            rep.note = "max alpha_n over n <= " + std::to_string(c) + " exceeds min over n > " + std::to_string(c);
            return rep;
        }
    }
    return rep;
}

template <class S>
PropertyReport check_strongly_submult(const Weight<S>& w, const S& lam) {
    PropertyReport rep{WeightProperty::strongly_submult, true, w.horizon()};
    for (int k = 1; k <= w.horizon(); ++k)
        for (int l = k; k + l - 1 <= w.horizon(); ++l) {
            S lhs = w.m(k) * w.m(l);
            S rhs = lam * w.m(k + l - 1);
            if (!leq(lhs, rhs)) {
                rep.holds = false;
                rep.witness = Witness{{k, l}, scalar_to_string(lhs), scalar_to_string(rhs)};
                return rep;
            }
        }
    return rep;
}

template <class S>
S pow_scalar(const S& base, long e) {
    if constexpr (std::is_same_v<S, Rat>) {
        return pow_rat(base, e);
    } else {
        using std::pow;
        return pow(base, static_cast<int>(e));
    }
}

template <class S>
PropertyReport check_fdb_family(const Weight<S>& w, WeightProperty which, const S& lam) {
    PropertyReport rep{which, true, w.horizon()};
    if (w.horizon() < 4) fail(ErrorCode::domain, "FDB-type predicates need horizon >= 4");
    PartitionMaxByCount<S> dp(w);
    for (int k = 1; k <= w.horizon(); ++k) {
        for (int r = 1; r <= k; ++r) {
            S lhs = w.m(r) * dp.best[k][r];
            S rhs = (which == WeightProperty::strict_fdb ? pow_scalar(lam, r) : pow_scalar(lam, k)) * w.m(k);
            if (!leq(lhs, rhs)) {
                rep.holds = false;
                auto parts = dp.parts(k, r);
                std::vector<int> idx{r};
                idx.insert(idx.end(), parts.begin(), parts.end());
                rep.witness = Witness{idx, scalar_to_string(lhs), scalar_to_string(rhs)};
                rep.note = "witness lists r, then the parts k_1 >= ... >= k_r";
                return rep;
            }
        }
    }
    return rep;
}

template <class S>
PropertyReport check_asm(const Weight<S>& w, const S& lam) {
    PropertyReport rep{WeightProperty::asm_prop, true, w.horizon()};
    PartitionMax<S> dp(w);
    for (int k = 1; k <= w.horizon(); ++k) {
        S rhs = pow_scalar(lam, k) * w.m(k);
        if (!leq(dp.best[k], rhs)) {
            rep.holds = false;
            rep.witness = Witness{dp.parts(k), scalar_to_string(dp.best[k]), scalar_to_string(rhs)};
            rep.note = "witness lists the parts k_1 >= ... >= k_r";
            return rep;
        }
    }
    return rep;
}

template <class S>
PropertyReport check_almost_increasing(const Weight<S>& w, const S& lam) {
    PropertyReport rep{WeightProperty::almost_increasing, true, w.horizon()};
    for (int k = 1; k <= w.horizon(); ++k)
        for (int l = k + 1; l <= w.horizon(); ++l)
            if (!root_leq(w.m(k), static_cast<unsigned>(k), w.m(l), static_cast<unsigned>(l), lam)) {
                rep.holds = false;
                rep.witness = Witness{{k, l},
                                      real_to_string(root_real(w.m(k), static_cast<unsigned>(k))),
                                      real_to_string(S(lam) * root_real(w.m(l), static_cast<unsigned>(l)))};
                return rep;
            }
    return rep;
}

template <class S>
PropertyReport check_diff_stable(const Weight<S>& w, const S& bound) {
    PropertyReport rep{WeightProperty::diff_stable, true, w.horizon()};
    Real delta(0);
    int arg = 2;
    for (int n = 2; n <= w.horizon(); ++n) {
        Real d = root_real(S(w.m(n) / w.m(n - 1)), static_cast<unsigned>(n));
        if (d > delta) { delta = d; arg = n; }
        // (m_n / m_{n-1})^{1/n} <= bound, checked exactly in rational mode
        if (!leq(w.m(n), pow_scalar(bound, n) * w.m(n - 1))) {
            rep.holds = false;
            rep.witness = Witness{{n - 1, n}, real_to_string(d), scalar_to_string(bound)};
        }
    }
    rep.constant = real_to_string(delta);
    if (!rep.holds)
        rep.note = "(m_n/m_{n-1})^{1/n} exceeds the grid bound, largest at n = " + std::to_string(arg);
    return rep;
}

// sup_q (mu_q/q) sum_{k>=q} 1/mu_k, truncated at the horizon with an optional
// geometric tail bound from the last ratio mu_N/mu_{N-1}.
template <class S>
PropertyReport check_strongly_nonanalytic(const Weight<S>& w) {
    PropertyReport rep{WeightProperty::strongly_nonanalytic, true, w.horizon()};
    const int N = w.horizon();
    const int Q = std::max(1, N / 2);
    S ratio = w.mu(N) / w.mu(N - 1);
    const bool tail_ok = ratio > 1;
    S tail(0);
    if (tail_ok) tail = S(1) / (w.mu(N) * (ratio - 1));

    std::vector<S> v(Q + 1, S(0));
    S suffix(0);
    std::vector<S> suffixes(N + 2, S(0));
    for (int k = N; k >= 1; --k) {
        suffix += S(1) / w.mu(k);
        suffixes[k] = suffix;
    }
    S sup(0);
    int arg_sup = 1;
    for (int q = 1; q <= Q; ++q) {
        v[q] = w.mu(q) / S(q) * (suffixes[q] + tail);
        if (v[q] > sup) { sup = v[q]; arg_sup = q; }
    }
    S max_lo(0), max_hi(0);
    for (int q = 1; q <= Q; ++q) {
        if (q <= Q / 2)
            max_lo = std::max(max_lo, v[q]);
        else
            max_hi = std::max(max_hi, v[q]);
    }
    rep.constant = scalar_to_string(sup);
    if (!tail_ok) {
        rep.holds = false;
        rep.note = "tail-inconclusive: mu_N/mu_{N-1} <= 1, no geometric tail bound";
        rep.witness = Witness{{N - 1, N}, scalar_to_string(w.mu(N - 1)), scalar_to_string(w.mu(N))};
        return rep;
    }
    if (Q >= 4 && !leq(max_hi, S(5) * max_lo / S(4))) {
        rep.holds = false;
        rep.note = "partial sup still increasing across the horizon";
        rep.witness = Witness{{arg_sup}, scalar_to_string(max_hi), scalar_to_string(max_lo)};
        return rep;
    }
    rep.note = "horizon-limited; sup over q <= " + std::to_string(Q) + " with geometric tail bound";
    return rep;
}

}  // namespace detail

enum class AnalyticTag { sub_analytic, contains_analytic, beyond_analytic };

inline const char* analytic_tag_name(AnalyticTag t) {
    switch (t) {
        case AnalyticTag::sub_analytic: return "sub-analytic";
        case AnalyticTag::contains_analytic: return "contains-analytic";
        case AnalyticTag::beyond_analytic: return "beyond-analytic";
    }
    return "?";
}

struct AnalyticTypeReport {
    Real alpha_est;
    Real A_est;
    AnalyticTag tag{};
    int horizon = 0;
    bool horizon_limited = true;  // the tag is a trend reading, never a proof
};

// alpha = liminf m_n^{1/n} and A = liminf M_n^{1/n}, estimated over the last
// half of the horizon; the tag compares the minima on [N/2,3N/4] and (3N/4,N].
template <class S>
AnalyticTypeReport classify_analytic_type(const Weight<S>& w) {
    const int N = w.horizon();
    if (N < 8) fail(ErrorCode::domain, "analytic-type classification needs horizon >= 8");
    AnalyticTypeReport rep;
    rep.horizon = N;
    auto root_m = [&](int n) { return root_real(w.m(n), static_cast<unsigned>(n)); };
    auto root_M = [&](int n) { return root_real(w.M(n), static_cast<unsigned>(n)); };
    Real alpha = root_m(N / 2), bigA = root_M(N / 2);
    for (int n = N / 2; n <= N; ++n) {
        alpha = std::min(alpha, root_m(n));
        bigA = std::min(bigA, root_M(n));
    }
    rep.alpha_est = alpha;
    rep.A_est = bigA;
    Real t1 = root_m(N / 2), t2 = root_m(3 * N / 4 + 1);
    for (int n = N / 2; n <= 3 * N / 4; ++n) t1 = std::min(t1, root_m(n));
    for (int n = 3 * N / 4 + 1; n <= N; ++n) t2 = std::min(t2, root_m(n));
    const Real tol_factor("1.05");
    if (t2 * tol_factor < t1)
        rep.tag = AnalyticTag::sub_analytic;
    else if (t2 > t1 * tol_factor)
        rep.tag = AnalyticTag::beyond_analytic;
    else
        rep.tag = AnalyticTag::contains_analytic;
    return rep;
}

template <class S>
PropertyReport check_property(const Weight<S>& w, WeightProperty p, const CheckOptions& opt = {}) {
    using detail::check_fdb_family;
    if (property_takes_lambda(p) && !opt.lambda && opt.grid.empty())
        fail(ErrorCode::domain, std::string("predicate ") + property_name(p) + " needs a lambda");

    auto with_lambda = [&](auto&& eval) -> PropertyReport {
        if (opt.lambda) {
            PropertyReport rep = eval(scalar_from_rat<S>(*opt.lambda));
            rep.lambda = rat_to_string(*opt.lambda);
            return rep;
        }
        PropertyReport rep;
        for (const Rat& lam : opt.grid) {
            rep = eval(scalar_from_rat<S>(lam));
            rep.lambda = rat_to_string(lam);
            if (rep.holds) return rep;
        }
        rep.note += (rep.note.empty() ? "" : "; ");
        rep.note += "no lambda in the search grid works";
        return rep;
    };

    switch (p) {
        case WeightProperty::log_convex: return detail::check_log_convex(w);
        case WeightProperty::block_convex: return detail::check_block_convex(w);
        case WeightProperty::strongly_submult:
            return with_lambda([&](const S& l) { return detail::check_strongly_submult(w, l); });
        case WeightProperty::strict_fdb:
            return with_lambda([&](const S& l) { return check_fdb_family(w, WeightProperty::strict_fdb, l); });
        case WeightProperty::fdb:
            return with_lambda([&](const S& l) { return check_fdb_family(w, WeightProperty::fdb, l); });
        case WeightProperty::asm_prop:
            return with_lambda([&](const S& l) { return detail::check_asm(w, l); });
        case WeightProperty::almost_increasing:
            return with_lambda([&](const S& l) { return detail::check_almost_increasing(w, l); });
        case WeightProperty::diff_stable: {
            Rat bound = opt.grid.empty() ? Rat(16) : opt.grid.back();
            auto rep = detail::check_diff_stable(w, scalar_from_rat<S>(bound));
            rep.lambda = rat_to_string(bound);
            return rep;
        }
        case WeightProperty::strongly_nonanalytic: return detail::check_strongly_nonanalytic(w);
        case WeightProperty::analytic_type: {
            auto a = classify_analytic_type(w);
            PropertyReport rep{WeightProperty::analytic_type, true, w.horizon()};
            rep.constant = real_to_string(a.alpha_est);
            rep.note = analytic_tag_name(a.tag);
            return rep;
        }
    }
    fail(ErrorCode::internal, "unhandled property");
}

struct ImplicationMatrix {
    std::vector<PropertyReport> chain;  // log_convex .. fdb, in implication order
    std::vector<PropertyReport> extra;  // asm, almost_increasing, diff_stable, ...
};

// Lemma chain log-convex => block-convex => strongly submultiplicative =>
// strictly FDB => FDB.  A later property failing while an earlier one holds is
// an implementation bug, not a data condition.
template <class S>
ImplicationMatrix implication_matrix(const Weight<S>& w, const CheckOptions& opt = {}) {
    if (w.horizon() < 8) fail(ErrorCode::domain, "implication matrix needs horizon >= 8");
    ImplicationMatrix out;
    const WeightProperty chain[] = {WeightProperty::log_convex, WeightProperty::block_convex,
                                    WeightProperty::strongly_submult, WeightProperty::strict_fdb,
                                    WeightProperty::fdb};
    for (auto p : chain) out.chain.push_back(check_property(w, p, opt));
    for (size_t i = 0; i < out.chain.size(); ++i)
        for (size_t j = i + 1; j < out.chain.size(); ++j)
            if (out.chain[i].holds && !out.chain[j].holds)
                fail(ErrorCode::internal,
                     std::string("implication chain broken: ") + property_name(out.chain[i].property) +
                         " holds but " + property_name(out.chain[j].property) + " fails");
    for (auto p : {WeightProperty::asm_prop, WeightProperty::almost_increasing,
                   WeightProperty::diff_stable, WeightProperty::strongly_nonanalytic,
                   WeightProperty::analytic_type})
        out.extra.push_back(check_property(w, p, opt));
    return out;
}

struct ShiftDuality {
    PropertyReport fdb_of_m;
    PropertyReport asm_of_shift;
    bool agree = false;
};

// m is FDB iff its left shift is ASM; the constants differ between the two
// directions, so both sides are searched over {lambda, 2l, 4l, 8l}.
template <class S>
ShiftDuality shift_duality_check(const Weight<S>& w, const Rat& lambda) {
    if (w.horizon() < 8) fail(ErrorCode::domain, "shift duality needs horizon >= 8");
    CheckOptions opt;
    opt.grid = {lambda, 2 * lambda, 4 * lambda, 8 * lambda};
    ShiftDuality out;
    out.fdb_of_m = check_property(w, WeightProperty::fdb, opt);
    out.asm_of_shift = check_property(left_shift(w), WeightProperty::asm_prop, opt);
    out.agree = out.fdb_of_m.holds == out.asm_of_shift.holds;
    return out;
}

// ---------------------------------------------------------------------------
// Regularization: largest log-convex minorant of M via the lower convex hull
// of (n, log M_n).  Vertex selection is exact in rational mode: slope
// comparisons reduce to (M_b/M_a)^{c-b} vs (M_c/M_b)^{b-a}.

struct MinorantResult {
    Weight<Real> weight;
    std::vector<int> vertices;  // 1-based hull vertex indices, ascending
};

namespace detail {

// slope(a,b) >= slope(b,c) on (n, log M_n)?
inline bool slope_ge(const Weight<Rat>& w, int a, int b, int c) {
    Rat lhs = pow_rat(w.M(b) / w.M(a), c - b);
    Rat rhs = pow_rat(w.M(c) / w.M(b), b - a);
    return lhs >= rhs;
}
inline bool slope_ge(const Weight<Real>& w, int a, int b, int c) {
    using std::log;
    Real lhs = (log(w.M(b)) - log(w.M(a))) / (b - a);
    Real rhs = (log(w.M(c)) - log(w.M(b))) / (c - b);
    return lhs >= rhs - real_tol();
}

}  // namespace detail

template <class S>
MinorantResult log_convex_minorant(const Weight<S>& w) {
    if (w.horizon() < 3) fail(ErrorCode::domain, "regularization needs horizon >= 3");
    const int N = w.horizon();
    std::vector<int> hull;
    for (int n = 1; n <= N; ++n) {
        while (hull.size() >= 2 && detail::slope_ge(w, hull[hull.size() - 2], hull.back(), n))
            hull.pop_back();
        hull.push_back(n);
    }
    using std::exp;
    using std::log;
    std::vector<Real> logM(N + 1);
    for (int n = 1; n <= N; ++n) logM[n] = log(to_real(w.M(n)));
    std::vector<Real> values(N);
    for (size_t seg = 0; seg + 1 < hull.size(); ++seg) {
        int a = hull[seg], b = hull[seg + 1];
        for (int n = a; n <= b; ++n) {
            Real t = Real(n - a) / Real(b - a);
            Real lM = logM[a] * (Real(1) - t) + logM[b] * t;
            values[n - 1] = exp(lM) / to_real(Rat(factorial(static_cast<unsigned>(n))));
        }
    }
    if (hull.size() == 1) values[hull[0] - 1] = to_real(w.m(hull[0]));
    // exact copies at the vertices
    for (int v : hull) values[v - 1] = to_real(w.m(v));
    Generator gen{"custom-table", {{"origin", "log-convex-minorant"}}};
    return MinorantResult{Weight<Real>(std::move(values), std::move(gen)), std::move(hull)};
}

// ---------------------------------------------------------------------------
// Characteristic coefficients s_n = (1/n!) sum_nu 2^{-nu} mu_nu^n / T_nu with
// T_nu = mu_nu^nu / M_nu; each s_n >= m_n / 2^n (the nu = n summand alone).

template <class S>
std::vector<S> characteristic_coefficients(const Weight<S>& w, int terms) {
    const int N = w.horizon();
    if (terms < N) fail(ErrorCode::domain, "characteristic coefficients need terms >= horizon");
    if (!w.mu_increasing())
        fail(ErrorCode::domain, "characteristic coefficients need a weakly log-convex weight");
    std::vector<S> s(N + 1, S(0));
    for (int n = 1; n <= N; ++n) {
        S acc(0);
        S half_pow(1);
        for (int nu = 1; nu <= terms; ++nu) {
            half_pow /= 2;
            int j = std::min(nu, N);  // mu is tabulated to the horizon only
            S T = detail::pow_scalar(w.mu(j), j) / w.M(j);
            acc += half_pow * detail::pow_scalar(w.mu(j), n) / T;
        }
        s[n] = acc / scalar_from_rat<S>(Rat(factorial(static_cast<unsigned>(n))));
        S low = w.m(n) / detail::pow_scalar(S(2), n);
        if (!leq(low, s[n]))
            fail(ErrorCode::internal, "characteristic coefficient below the proof's lower bound");
    }
    return std::vector<S>(s.begin() + 1, s.end());
}

// The single nu-term of s_n, exposed for tests: 2^{-nu} mu_nu^n / (T_nu n!).
template <class S>
S characteristic_term(const Weight<S>& w, int n, int nu) {
    S T = detail::pow_scalar(w.mu(nu), nu) / w.M(nu);
    return detail::pow_scalar(w.mu(nu), n) / T / detail::pow_scalar(S(2), nu) /
           scalar_from_rat<S>(Rat(factorial(static_cast<unsigned>(n))));
}

}  // namespace carleman
