#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "carleman/linearize.hpp"
#include "carleman/properties.hpp"

namespace carleman {

// Nonresonance function values Omega(q), q = 2..Q, as high-precision reals.
// Either tabulated from an eigenvalue scan or constructed synthetically.
struct OmegaTable {
    int Q = 0;
    std::vector<Real> values;  // values[q - 2] = Omega(q)

    const Real& at(int q) const {
        if (q < 2 || q > Q) fail(ErrorCode::domain, "Omega(q) outside the tabulated range");
        return values[q - 2];
    }

    bool monotone() const {
        for (size_t i = 1; i < values.size(); ++i)
            if (values[i] + real_tol() < values[i - 1]) return false;
        return true;
    }

    template <class C>
    static OmegaTable from_resonance(const ResonanceReport<C>& rep) {
        OmegaTable t;
        t.Q = rep.Q;
        for (const auto& v : rep.omega) t.values.push_back(mag_to_real(v));
        return t;
    }
};

enum class RegularityTag { convergent, no_loss, gevrey_loss, general };

inline const char* regularity_tag_name(RegularityTag t) {
    switch (t) {
        case RegularityTag::convergent: return "convergent";
        case RegularityTag::no_loss: return "no_loss";
        case RegularityTag::gevrey_loss: return "gevrey_loss";
        case RegularityTag::general: return "general";
    }
    return "?";
}

struct DominationCertificate {
    OmegaTable omega;
    std::string policy;  // "minimal" | "constant" | "gevrey"
    Weight<Real> w{std::vector<Real>{Real(1), Real(1)}};  // dominating weight, horizon Q/2
    Real a;
    std::vector<Real> partial_sums;  // S(L) = sum_{nu<=L} log Omega(2^{nu+1}) / 2^nu
    std::optional<Real> gevrey_delta;  // requested delta (gevrey policy)
    std::optional<Real> delta_fit;     // minimal table-consistent delta
    bool feasible = true;
    std::string growth_trace;  // increment trace when the constant policy fails
    int checked_to = 0;        // domination inequality verified for 2 <= n <= checked_to
    RegularityTag tag = RegularityTag::general;
};

namespace detail {

inline int log2_floor(int n) {
    int l = 0;
    while ((2 << l) <= n) ++l;  // 2^{l+1} <= n
    return l;
}

}  // namespace detail

// The domination inequality at every tabulated degree:
//   sum_{nu <= log2 n} log Omega(2^{nu+1}) / 2^nu  <=  a + log(w_n) / n.
inline bool verify_domination(const OmegaTable& omega, const std::vector<Real>& partial_sums,
                              const Weight<Real>& w, const Real& a, int n_max) {
    using std::log;
    for (int n = 2; n <= n_max; ++n) {
        int L = detail::log2_floor(n);
        if (L >= static_cast<int>(partial_sums.size())) return false;
        if (!leq(partial_sums[L], Real(a + log(w.m(n)) / n))) return false;
    }
    return true;
}

// Dominating-weight construction per policy.  The certificate invariant is
// re-verified on the table before returning.
inline DominationCertificate dominating_weight(const OmegaTable& omega, const std::string& policy,
                                               std::optional<Real> delta = std::nullopt) {
    using std::exp;
    using std::log;
    if (omega.Q < 4) fail(ErrorCode::domain, "domination needs Omega tabulated to Q >= 4");
    if (!omega.monotone()) fail(ErrorCode::domain, "Omega table is not nondecreasing");

    DominationCertificate cert;
    cert.omega = omega;
    cert.policy = policy;

    // S(L) for all L with 2^{L+1} <= Q
    int Lmax = 0;
    while ((2 << (Lmax + 1)) <= omega.Q) ++Lmax;
    std::vector<Real> S(Lmax + 1), inc(Lmax + 1);
    Real acc(0);
    for (int L = 0; L <= Lmax; ++L) {
        inc[L] = log(omega.at(2 << L)) / Real(1 << L);
        acc += inc[L];
        S[L] = acc;
    }
    cert.partial_sums = S;

    const int H = std::max(2, omega.Q / 2);  // weight horizon: log2_floor(n) <= Lmax for n <= Q/2
    cert.checked_to = H;

    // minimal table-consistent slope of L ln 2 -> S(L); exact for data realizing
    // the Gevrey head with equality
    if (Lmax >= 1) {
        Real best = (S[1] - S[0]) / Real(std::log(2.0));
        for (int l1 = 0; l1 <= Lmax; ++l1)
            for (int l2 = l1 + 1; l2 <= Lmax; ++l2) {
                Real slope = (S[l2] - S[l1]) / (Real(l2 - l1) * log(Real(2)));
                if (slope > best) best = slope;
            }
        cert.delta_fit = best;
    }

    std::vector<Real> wv(H, Real(1));
    if (policy == "constant") {
        Real a = S[0];
        for (const Real& s : S) a = std::max(a, s);
        cert.a = a;
        // bounded partial sums: increments must keep shrinking along the table
        bool ok = true;
        if (Lmax >= 3) {
            Real late = inc[Lmax], mid = inc[Lmax / 2];
            ok = leq(late, std::max(Real(mid / 2), real_tol()));
        }
        cert.feasible = ok;
        if (!ok) {
            std::string trace = "partial-sum increments:";
            for (int L = 0; L <= Lmax; ++L) trace += " " + real_to_string(inc[L]);
            cert.growth_trace = trace;
        }
        cert.tag = RegularityTag::no_loss;
    } else if (policy == "gevrey") {
        if (!delta) fail(ErrorCode::domain, "gevrey policy needs a delta");
        cert.gevrey_delta = delta;
        using std::pow;
        for (int n = 1; n <= H; ++n) wv[n - 1] = pow(to_real(Rat(factorial(n))), *delta);
        Weight<Real> w(wv, Generator{"gevrey-factor", {{"delta", real_to_string(*delta)}}});
        // minimal a against the true weight form log(w_n)/n
        std::optional<Real> a;
        for (int n = 2; n <= H; ++n) {
            Real val = S[detail::log2_floor(n)] - log(w.m(n)) / n;
            if (!a || val > *a) a = val;
        }
        cert.a = *a;
        cert.w = std::move(w);
        cert.feasible = true;
        cert.tag = RegularityTag::gevrey_loss;
        if (!verify_domination(cert.omega, S, cert.w, cert.a, H))
            fail(ErrorCode::internal, "gevrey domination certificate failed its own check");
        return cert;
    } else if (policy == "minimal") {
        cert.a = S.size() > 1 ? S[1] : S[0];  // the nu with 2^{nu+1} <= 4
        for (int n = 2; n <= H; ++n) {
            Real gap = S[detail::log2_floor(n)] - cert.a;
            if (gap > 0) wv[n - 1] = exp(Real(gap * n));
        }
        cert.feasible = true;
        cert.tag = RegularityTag::general;
    } else {
        fail(ErrorCode::domain, "unknown domination policy: " + policy);
    }
    cert.w = Weight<Real>(wv, Generator{policy == "constant" ? "constant" : "custom-table",
                                        {{"origin", "dominating-weight"}}});
    if (cert.feasible && !verify_domination(cert.omega, S, cert.w, cert.a, H))
        fail(ErrorCode::internal, "domination certificate failed its own check");
    return cert;
}

// ---------------------------------------------------------------------------

struct RegularityReport {
    RegularityTag tag = RegularityTag::general;
    std::string class_label;
    int escalations = 0;
    bool log_convex_ok = false;
    bool strongly_nonanalytic_ok = false;
    Weight<Real> final_w{std::vector<Real>{Real(1), Real(1)}};
    std::string note;
};

namespace detail {

// compact numeric label ("2", "2.5") for class tags
inline std::string label_real(const Real& x) {
    std::string s = x.str(6, std::ios_base::fixed);
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
    }
    return s;
}

inline std::optional<Real> gevrey_s_of(const Generator& g) {
    if (g.kind != "gevrey") return std::nullopt;
    auto it = g.params.find("s");
    if (it == g.params.end()) return std::nullopt;
    try {
        return Real(it->second);
    } catch (...) {
        return std::nullopt;
    }
}

inline Weight<Real> truncate_weight(const Weight<Real>& w, int H) {
    std::vector<Real> v(w.values().begin(), w.values().begin() + H);
    return Weight<Real>(std::move(v), w.generator());
}

}  // namespace detail

// Final classification: the linearization lands in E^{m*w}.  When m*w fails to
// be log-convex or strongly non-analytic, w is escalated by a Gevrey factor
// and the checks repeat, within a small budget.
template <class S>
RegularityReport classify_regularity(const Weight<S>& m_in, const DominationCertificate& cert,
                                     int escalation_budget = 3) {
    using std::pow;
    Weight<Real> m = to_real_weight(m_in);
    const int H = std::min(m.horizon(), cert.w.horizon());
    if (H < 8) fail(ErrorCode::domain, "classification needs a common horizon >= 8");
    Weight<Real> mH = detail::truncate_weight(m, H);
    Weight<Real> w = detail::truncate_weight(cert.w, H);

    RegularityReport rep;
    Real extra_delta(0);
    for (int round = 0;; ++round) {
        Weight<Real> sw = star_product(mH, w);
        auto at = classify_analytic_type(sw);
        if (at.tag == AnalyticTag::contains_analytic) {
            rep.tag = RegularityTag::convergent;
            rep.class_label = "convergent";
            rep.note = "m*w is of analytic type: the formal linearization converges";
            rep.final_w = w;
            rep.log_convex_ok = rep.strongly_nonanalytic_ok = true;
            return rep;
        }
        auto lc = check_property(sw, WeightProperty::log_convex);
        auto sn = check_property(sw, WeightProperty::strongly_nonanalytic);
        rep.log_convex_ok = lc.holds;
        rep.strongly_nonanalytic_ok = sn.holds;
        if (lc.holds && sn.holds) break;
        if (round >= escalation_budget) fail(ErrorCode::domain, "escalation budget exhausted");
        // increase w by a Gevrey(1/2) factor and retry
        std::vector<Real> nv(H);
        for (int n = 1; n <= H; ++n)
            nv[n - 1] = w.m(n) * pow(to_real(Rat(factorial(n))), Real(1) / 2);
        w = Weight<Real>(std::move(nv), w.generator());
        extra_delta += Real(1) / 2;
        ++rep.escalations;
    }
    rep.final_w = w;

    auto ms = detail::gevrey_s_of(m_in.generator());
    Real delta_total = extra_delta + (cert.gevrey_delta ? *cert.gevrey_delta : Real(0));
    bool w_is_one = cert.tag == RegularityTag::no_loss && rep.escalations == 0;
    if (w_is_one) {
        rep.tag = RegularityTag::no_loss;
        rep.class_label = ms ? ("G^" + detail::label_real(*ms)) : "E^m";
    } else if ((cert.gevrey_delta || rep.escalations > 0) && ms) {
        rep.tag = RegularityTag::gevrey_loss;
        rep.class_label = "G^" + detail::label_real(Real(*ms + delta_total));
    } else {
        rep.tag = RegularityTag::general;
        rep.class_label = "E^{m*w}";
    }
    return rep;
}

// sup_k (1/|k|) log(|phi_k| / (m_k w_k)): the Borel-side seminorm datum that
// the linearization pipeline tabulates and reports.
struct BorelGrowthReport {
    Real sup{0};
    MultiIndex argmax;
    bool any = false;
};

template <class C>
BorelGrowthReport borel_growth(const Series<C>& phi, const Weight<typename scalar_of<C>::type>& m,
                               const Weight<Real>& w) {
    using std::log;
    BorelGrowthReport rep;
    for (const auto& [k, v] : phi.coeffs()) {
        if (k.degree() < 2) continue;
        Real num(0);
        for (const auto& c : v) num = std::max(num, mag_to_real(mag_of<C>::norm(c)));
        if (num == 0) continue;
        Real val = log(num / (to_real(m.m(k.degree())) * w.m(std::min(k.degree(), w.horizon())))) /
                   k.degree();
        if (!rep.any || val > rep.sup) {
            rep.sup = val;
            rep.argmax = k;
            rep.any = true;
        }
    }
    return rep;
}

}  // namespace carleman
