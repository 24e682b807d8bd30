#pragma once

#include <string>
#include <vector>

#include "carleman/json_io.hpp"

namespace carleman {

struct FixtureFile {
    std::string name;
    json content;
    std::string description;
};

namespace fixtures {

// Omega realizing the Siegel bound |lambda^k - lambda_i|^{-1} <= |k|^tau / gamma.
inline json diophantine_omega(int Q, int tau, const Rat& gamma) {
    OmegaTable t;
    t.Q = Q;
    for (int q = 2; q <= Q; ++q) {
        using std::pow;
        t.values.push_back(pow(Real(q), tau) / to_real(gamma));
    }
    return omega_table_to_json(t);
}

// Omega realizing the Gevrey-divisor head with equality: the Bruno partial
// sums are exactly delta * L * ln 2, so Omega(2) = 1 and
// Omega(2^{nu+1}) = 2^{delta 2^nu} for nu >= 1.
inline json gevrey_divisor_omega(int Q, const Real& delta) {
    using std::pow;
    OmegaTable t;
    t.Q = Q;
    for (int q = 2; q <= Q; ++q) {
        if (q == 2) {
            t.values.push_back(Real(1));
            continue;
        }
        int nu = 0;
        while ((1 << (nu + 1)) < q) ++nu;  // smallest nu with q <= 2^{nu+1}
        t.values.push_back(pow(Real(2), delta * Real(1 << nu)));
    }
    return omega_table_to_json(t);
}

// Super-exponential growth with no usable structure: the general-theorem case.
inline json tower_omega(int Q) {
    using std::exp;
    using std::pow;
    OmegaTable t;
    t.Q = Q;
    for (int q = 2; q <= Q; ++q) t.values.push_back(exp(pow(Real(q), Real(3) / 2) / 4));
    return omega_table_to_json(t);
}

// Exact eigenvalues with planted near-resonances of rapidly increasing
// severity: lambda_2 ~ lambda_1^5, lambda_3 ~ lambda_1^9.
inline json liouville_eigenvalues() {
    std::vector<CRat> eig{CRat(Rat(2)), CRat(Rat(32) + Rat(1, Int(1) << 30)),
                          CRat(Rat(512) + Rat(1, pow_int(Int(2), 90)))};
    return linear_to_json(LinearPart<CRat>(std::move(eig)));
}

inline json poincare_eigenvalues(int s) {
    if (s == 1) return linear_to_json(LinearPart<CRat>({CRat(Rat(1, 2))}));
    if (s == 2)
        return linear_to_json(LinearPart<CRat>({CRat(Rat(1, 2)), CRat(Rat(3, 10), Rat(4, 10))}));
    return linear_to_json(
        LinearPart<CRat>({CRat(Rat(1, 2)), CRat(Rat(1, 3)), CRat(Rat(3, 10), Rat(4, 10))}));
}

inline json map_ghat_1d() {
    Series<CRat> g(1, 1, 8);
    g.set_coeff(MultiIndex({2}), 0, CRat(Rat(1)));
    return series_to_json(g);
}

inline json map_ghat_2d() {
    Series<CRat> g(2, 2, 8);
    g.set_coeff(MultiIndex({0, 2}), 0, CRat(Rat(1)));
    g.set_coeff(MultiIndex({2, 0}), 1, CRat(Rat(1)));
    return series_to_json(g);
}

inline json map_ghat_3d() {
    Series<CRat> g(3, 3, 6);
    g.set_coeff(MultiIndex({0, 2, 0}), 0, CRat(Rat(1)));
    g.set_coeff(MultiIndex({0, 0, 2}), 1, CRat(Rat(1, 2)));
    g.set_coeff(MultiIndex({1, 1, 0}), 2, CRat(Rat(-1, 3)));
    return series_to_json(g);
}

}  // namespace fixtures

inline std::vector<FixtureFile> make_fixtures(const std::string& kind,
                                              const std::map<std::string, std::string>& params = {}) {
    auto param = [&](const std::string& key, const std::string& dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    std::vector<FixtureFile> out;
    auto add_weight = [&](const std::string& name, const std::string& gen, int N,
                          const std::string& desc,
                          const std::map<std::string, std::string>& p = {}) {
        out.push_back({name, weight_to_json(generate_weight(gen, N, p)), desc});
    };

    bool all = kind == "all";
    if (all || kind == "weights") {
        add_weight("weight_constant.json", "constant", 12, "constant weight (1): the analytic class");
        add_weight("weight_gevrey1.json", "gevrey", 12, "Gevrey s=1 (= analytic)", {{"s", "1"}});
        add_weight("weight_gevrey15.json", "gevrey", 12, "Gevrey s=1.5", {{"s", "1.5"}});
        add_weight("weight_gevrey2.json", "gevrey", 12, "Gevrey s=2", {{"s", "2"}});
        add_weight("weight_gevrey3.json", "gevrey", 12, "Gevrey s=3", {{"s", "3"}});
        add_weight("weight_asm_not_fdb.json", "asm-not-fdb", 64,
                   "almost increasing (lambda=8) with growing FDB defect");
        add_weight("weight_fdb_not_log.json", "fdb-not-log", 16,
                   "block-convex but not log-convex");
        add_weight("weight_fdb_not_asm.json", "fdb-not-asm", 20,
                   "m_n = log^{-n}(1+n): FDB but not ASM");
        add_weight("weight_asm_not_diff.json", "asm-not-diff", 16,
                   "log-convex with mu_n = 2^{n^2}: not diff-stable");
    }
    if (all || kind == "poincare") {
        out.push_back({"eigen_poincare_1d.json", fixtures::poincare_eigenvalues(1),
                       "all |lambda_i| < 1: Omega bounded"});
        out.push_back({"eigen_poincare_2d.json", fixtures::poincare_eigenvalues(2),
                       "all |lambda_i| < 1: Omega bounded"});
    }
    if (all || kind == "siegel" || kind == "diophantine") {
        int Q = std::stoi(param("Q", "256"));
        out.push_back({"omega_diophantine.json", fixtures::diophantine_omega(Q, 2, Rat(1, 2)),
                       "Omega(q) = q^2 / (1/2): Siegel small divisors, tau=2, gamma=1/2"});
    }
    if (all || kind == "gevrey-divisors") {
        int Q = std::stoi(param("Q", "256"));
        Real delta = detail_io::real_of(json(param("delta", "0.5")));
        out.push_back({"omega_gevrey_divisors.json", fixtures::gevrey_divisor_omega(Q, delta),
                       "Omega with Bruno partial sums a + delta log|k| (delta = " +
                           param("delta", "0.5") + ")"});
    }
    if (all || kind == "liouville") {
        out.push_back({"eigen_liouville.json", fixtures::liouville_eigenvalues(),
                       "planted near-resonances at degrees 5 and 9 (gaps 2^-30, 2^-90)"});
        int Q = std::stoi(param("Q", "256"));
        out.push_back({"omega_tower.json", fixtures::tower_omega(Q),
                       "Omega(q) = exp(q^{3/2}/4): arbitrarily bad small divisors"});
    }
    if (all || kind == "maps") {
        out.push_back({"map_ghat_1d.json", fixtures::map_ghat_1d(), "ghat = x^2"});
        out.push_back({"map_ghat_2d.json", fixtures::map_ghat_2d(), "ghat = (y^2, x^2)"});
        out.push_back({"map_ghat_3d.json", fixtures::map_ghat_3d(),
                       "ghat = (y^2, z^2/2, -xy/3)"});
        out.push_back({"eigen_2_3.json",
                       linear_to_json(LinearPart<CRat>({CRat(Rat(2)), CRat(Rat(3))})),
                       "lambda = (2, 3)"});
        out.push_back({"eigen_resonant.json",
                       linear_to_json(LinearPart<CRat>({CRat(Rat(2)), CRat(Rat(4))})),
                       "resonant: lambda_1^2 = lambda_2"});
    }
    if (out.empty()) fail(ErrorCode::domain, "unknown fixture kind: " + kind);
    return out;
}

}  // namespace carleman
