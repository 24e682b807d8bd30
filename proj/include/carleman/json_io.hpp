#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "carleman/dominate.hpp"
#include "carleman/linearize.hpp"
#include "carleman/majorant.hpp"
#include "carleman/properties.hpp"

namespace carleman {

using json = nlohmann::json;

using WeightVar = std::variant<Weight<Rat>, Weight<Real>>;
using SeriesVar = std::variant<Series<CRat>, Series<CReal>>;
using LinearVar = std::variant<LinearPart<CRat>, LinearPart<CReal>>;

// ---------------------------------------------------------------------------
// scalar parsing

namespace detail_io {

inline std::optional<Rat> try_rat(const json& v) {
    try {
        if (v.is_string()) return Rat(v.get<std::string>());
        if (v.is_number_integer()) return Rat(v.get<long long>());
    } catch (...) {
    }
    return std::nullopt;
}

inline Real real_of(const json& v) {
    try {
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            try {
                return to_real(Rat(s));  // accept "p/q" too
            } catch (...) {
                return Real(s);
            }
        }
        if (v.is_number()) return Real(v.get<double>());
    } catch (...) {
    }
    fail(ErrorCode::io, "cannot parse numeric value: " + v.dump());
}

inline Rat rat_of(const json& v) {
    auto r = try_rat(v);
    if (!r) fail(ErrorCode::io, "exact mode needs rational values (\"p/q\" strings or integers), got " + v.dump());
    return *r;
}

// [re, im] pair, bare scalar, or {"re":..,"im":..}
inline std::pair<json, json> complex_parts(const json& v) {
    if (v.is_array()) {
        if (v.size() == 2) return {v[0], v[1]};
        if (v.size() == 1) return {v[0], json(0)};
        fail(ErrorCode::io, "complex value must be [re, im]");
    }
    if (v.is_object()) return {v.value("re", json(0)), v.value("im", json(0))};
    return {v, json(0)};
}

inline bool values_look_exact(const json& arr) {
    for (const auto& v : arr) {
        if (v.is_array() || v.is_object()) {
            auto [re, im] = complex_parts(v);
            if (!try_rat(re) || !try_rat(im)) return false;
        } else if (!try_rat(v)) {
            return false;
        }
    }
    return true;
}

}  // namespace detail_io

// ---------------------------------------------------------------------------
// weights

inline json generator_to_json(const Generator& g) {
    if (g.kind.empty()) return nullptr;
    json p = json::object();
    for (const auto& [k, v] : g.params) p[k] = v;
    return json{{"kind", g.kind}, {"params", p}};
}

inline Generator generator_from_json(const json& j) {
    Generator g;
    if (j.is_null()) return g;
    g.kind = j.value("kind", "");
    if (j.contains("params") && j["params"].is_object())
        for (const auto& [k, v] : j["params"].items())
            g.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return g;
}

// Generate a weight from a named generator.  Exact whenever the construction
// is rational (constant, integer-s Gevrey, the three rational example
// weights); float mode otherwise.
inline WeightVar generate_weight(const std::string& kind, int horizon,
                                 const std::map<std::string, std::string>& params = {}) {
    auto param = [&](const std::string& key, const std::string& dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (kind == "constant") return constant_weight(horizon);
    if (kind == "gevrey") {
        std::string s = param("s", "2");
        try {
            Rat rs(s);
            if (denominator(rs) == 1) return gevrey_weight_exact(horizon, rs.convert_to<long>());
        } catch (...) {
        }
        return gevrey_weight(horizon, detail_io::real_of(json(s)));
    }
    if (kind == "gevrey-factor") {  // w = (n!^delta)
        std::string d = param("delta", "1/2");
        try {
            Rat rd(d);
            if (denominator(rd) == 1) return gevrey_weight_exact(horizon, rd.convert_to<long>() + 1);
        } catch (...) {
        }
        return gevrey_weight(horizon, Real(1) + detail_io::real_of(json(d)));
    }
    if (kind == "logpow" || kind == "fdb-not-asm") return fdb_not_asm_weight(horizon);
    if (kind == "asm-not-fdb") return asm_not_fdb_weight(horizon, Rat(param("multiplier", "1")));
    if (kind == "fdb-not-log") return fdb_not_log_weight(horizon);
    if (kind == "asm-not-diff") return asm_not_diff_weight(horizon);
    fail(ErrorCode::domain, "unknown weight generator: " + kind);
}

template <class S>
json weight_to_json(const Weight<S>& w) {
    json values = json::array();
    for (const S& v : w.values()) values.push_back(scalar_to_string(v));
    return json{{"generator", generator_to_json(w.generator())},
                {"values", values},
                {"horizon", w.horizon()},
                {"exact", std::is_same_v<S, Rat>}};
}

inline json weight_to_json(const WeightVar& w) {
    return std::visit([](const auto& x) { return weight_to_json(x); }, w);
}

inline WeightVar weight_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorCode::io, "weight JSON must be an object");
    Generator gen = generator_from_json(j.value("generator", json(nullptr)));
    int horizon = j.value("horizon", 0);
    if (!j.contains("values") || j["values"].empty()) {
        if (gen.kind.empty()) fail(ErrorCode::io, "weight JSON needs values or a generator");
        if (horizon < 2) fail(ErrorCode::io, "weight JSON needs a horizon >= 2");
        return generate_weight(gen.kind, horizon, gen.params);
    }
    const json& vals = j["values"];
    if (!vals.is_array()) fail(ErrorCode::io, "weight values must be an array");
    bool exact = j.contains("exact") ? j["exact"].get<bool>() : detail_io::values_look_exact(vals);
    if (horizon && horizon != static_cast<int>(vals.size()))
        fail(ErrorCode::io, "weight horizon disagrees with the number of values");
    if (exact) {
        std::vector<Rat> v;
        for (const auto& x : vals) v.push_back(detail_io::rat_of(x));
        return Weight<Rat>(std::move(v), std::move(gen));
    }
    std::vector<Real> v;
    for (const auto& x : vals) v.push_back(detail_io::real_of(x));
    return Weight<Real>(std::move(v), std::move(gen));
}

inline Weight<Real> weight_as_real(const WeightVar& w) {
    if (std::holds_alternative<Weight<Rat>>(w)) return to_real_weight(std::get<Weight<Rat>>(w));
    return std::get<Weight<Real>>(w);
}

// ---------------------------------------------------------------------------
// series

template <class C>
json series_to_json(const Series<C>& s) {
    json coeffs = json::array();
    for (const auto& [k, v] : s.coeffs()) {
        json kv = json::array();
        for (int e : k.exponents()) kv.push_back(e);
        json vv = json::array();
        for (const C& c : v) {
            if constexpr (std::is_same_v<C, CRat>)
                vv.push_back(json::array({rat_to_string(c.re), rat_to_string(c.im)}));
            else
                vv.push_back(json::array({real_to_string(c.re), real_to_string(c.im)}));
        }
        coeffs.push_back(json{{"k", kv}, {"v", vv}});
    }
    return json{{"dim_in", s.dim_in()},   {"dim_out", s.dim_out()},
                {"order", s.order()},     {"has_constant", s.has_constant()},
                {"coeffs", coeffs},       {"exact", std::is_same_v<C, CRat>}};
}

inline json series_to_json(const SeriesVar& s) {
    return std::visit([](const auto& x) { return series_to_json(x); }, s);
}

inline json series_to_json(const Series<Rat>& s) { return series_to_json(to_complex_series(s)); }

inline SeriesVar series_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorCode::io, "series JSON must be an object");
    for (const char* f : {"dim_in", "dim_out", "order"})
        if (!j.contains(f)) fail(ErrorCode::io, std::string("series JSON needs field ") + f);
    int dim_in = j["dim_in"], dim_out = j["dim_out"], order = j["order"];
    bool has_constant = j.value("has_constant", false);
    const json& coeffs = j.value("coeffs", json::array());

    bool exact = true;
    if (j.contains("exact"))
        exact = j["exact"].get<bool>();
    else
        for (const auto& e : coeffs)
            if (!detail_io::values_look_exact(e.value("v", json::array()))) exact = false;

    auto build = [&](auto tag) -> SeriesVar {
        using C = decltype(tag);
        Series<C> s(dim_in, dim_out, order, has_constant);
        for (const auto& e : coeffs) {
            if (!e.contains("k") || !e.contains("v")) fail(ErrorCode::io, "series coefficient needs k and v");
            std::vector<int> kv = e["k"].get<std::vector<int>>();
            MultiIndex k(kv);
            const json& vv = e["v"];
            if (static_cast<int>(vv.size()) != dim_out)
                fail(ErrorCode::io, "coefficient vector length disagrees with dim_out");
            std::vector<C> v(dim_out);
            for (int i = 0; i < dim_out; ++i) {
                auto [re, im] = detail_io::complex_parts(vv[i]);
                if constexpr (std::is_same_v<C, CRat>)
                    v[i] = CRat(detail_io::rat_of(re), detail_io::rat_of(im));
                else
                    v[i] = CReal(detail_io::real_of(re), detail_io::real_of(im));
            }
            s.set_coeff(k, std::move(v));
        }
        return s;
    };
    return exact ? build(CRat{}) : build(CReal{});
}

inline Series<CReal> series_as_creal(const SeriesVar& s) {
    if (std::holds_alternative<Series<CRat>>(s)) return to_creal_series(std::get<Series<CRat>>(s));
    return std::get<Series<CReal>>(s);
}

// ---------------------------------------------------------------------------
// eigenvalues

template <class C>
json linear_to_json(const LinearPart<C>& L) {
    json eig = json::array();
    for (const C& l : L.eigenvalues()) {
        if constexpr (std::is_same_v<C, CRat>)
            eig.push_back(json::array({rat_to_string(l.re), rat_to_string(l.im)}));
        else
            eig.push_back(json::array({real_to_string(l.re), real_to_string(l.im)}));
    }
    return json{{"eigenvalues", eig}, {"exact", std::is_same_v<C, CRat>}};
}

inline json linear_to_json(const LinearVar& L) {
    return std::visit([](const auto& x) { return linear_to_json(x); }, L);
}

inline LinearVar linear_from_json(const json& j) {
    if (!j.is_object() || !j.contains("eigenvalues"))
        fail(ErrorCode::io, "eigenvalue fixture needs an eigenvalues array");
    const json& eig = j["eigenvalues"];
    bool exact = j.contains("exact") ? j["exact"].get<bool>() : detail_io::values_look_exact(eig);
    if (exact) {
        std::vector<CRat> v;
        for (const auto& e : eig) {
            auto [re, im] = detail_io::complex_parts(e);
            v.emplace_back(detail_io::rat_of(re), detail_io::rat_of(im));
        }
        return LinearPart<CRat>(std::move(v));
    }
    std::vector<CReal> v;
    for (const auto& e : eig) {
        auto [re, im] = detail_io::complex_parts(e);
        v.emplace_back(detail_io::real_of(re), detail_io::real_of(im));
    }
    return LinearPart<CReal>(std::move(v));
}

// ---------------------------------------------------------------------------
// reports

inline json witness_to_json(const std::optional<Witness>& w) {
    if (!w) return nullptr;
    return json{{"indices", w->indices}, {"lhs", w->lhs}, {"rhs", w->rhs}};
}

inline json property_report_to_json(const PropertyReport& r) {
    json j{{"property", property_name(r.property)},
           {"holds_to_horizon", r.holds},
           {"horizon", r.horizon},
           {"witness", witness_to_json(r.witness)}};
    if (r.lambda) j["lambda"] = *r.lambda;
    if (r.constant) j["constant"] = *r.constant;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json analytic_report_to_json(const AnalyticTypeReport& r) {
    return json{{"alpha_est", real_to_string(r.alpha_est)},
                {"A_est", real_to_string(r.A_est)},
                {"tag", analytic_tag_name(r.tag)},
                {"horizon", r.horizon},
                {"horizon_limited", r.horizon_limited}};
}

inline json implication_matrix_to_json(const ImplicationMatrix& m) {
    json chain = json::array(), extra = json::array();
    for (const auto& r : m.chain) chain.push_back(property_report_to_json(r));
    for (const auto& r : m.extra) extra.push_back(property_report_to_json(r));
    return json{{"chain", chain}, {"extra", extra}};
}

inline json duality_to_json(const ShiftDuality& d) {
    return json{{"fdb_of_m", property_report_to_json(d.fdb_of_m)},
                {"asm_of_shift", property_report_to_json(d.asm_of_shift)},
                {"agree", d.agree}};
}

inline json minorant_to_json(const MinorantResult& m) {
    return json{{"weight", weight_to_json(m.weight)}, {"vertices", m.vertices}};
}

inline json main_lemma_report_to_json(const MainLemmaReport& r) {
    json j{{"hypothesis_holds", r.hypothesis_holds},
           {"hypothesis_witness", witness_to_json(r.hypothesis_witness)},
           {"conclusion_holds", r.conclusion_holds},
           {"equality_everywhere", r.equality_everywhere},
           {"order", r.order}};
    if (r.violation_index) {
        j["violation"] = {{"k", r.violation_index->exponents()},
                          {"component", r.violation_component},
                          {"lhs", r.lhs},
                          {"rhs", r.rhs}};
    }
    return j;
}

inline json seminorm_report_to_json(const SeminormBoundReport& r) {
    return json{{"hypothesis_holds", r.hypothesis_holds},
                {"hypothesis_witness", witness_to_json(r.hypothesis_witness)},
                {"holds", r.holds},
                {"lhs", r.lhs},
                {"rho", r.rho},
                {"rhs", r.rhs}};
}

inline json flow_report_to_json(const FlowMajorantReport& r) {
    json j{{"holds", r.holds}, {"equality_everywhere", r.equality_everywhere}, {"order", r.order}};
    if (r.violation_index)
        j["violation"] = {{"k", r.violation_index->exponents()}, {"lhs", r.lhs}, {"rhs", r.rhs}};
    return j;
}

template <class C>
json resonance_report_to_json(const ResonanceReport<C>& r) {
    json omega = json::array();
    for (int q = 2; q <= r.Q; ++q) omega.push_back(real_to_string(mag_to_real(r.Omega(q))));
    json E = json::array();
    for (const auto& [k, e] : r.E) {
        json entry{{"k", k.exponents()}, {"value", real_to_string(mag_to_real(e))}};
        if constexpr (std::is_same_v<C, CRat>) entry["sq"] = rat_to_string(e.sq);
        E.push_back(entry);
    }
    json j{{"resonant", r.resonant},
           {"numerically_resonant", r.numerically_resonant},
           {"Q", r.Q},
           {"omega", omega},
           {"E", E}};
    if (r.witness)
        j["witness"] = {{"k", r.witness->first.exponents()}, {"i", r.witness->second + 1}};
    else
        j["witness"] = nullptr;
    return j;
}

inline json omega_table_to_json(const OmegaTable& t) {
    json vals = json::array();
    for (const Real& v : t.values) vals.push_back(real_to_string(v));
    return json{{"Q", t.Q}, {"values", vals}};
}

inline OmegaTable omega_table_from_json(const json& j) {
    OmegaTable t;
    if (j.contains("omega")) {  // a resonance-report JSON
        t.Q = j.value("Q", 0);
        for (const auto& v : j["omega"]) t.values.push_back(detail_io::real_of(v));
    } else if (j.contains("values")) {
        t.Q = j.value("Q", 0);
        for (const auto& v : j["values"]) t.values.push_back(detail_io::real_of(v));
    } else {
        fail(ErrorCode::io, "omega JSON needs a values (or omega) array");
    }
    if (static_cast<int>(t.values.size()) != t.Q - 1)
        fail(ErrorCode::io, "omega table length must be Q - 1 (q = 2..Q)");
    return t;
}

inline json certificate_to_json(const DominationCertificate& c) {
    json sums = json::array();
    for (const Real& s : c.partial_sums) sums.push_back(real_to_string(s));
    json j{{"policy", c.policy},
           {"a", real_to_string(c.a)},
           {"feasible", c.feasible},
           {"bruno_partial_sums", sums},
           {"tag", regularity_tag_name(c.tag)},
           {"w", weight_to_json(c.w)},
           {"checked_to", c.checked_to},
           {"omega", omega_table_to_json(c.omega)}};
    if (c.gevrey_delta) j["delta"] = real_to_string(*c.gevrey_delta);
    if (c.delta_fit) j["delta_fit"] = real_to_string(*c.delta_fit);
    if (!c.growth_trace.empty()) j["growth_trace"] = c.growth_trace;
    return j;
}

inline DominationCertificate certificate_from_json(const json& j) {
    DominationCertificate c;
    c.omega = omega_table_from_json(j.value("omega", json::object()));
    c.policy = j.value("policy", "minimal");
    c.a = detail_io::real_of(j.value("a", json("0")));
    c.feasible = j.value("feasible", true);
    for (const auto& v : j.value("bruno_partial_sums", json::array()))
        c.partial_sums.push_back(detail_io::real_of(v));
    auto wv = weight_from_json(j.value("w", json::object()));
    c.w = weight_as_real(wv);
    c.checked_to = j.value("checked_to", 0);
    if (j.contains("delta")) c.gevrey_delta = detail_io::real_of(j["delta"]);
    if (j.contains("delta_fit")) c.delta_fit = detail_io::real_of(j["delta_fit"]);
    std::string tag = j.value("tag", "general");
    for (auto t : {RegularityTag::convergent, RegularityTag::no_loss, RegularityTag::gevrey_loss,
                   RegularityTag::general})
        if (tag == regularity_tag_name(t)) c.tag = t;
    return c;
}

inline json regularity_report_to_json(const RegularityReport& r) {
    return json{{"tag", regularity_tag_name(r.tag)},
                {"class", r.class_label},
                {"escalations", r.escalations},
                {"log_convex", r.log_convex_ok},
                {"strongly_nonanalytic", r.strongly_nonanalytic_ok},
                {"final_w", weight_to_json(r.final_w)},
                {"note", r.note}};
}

inline json counting_report_to_json(const CountingReport& r) {
    return json{{"n", r.n},
                {"k", r.k.exponents()},
                {"count", r.count},
                {"bound", rat_to_string(r.bound)},
                {"holds", r.holds},
                {"siegel_pairs", r.siegel_pairs},
                {"siegel_holds", r.siegel_holds}};
}

template <class C>
json siegel_report_to_json(const SiegelBoundReport<C>& r) {
    json j{{"holds", r.holds},
           {"map_scale", rat_to_string(r.map_scale)},
           {"weight_scale", rat_to_string(r.weight_scale)},
           {"order", r.order}};
    if (r.violation_index)
        j["violation"] = {{"k", r.violation_index->exponents()},
                          {"component", r.violation_component},
                          {"lhs", r.lhs},
                          {"rhs", r.rhs}};
    return j;
}

}  // namespace carleman
