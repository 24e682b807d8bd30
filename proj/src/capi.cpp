#include "carleman.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carleman/fixtures.hpp"
#include "carleman/json_io.hpp"

using namespace carleman;

struct clm_ctx {
    std::string last_error;
    std::vector<Rat> grid = default_lambda_grid();
    unsigned digits10 = default_digits10();
};

struct clm_weight {
    WeightVar w;
};
struct clm_series {
    SeriesVar s;
};
struct clm_linear {
    LinearVar l;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

char* dump_json(const json& j) { return dup_string(j.dump(2) + "\n"); }

template <class F>
int guarded(clm_ctx* ctx, F&& f) {
    if (!ctx) return CLM_ERR_IO;
    ctx->last_error.clear();
    try {
        f();
        return CLM_OK;
    } catch (const Error& e) {
        ctx->last_error = e.what();
        return static_cast<int>(e.code());
    } catch (const json::exception& e) {
        ctx->last_error = e.what();
        return CLM_ERR_IO;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return CLM_ERR_INTERNAL;
    }
}

json parse_json(const char* text) {
    if (!text) fail(ErrorCode::io, "null JSON input");
    return json::parse(text);
}

std::optional<Rat> parse_lambda(const char* lambda) {
    if (!lambda || !*lambda) return std::nullopt;
    try {
        return Rat(lambda);
    } catch (...) {
        fail(ErrorCode::io, std::string("cannot parse lambda: ") + lambda);
    }
}

CheckOptions options_of(const clm_ctx* ctx, std::optional<Rat> lambda = std::nullopt) {
    CheckOptions opt;
    opt.grid = ctx->grid;
    opt.lambda = lambda;
    return opt;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp~";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

// exact path only when every ingredient is exact
bool all_exact(std::initializer_list<bool> flags) {
    for (bool f : flags)
        if (!f) return false;
    return true;
}

Series<Real> real_series_of(const SeriesVar& v) {
    // signed real coefficients, for flows and majorant checks
    if (std::holds_alternative<Series<CRat>>(v)) {
        auto rp = series_real_part(std::get<Series<CRat>>(v));
        if (!rp) fail(ErrorCode::domain, "operation needs a real series");
        return to_real_series(*rp);
    }
    const Series<CReal>& s = std::get<Series<CReal>>(v);
    Series<Real> out(s.dim_in(), s.dim_out(), s.order(), s.has_constant());
    for (const auto& [k, vec] : s.coeffs()) {
        std::vector<Real> nv(vec.size());
        for (size_t i = 0; i < vec.size(); ++i) {
            using std::abs;
            if (!(abs(vec[i].im) < real_tol())) fail(ErrorCode::domain, "operation needs a real series");
            nv[i] = vec[i].re;
        }
        out.set_coeff(k, std::move(nv));
    }
    return out;
}

}  // namespace

extern "C" {

const char* clm_version(void) { return "0.1.0"; }

clm_ctx* clm_ctx_new(void) { return new clm_ctx; }

void clm_ctx_free(clm_ctx* ctx) { delete ctx; }

const char* clm_ctx_last_error(const clm_ctx* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

int clm_ctx_set_precision_bits(clm_ctx* ctx, int bits) {
    return guarded(ctx, [&] {
        if (bits < 1) fail(ErrorCode::domain, "precision must be positive");
        unsigned digits = static_cast<unsigned>(bits * 0.30103) + 1;
        set_precision_digits(digits);
        ctx->digits10 = std::max(digits, 39u);
    });
}

int clm_ctx_set_lambda_grid(clm_ctx* ctx, const char* csv) {
    return guarded(ctx, [&] {
        if (!csv) fail(ErrorCode::io, "null grid string");
        std::vector<Rat> grid;
        std::stringstream ss(csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) grid.push_back(Rat(item));
        if (grid.empty()) fail(ErrorCode::domain, "empty lambda grid");
        ctx->grid = std::move(grid);
    });
}

void clm_string_free(char* s) { std::free(s); }

/* --- weights ------------------------------------------------------------ */

int clm_weight_parse(clm_ctx* ctx, const char* json_text, clm_weight** out) {
    return guarded(ctx, [&] { *out = new clm_weight{weight_from_json(parse_json(json_text))}; });
}

int clm_weight_generate(clm_ctx* ctx, const char* kind, int horizon, const char* params_json,
                        clm_weight** out) {
    return guarded(ctx, [&] {
        std::map<std::string, std::string> params;
        if (params_json && *params_json) {
            json p = parse_json(params_json);
            for (const auto& [k, v] : p.items())
                params[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
        *out = new clm_weight{generate_weight(kind ? kind : "", horizon, params)};
    });
}

void clm_weight_free(clm_weight* w) { delete w; }

int clm_weight_to_json(clm_ctx* ctx, const clm_weight* w, char** out) {
    return guarded(ctx, [&] { *out = dump_json(weight_to_json(w->w)); });
}

int clm_weight_check_property(clm_ctx* ctx, const clm_weight* w, const char* property,
                              const char* lambda, char** report) {
    return guarded(ctx, [&] {
        auto p = property_from_name(property ? property : "");
        if (!p) fail(ErrorCode::domain, std::string("unknown property: ") + (property ? property : ""));
        auto opt = options_of(ctx, parse_lambda(lambda));
        json rep = std::visit(
            [&](const auto& weight) { return property_report_to_json(check_property(weight, *p, opt)); },
            w->w);
        *report = dump_json(rep);
    });
}

int clm_weight_classify(clm_ctx* ctx, const clm_weight* w, char** report) {
    return guarded(ctx, [&] {
        json rep = std::visit(
            [&](const auto& weight) {
                auto matrix = implication_matrix(weight, options_of(ctx));
                auto duality = shift_duality_check(weight, Rat(2));
                auto analytic = classify_analytic_type(weight);
                CheckOptions fixed1;
                fixed1.lambda = Rat(1);
                json separations{
                    {"strict_fdb_at_1",
                     property_report_to_json(check_property(weight, WeightProperty::strict_fdb, fixed1))},
                    {"asm_at_1",
                     property_report_to_json(check_property(weight, WeightProperty::asm_prop, fixed1))}};
                return json{{"horizon", weight.horizon()},
                            {"generator", generator_to_json(weight.generator())},
                            {"matrix", implication_matrix_to_json(matrix)},
                            {"analytic_type", analytic_report_to_json(analytic)},
                            {"duality", duality_to_json(duality)},
                            {"separations", separations}};
            },
            w->w);
        *report = dump_json(rep);
    });
}

int clm_weight_regularize(clm_ctx* ctx, const clm_weight* w, char** report) {
    return guarded(ctx, [&] {
        json rep = std::visit(
            [&](const auto& weight) { return minorant_to_json(log_convex_minorant(weight)); }, w->w);
        *report = dump_json(rep);
    });
}

int clm_weight_star(clm_ctx* ctx, const clm_weight* m, const clm_weight* w, char** weight_json) {
    return guarded(ctx, [&] {
        if (std::holds_alternative<Weight<Rat>>(m->w) && std::holds_alternative<Weight<Rat>>(w->w)) {
            *weight_json = dump_json(
                weight_to_json(star_product(std::get<Weight<Rat>>(m->w), std::get<Weight<Rat>>(w->w))));
            return;
        }
        *weight_json =
            dump_json(weight_to_json(star_product(weight_as_real(m->w), weight_as_real(w->w))));
    });
}

int clm_weight_left_shift(clm_ctx* ctx, const clm_weight* w, char** weight_json) {
    return guarded(ctx, [&] {
        json rep = std::visit([&](const auto& weight) { return weight_to_json(left_shift(weight)); },
                              w->w);
        *weight_json = dump_json(rep);
    });
}

int clm_weight_characteristic(clm_ctx* ctx, const clm_weight* w, int terms, char** report) {
    return guarded(ctx, [&] {
        json rep = std::visit(
            [&](const auto& weight) {
                auto s = characteristic_coefficients(weight, terms);
                json values = json::array();
                for (const auto& v : s) values.push_back(scalar_to_string(v));
                return json{{"terms", terms},
                            {"s", values},
                            {"lower_bound_verified", true},
                            {"note", "s_n >= m_n / 2^n holds for all n <= horizon"}};
            },
            w->w);
        *report = dump_json(rep);
    });
}

/* --- series -------------------------------------------------------------- */

int clm_series_parse(clm_ctx* ctx, const char* json_text, clm_series** out) {
    return guarded(ctx, [&] { *out = new clm_series{series_from_json(parse_json(json_text))}; });
}

void clm_series_free(clm_series* s) { delete s; }

int clm_series_to_json(clm_ctx* ctx, const clm_series* s, char** out) {
    return guarded(ctx, [&] { *out = dump_json(series_to_json(s->s)); });
}

int clm_series_compose(clm_ctx* ctx, const clm_series* g, const clm_series* h, int order,
                       char** series_json) {
    return guarded(ctx, [&] {
        if (std::holds_alternative<Series<CRat>>(g->s) && std::holds_alternative<Series<CRat>>(h->s)) {
            auto out = compose(std::get<Series<CRat>>(g->s), std::get<Series<CRat>>(h->s), order);
            *series_json = dump_json(series_to_json(out));
            return;
        }
        auto out = compose(series_as_creal(g->s), series_as_creal(h->s), order);
        *series_json = dump_json(series_to_json(out));
    });
}

int clm_series_inverse(clm_ctx* ctx, const clm_series* g, int order, char** series_json) {
    return guarded(ctx, [&] {
        if (std::holds_alternative<Series<CRat>>(g->s)) {
            auto out = inverse_series(std::get<Series<CRat>>(g->s), order);
            *series_json = dump_json(series_to_json(out));
            return;
        }
        auto out = inverse_series(std::get<Series<CReal>>(g->s), order);
        *series_json = dump_json(series_to_json(out));
    });
}

int clm_main_lemma_check(clm_ctx* ctx, const clm_series* g, const clm_series* h,
                         const clm_weight* w, const clm_weight* m, const char* lambda, int order,
                         char** report) {
    return guarded(ctx, [&] {
        Rat lam = parse_lambda(lambda).value_or(Rat(1));
        bool exact = all_exact({std::holds_alternative<Series<CRat>>(g->s),
                                std::holds_alternative<Series<CRat>>(h->s),
                                std::holds_alternative<Weight<Rat>>(w->w),
                                std::holds_alternative<Weight<Rat>>(m->w)});
        if (exact) {
            auto gr = series_real_part(std::get<Series<CRat>>(g->s));
            auto hr = series_real_part(std::get<Series<CRat>>(h->s));
            if (gr && hr) {
                auto rep = main_lemma_check(*gr, *hr, std::get<Weight<Rat>>(w->w),
                                            std::get<Weight<Rat>>(m->w), lam, order);
                *report = dump_json(main_lemma_report_to_json(rep));
                return;
            }
        }
        auto rep = main_lemma_check(series_as_creal(g->s), series_as_creal(h->s),
                                    weight_as_real(w->w), weight_as_real(m->w), lam, order);
        *report = dump_json(main_lemma_report_to_json(rep));
    });
}

int clm_seminorm_bound_check(clm_ctx* ctx, const clm_series* g, const clm_series* h,
                             const clm_weight* w, const clm_weight* m, const char* lambda,
                             const char* radius, char** report) {
    return guarded(ctx, [&] {
        Rat lam = parse_lambda(lambda).value_or(Rat(1));
        Rat rad = parse_lambda(radius).value_or(Rat(1, 4));
        bool exact = all_exact({std::holds_alternative<Series<CRat>>(g->s),
                                std::holds_alternative<Series<CRat>>(h->s),
                                std::holds_alternative<Weight<Rat>>(w->w),
                                std::holds_alternative<Weight<Rat>>(m->w)});
        if (exact) {
            auto gr = series_real_part(std::get<Series<CRat>>(g->s));
            auto hr = series_real_part(std::get<Series<CRat>>(h->s));
            if (gr && hr) {
                auto rep = composition_seminorm_bound(*gr, *hr, std::get<Weight<Rat>>(w->w),
                                                      std::get<Weight<Rat>>(m->w), lam, rad);
                *report = dump_json(seminorm_report_to_json(rep));
                return;
            }
        }
        auto rep = composition_seminorm_bound(series_as_creal(g->s), series_as_creal(h->s),
                                              weight_as_real(w->w), weight_as_real(m->w), lam,
                                              to_real(rad));
        *report = dump_json(seminorm_report_to_json(rep));
    });
}

int clm_flow_check(clm_ctx* ctx, const clm_series* v, const clm_weight* m_time,
                   const clm_weight* m_space, int order, char** report) {
    return guarded(ctx, [&] {
        bool exact = all_exact({std::holds_alternative<Series<CRat>>(v->s),
                                std::holds_alternative<Weight<Rat>>(m_time->w),
                                std::holds_alternative<Weight<Rat>>(m_space->w)});
        json rep;
        if (exact) {
            auto vr = series_real_part(std::get<Series<CRat>>(v->s));
            if (!vr) fail(ErrorCode::domain, "flow check needs a real vector field");
            auto data = flow_majorant_check(*vr, std::get<Weight<Rat>>(m_time->w),
                                            std::get<Weight<Rat>>(m_space->w), order);
            rep = flow_report_to_json(data.report);
            rep["phi"] = series_to_json(data.phi);
            rep["comparison"] = series_to_json(to_complex_series(data.comparison));
        } else {
            auto data = flow_majorant_check(real_series_of(v->s), weight_as_real(m_time->w),
                                            weight_as_real(m_space->w), order);
            rep = flow_report_to_json(data.report);
        }
        *report = dump_json(rep);
    });
}

/* --- linearization ------------------------------------------------------- */

int clm_linear_parse(clm_ctx* ctx, const char* json_text, clm_linear** out) {
    return guarded(ctx, [&] { *out = new clm_linear{linear_from_json(parse_json(json_text))}; });
}

void clm_linear_free(clm_linear* l) { delete l; }

int clm_omega_scan(clm_ctx* ctx, const clm_linear* l, int Q, char** report) {
    return guarded(ctx, [&] {
        json rep = std::visit(
            [&](const auto& lin) { return resonance_report_to_json(check_nonresonance(lin, Q)); },
            l->l);
        *report = dump_json(rep);
    });
}

int clm_dominate(clm_ctx* ctx, const char* omega_json, const char* policy, const char* delta,
                 char** certificate) {
    return guarded(ctx, [&] {
        json j = parse_json(omega_json);
        OmegaTable omega;
        if (j.contains("eigenvalues")) {
            int Q = j.value("Q", 64);
            std::visit([&](const auto& lin) { omega = OmegaTable::from_resonance(check_nonresonance(lin, Q)); },
                       linear_from_json(j));
        } else {
            omega = omega_table_from_json(j);
        }
        std::optional<Real> d;
        if (delta && *delta) d = detail_io::real_of(json(std::string(delta)));
        auto cert = dominating_weight(omega, policy ? policy : "minimal", d);
        *certificate = dump_json(certificate_to_json(cert));
    });
}

int clm_classify_regularity(clm_ctx* ctx, const clm_weight* m, const char* certificate_json,
                            char** report) {
    return guarded(ctx, [&] {
        auto cert = certificate_from_json(parse_json(certificate_json));
        json rep = std::visit(
            [&](const auto& weight) { return regularity_report_to_json(classify_regularity(weight, cert)); },
            m->w);
        *report = dump_json(rep);
    });
}

}  // extern "C"

namespace {

template <class C>
void run_pipeline(clm_ctx* ctx, const LinearPart<C>& L, const Series<C>& ghat,
                  const Weight<typename scalar_of<C>::type>& m, int order, int Q,
                  const std::string& policy, std::optional<Real> delta, char** report_json,
                  char** table_csv) {
    using S = typename scalar_of<C>::type;
    if (Q < std::max(16, order)) Q = std::max(16, order);

    auto ledger = accumulation_ledger(L, order);
    auto siegel = siegel_bound_check(L, m, ghat, order, &ledger);

    // Counting Lemma sweep over every tabulated pair 2 <= n <= |k| <= order
    int counting_checked = 0, counting_violations = 0, siegel_pair_violations = 0;
    for (const auto& [k, d] : ledger.delta) {
        if (k.degree() < 2) continue;
        for (int n = 2; n <= k.degree(); ++n) {
            auto cr = counting_lemma_check(ledger, L, n, k);
            ++counting_checked;
            if (!cr.holds) ++counting_violations;
            if (!cr.siegel_holds) ++siegel_pair_violations;
        }
    }

    // tree products must reproduce Delta exactly
    bool trees_consistent = true;
    for (const auto& [k, d] : ledger.delta) {
        if (k.degree() < 2) continue;
        auto mag_one = mag_of<C>::one();
        auto prod = mag_one;
        for (const auto& l : ledger.flattened_factors(k)) prod = decltype(prod)(prod * ledger.resonance.E.at(l));
        if constexpr (std::is_same_v<C, CRat>) {
            if (!(prod == d)) trees_consistent = false;
        } else {
            using std::abs;
            if (!(abs(prod - d) <= real_tol() * (1 + abs(d)))) trees_consistent = false;
        }
    }

    auto scan = check_nonresonance(L, Q);
    auto omega = OmegaTable::from_resonance(scan);
    auto cert = dominating_weight(omega, policy, delta);
    auto classification = classify_regularity(m, cert);
    auto growth = borel_growth(*siegel.phi, m, cert.w);

    bool pass = siegel.holds && counting_violations == 0 && siegel_pair_violations == 0 &&
                trees_consistent && cert.feasible && omega.monotone();

    json rep{{"summary",
              {{"pass", pass},
               {"siegel_bound", siegel.holds},
               {"counting_checked", counting_checked},
               {"counting_violations", counting_violations},
               {"siegel_pair_violations", siegel_pair_violations},
               {"trees_consistent", trees_consistent},
               {"certificate_feasible", cert.feasible},
               {"omega_monotone", omega.monotone()}}},
             {"order", order},
             {"Q", Q},
             {"siegel", siegel_report_to_json(siegel)},
             {"certificate", certificate_to_json(cert)},
             {"classification", regularity_report_to_json(classification)},
             {"resonant", false},
             {"precision_digits", ctx->digits10}};
    if (growth.any) {
        rep["borel_growth"] = {{"sup", real_to_string(growth.sup)},
                               {"argmax", growth.argmax.exponents()}};
    }

    // CSV: one row per tabulated index
    std::ostringstream csv;
    csv << "# map_scale=" << rat_to_string(siegel.map_scale)
        << " weight_scale=" << rat_to_string(siegel.weight_scale) << "\n";
    csv << "k,deg,E_k,Delta_k,abs_phi_k,sigma_delta,m_k,w_k,m_w\n";
    const auto& phi = *siegel.phi;
    for (const auto& [k, d] : ledger.delta) {
        Real e_k(0);
        if (k.degree() >= 2) e_k = mag_to_real(ledger.resonance.E.at(k));
        Real absphi(0);
        for (int i = 0; i < phi.dim_out(); ++i)
            absphi = std::max(absphi, mag_to_real(mag_of<C>::norm(phi.coeff(k, i))));
        Real mk = to_real(m.m(k.degree()));
        Real wk = cert.w.m(std::min(k.degree(), cert.w.horizon()));
        std::string kstr;
        for (int i = 0; i < k.dim(); ++i) kstr += (i ? " " : "") + std::to_string(k[i]);
        csv << kstr << "," << k.degree() << "," << real_to_string(e_k) << ","
            << real_to_string(mag_to_real(d)) << "," << real_to_string(absphi) << ","
            << real_to_string(Real(to_real(Rat(ledger.sigma[k.degree()])) * mag_to_real(d))) << ","
            << real_to_string(mk) << "," << real_to_string(wk) << ","
            << real_to_string(Real(mk * wk)) << "\n";
    }

    *report_json = dump_json(rep);
    if (table_csv) *table_csv = dup_string(csv.str());
}

}  // namespace

extern "C" {

int clm_linearize_pipeline(clm_ctx* ctx, const clm_linear* l, const clm_series* ghat,
                           const clm_weight* m, int order, int Q, const char* policy,
                           const char* delta, char** report_json, char** table_csv) {
    return guarded(ctx, [&] {
        std::optional<Real> d;
        if (delta && *delta) d = detail_io::real_of(json(std::string(delta)));
        std::string pol = policy && *policy ? policy : "constant";
        bool exact = all_exact({std::holds_alternative<LinearPart<CRat>>(l->l),
                                std::holds_alternative<Series<CRat>>(ghat->s),
                                std::holds_alternative<Weight<Rat>>(m->w)});
        if (exact) {
            run_pipeline(ctx, std::get<LinearPart<CRat>>(l->l), std::get<Series<CRat>>(ghat->s),
                         std::get<Weight<Rat>>(m->w), order, Q, pol, d, report_json, table_csv);
        } else {
            LinearPart<CReal> L = std::holds_alternative<LinearPart<CReal>>(l->l)
                                      ? std::get<LinearPart<CReal>>(l->l)
                                      : [&] {
                                            std::vector<CReal> e;
                                            for (const auto& z :
                                                 std::get<LinearPart<CRat>>(l->l).eigenvalues())
                                                e.push_back(to_creal(z));
                                            return LinearPart<CReal>(e);
                                        }();
            run_pipeline(ctx, L, series_as_creal(ghat->s), weight_as_real(m->w), order, Q, pol, d,
                         report_json, table_csv);
        }
    });
}

/* --- fixtures ------------------------------------------------------------ */

int clm_fixtures_write(clm_ctx* ctx, const char* kind, const char* out_dir,
                       const char* params_json, char** manifest_json) {
    return guarded(ctx, [&] {
        std::map<std::string, std::string> params;
        long seed = 0;
        if (params_json && *params_json) {
            json p = parse_json(params_json);
            for (const auto& [k, v] : p.items())
                params[k] = v.is_string() ? v.get<std::string>() : v.dump();
            if (p.contains("seed")) seed = p["seed"].is_number() ? p["seed"].get<long>() : 0;
        }
        auto files = make_fixtures(kind ? kind : "all", params);
        std::filesystem::path dir(out_dir ? out_dir : ".");
        std::filesystem::create_directories(dir);
        json manifest{{"kind", kind ? kind : "all"}, {"seed", seed}, {"files", json::array()}};
        for (const auto& f : files) {
            write_file_atomic(dir / f.name, f.content.dump(2) + "\n");
            manifest["files"].push_back(json{{"name", f.name}, {"description", f.description}});
        }
        write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
        if (manifest_json) *manifest_json = dump_json(manifest);
    });
}

}  // extern "C"
