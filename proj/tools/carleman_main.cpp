// carleman: batch front end for the Denjoy-Carleman weight calculus and the
// truncated small-divisor linearization pipeline.  All functionality is
// reached through the C API in carleman.h; this translation unit only does
// argument parsing and file plumbing.
//
// Exit codes: 0 ok, 1 I/O or schema error, 2 strict-mode predicate finding,
// 3 resonance, 4 internal invariant failure.

#include <carleman.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

clm_ctx* g_ctx = nullptr;

int map_status(int status) {
    switch (status) {
        case CLM_OK: return 0;
        case CLM_ERR_IO: return 1;
        case CLM_ERR_DOMAIN: return 1;
        case CLM_ERR_RESONANCE: return 3;
        default: return 4;
    }
}

void check(int status) {
    if (status == CLM_OK) return;
    std::cerr << "error: " << clm_ctx_last_error(g_ctx) << "\n";
    std::exit(map_status(status));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read " << path << "\n";
        std::exit(1);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    auto tmp = path + ".tmp~";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot write " << path << "\n";
            std::exit(1);
        }
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

struct Owned {
    char* p = nullptr;
    ~Owned() { clm_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Common {
    std::string out;
    bool strict = false;
    long seed = 0;
    int precision = 0;
    std::string grid;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out, "write the JSON report here instead of stdout");
    cmd->add_flag("--strict", c.strict, "exit 2 when a predicate finding is negative");
    cmd->add_option("--seed", c.seed, "seed recorded in the output");
    cmd->add_option("--precision", c.precision, "mantissa bits for inexact mode (>= 128)");
    cmd->add_option("--grid", c.grid, "lambda search grid, e.g. 1,2,4,8,16");
}

void apply_common(const Common& c) {
    if (c.precision > 0) check(clm_ctx_set_precision_bits(g_ctx, c.precision));
    if (!c.grid.empty()) check(clm_ctx_set_lambda_grid(g_ctx, c.grid.c_str()));
}

// wrap a report with run metadata and emit it
void emit(const Common& c, const std::string& command, const std::string& report_text) {
    json wrapped = json::parse(report_text);
    wrapped["command"] = command;
    wrapped["seed"] = c.seed;
    write_output(c.out, wrapped.dump(2) + "\n");
}

bool any_predicate_failed(const json& rep) {
    if (rep.is_object()) {
        if (rep.contains("holds_to_horizon") && rep["holds_to_horizon"].is_boolean() &&
            !rep["holds_to_horizon"].get<bool>())
            return true;
        for (const auto& [k, v] : rep.items())
            if (any_predicate_failed(v)) return true;
    } else if (rep.is_array()) {
        for (const auto& v : rep)
            if (any_predicate_failed(v)) return true;
    }
    return false;
}

clm_weight* parse_weight_file(const std::string& path) {
    clm_weight* w = nullptr;
    check(clm_weight_parse(g_ctx, read_file(path).c_str(), &w));
    return w;
}

clm_series* parse_series_file(const std::string& path) {
    clm_series* s = nullptr;
    check(clm_series_parse(g_ctx, read_file(path).c_str(), &s));
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"carleman: weight-sequence calculus, weighted majorants, and "
                 "truncated small-divisor linearization"};
    app.require_subcommand(1);
    g_ctx = clm_ctx_new();

    // classify-weight --------------------------------------------------------
    std::string cw_input;
    Common cw;
    auto* classify = app.add_subcommand("classify-weight",
                                        "implication chain, analytic type, and shift duality");
    classify->add_option("weight", cw_input, "weight JSON file")->required();
    add_common(classify, cw);
    classify->callback([&] {
        apply_common(cw);
        clm_weight* w = parse_weight_file(cw_input);
        Owned rep;
        check(clm_weight_classify(g_ctx, w, &rep.p));
        emit(cw, "classify-weight", rep.str());
        bool failed = any_predicate_failed(json::parse(rep.str()));
        clm_weight_free(w);
        if (cw.strict && failed) std::exit(2);
    });

    // regularize --------------------------------------------------------------
    std::string rg_input;
    Common rg;
    auto* regularize = app.add_subcommand("regularize", "largest log-convex minorant");
    regularize->add_option("weight", rg_input, "weight JSON file")->required();
    add_common(regularize, rg);
    regularize->callback([&] {
        apply_common(rg);
        clm_weight* w = parse_weight_file(rg_input);
        Owned rep;
        check(clm_weight_regularize(g_ctx, w, &rep.p));
        emit(rg, "regularize", rep.str());
        clm_weight_free(w);
    });

    // star ---------------------------------------------------------------------
    std::string st_m, st_w;
    Common st;
    auto* star = app.add_subcommand("star", "pointwise product m*w of two weights");
    star->add_option("m", st_m, "first weight JSON")->required();
    star->add_option("w", st_w, "second weight JSON")->required();
    add_common(star, st);
    star->callback([&] {
        apply_common(st);
        clm_weight *m = parse_weight_file(st_m), *w = parse_weight_file(st_w);
        Owned rep;
        check(clm_weight_star(g_ctx, m, w, &rep.p));
        emit(st, "star", rep.str());
        clm_weight_free(m);
        clm_weight_free(w);
    });

    // omega ----------------------------------------------------------------------
    std::string om_input;
    int om_Q = 16;
    Common om;
    auto* omega = app.add_subcommand("omega", "nonresonance scan: E_k table and Omega(q)");
    omega->add_option("eigen", om_input, "eigenvalue fixture JSON")->required();
    omega->add_option("--Q", om_Q, "max degree to tabulate");
    add_common(omega, om);
    omega->callback([&] {
        apply_common(om);
        clm_linear* l = nullptr;
        check(clm_linear_parse(g_ctx, read_file(om_input).c_str(), &l));
        Owned rep;
        check(clm_omega_scan(g_ctx, l, om_Q, &rep.p));
        emit(om, "omega", rep.str());
        clm_linear_free(l);
    });

    // dominate ----------------------------------------------------------------
    std::string dm_input, dm_policy = "minimal", dm_delta;
    int dm_Q = 0;
    Common dm;
    auto* dominate = app.add_subcommand("dominate", "dominating-weight certificate from an Omega table");
    dominate->add_option("omega", dm_input, "Omega table, omega-scan report, or eigenvalue JSON")->required();
    dominate->add_option("--policy", dm_policy, "minimal | constant | gevrey");
    dominate->add_option("--delta", dm_delta, "delta for the gevrey policy");
    dominate->add_option("--Q", dm_Q, "scan depth when the input is an eigenvalue fixture");
    add_common(dominate, dm);
    dominate->callback([&] {
        apply_common(dm);
        std::string text = read_file(dm_input);
        if (dm_Q > 0) {
            json j = json::parse(text, nullptr, false);
            if (!j.is_discarded() && j.contains("eigenvalues")) {
                j["Q"] = dm_Q;
                text = j.dump();
            }
        }
        Owned rep;
        check(clm_dominate(g_ctx, text.c_str(), dm_policy.c_str(),
                           dm_delta.empty() ? nullptr : dm_delta.c_str(), &rep.p));
        emit(dm, "dominate", rep.str());
        if (dm.strict && !json::parse(rep.str()).value("feasible", true)) std::exit(2);
    });

    // linearize ------------------------------------------------------------------
    std::string ln_eigen, ln_map, ln_weight, ln_policy = "constant", ln_delta, ln_csv;
    int ln_order = 8, ln_Q = 0;
    Common ln;
    auto* linearize = app.add_subcommand("linearize", "full Part-I pipeline with certificate and CSV table");
    linearize->add_option("eigen", ln_eigen, "eigenvalue fixture JSON")->required();
    linearize->add_option("map", ln_map, "nonlinearity ghat series JSON")->required();
    linearize->add_option("weight", ln_weight, "weight JSON")->required();
    linearize->add_option("--order", ln_order, "truncation order (default 8)");
    linearize->add_option("--Q", ln_Q, "Omega tabulation depth (default max(16, order))");
    linearize->add_option("--policy", ln_policy, "domination policy: minimal | constant | gevrey");
    linearize->add_option("--delta", ln_delta, "delta for the gevrey policy");
    linearize->add_option("--csv", ln_csv, "write the coefficient table CSV here");
    add_common(linearize, ln);
    linearize->callback([&] {
        apply_common(ln);
        clm_linear* l = nullptr;
        check(clm_linear_parse(g_ctx, read_file(ln_eigen).c_str(), &l));
        clm_series* g = parse_series_file(ln_map);
        clm_weight* m = parse_weight_file(ln_weight);
        Owned rep, csv;
        check(clm_linearize_pipeline(g_ctx, l, g, m, ln_order, ln_Q, ln_policy.c_str(),
                                     ln_delta.empty() ? nullptr : ln_delta.c_str(), &rep.p, &csv.p));
        emit(ln, "linearize", rep.str());
        if (!ln_csv.empty()) write_output(ln_csv, csv.str());
        bool pass = json::parse(rep.str())["summary"].value("pass", false);
        clm_linear_free(l);
        clm_series_free(g);
        clm_weight_free(m);
        if (ln.strict && !pass) std::exit(2);
    });

    // fixtures ------------------------------------------------------------------
    std::string fx_kind = "all", fx_dir = "fixtures", fx_delta, fx_Q;
    Common fx;
    auto* fixtures = app.add_subcommand("fixtures", "write the bundled fixture corpus");
    fixtures->add_option("--kind", fx_kind,
                         "weights | poincare | siegel | gevrey-divisors | liouville | maps | all");
    fixtures->add_option("--dir", fx_dir, "output directory");
    fixtures->add_option("--delta", fx_delta, "delta for gevrey-divisors");
    fixtures->add_option("--Q", fx_Q, "table depth for synthetic Omega fixtures");
    add_common(fixtures, fx);
    fixtures->callback([&] {
        apply_common(fx);
        json params{{"seed", fx.seed}};
        if (!fx_delta.empty()) params["delta"] = fx_delta;
        if (!fx_Q.empty()) params["Q"] = fx_Q;
        Owned manifest;
        check(clm_fixtures_write(g_ctx, fx_kind.c_str(), fx_dir.c_str(), params.dump().c_str(),
                                 &manifest.p));
        emit(fx, "fixtures", manifest.str());
    });

    // compose-check ---------------------------------------------------------------
    std::string cc_g, cc_h, cc_w, cc_m, cc_lambda = "1";
    int cc_order = 8;
    Common cc;
    auto* compose = app.add_subcommand("compose-check",
                                       "compose two series; with weights, run the majorant inequality");
    compose->add_option("outer", cc_g, "outer series JSON")->required();
    compose->add_option("inner", cc_h, "inner series JSON")->required();
    compose->add_option("--order", cc_order, "truncation order");
    compose->add_option("--w", cc_w, "outer weight JSON (enables the majorant check)");
    compose->add_option("--m", cc_m, "inner weight JSON (enables the majorant check)");
    compose->add_option("--lambda", cc_lambda, "lambda of the composition hypothesis");
    add_common(compose, cc);
    compose->callback([&] {
        apply_common(cc);
        clm_series *g = parse_series_file(cc_g), *h = parse_series_file(cc_h);
        Owned composed;
        check(clm_series_compose(g_ctx, g, h, cc_order, &composed.p));
        json rep{{"composition", json::parse(composed.str())}};
        bool failed = false;
        if (!cc_w.empty() && !cc_m.empty()) {
            clm_weight *w = parse_weight_file(cc_w), *m = parse_weight_file(cc_m);
            Owned ml;
            check(clm_main_lemma_check(g_ctx, g, h, w, m, cc_lambda.c_str(), cc_order, &ml.p));
            rep["main_lemma"] = json::parse(ml.str());
            failed = !rep["main_lemma"].value("conclusion_holds", false);
            clm_weight_free(w);
            clm_weight_free(m);
        }
        emit(cc, "compose-check", rep.dump());
        clm_series_free(g);
        clm_series_free(h);
        if (cc.strict && failed) std::exit(2);
    });

    // flow-check -------------------------------------------------------------------
    std::string fl_v, fl_time, fl_space;
    int fl_order = 10;
    Common fl;
    auto* flow = app.add_subcommand("flow-check", "flow coefficients vs the majorant comparison series");
    flow->add_option("field", fl_v, "vector field series JSON in (t, x)")->required();
    flow->add_option("--order", fl_order, "total truncation order");
    flow->add_option("--time-weight", fl_time, "time weight JSON (default constant)");
    flow->add_option("--space-weight", fl_space, "space weight JSON (default constant)");
    add_common(flow, fl);
    flow->callback([&] {
        apply_common(fl);
        clm_series* v = parse_series_file(fl_v);
        clm_weight *mt = nullptr, *mx = nullptr;
        if (fl_time.empty())
            check(clm_weight_generate(g_ctx, "constant", fl_order, nullptr, &mt));
        else
            mt = parse_weight_file(fl_time);
        if (fl_space.empty())
            check(clm_weight_generate(g_ctx, "constant", fl_order, nullptr, &mx));
        else
            mx = parse_weight_file(fl_space);
        Owned rep;
        check(clm_flow_check(g_ctx, v, mt, mx, fl_order, &rep.p));
        emit(fl, "flow-check", rep.str());
        bool holds = json::parse(rep.str()).value("holds", false);
        clm_series_free(v);
        clm_weight_free(mt);
        clm_weight_free(mx);
        if (fl.strict && !holds) std::exit(2);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        clm_ctx_free(g_ctx);
        return code == 0 ? 0 : 1;
    }
    clm_ctx_free(g_ctx);
    return 0;
}
