// crsch: evaluate pseudo-hermitian frame/curvature/Schwarzian data at a point
// and run the seeded verification suites, with JSON reports.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crsch/verify.hpp"

using namespace crsch;
using nlohmann::json;

namespace {

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> p;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            p.push_back(std::stod(tok, &used));
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
                ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("--point: bad coordinate '" + tok + "'");
        }
    }
    if (p.empty() || p.size() % 2 == 0)
        throw ConfigError("--point: expected an odd-length list x1,y1,...,t");
    return p;
}

ScalarField parse_field(const std::string& text, const char* flag) {
    try {
        return field_from_text(text);
    } catch (const ParseError& e) {
        throw ConfigError(std::string(flag) + ": " + e.what());
    }
}

Model model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("model: expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.value("n", 0);
    if (kind == "heisenberg") return make_heisenberg(n);
    if (kind == "rigid") {
        if (!j.contains("Phi")) throw ConfigError("model: rigid needs \"Phi\"");
        return make_rigid(n, parse_field(j.at("Phi").get<std::string>(), "Phi"));
    }
    if (kind == "conformal") {
        if (!j.contains("phi")) throw ConfigError("model: conformal needs \"phi\"");
        Model base = j.contains("base") && !j.at("base").is_null()
                         ? model_from_json(j.at("base"))
                         : make_heisenberg(n);
        return apply_conformal(base, parse_field(j.at("phi").get<std::string>(), "phi"));
    }
    throw ConfigError("model: unknown kind '" + kind + "'");
}

struct ModelFlags {
    std::string file, kind;
    int n = 0;
    std::string phi, Phi;
};

Model build_model(const ModelFlags& mf) {
    if (!mf.file.empty()) {
        std::ifstream in(mf.file);
        if (!in) throw ConfigError("--model-file: cannot open " + mf.file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError("--model-file: " + std::string(e.what()));
        }
        return model_from_json(j);
    }
    if (mf.kind.empty()) throw ConfigError("specify --model-file or --model");
    json j;
    j["kind"] = mf.kind;
    j["n"] = mf.n;
    if (!mf.phi.empty()) j["phi"] = mf.phi;
    if (!mf.Phi.empty()) j["Phi"] = mf.Phi;
    return model_from_json(j);
}

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
    cmd->add_option("--model-file", mf.file, "Model spec JSON file");
    cmd->add_option("--model", mf.kind, "Model kind: heisenberg|rigid|conformal");
    cmd->add_option("--n", mf.n, "CR dimension");
    cmd->add_option("--phi", mf.phi, "Conformal exponent (field expression)");
    cmd->add_option("--Phi", mf.Phi, "Rigid defining-function term (field expression)");
}

json cvec(cplx v) { return json::array({v.real(), v.imag()}); }

json cmat(const std::vector<std::vector<cplx>>& m) {
    json j = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (cplx v : row) r.push_back(cvec(v));
        j.push_back(r);
    }
    return j;
}

std::string fmt(cplx v) {
    std::ostringstream os;
    os.precision(10);
    const double re = v.real() == 0 ? 0.0 : v.real();
    const double im = v.imag() == 0 ? 0.0 : v.imag();
    os << re;
    if (im >= 0)
        os << " + " << im << "i";
    else
        os << " - " << -im << "i";
    return os.str();
}

void print_cmat(const std::string& name, const std::vector<std::vector<cplx>>& m) {
    for (size_t a = 0; a < m.size(); ++a)
        for (size_t b = 0; b < m[a].size(); ++b)
            std::cout << "  " << name << "[" << a + 1 << "][" << b + 1 << "] = "
                      << fmt(m[a][b]) << "\n";
}

void emit(const json& j, bool as_json, const std::string& out,
          const std::function<void()>& table) {
    if (!out.empty()) {
        std::ofstream o(out);
        if (!o) throw ConfigError("--out: cannot open " + out);
        o << j.dump(2) << "\n";
    }
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        table();
}

int cmd_evaluate(const Model& m, const std::string& what, const std::string& field_text,
                 const std::vector<double>& p, bool as_json, const std::string& out) {
    if (p.size() != static_cast<size_t>(2 * m.n + 1))
        throw ConfigError("--point: expected " + std::to_string(2 * m.n + 1) +
                          " coordinates for n = " + std::to_string(m.n));
    json j;
    j["model"] = json::parse(Report{.model = m}.to_json())["model"];
    j["point"] = p;
    j["what"] = what;

    if (what == "frame") {
        FrameData F = frame_data_at(m, p);
        j["levi"] = cmat(F.levi);
        j["torsion"] = cmat(F.torsion);
        j["reeb"] = json::array();
        for (cplx v : F.reeb) j["reeb"].push_back(cvec(v));
        j["theta"] = json::array();
        for (cplx v : F.theta) j["theta"].push_back(cvec(v));
        j["frame_Z"] = cmat(F.frame_Z);
        j["coframe"] = cmat(F.coframe);
        emit(j, as_json, out, [&] {
            std::cout << "frame at point (" << m.describe() << ")\n";
            print_cmat("h", F.levi);
            print_cmat("A", F.torsion);
        });
    } else if (what == "curvature") {
        Curvature C = curvature_at(m, p);
        j["ricci"] = cmat(C.ricci);
        j["scalar"] = C.scalar;
        j["schouten"] = cmat(C.schouten);
        j["eta"] = C.eta;
        j["eta_fit_residual"] = C.eta_fit_residual;
        j["constant_curvature"] = C.constant_curvature;
        j["closure_residual"] = C.closure_residual;
        emit(j, as_json, out, [&] {
            std::cout << "curvature at point (" << m.describe() << ")\n";
            std::cout << "  scalar = " << C.scalar << "\n";
            print_cmat("Ric", C.ricci);
            std::cout << "  eta = " << C.eta << " (fit residual " << C.eta_fit_residual
                      << ", constant-curvature " << (C.constant_curvature ? "yes" : "no")
                      << ")\n";
        });
    } else if (what == "schwarzian" || what == "operators") {
        if (field_text.empty()) throw ConfigError("--field is required for " + what);
        ScalarField f = parse_field(field_text, "--field");
        j["field"] = field_text;
        if (what == "schwarzian") {
            Schwarzian S = schwarzian_at(m, f, p);
            j["b_holo"] = cmat(S.b_holo);
            j["b_mixed"] = cmat(S.b_mixed);
            j["frame"] = S.frame;
            emit(j, as_json, out, [&] {
                std::cout << "Schwarzian tensor of " << field_text << " (" << m.describe()
                          << ")\n";
                print_cmat("B_holo", S.b_holo);
                print_cmat("B_mixed", S.b_mixed);
            });
        } else {
            OperatorValues V = operators_at(m, f, p);
            j["sublaplacian"] = V.sublaplacian;
            j["kohn"] = cvec(V.kohn);
            j["reeb"] = cvec(V.reeb);
            j["dbar_norm2"] = V.dbar_norm2;
            j["graham_lee"] = json::array();
            for (cplx v : V.graham_lee) j["graham_lee"].push_back(cvec(v));
            emit(j, as_json, out, [&] {
                std::cout << "operators on " << field_text << " (" << m.describe() << ")\n";
                std::cout << "  Delta_b f   = " << V.sublaplacian << "\n";
                std::cout << "  Box_b f     = " << fmt(V.kohn) << "\n";
                std::cout << "  f_0         = " << fmt(V.reeb) << "\n";
                std::cout << "  |dbar f|^2  = " << V.dbar_norm2 << "\n";
                for (size_t a = 0; a < V.graham_lee.size(); ++a)
                    std::cout << "  P_" << a + 1 << " f       = " << fmt(V.graham_lee[a])
                              << "\n";
            });
        }
    } else {
        throw ConfigError("evaluate: unknown target '" + what +
                          "' (frame|schwarzian|curvature|operators)");
    }
    return 0;
}

int cmd_verify(const Model& m, const std::string& suite, int samples, std::uint64_t seed,
               const std::vector<std::string>& tols, bool as_json, const std::string& out) {
    SuiteConfig cfg;
    cfg.model = m;
    cfg.suite = suite;
    cfg.samples = samples;
    cfg.seed = seed;
    for (const std::string& t : tols) {
        size_t eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("--tol: expected name=value, got " + t);
        try {
            cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--tol: bad value in " + t);
        }
    }
    Report rep = run_suite(cfg);
    json j = json::parse(rep.to_json());
    emit(j, as_json, out, [&] {
        std::cout << "suite " << rep.suite << " on " << m.describe() << " (seed " << rep.seed
                  << ", " << rep.samples << " samples)\n";
        for (const CheckResult& c : rep.checks)
            std::cout << "  " << (c.pass ? "PASS" : (c.asserted ? "FAIL" : "info")) << "  "
                      << c.name << "  max residual " << c.max_residual << " (tol "
                      << c.tolerance << ")\n";
        std::cout << (rep.all_passed() ? "all checks passed" : "CHECK FAILURE") << "\n";
    });
    return rep.all_passed() ? 0 : 1;
}

int cmd_witness(int n, const std::vector<double>& p, const std::string& omega_text,
                bool as_json, const std::string& out) {
    if (n < 1) throw ConfigError("--n must be at least 1");
    if (p.size() != static_cast<size_t>(2 * n + 1))
        throw ConfigError("--point: expected " + std::to_string(2 * n + 1) +
                          " coordinates for n = " + std::to_string(n));
    json jo;
    try {
        jo = json::parse(omega_text);
    } catch (const json::exception& e) {
        throw ConfigError("--omega: " + std::string(e.what()));
    }
    if (!jo.is_array()) throw ConfigError("--omega: expected a JSON array");
    std::vector<cplx> omega;
    for (const json& e : jo) {
        if (e.is_number())
            omega.push_back(cplx(e.get<double>(), 0));
        else if (e.is_array() && e.size() == 2)
            omega.push_back(cplx(e[0].get<double>(), e[1].get<double>()));
        else
            throw ConfigError("--omega: entries must be reals or [re,im] pairs");
    }
    if (omega.size() != static_cast<size_t>(n))
        throw ConfigError("--omega: expected " + std::to_string(n) + " entries, got " +
                          std::to_string(omega.size()));

    JLParams P = integrability_witness(n, p, omega);
    Model m = make_heisenberg(n);
    ScalarField phi = field_from_expr(jl_field(P, n));
    CovariantDerivatives cd = covariant_jet(m, phi, p, 1);
    double residual = 0;
    for (int a = 0; a < n; ++a)
        residual = std::max(residual, std::abs(cd.d_hol[a] - omega[a]));

    json j;
    j["kappa"] = cvec(P.kappa);
    j["mu"] = json::array();
    for (cplx v : P.mu) j["mu"].push_back(cvec(v));
    j["lambda"] = cvec(P.lambda);
    j["C"] = P.c;
    j["field"] = print_field_expr(*phi.expr);
    j["gradient_residual"] = residual;
    emit(j, as_json, out, [&] {
        std::cout << "local solution with prescribed gradient at the point\n";
        std::cout << "  kappa  = " << fmt(P.kappa) << "\n";
        for (size_t a = 0; a < P.mu.size(); ++a)
            std::cout << "  mu_" << a + 1 << "   = " << fmt(P.mu[a]) << "\n";
        std::cout << "  lambda = " << fmt(P.lambda) << "\n";
        std::cout << "  C      = " << P.c << "\n";
        std::cout << "  gradient match residual = " << residual << "\n";
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-hermitian CR geometry engine: frames, Webster curvature, "
                 "the CR Schwarzian tensor, and seeded verification suites"};
    app.require_subcommand(1);

    ModelFlags mf;
    std::string what = "frame", field_text, point_text, out;
    std::string suite = "all", omega_text;
    int samples = 50, wn = 1;
    std::uint64_t seed = 0;
    std::vector<std::string> tols;
    bool as_json = false;

    CLI::App* ev = app.add_subcommand("evaluate", "Evaluate geometric data at a point");
    add_model_flags(ev, mf);
    ev->add_option("what", what, "frame|schwarzian|curvature|operators");
    ev->add_option("--field", field_text, "Scalar field (for schwarzian/operators)");
    ev->add_option("--point", point_text, "Point as x1,y1,...,t");
    ev->add_flag("--json", as_json, "Print JSON instead of a table");
    ev->add_option("--out", out, "Write JSON to a file");

    CLI::App* sw = app.add_subcommand("schwarzian", "Schwarzian tensor at a point "
                                                    "(alias of evaluate schwarzian)");
    add_model_flags(sw, mf);
    sw->add_option("--field", field_text, "Scalar field");
    sw->add_option("--phi-field", field_text, "Alias of --field");
    sw->add_option("--point", point_text, "Point as x1,y1,...,t");
    sw->add_flag("--json", as_json, "Print JSON instead of a table");
    sw->add_option("--out", out, "Write JSON to a file");

    CLI::App* vf = app.add_subcommand("verify", "Run a verification suite");
    add_model_flags(vf, mf);
    vf->add_option("--suite", suite, "all|jerison-lee|<check name>");
    vf->add_option("--samples", samples, "Random draws per check");
    vf->add_option("--seed", seed, "RNG seed");
    vf->add_option("--tol", tols, "Tolerance override name=value (repeatable)");
    vf->add_flag("--json", as_json, "Print the JSON report");
    vf->add_option("--out", out, "Write the JSON report to a file");

    CLI::App* wi = app.add_subcommand("witness", "Local solution with prescribed gradient");
    wi->add_option("--n", wn, "CR dimension")->required();
    wi->add_option("--point", point_text, "Point as x1,y1,...,t");
    wi->add_option("--omega", omega_text, "Prescribed gradient: JSON array of [re,im]")
        ->required();
    wi->add_flag("--json", as_json, "Print JSON instead of a table");
    wi->add_option("--out", out, "Write JSON to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto point_for = [&](int n) {
        return point_text.empty() ? std::vector<double>(2 * n + 1, 0.0)
                                  : parse_point(point_text);
    };
    try {
        if (ev->parsed()) {
            Model m = build_model(mf);
            return cmd_evaluate(m, what, field_text, point_for(m.n), as_json, out);
        }
        if (sw->parsed()) {
            Model m = build_model(mf);
            return cmd_evaluate(m, "schwarzian", field_text, point_for(m.n), as_json, out);
        }
        if (vf->parsed()) return cmd_verify(build_model(mf), suite, samples, seed, tols,
                                            as_json, out);
        if (wi->parsed()) return cmd_witness(wn, point_for(wn), omega_text, as_json, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what();
        if (!e.detail().empty()) std::cerr << " (" << e.detail() << ")";
        std::cerr << "\n";
        return 3;
    }
    return 2;
}
