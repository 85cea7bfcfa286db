#include "jostforge/cli/cli.hpp"

#include "jostforge/harness/harness.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

namespace jostforge::cli {

using exact::Poly;
using exact::RationalFunction;
using nlohmann::json;

const RationalFunction& PotentialSpec::require_rational() const {
    if (!rational) to_rational(*expression);  // throws ExpAtomInRational with a position
    return *rational;
}

scattering::PotentialEval PotentialSpec::evaluator() const {
    if (rational) return scattering::PotentialEval::from_rational(*rational);
    return to_potential(*expression);
}

std::string PotentialSpec::to_string() const {
    if (rational) return rational->to_string();
    return to_exp_rational(*expression).to_string();
}

namespace {

const std::regex& exact_pattern() {
    static const std::regex re(R"(\s*[+-]?\d+(/\d+)?\s*)");
    return re;
}

mpq_class exact_real(const json& j, const std::string& where) {
    if (!j.is_string()) throw InputError(where + ": exact numbers are strings \"p/q\"");
    auto s = j.get<std::string>();
    if (!std::regex_match(s, exact_pattern())) throw InputError(where + ": \"" + s + "\" is not of the form p/q");
    try {
        return GaussianRational::parse_rational(s);
    } catch (const std::exception& e) {
        throw InputError(where + ": " + e.what());
    }
}

// "p/q" or ["re", "im"]
GaussianRational exact_complex(const json& j, const std::string& where) {
    if (j.is_array()) {
        if (j.size() != 2) throw InputError(where + ": complex values are [re, im]");
        return {exact_real(j[0], where), exact_real(j[1], where)};
    }
    return GaussianRational(exact_real(j, where));
}

double float_real(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    return exact_real(j, where).get_d();
}

Complex float_complex(const json& j, const std::string& where) {
    if (j.is_array()) {
        if (j.size() != 2) throw InputError(where + ": complex values are [re, im]");
        return {float_real(j[0], where), float_real(j[1], where)};
    }
    return {float_real(j, where), 0.0};
}

Poly coeff_poly(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": coefficient list expected");
    std::vector<GaussianRational> c;
    for (std::size_t n = 0; n < j.size(); ++n) c.push_back(exact_complex(j[n], where + "[" + std::to_string(n) + "]"));
    return Poly(std::move(c));
}

int positive_int(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long>() < 1 || j.get<long>() > 64)
        throw InputError(where + ": positive integer expected");
    return j.get<int>();
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json kappa_pair_json(const kovacic::KappaPair& p) {
    return {{"plus", p.plus.to_string()}, {"minus", p.minus.to_string()}};
}

json case_a_json(const kovacic::CaseAScreen& s) {
    json out;
    out["verdict"] = kovacic::to_string(s.verdict);
    out["symbolic_k"] = s.symbolic_k;
    out["pole_kappas"] = json::array();
    for (const auto& p : s.pole_kappas) out["pole_kappas"].push_back(kappa_pair_json(p));
    out["infinity_kappa"] = kappa_pair_json(s.infinity_kappa);
    out["d_values"] = json::array();
    for (const auto& d : s.d_values) out["d_values"].push_back({{"signs", d.signs}, {"d", d.d.to_string()}});
    if (s.symbolic_k) {
        out["exceptional_k"] = s.exceptional_k;
        out["exceptional_family"] = s.exceptional_family;
    }
    return out;
}

json profile_json(const kovacic::PoleProfile& p) {
    json poles = json::array();
    for (const auto& pole : p.poles) {
        json e{{"order", pole.order}};
        if (pole.exact) e["location"] = pole.location.to_string();
        else e["location"] = complex_json(pole.value);
        poles.push_back(std::move(e));
    }
    return poles;
}

std::string tol_source(std::optional<double> flag, double& tol) {
    if (flag) {
        tol = *flag;
        return "flag";
    }
    if (const char* env = std::getenv("JOSTFORGE_TOL")) {
        std::string s(env);
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || !(v > 0.0))
            throw InputError("JOSTFORGE_TOL: positive number expected, got \"" + s + "\"");
        tol = v;
        return "JOSTFORGE_TOL";
    }
    return "default";
}

}  // namespace

PotentialSpec parse_potential_json(const json& j) {
    if (!j.is_object()) throw InputError("potential file: JSON object expected");
    int forms = static_cast<int>(j.contains("partial_fractions")) + static_cast<int>(j.contains("expression")) +
                static_cast<int>(j.contains("rational"));
    if (forms != 1) throw InputError("potential file: exactly one of partial_fractions, expression, rational");
    PotentialSpec spec;
    if (j.contains("expression")) {
        if (!j["expression"].is_string()) throw InputError("expression: string expected");
        spec.expression = parse_expression(j["expression"].get<std::string>());
        if (!spec.expression->has_exp()) spec.rational = to_rational(*spec.expression);
        return spec;
    }
    if (j.contains("partial_fractions")) {
        const auto& terms = j["partial_fractions"];
        if (!terms.is_array()) throw InputError("partial_fractions: list expected");
        RationalFunction u;
        for (std::size_t n = 0; n < terms.size(); ++n) {
            std::string where = "partial_fractions[" + std::to_string(n) + "]";
            const auto& t = terms[n];
            if (!t.is_object() || !t.contains("pole") || !t.contains("order") || !t.contains("coeff"))
                throw InputError(where + ": needs pole, order and coeff");
            auto pole = exact_complex(t["pole"], where + ".pole");
            int order = positive_int(t["order"], where + ".order");
            auto c = exact_complex(t["coeff"], where + ".coeff");
            u += RationalFunction::normalize(Poly(c), exact::pow(Poly::linear_factor(pole), order));
        }
        spec.rational = u;
        return spec;
    }
    const auto& r = j["rational"];
    if (!r.is_object() || !r.contains("num")) throw InputError("rational: needs num and den or den_factors");
    Poly num = coeff_poly(r["num"], "rational.num");
    Poly den(1);
    if (r.contains("den") == r.contains("den_factors")) throw InputError("rational: exactly one of den, den_factors");
    if (r.contains("den")) {
        den = coeff_poly(r["den"], "rational.den");
    } else {
        const auto& fs = r["den_factors"];
        if (!fs.is_array()) throw InputError("rational.den_factors: list expected");
        for (std::size_t n = 0; n < fs.size(); ++n) {
            std::string where = "rational.den_factors[" + std::to_string(n) + "]";
            if (!fs[n].is_object() || !fs[n].contains("root") || !fs[n].contains("order"))
                throw InputError(where + ": needs root and order");
            den *= exact::pow(Poly::linear_factor(exact_complex(fs[n]["root"], where + ".root")),
                              positive_int(fs[n]["order"], where + ".order"));
        }
    }
    if (den.is_zero()) throw InputError("rational: zero denominator");
    spec.rational = RationalFunction::normalize(num, den);
    return spec;
}

PotentialSpec load_potential(const std::string& path) { return parse_potential_json(read_json(path)); }

SpectralFile parse_spectral_json(const json& j) {
    if (!j.is_object() || !j.contains("bound_states") || !j["bound_states"].is_array())
        throw InputError("spectral file: object with a bound_states list expected");
    SpectralFile f;
    if (j.contains("exact")) {
        if (!j["exact"].is_boolean()) throw InputError("exact: boolean expected");
        f.exact = j["exact"].get<bool>();
    }
    const auto& states = j["bound_states"];
    for (std::size_t n = 0; n < states.size(); ++n) {
        std::string where = "bound_states[" + std::to_string(n) + "]";
        const auto& s = states[n];
        for (const char* key : {"k", "multiplicity", "a_jet", "b_jet"})
            if (!s.is_object() || !s.contains(key)) throw InputError(where + ": missing " + key);
        int nu = positive_int(s["multiplicity"], where + ".multiplicity");
        if (!s["a_jet"].is_array() || !s["b_jet"].is_array() || s["a_jet"].size() != static_cast<std::size_t>(nu) ||
            s["b_jet"].size() != static_cast<std::size_t>(nu))
            throw InputError(where + ": a_jet and b_jet need exactly multiplicity entries");
        if (f.exact) {
            synthesis::BoundState<GaussianRational> b;
            b.k = exact_complex(s["k"], where + ".k");
            if (sgn(b.k.im()) <= 0) throw InputError(where + ".k: Im k must be positive");
            b.nu = nu;
            for (const auto& v : s["a_jet"]) b.a_jet.push_back(exact_complex(v, where + ".a_jet"));
            for (const auto& v : s["b_jet"]) b.b_jet.push_back(exact_complex(v, where + ".b_jet"));
            f.exact_data.entries.push_back(std::move(b));
        } else {
            synthesis::BoundState<Complex> b;
            b.k = float_complex(s["k"], where + ".k");
            if (!(b.k.imag() > 0.0)) throw InputError(where + ".k: Im k must be positive");
            b.nu = nu;
            for (const auto& v : s["a_jet"]) b.a_jet.push_back(float_complex(v, where + ".a_jet"));
            for (const auto& v : s["b_jet"]) b.b_jet.push_back(float_complex(v, where + ".b_jet"));
            f.numeric_data.entries.push_back(std::move(b));
        }
    }
    try {
        if (f.exact) synthesis::validate(f.exact_data);
        else synthesis::validate(f.numeric_data);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("spectral data: ") + e.what());
    }
    return f;
}

SpectralFile load_spectral(const std::string& path) { return parse_spectral_json(read_json(path)); }

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InputError("grid \"" + text + "\": expected a:b:n");
    auto num = [&](const std::string& s, double& v) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
            throw InputError("grid \"" + text + "\": bad number \"" + s + "\"");
    };
    double a = 0, b = 0;
    num(parts[0], a);
    num(parts[1], b);
    long n = 0;
    auto [p, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (ec != std::errc() || p != parts[2].data() + parts[2].size() || n < 1 || n > 1000000)
        throw InputError("grid \"" + text + "\": n must be a positive integer");
    std::vector<double> out;
    for (long j = 0; j < n; ++j) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(j) / static_cast<double>(n - 1));
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, p);
}

json kovacic_json(const kovacic::KovacicReport& r) {
    json out;
    if (r.k2) out["k2"] = r.k2->to_string();
    if (r.k) out["k"] = *r.k;
    out["verdict"] = kovacic::to_string(r.verdict);
    out["poles"] = profile_json(r.profile);
    out["order_at_infinity"] = r.profile.order_at_infinity;
    out["necessary_conditions"] = {{"a", r.necessary.a}, {"b", r.necessary.b}, {"c", r.necessary.c}};
    if (r.case_a) out["case_a"] = case_a_json(*r.case_a);
    json cb;
    cb["families"] = r.case_b.families;
    cb["candidates"] = json::array();
    for (const auto& c : r.case_b.candidates)
        cb["candidates"].push_back({{"e", c.e}, {"d_e", c.d_e}, {"theta", c.theta.to_string()}});
    if (r.case_b.solution) {
        const auto& s = *r.case_b.solution;
        cb["solution"] = {{"P", s.p.to_string()},
                          {"theta_hat", s.theta_hat.to_string()},
                          {"radicand", s.radicand.to_string()},
                          {"omega", "(theta_hat +- sqrt(radicand))/2"}};
        cb["solved_candidate"] = *r.case_b.solved_candidate;
    }
    out["case_b"] = std::move(cb);
    out["near_solvable"] = r.near_solvable;
    out["min_singular_ratio"] = r.min_singular_ratio;
    return out;
}

json scan_json(const kovacic::ScanResult& scan) {
    json out;
    out["reports"] = json::array();
    for (const auto& r : scan.reports) {
        out["reports"].push_back({{"k", r.k.value_or(0.0)},
                                  {"verdict", kovacic::to_string(r.verdict)},
                                  {"near_solvable", r.near_solvable},
                                  {"min_singular_ratio", r.min_singular_ratio}});
    }
    out["exceptional"] = json::array();
    for (const auto& e : scan.exceptional) {
        json x{{"k", e.k}, {"lo", e.lo}, {"hi", e.hi}, {"width", e.hi - e.lo}, {"ratio", e.ratio}, {"candidate", e.candidate}};
        if (e.confirmed_k2) x["confirmed_k2"] = e.confirmed_k2->to_string();
        out["exceptional"].push_back(std::move(x));
    }
    out["symbolic_case_a"] = case_a_json(scan.symbolic_screen);
    return out;
}

template <class C>
std::string synthesis_text(const synthesis::Synthesis<C>& syn, bool latex) {
    std::ostringstream os;
    const auto& sol = syn.solution;
    for (std::size_t n = 0; n < sol.unknowns.size(); ++n) {
        auto [j, r] = sol.unknowns[n];
        if (latex) os << "N_{" << j + 1 << "}^{" << r << "} = " << sol.values[n].to_latex() << "\n";
        else os << "N[" << j + 1 << "," << r << "] = " << sol.values[n].to_string() << "\n";
    }
    if (latex) {
        os << "\\psi(x;k) = \\left(" << syn.psi.envelope.to_latex() << "\\right) e^{ikx}\n";
        os << "u(x) = " << syn.u.to_latex() << "\n";
    } else {
        os << "psi(x;k) = (" << syn.psi.envelope.to_string() << ")*exp(i*k*x)\n";
        os << "u(x) = " << syn.u.to_string() << "\n";
    }
    return os.str();
}

template <class C>
std::string potential_csv(const exact::ExpRational<C>& u, const std::vector<double>& xs) {
    std::ostringstream os;
    os << "x,re_u,im_u,pole_flag\n";
    for (double x : xs) {
        auto v = synthesis::eval_expr(u, x);
        os << format_double(x) << "," << format_double(v.value.real()) << "," << format_double(v.value.imag()) << ","
           << (v.pole ? 1 : 0) << "\n";
    }
    return os.str();
}

template std::string synthesis_text(const synthesis::Synthesis<GaussianRational>&, bool);
template std::string synthesis_text(const synthesis::Synthesis<Complex>&, bool);
template std::string potential_csv(const exact::ExpRational<GaussianRational>&, const std::vector<double>&);
template std::string potential_csv(const exact::ExpRational<Complex>&, const std::vector<double>&);

namespace {

int cmd_kovacic(const std::string& file, const std::optional<std::string>& k2, const std::optional<std::string>& grid,
                std::ostream& out) {
    if (k2.has_value() == grid.has_value()) throw InputError("kovacic: give exactly one of --k2 and --k-grid");
    auto spec = load_potential(file);
    const auto& u = spec.require_rational();
    json j;
    j["potential"] = u.to_string();
    if (k2) {
        if (!std::regex_match(*k2, exact_pattern())) throw InputError("--k2: \"" + *k2 + "\" is not of the form p/q");
        auto value = GaussianRational(GaussianRational::parse_rational(*k2));
        auto rep = kovacic::analyze_exact(u, value);
        j["report"] = kovacic_json(rep);
        auto profile = kovacic::pole_profile(RationalFunction(-1) - u);
        if (kovacic::necessary_conditions(profile).a)
            j["symbolic_case_a"] = case_a_json(kovacic::case_a_screen_symbolic(u, profile));
    } else {
        j["scan"] = scan_json(kovacic::solvability_scan(u, parse_grid(*grid)));
    }
    out << j.dump(2) << "\n";
    return 0;
}

struct ScatterArgs {
    std::string file;
    std::string grid;
    std::optional<double> height, half_length, tol;
    std::optional<std::string> report;
};

int cmd_scatter(const ScatterArgs& a, std::ostream& out, std::ostream& err) {
    auto spec = load_potential(a.file);
    auto grid = parse_grid(a.grid);
    scattering::JostOptions opts;
    std::string source = tol_source(a.tol, opts.tol);
    if (!(opts.tol > 0.0)) throw InputError("--tol must be positive");
    if (a.height && !(*a.height > 0.0)) throw InputError("--contour-height must be positive");
    if (a.half_length && !(*a.half_length > 0.0)) throw InputError("--L must be positive");
    auto u = spec.evaluator();
    auto contour = scattering::auto_contour(u, a.half_length, a.height);
    auto scan = scattering::scan_reflection(u, grid, contour, opts);
    const auto& rec = scan.record;
    out << "k,re_a,im_a,re_b,im_b\n";
    for (std::size_t n = 0; n < rec.k_grid.size(); ++n) {
        out << format_double(rec.k_grid[n].real()) << "," << format_double(rec.a_values[n].real()) << ","
            << format_double(rec.a_values[n].imag()) << "," << format_double(rec.b_values[n].real()) << ","
            << format_double(rec.b_values[n].imag()) << "\n";
    }
    const bool deformed = contour.kind == scattering::ContourKind::deformed;
    const double unitarity_tol = deformed ? 1e-4 : 1e-6;
    const bool ok = !rec.diagnostics.unitarity_checked || rec.diagnostics.unitarity_residual < unitarity_tol;
    if (a.report) {
        json j;
        j["potential"] = spec.to_string();
        j["contour"] = {{"kind", deformed ? "deformed" : "real_line"},
                        {"half_length", contour.half_length},
                        {"height", contour.height}};
        j["tol"] = opts.tol;
        j["tol_source"] = source;
        j["reflectionless"] = scan.reflectionless;
        j["max_rho"] = scan.max_rho;
        j["unitarity_checked"] = rec.diagnostics.unitarity_checked;
        j["unitarity_residual"] = rec.diagnostics.unitarity_residual;
        j["unitarity_tolerance"] = unitarity_tol;
        j["pass"] = ok;
        std::ofstream f(*a.report);
        if (!f) throw InputError("cannot write " + *a.report);
        f << j.dump(2) << "\n";
    }
    if (!ok) {
        err << "unitarity residual " << rec.diagnostics.unitarity_residual << " exceeds " << unitarity_tol << "\n";
        return 1;
    }
    return 0;
}

int cmd_synth(const std::string& file, const std::string& emit, const std::string& samples, std::ostream& out,
              std::ostream& err) {
    auto f = load_spectral(file);
    auto xs = parse_grid(samples);
    auto emit_one = [&](const auto& syn) {
        if (emit == "csv") out << potential_csv(syn.u, xs);
        else out << synthesis_text(syn, emit == "latex");
        if (!synthesis::satisfies_schrodinger(syn.psi, syn.u)) {
            err << "synthesized psi does not satisfy the Schrodinger equation\n";
            return 1;
        }
        return 0;
    };
    if (f.exact) return emit_one(synthesis::synthesize(f.exact_data));
    return emit_one(synthesis::synthesize(f.numeric_data));
}

int cmd_verify(const std::string& suite, bool as_json, std::ostream& out) {
    auto names = harness::suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::string all;
        for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
        throw InputError("unknown suite \"" + suite + "\" (known: " + all + ")");
    }
    auto rep = harness::run_suite(suite);
    if (as_json) out << rep.to_json().dump(2) << "\n";
    else out << rep.to_text();
    return rep.passed() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and numerical tools for reflectionless Schrodinger potentials", "jostforge"};
    app.require_subcommand(1);

    std::string potential, spectral, suite, grid, emit = "text", samples = "-5:5:201";
    std::optional<std::string> k2, kgrid, report;
    std::optional<double> height, half_length, tol;
    bool as_json = false;

    auto* kov = app.add_subcommand("kovacic", "Liouvillian solvability of psi'' = (-k^2 - u) psi for rational u");
    kov->add_option("--potential", potential, "potential file (JSON)")->required();
    kov->add_option("--k2", k2, "exact k^2 as p/q");
    kov->add_option("--k-grid", kgrid, "real k grid a:b:n");

    auto* sc = app.add_subcommand("scatter", "a(k) and b(k) on a real k grid");
    sc->add_option("--potential", potential, "potential file (JSON)")->required();
    sc->add_option("--k-grid", grid, "real k grid a:b:n")->required();
    sc->add_option("--contour-height", height, "height c of x = xi + i c sech(xi)");
    sc->add_option("--L", half_length, "contour half length");
    sc->add_option("--tol", tol, "integration tolerance (default 1e-10 or JOSTFORGE_TOL)");
    sc->add_option("--report", report, "write a JSON diagnostics report");

    auto* sy = app.add_subcommand("synth", "reflectionless potential from bound-state data");
    sy->add_option("--spectral", spectral, "spectral data file (JSON)")->required();
    sy->add_option("--emit", emit, "text, latex or csv")->check(CLI::IsMember({"text", "latex", "csv"}));
    sy->add_option("--samples", samples, "x grid a:b:n for csv");

    auto* ve = app.add_subcommand("verify", "run a verification suite");
    ve->add_option("--suite", suite, "identities, roundtrip, kovacic or all")->required();
    ve->add_flag("--json", as_json, "JSON instead of text");

    std::vector<const char*> argv{"jostforge"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (kov->parsed()) return cmd_kovacic(potential, k2, kgrid, out);
        if (sc->parsed()) return cmd_scatter({potential, grid, height, half_length, tol, report}, out, err);
        if (sy->parsed()) return cmd_synth(spectral, emit, samples, out, err);
        return cmd_verify(suite, as_json, out);
    } catch (const ParseError& e) {
        err << "error: expression " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ExpAtomInRational& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace jostforge::cli
