#include "jostforge/harness/harness.hpp"

#include "jostforge/kovacic/kovacic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace jostforge::harness {

using exact::GaussianRational;
using exact::Poly;
using exact::RationalFunction;
using scattering::Contour;
using scattering::PotentialEval;

namespace {

constexpr Complex kI{0.0, 1.0};

Check make_check(std::string name, std::string identity, double residual, double tol, std::string detail = {}) {
    Check c{std::move(name), std::move(identity), residual, tol, residual < tol, std::move(detail)};
    if (!std::isfinite(residual)) c.pass = false;
    return c;
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::string describe(Complex z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

GaussianRational q(long p, long d = 1) { return GaussianRational(mpq_class(p, d)); }

PotentialEval sech2_potential() {
    constexpr double half_pi = std::numbers::pi / 2;
    return PotentialEval::from_function(
        [](Complex x) {
            Complex c = std::cosh(x);
            return 2.0 / (c * c);
        },
        {{Complex(0, half_pi), 2}, {Complex(0, -half_pi), 2}}, 20.0);
}

PotentialEval gaussian_potential() {
    return PotentialEval::from_function([](Complex x) { return std::exp(-x * x); }, {}, 9.0);
}

RationalFunction pole_term(const GaussianRational& c, const GaussianRational& s, int order) {
    return RationalFunction::normalize(Poly(c), exact::pow(Poly::linear_factor(s), order));
}

RationalFunction two_pole_potential() {
    return pole_term(q(-5, 16), q(0), 2) + pole_term(q(-5, 16), q(1), 2) + pole_term(q(-7, 8), q(0), 1) +
           pole_term(q(5, 24), q(1), 1);
}

}  // namespace

// ---------------------------------------------------------------------------

bool VerificationReport::passed() const {
    return failed_stage.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["inputs"] = inputs;
    j["passed"] = passed();
    j["failed_stage"] = failed_stage.empty() ? nlohmann::json(nullptr) : nlohmann::json(failed_stage);
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e{{"name", c.name},      {"identity", c.identity}, {"residual", c.residual},
                         {"tolerance", c.tolerance}, {"pass", c.pass},         {"detail", c.detail}};
        if (!c.extra.empty()) e["extra"] = c.extra;
        j["checks"].push_back(std::move(e));
    }
    return j;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << "suite " << suite << ": " << (passed() ? "PASS" : "FAIL") << "\n";
    if (!failed_stage.empty()) os << "  failed stage: " << failed_stage << "\n";
    for (const auto& c : checks) {
        os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << "  residual " << c.residual << " (tol "
           << c.tolerance << ")";
        if (!c.detail.empty()) os << "  " << c.detail;
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------

Check check_unitarity(const scattering::ScatteringRecord& record, double tol) {
    const auto& ks = record.k_grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i].imag() != 0.0) throw std::invalid_argument("unitarity needs a real grid");
        std::size_t partner = ks.size();
        for (std::size_t j = 0; j < ks.size(); ++j)
            if (std::abs(ks[j] + ks[i]) <= 1e-12 * std::abs(ks[i])) partner = j;
        if (partner == ks.size()) throw std::invalid_argument("grid is not symmetric under k -> -k");
        Complex r = record.a_values[i] * record.a_values[partner] - record.b_values[i] * record.b_values[partner] - 1.0;
        worst = std::max(worst, std::abs(r));
    }
    return make_check("unitarity", "a(k)a(-k) - b(k)b(-k) = 1", worst, tol);
}

StokesCheck check_stokes(Complex a, Complex b, Complex b_neg, Complex a_neg, double tol) {
    StokesCheck out;
    out.s_minus = {{{a, b_neg}, {b, a_neg}}};
    out.s_plus = {{{a_neg, -b_neg}, {-b, a}}};
    Complex det = a * a_neg - b * b_neg;
    out.determinant = make_check("stokes determinant", "det S- = 1", std::abs(det - 1.0), tol);
    double worst = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            Complex v = out.s_plus[r][0] * out.s_minus[0][c] + out.s_plus[r][1] * out.s_minus[1][c];
            worst = std::max(worst, std::abs(v - (r == c ? 1.0 : 0.0)));
        }
    out.inverse = make_check("stokes inverse", "S+ S- = I", worst, tol);
    return out;
}

std::vector<Complex> reflection_polar_part(const std::vector<Complex>& a_jet, const std::vector<Complex>& b_jet, int nu) {
    if (nu < 1 || static_cast<int>(a_jet.size()) < nu || static_cast<int>(b_jet.size()) < nu)
        throw std::invalid_argument("jets shorter than the multiplicity");
    // b/a = t^-nu B(t)/A(t), B_r = b^(r)/r!, A_q = a^(nu+q)/(nu+q)!
    std::vector<Complex> A(nu), B(nu), inv(nu), out(nu);
    for (int r = 0; r < nu; ++r) {
        B[r] = b_jet[r] / std::tgamma(r + 1.0);
        A[r] = a_jet[r] / std::tgamma(nu + r + 1.0);
    }
    if (A[0] == Complex{}) throw std::invalid_argument("leading a-jet entry vanishes");
    inv[0] = 1.0 / A[0];
    for (int n = 1; n < nu; ++n) {
        Complex acc{};
        for (int m = 1; m <= n; ++m) acc += A[m] * inv[n - m];
        inv[n] = -acc / A[0];
    }
    for (int s = 0; s < nu; ++s)
        for (int m = 0; m <= s; ++m) out[s] += B[m] * inv[s - m];
    return out;
}

// ---------------------------------------------------------------------------

VerificationReport roundtrip(const synthesis::ExactSpectralData& data, const RoundtripTolerances& tol) {
    VerificationReport rep;
    rep.suite = "roundtrip";
    rep.inputs["bound_states"] = std::to_string(data.entries.size());
    for (std::size_t j = 0; j < data.entries.size(); ++j)
        rep.inputs["k" + std::to_string(j + 1)] =
            data.entries[j].k.to_string() + " (nu " + std::to_string(data.entries[j].nu) + ")";

    std::string stage = "synthesis";
    try {
        auto syn = synthesis::synthesize(data);
        stage = "potential";
        if (data.entries.empty()) {
            rep.add(make_check("reflectionless", "b(k) = 0 on the grid", 0.0, tol.reflection, "u = 0"));
            rep.add(make_check("bound states", "zeros of a(k) in the upper half plane", 0.0, 0.5, "none"));
            return rep;
        }
        auto pe = PotentialEval::from_exp_rational(syn.u);
        auto contour = scattering::auto_contour(pe);
        rep.inputs["contour"] = contour.kind == scattering::ContourKind::real_line
                                    ? "real line"
                                    : "deformed, c = " + std::to_string(contour.height);

        stage = "reflection scan";
        auto scan = scattering::scan_reflection(pe, symmetric_grid(), contour, {}, tol.reflection);
        rep.add(make_check("reflectionless", "max |b(k)/a(k)| on the grid below threshold", scan.max_rho,
                           tol.reflection));
        auto unit = check_unitarity(scan.record, tol.unitarity);
        rep.add(unit);

        stage = "bound states";
        scattering::SearchBox box;
        double re_lo = 1e300, re_hi = -1e300, im_lo = 1e300, im_hi = -1e300;
        for (const auto& e : data.entries) {
            Complex k = e.k.to_complex();
            re_lo = std::min(re_lo, k.real());
            re_hi = std::max(re_hi, k.real());
            im_lo = std::min(im_lo, k.imag());
            im_hi = std::max(im_hi, k.imag());
        }
        box = {re_lo - 1.0, re_hi + 1.0, 0.25 * im_lo, im_hi + 1.0};
        auto found = scattering::find_bound_states(pe, contour, box);
        double worst_k = 0.0;
        bool matched = found.states.size() == data.entries.size();
        std::ostringstream detail;
        for (const auto& e : data.entries) {
            Complex k = e.k.to_complex();
            auto it = std::min_element(found.states.begin(), found.states.end(), [&](const auto& p, const auto& r) {
                return std::abs(p.k - k) < std::abs(r.k - k);
            });
            if (it == found.states.end() || it->nu != e.nu) {
                matched = false;
                continue;
            }
            worst_k = std::max(worst_k, std::abs(it->k - k));
            detail << "(" << describe(it->k) << ", " << it->nu << ") ";
        }
        auto bs = make_check("bound states", "zeros of a(k) with multiplicity match the data",
                             matched ? worst_k : INFINITY, tol.bound_state, detail.str());
        bs.extra["winding_total"] = found.winding_total;
        rep.add(bs);

        stage = "jets";
        double worst_polar = 0.0, worst_lead = 0.0;
        nlohmann::json jets_json = nlohmann::json::array();
        for (const auto& e : data.entries) {
            Complex k = e.k.to_complex();
            auto jets = scattering::extract_jets(pe, k, e.nu, contour);
            std::vector<Complex> a_in, b_in;
            for (const auto& v : e.a_jet) a_in.push_back(v.to_complex());
            for (const auto& v : e.b_jet) b_in.push_back(v.to_complex());
            auto want = reflection_polar_part(a_in, b_in, e.nu);
            auto got = reflection_polar_part(jets.a_jet, jets.b_jet, e.nu);
            for (int s = 0; s < e.nu; ++s) worst_polar = std::max(worst_polar, std::abs(want[s] - got[s]));
            worst_lead = std::max({worst_lead, std::abs(jets.a_jet[0] - a_in[0]), std::abs(jets.b_jet[0] - b_in[0])});
            nlohmann::json jj{{"k", complex_json(k)}, {"a_jet", nlohmann::json::array()}, {"b_jet", nlohmann::json::array()}};
            for (auto v : jets.a_jet) jj["a_jet"].push_back(complex_json(v));
            for (auto v : jets.b_jet) jj["b_jet"].push_back(complex_json(v));
            jets_json.push_back(jj);
        }
        auto polar = make_check("reflection polar part", "principal part of b/a at each k_j matches the data",
                                worst_polar, tol.jets);
        polar.extra["measured_jets"] = jets_json;
        rep.add(polar);
        rep.add(make_check("leading jets", "a^(nu)(k_j) and b(k_j) match the data", worst_lead, tol.jets));

        stage = "jost solution";
        double worst_psi = 0.0;
        const double L = contour.half_length;
        std::vector<double> nodes{-0.5 * L, -1.0, 0.0, 1.5, 0.5 * L};
        for (double k : {0.7, -1.3, 2.1}) {
            auto samples = scattering::integrate_jost(pe, k, contour, scattering::Side::right, nodes);
            for (const auto& s : samples) {
                Complex numeric = std::exp(kI * k * s.x) * s.m;
                Complex closed = syn.psi.evaluate(s.x, k);
                worst_psi = std::max(worst_psi, std::abs(numeric - closed) / std::max(1.0, std::abs(closed)));
            }
        }
        rep.add(make_check("jost solution", "closed-form psi equals the integrated Jost solution", worst_psi, tol.psi));
    } catch (const std::exception& e) {
        rep.failed_stage = stage;
        rep.add(make_check(stage, "stage completed", INFINITY, 0.0, e.what()));
    }
    return rep;
}

// ---------------------------------------------------------------------------

Check check_kovacic_consistency(const RationalFunction& u, const std::vector<double>& k_grid, double width_tol) {
    if (u.is_zero() || u.order_at_infinity() != 1)
        throw std::invalid_argument("consistency check needs a rational u with degree gap 1");
    auto scan = kovacic::solvability_scan(u, k_grid);
    int offending = 0;
    for (const auto& r : scan.reports)
        if (r.verdict != kovacic::Verdict::not_solvable) ++offending;
    double widest = 0.0;
    nlohmann::json flagged = nlohmann::json::array();
    for (const auto& ex : scan.exceptional) {
        widest = std::max(widest, ex.hi - ex.lo);
        nlohmann::json f{{"k", ex.k}, {"lo", ex.lo}, {"hi", ex.hi}};
        if (ex.confirmed_k2) f["k2"] = ex.confirmed_k2->to_string();
        flagged.push_back(f);
    }
    std::ostringstream detail;
    detail << offending << " of " << k_grid.size() << " grid points not NotSolvable, " << scan.exceptional.size()
           << " exceptional k";
    Check c = make_check("kovacic consistency", "NotSolvable on the grid except at isolated exceptional k",
                         static_cast<double>(offending), 0.5, detail.str());
    c.pass = c.pass && widest < width_tol;
    c.extra["exceptional"] = flagged;
    c.extra["widest_bracket"] = widest;
    return c;
}

// ---------------------------------------------------------------------------

std::map<std::string, synthesis::ExactSpectralData> corpus() {
    using synthesis::BoundState;
    const auto I = GaussianRational::i();
    std::map<std::string, synthesis::ExactSpectralData> out;

    BoundState<GaussianRational> negaton;
    negaton.k = I;
    negaton.nu = 2;
    negaton.a_jet = {q(-1, 2), q(0)};
    negaton.b_jet = {q(1), q(0)};
    out["negaton"] = {{negaton}};

    BoundState<GaussianRational> one;
    one.k = I;
    one.a_jet = {GaussianRational(0, mpq_class(-1, 2))};
    one.b_jet = {q(1)};
    out["one_soliton"] = {{one}};

    BoundState<GaussianRational> t1, t2;
    t1.k = I;
    t1.a_jet = {GaussianRational(0, mpq_class(1, 6))};
    t1.b_jet = {q(1)};
    t2.k = GaussianRational(0, 2);
    t2.a_jet = {GaussianRational(0, mpq_class(-1, 12))};
    t2.b_jet = {q(1)};
    out["two_soliton"] = {{t1, t2}};
    return out;
}

std::vector<double> symmetric_grid(int per_side, double lo, double hi) {
    std::vector<double> g;
    for (int i = 0; i < per_side; ++i) g.push_back(per_side == 1 ? lo : lo + (hi - lo) * i / (per_side - 1));
    for (int i = 0; i < per_side; ++i) g.push_back(-g[i]);
    return g;
}

std::vector<std::string> suite_names() { return {"identities", "roundtrip", "kovacic", "all"}; }

namespace {

void identities_suite(VerificationReport& rep) {
    auto negaton = synthesis::synthesize(corpus()["negaton"]);
    struct Case {
        std::string name;
        PotentialEval u;
        double unitarity_tol;
    };
    std::vector<Case> cases{{"zero", PotentialEval::zero(), 1e-6},
                            {"2 sech^2 x", sech2_potential(), 1e-6},
                            {"exp(-x^2)", gaussian_potential(), 1e-6},
                            {"negaton potential", PotentialEval::from_exp_rational(negaton.u), 1e-4}};
    for (const auto& c : cases) {
        auto contour = scattering::auto_contour(c.u);
        auto scan = scattering::scan_reflection(c.u, symmetric_grid(), contour);
        auto unit = check_unitarity(scan.record, c.unitarity_tol);
        unit.name = "unitarity [" + c.name + "]";
        rep.add(unit);
        rep.add(make_check("wronskian [" + c.name + "]", "W(phi(k), phi(-k)) = 2ik along the contour",
                           scan.record.diagnostics.wronskian_residual, 1e-8));
        auto plus = scattering::scattering_coeffs(c.u, 1.0, contour);
        auto minus = scattering::scattering_coeffs(c.u, -1.0, contour);
        auto st = check_stokes(plus.a, plus.b, minus.b, minus.a);
        st.determinant.name += " [" + c.name + "]";
        st.inverse.name += " [" + c.name + "]";
        rep.add(st.determinant);
        rep.add(st.inverse);
    }
}

void roundtrip_suite(VerificationReport& rep) {
    auto add_all = [&](const std::string& label, const VerificationReport& r) {
        for (auto c : r.checks) {
            c.name = label + ": " + c.name;
            rep.add(c);
        }
        if (!r.failed_stage.empty() && rep.failed_stage.empty()) rep.failed_stage = label + ": " + r.failed_stage;
    };
    add_all("empty", roundtrip({}));
    for (const auto& [name, data] : corpus()) add_all(name, roundtrip(data));
}

void kovacic_suite(VerificationReport& rep) {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.5 + 0.01 * i);
    auto two_pole = check_kovacic_consistency(two_pole_potential(), grid);
    two_pole.name += " [two_pole potential]";
    rep.add(two_pole);
    auto coulomb = check_kovacic_consistency(pole_term(q(1), q(0), 1), grid);
    coulomb.name += " [1/x]";
    rep.add(coulomb);
}

}  // namespace

VerificationReport run_suite(const std::string& name) {
    auto names = suite_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw std::invalid_argument("unknown suite '" + name + "'");
    VerificationReport rep;
    rep.suite = name;
    if (name == "identities" || name == "all") identities_suite(rep);
    if (name == "roundtrip" || name == "all") roundtrip_suite(rep);
    if (name == "kovacic" || name == "all") kovacic_suite(rep);
    return rep;
}

}  // namespace jostforge::harness
