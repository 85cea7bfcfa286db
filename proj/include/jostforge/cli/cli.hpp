#pragma once

#include "jostforge/cli/parser.hpp"
#include "jostforge/kovacic/kovacic.hpp"
#include "jostforge/synthesis/synthesis.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jostforge::cli {

/// Malformed file or argument; the command exits with status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A potential file holds exactly one of
///   {"partial_fractions": [{"pole": ["re", "im"], "order": n, "coeff": "p/q"}, ...]}
///   {"expression": "<text in the parser grammar>"}
///   {"rational": {"num": [c0, c1, ...], "den": [c0, ...]}}
///   {"rational": {"num": [...], "den_factors": [{"root": ["re", "im"], "order": n}, ...]}}
/// Coefficients are exact strings "p/q" or pairs of them.
struct PotentialSpec {
    ExprPtr expression;                              // set for expression input
    std::optional<exact::RationalFunction> rational; // set when there are no exp atoms

    /// Throws ExpAtomInRational for exp input.
    const exact::RationalFunction& require_rational() const;
    scattering::PotentialEval evaluator() const;
    std::string to_string() const;
};

PotentialSpec parse_potential_json(const nlohmann::json& j);
PotentialSpec load_potential(const std::string& path);

/// {"exact": true, "bound_states": [{"k": ["0", "1"], "multiplicity": 2,
///   "a_jet": ["-1/2", "0"], "b_jet": ["1", "0"]}]}
/// With "exact": false numbers may be JSON floats and synthesis runs in doubles.
struct SpectralFile {
    bool exact = true;
    synthesis::ExactSpectralData exact_data;
    synthesis::NumericSpectralData numeric_data;
};

SpectralFile parse_spectral_json(const nlohmann::json& j);
SpectralFile load_spectral(const std::string& path);

/// "a:b:n", n >= 1 evenly spaced points including both ends.
std::vector<double> parse_grid(const std::string& text);

/// Scientific notation with 17 significant digits, independent of the locale.
std::string format_double(double v);

nlohmann::json kovacic_json(const kovacic::KovacicReport& report);
nlohmann::json scan_json(const kovacic::ScanResult& scan);

template <class C>
std::string synthesis_text(const synthesis::Synthesis<C>& syn, bool latex);

template <class C>
std::string potential_csv(const exact::ExpRational<C>& u, const std::vector<double>& xs);

/// Subcommands kovacic, scatter, synth and verify. Returns 0 on success, 1 when
/// a check fails and 2 on an input error. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jostforge::cli
