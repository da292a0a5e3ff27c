#pragma once

// Run configuration and its text format.
//
// Grammar (one statement per line, UTF-8):
//
//   line     := blank | comment | section | entry
//   comment  := ('#' | ';') any*
//   section  := '[' name ']'
//   entry    := key '=' value [comment]
//   value    := number | '"' chars '"' | true | false | bare-word
//
// Sections and keys:
//
//   [run]          preset, variant, format, seed, seeds, out
//   [scaled]       u, u_g, u_e, u_eg, u_eg_g, u_eg_e, F, eps_c, eps_c_g, eps_c_e,
//                  eps_g, eps_e, hopping_ratio
//   [physical]     J_g, J_e, U_g, U_e, U_eg, f_sq, eps_g, eps_e, eps_c, z
//                  (only with --physical)
//   [occupations]  list = "n_g,n_e,n_c; n_g,n_e,n_c; ..."
//   [axis]         name, min, max, samples        (horizontal / sweep axis)
//   [mu_axis]      min, max, samples              (chemical-potential axis)
//   [solver]       species, component, mu_other, bracket_min, bracket_max,
//                  hopping_weight, scan_points
//
// Shared keys (u, u_eg, eps_c) set both scalings; the species-specific keys
// override them. Unknown sections, unknown keys and repeated keys are errors.
// A preset supplies variant, scaled parameters, occupations and axes; keys
// in [scaled] then override individual preset values.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bhcav/diagram.hpp"
#include "bhcav/errors.hpp"
#include "bhcav/landau_residual.hpp"
#include "bhcav/params.hpp"

namespace bhcav {

// Syntax or validation error at a specific line (0 when not tied to one).
class ConfigError : public ValidationError {
public:
    ConfigError(int line, const std::string& message)
        : ValidationError(line > 0 ? "config line " + std::to_string(line) + ": " + message
                                   : "config: " + message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

enum class OutputFormat { csv, json };

struct AxisSpec {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int samples = 0;
};

struct SolverSpec {
    std::optional<Species> species;  // default: both species
    std::optional<Coefficient> coefficient;
    std::optional<double> mu_other;
    std::optional<Bracket> bracket;
    double hopping_weight = 1.0;
    int scan_points = 64;
};

struct RunConfig {
    std::optional<std::string> preset;
    std::optional<ModelVariant> variant;
    std::optional<PhysicalParams> physical;
    std::optional<ScaledParams> scaled;
    std::vector<Occupation> occupations;
    std::optional<AxisSpec> axis;
    std::optional<AxisSpec> mu_axis;
    SolverSpec solver;
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<std::uint64_t> seed;
    std::optional<int> seeds;

    // Scaled parameters from whichever block is present.
    ScaledParams resolved_params() const;
};

struct ParseOptions {
    bool allow_physical = false;          // --physical given
    bool require_model = true;            // exactly one parameter block and occupations
    std::optional<std::string> base_preset;  // preset implied by the command line
};

RunConfig parse_config(std::string_view text, const ParseOptions& opts = {});

// Checks the RunConfig invariants; throws ConfigError naming the violation.
void validate(const RunConfig& cfg, bool require_model);

// "1,1,1; 2,0,1" -> occupations. Throws ValidationError.
std::vector<Occupation> parse_occupation_list(const std::string& text);

}  // namespace bhcav
