#pragma once

// Transition lines in the cavity-dominated limit (zJ << |f|^2) for equal
// hoppings J_g == J_e, in zJ units.
//
// Labeling follows the established convention: the "ground" line is the
// ground chemical potential at which the phi_e^2 coefficient vanishes (its
// cavity denominators depend on mu_g), and the "excited" line is the excited
// chemical potential at which the phi_g^2 coefficient vanishes.
//
//   mu_g(+/-) = (eps_g + eps_c) + L_g +/- sqrt(G_g^2 - 4 K_g) / 2
//   mu_e(+/-) = (eps_e - eps_c) + L_e +/- sqrt(G_e^2 - 4 K_e) / 2
//
// Windows are in the barred convention (on-site energies included).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhcav/hubbard_lines.hpp"
#include "bhcav/params.hpp"

namespace bhcav {

struct CavityLineCoefficients {
    double L = 0.0;
    double G = 0.0;
    double K = 0.0;

    double discriminant() const { return G * G - 4.0 * K; }
};

// Occupancy factors: G = u + F*m, K = F*u*q.
struct OccupancyFactors {
    double m = 0.0;
    double q = 0.0;
};

OccupancyFactors occupancy_factors(Species species, const Occupation& occ);

// Throws ValidationError for J_g != J_e (use boundary_solve instead).
CavityLineCoefficients cavity_coefficients(Species species, const Occupation& occ,
                                           const ScaledParams& sp);

MottWindow cavity_mu_bounds(Species species, const Occupation& occ, const ScaledParams& sp);

// Residual of the cavity-limit boundary equation whose roots give the
// species' line, at an unbarred chemical potential of that species.
double cavity_limit_residual(Species species, double mu_unbarred, const Occupation& occ,
                             const ScaledParams& sp);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;  // may be +inf

    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Where G^2 >= 4K holds along one parameter axis restricted to [0, inf).
struct ExistenceSet {
    std::vector<double> roots;       // real roots of G^2 - 4K = 0, ascending
    std::vector<Interval> intervals;  // parameter values where the window exists

    bool contains(double x) const;
};

ExistenceSet mott_existence_in_u(Species species, const Occupation& occ, double F);
ExistenceSet mott_existence_in_F(Species species, const Occupation& occ, double u);

enum class SweepAxis { u, u_eg, eps_c, F, n_c };

const char* to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(const std::string& name);

// `fixed` with the swept quantity replaced by `value`. The u axis sets
// u_g = u_e; u_eg and eps_c set both scalings; eps_c leaves eps_e unchanged.
ScaledParams with_axis_value(SweepAxis axis, double value, const ScaledParams& fixed);
Occupation with_axis_value(SweepAxis axis, double value, const Occupation& fixed);

struct SweepRow {
    double value = 0.0;
    MottWindow ground;
    MottWindow excited;
    std::string error;  // non-empty when the row could not be computed
};

std::vector<SweepRow> sweep(SweepAxis axis, std::span<const double> values,
                            const ScaledParams& fixed, const Occupation& occ);

struct LineTable {
    Occupation occ;
    std::vector<SweepRow> rows;
};

// One u-sweep per occupation on a shared grid.
std::vector<LineTable> multi_occupancy_lines(std::span<const Occupation> occs,
                                             const ScaledParams& sp,
                                             std::span<const double> u_grid);

enum class Branch { lower, upper };

struct Crossing {
    double u = 0.0;
    Branch branch = Branch::lower;
};

// Same-branch crossings of line (a, species_a) with line (b, species_b) along
// u: sign changes of mu_branch(a) - mu_branch(b) between neighbouring grid
// samples where both windows are present, refined by bisection to 1e-8 in u.
// A difference that touches zero without changing sign is not a crossing.
std::vector<Crossing> find_crossings(Species species_a, const Occupation& a, Species species_b,
                                     const Occupation& b, const ScaledParams& sp,
                                     std::span<const double> u_grid);

}  // namespace bhcav
