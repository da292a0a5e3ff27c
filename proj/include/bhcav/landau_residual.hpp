#pragma once

// Landau boundary conditions with hopping and cavity terms together.
//
// In zJ units, with mu_g in zJ_g units and mu_e in zJ_e units (unbarred):
//
//   c_g = 1 + w [ (n_g+1)/(mu_g - u_g n_g - u_eg n_e) + n_g/(-mu_g + u_g(n_g-1) + u_eg n_e) ]
//           + F [ (n_e+1) n_c/(mu_e + eps_c - u_e n_e - u_eg n_g)
//               + n_e (n_c+1)/(-mu_e - eps_c + u_e(n_e-1) + u_eg n_g) ]
//   c_e = 1 + w [ (n_e+1)/(mu_e - u_e n_e - u_eg n_g) + n_e/(-mu_e + u_e(n_e-1) + u_eg n_g) ]
//           + F [ n_g n_c/(-mu_g + eps_c + u_g(n_g-1) + u_eg n_e)
//               + (n_g+1)(n_c+1)/(mu_g - eps_c - u_g n_g - u_eg n_e) ]
//
// where w = 1 is the hopping weight (0 recovers the cavity limit) and each
// energy carries the scaling of the chemical potential it is combined with.
// The F-scaled terms are exact for unequal hoppings because F = |f|^2/(z^2 J_g J_e).
// c > 0 means the Mott state is stable against that order parameter.

#include <optional>
#include <vector>

#include "bhcav/hubbard_lines.hpp"
#include "bhcav/params.hpp"

namespace bhcav {

struct BoundaryResidual {
    double c_g = 0.0;
    double c_e = 0.0;
};

struct ResidualOptions {
    double hopping_weight = 1.0;
};

// Throws PoleError naming the vanishing denominator (terms with a zero
// numerator are dropped and never raise).
BoundaryResidual residual(const ChemicalPotentials& mu, const Occupation& occ,
                          const ScaledParams& sp, const ResidualOptions& opts = {});

// Which order-parameter coefficient to drive to zero.
enum class Coefficient { phi_g, phi_e };

inline Coefficient own_coefficient(Species s) {
    return s == Species::ground ? Coefficient::phi_g : Coefficient::phi_e;
}

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct SolveOptions {
    // Defaults to the species' own coefficient (c_g for ground).
    std::optional<Coefficient> coefficient;
    double hopping_weight = 1.0;
    int scan_points = 64;
};

// Positions in the unknown mu where the selected coefficient has a pole, ascending.
std::vector<double> coefficient_poles(Species unknown, Coefficient coefficient,
                                      const Occupation& occ, const ScaledParams& sp,
                                      double hopping_weight);

// Every root of the selected coefficient in `bracket`, solving for the
// chemical potential of `unknown` with the other one fixed at `mu_other`
// (default: the stationary value of the occupation). The bracket is split
// at interior poles; roots are refined by bisection to |dmu| < 1e-10.
// Throws BracketPoleError when a bracket endpoint is a pole.
std::vector<double> boundary_solve(Species unknown, const Occupation& occ,
                                   const ScaledParams& sp, std::optional<double> mu_other,
                                   Bracket bracket, const SolveOptions& opts = {});

// Window between the two poles of the selected coefficient where it is
// positive, bounded by consecutive roots. Absent when there is no such
// interval; throws ValidationError when the coefficient has fewer than two
// poles in the unknown (e.g. zero own occupancy).
MottWindow general_window(Species unknown, const Occupation& occ, const ScaledParams& sp,
                          std::optional<double> mu_other, const SolveOptions& opts = {});

}  // namespace bhcav
