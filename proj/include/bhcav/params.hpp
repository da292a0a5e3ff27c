#pragma once

// Model parameters of the cavity-coupled two-component Bose-Hubbard model,
// the zJ scaling convention, and the zero-order (on-site) ground state.
//
// Energies in PhysicalParams are in arbitrary but common units. ScaledParams
// holds every energy divided by the hopping scale zJ of the species it
// belongs to; the photon coupling is folded into F = |f|^2 / (z^2 J_g J_e).

#include <string>
#include <vector>

namespace bhcav {

enum class Species { ground, excited };

inline Species other(Species s) {
    return s == Species::ground ? Species::excited : Species::ground;
}

const char* to_string(Species s);

struct PhysicalParams {
    double J_g = 1.0;
    double J_e = 1.0;
    double U_g = 0.0;
    double U_e = 0.0;
    double U_eg = 0.0;
    double f_sq = 0.0;   // |f|^2
    double eps_g = 0.0;
    double eps_e = 0.0;
    double eps_c = 1.0;  // cavity photon energy
    int z = 1;           // coordination number
};

// Throws ValidationError unless J_g > 0, J_e > 0, z >= 1, f_sq >= 0, eps_c > 0.
void validate(const PhysicalParams& p);

struct ScaledParams {
    double u_g = 0.0;      // U_g / zJ_g
    double u_e = 0.0;      // U_e / zJ_e
    double u_eg_g = 0.0;   // U_eg / zJ_g
    double u_eg_e = 0.0;   // U_eg / zJ_e
    double F = 0.0;        // |f|^2 / (z^2 J_g J_e)
    double eps_c_g = 0.0;  // eps_c / zJ_g
    double eps_c_e = 0.0;  // eps_c / zJ_e
    double eps_g_s = 0.0;  // eps_g / zJ_g
    double eps_e_s = 0.0;  // eps_e / zJ_e
    double hopping_ratio = 1.0;  // J_g / J_e

    // Parameter set with J_g == J_e, where each energy has a single scaled value.
    static ScaledParams equal_hopping(double u, double u_eg, double F, double eps_c,
                                      double eps_g = 0.0, double eps_e = 0.0);

    bool has_equal_hopping() const;
};

ScaledParams scale(const PhysicalParams& p);

struct Occupation {
    int n_g = 0;
    int n_e = 0;
    double n_c = 0.0;  // mean photons per site; real-valued for sweeps
};

// Throws ValidationError on negative entries.
void validate(const Occupation& occ);

bool operator==(const Occupation& a, const Occupation& b);

// Chemical potentials in the unbarred convention mu = mu_bar - eps unless a
// function states otherwise. With ScaledParams each entry is in its own
// species' zJ units.
struct ChemicalPotentials {
    double mu_g = 0.0;
    double mu_e = 0.0;
};

double zero_order_energy(const Occupation& occ, const ChemicalPotentials& mu,
                         const PhysicalParams& p);

struct RealOccupations {
    double n_g = 0.0;
    double n_e = 0.0;
};

// Stationary point of the zero-order energy in (n_g, n_e). Throws
// SingularMatrixError when U_e U_g == U_eg^2.
RealOccupations occupations_from_mu(const ChemicalPotentials& mu, const PhysicalParams& p);

ChemicalPotentials mu_stationary(const Occupation& occ, const PhysicalParams& p);
ChemicalPotentials mu_stationary(const Occupation& occ, const ScaledParams& sp);

struct StabilityReport {
    bool stable = true;
    std::vector<std::string> reasons;
};

// Advisory only: U_g > 0, U_e > 0 and U_e U_g > U_eg^2.
StabilityReport stability_check(const PhysicalParams& p);

}  // namespace bhcav
