#pragma once

// Independent check of the second-order energy correction.
//
// Two routes are compared:
//  * the closed-form phi_g^2, phi_e^2 and phi_g^2 phi_e^2 coefficients, and
//  * a brute-force state sum: the single-site interaction H_I is built as a
//    matrix on a truncated Fock basis |n_g', n_e', n_c'> (each number up to
//    occupation + 2), applied to |0> = |n_g, n_e, n_c>, and
//    sum_k |<k|H_I|0>|^2 / (E_0 - E_k) is accumulated with the energies from
//    zero_order_energy.
//
// Everything here is in physical (unscaled) energy units with unbarred
// chemical potentials, and f is taken real: f = sqrt(f_sq).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bhcav/params.hpp"

namespace bhcav {

// Operator X in <0|X|k> that reaches intermediate state k.
enum class Channel { b, b_dag, c, c_dag, a, a_dag, ba, ca_dag, ac_dag, a_dag_b_dag };

const char* to_string(Channel ch);

struct IntermediateState {
    std::array<int, 3> delta{};  // (dn_g, dn_e, dn_c) relative to |0>
    double amplitude = 0.0;      // bare matrix element <0|X|k>
    double denom = 0.0;          // E_0 - E_k
    Channel channel = Channel::b;
};

// The ten states connected to |0> by H_I, with the listed energy differences.
// Requires an integer photon number.
std::array<IntermediateState, 10> enumerate_states(const Occupation& occ,
                                                   const ChemicalPotentials& mu,
                                                   const PhysicalParams& p);

struct SecondOrderCoefficients {
    double c_g = 0.0;    // coefficient of phi_g^2, leading zJ_g included
    double c_e = 0.0;    // coefficient of phi_e^2, leading zJ_e included
    double c_mix = 0.0;  // coefficient of phi_g^2 phi_e^2
};

// Throws PoleError on a vanishing denominator with a non-zero numerator.
SecondOrderCoefficients e2_closed_form(const Occupation& occ, const ChemicalPotentials& mu,
                                       const PhysicalParams& p);

struct StateSumTerm {
    std::array<int, 3> delta{};
    double matrix_element = 0.0;  // <k|H_I|0> including couplings and phi
    double denom = 0.0;
};

struct StateSumResult {
    double first_order = 0.0;   // <0|H_I|0>, the c-number part
    double second_order = 0.0;  // sum over k != 0
    double outer_shell_weight = 0.0;  // squared amplitude on the truncation edge
    std::vector<StateSumTerm> terms;  // states with non-zero matrix element

    double total() const { return first_order + second_order; }
};

StateSumResult state_sum(const Occupation& occ, const ChemicalPotentials& mu,
                         const PhysicalParams& p, double phi_g, double phi_e);

// first_order + second_order of state_sum.
double e2_state_sum(const Occupation& occ, const ChemicalPotentials& mu, const PhysicalParams& p,
                    double phi_g, double phi_e);

struct CheckResult {
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

struct EquivalenceReport {
    std::uint64_t seed = 0;
    bool has_seed = false;
    Occupation occ;
    ChemicalPotentials mu;
    PhysicalParams params;
    SecondOrderCoefficients coefficients;
    std::vector<CheckResult> checks;
    bool pass = false;

    std::string to_text() const;
};

inline constexpr double kOracleTolerance = 1e-10;

// Compares `claimed` against the state sum, and checks the enumeration,
// the c-number decomposition and c_mix == -|f|^2 / eps_c.
EquivalenceReport verify_against(const SecondOrderCoefficients& claimed, const Occupation& occ,
                                 const ChemicalPotentials& mu, const PhysicalParams& p);

EquivalenceReport verify_equivalence(const Occupation& occ, const ChemicalPotentials& mu,
                                     const PhysicalParams& p);

struct OracleCase {
    Occupation occ;
    ChemicalPotentials mu;
    PhysicalParams params;
};

// Stable parameters, integer occupations in {0,1,2}^3 and chemical
// potentials keeping every denominator at least 0.5 away from zero.
// Deterministic in `seed`.
OracleCase random_stable_case(std::uint64_t seed);

EquivalenceReport verify_seed(std::uint64_t seed);

}  // namespace bhcav
