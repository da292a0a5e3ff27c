#include "bhcav/params.hpp"

#include <cmath>

#include "bhcav/errors.hpp"

namespace bhcav {

const char* to_string(Species s) {
    return s == Species::ground ? "ground" : "excited";
}

void validate(const PhysicalParams& p) {
    if (!(p.J_g > 0.0)) throw ValidationError("J_g must be positive");
    if (!(p.J_e > 0.0)) throw ValidationError("J_e must be positive");
    if (p.z < 1) throw ValidationError("coordination number z must be >= 1");
    if (!(p.f_sq >= 0.0)) throw ValidationError("f_sq must be non-negative");
    if (!(p.eps_c > 0.0)) throw ValidationError("eps_c must be positive");
}

ScaledParams ScaledParams::equal_hopping(double u, double u_eg, double F, double eps_c,
                                         double eps_g, double eps_e) {
    ScaledParams sp;
    sp.u_g = sp.u_e = u;
    sp.u_eg_g = sp.u_eg_e = u_eg;
    sp.F = F;
    sp.eps_c_g = sp.eps_c_e = eps_c;
    sp.eps_g_s = eps_g;
    sp.eps_e_s = eps_e;
    sp.hopping_ratio = 1.0;
    return sp;
}

bool ScaledParams::has_equal_hopping() const {
    return std::abs(hopping_ratio - 1.0) <= 1e-12;
}

ScaledParams scale(const PhysicalParams& p) {
    validate(p);
    const double zJg = p.z * p.J_g;
    const double zJe = p.z * p.J_e;
    ScaledParams sp;
    sp.u_g = p.U_g / zJg;
    sp.u_e = p.U_e / zJe;
    sp.u_eg_g = p.U_eg / zJg;
    sp.u_eg_e = p.U_eg / zJe;
    sp.F = p.f_sq / (zJg * zJe);
    sp.eps_c_g = p.eps_c / zJg;
    sp.eps_c_e = p.eps_c / zJe;
    sp.eps_g_s = p.eps_g / zJg;
    sp.eps_e_s = p.eps_e / zJe;
    sp.hopping_ratio = p.J_g / p.J_e;
    return sp;
}

void validate(const Occupation& occ) {
    if (occ.n_g < 0 || occ.n_e < 0 || !(occ.n_c >= 0.0))
        throw ValidationError("occupation numbers must be non-negative");
}

bool operator==(const Occupation& a, const Occupation& b) {
    return a.n_g == b.n_g && a.n_e == b.n_e && a.n_c == b.n_c;
}

double zero_order_energy(const Occupation& occ, const ChemicalPotentials& mu,
                         const PhysicalParams& p) {
    const double ng = occ.n_g;
    const double ne = occ.n_e;
    return -mu.mu_g * ng - mu.mu_e * ne + p.eps_c * occ.n_c + p.U_eg * ng * ne +
           0.5 * p.U_g * ng * (ng - 1.0) + 0.5 * p.U_e * ne * (ne - 1.0);
}

RealOccupations occupations_from_mu(const ChemicalPotentials& mu, const PhysicalParams& p) {
    const double det = p.U_e * p.U_g - p.U_eg * p.U_eg;
    if (det == 0.0) throw SingularMatrixError("U_e*U_g == U_eg^2: interaction matrix is singular");
    RealOccupations out;
    out.n_e = (p.U_g * (2.0 * mu.mu_e + p.U_e) - p.U_eg * (2.0 * mu.mu_g + p.U_g)) / (2.0 * det);
    out.n_g = (p.U_e * (2.0 * mu.mu_g + p.U_g) - p.U_eg * (2.0 * mu.mu_e + p.U_e)) / (2.0 * det);
    return out;
}

ChemicalPotentials mu_stationary(const Occupation& occ, const PhysicalParams& p) {
    return {p.U_g * (occ.n_g - 0.5) + p.U_eg * occ.n_e,
            p.U_e * (occ.n_e - 0.5) + p.U_eg * occ.n_g};
}

ChemicalPotentials mu_stationary(const Occupation& occ, const ScaledParams& sp) {
    return {sp.u_g * (occ.n_g - 0.5) + sp.u_eg_g * occ.n_e,
            sp.u_e * (occ.n_e - 0.5) + sp.u_eg_e * occ.n_g};
}

StabilityReport stability_check(const PhysicalParams& p) {
    StabilityReport r;
    if (!(p.U_g > 0.0)) r.reasons.emplace_back("U_g <= 0");
    if (!(p.U_e > 0.0)) r.reasons.emplace_back("U_e <= 0");
    if (!(p.U_e * p.U_g > p.U_eg * p.U_eg)) r.reasons.emplace_back("U_e*U_g <= U_eg^2");
    r.stable = r.reasons.empty();
    return r;
}

}  // namespace bhcav
