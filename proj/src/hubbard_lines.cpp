#include "bhcav/hubbard_lines.hpp"

#include <cmath>

#include "bhcav/errors.hpp"

namespace bhcav {

namespace {

// Roots of u^2 - 2u(2n+1) + 1, the discriminant of the lobe quadratic.
struct DiscriminantRoots {
    double lo;
    double hi;
};

DiscriminantRoots discriminant_roots(int n) {
    const double centre = 2.0 * n + 1.0;
    const double half_gap = 2.0 * std::sqrt(static_cast<double>(n) * (n + 1.0));
    const double hi = centre + half_gap;
    // lo * hi == 1
    return {1.0 / hi, hi};
}

}  // namespace

MottWindow single_mott_window(int n, double u) {
    if (n < 1) throw ValidationError("single_mott_window: n must be >= 1");
    if (!(u > 0.0)) throw ValidationError("single_mott_window: u must be positive");

    const auto roots = discriminant_roots(n);
    // Factored form vanishes exactly at the tip returned by single_lobe_tip.
    double disc = (u - roots.lo) * (u - roots.hi);
    if (disc < 0.0) {
        if (disc > -1e-12 * std::max(1.0, u * u))
            disc = 0.0;
        else
            return MottWindow::absent();
    }

    const double centre = 0.5 * (u * (2.0 * n - 1.0) - 1.0);
    const double half = 0.5 * std::sqrt(disc);
    const double lo = centre - half;
    const double hi = centre + half;

    const double lower_pole = u * (n - 1.0);
    const double upper_pole = u * n;
    if (!(lo > lower_pole && hi < upper_pole)) return MottWindow::absent();
    return MottWindow::of(lo, hi);
}

LobeTip single_lobe_tip(int n) {
    if (n < 1) throw ValidationError("single_lobe_tip: n must be >= 1");
    const double u = discriminant_roots(n).hi;
    return {u, 0.5 * (u * (2.0 * n - 1.0) - 1.0)};
}

MottWindow two_mott_window(Species species, const Occupation& occ, const ScaledParams& sp) {
    validate(occ);
    if (species == Species::ground)
        return single_mott_window(occ.n_g, sp.u_g).shifted(sp.u_eg_g * occ.n_e);
    return single_mott_window(occ.n_e, sp.u_e).shifted(sp.u_eg_e * occ.n_g);
}

}  // namespace bhcav
