#pragma once

// Mott-lobe boundaries without the cavity: the single-component lobes and the
// two-component lobes, which are the single-component ones shifted by the
// inter-species repulsion.

#include "bhcav/params.hpp"

namespace bhcav {

// Interval (mu_minus, mu_plus) of chemical potentials where a Mott state is
// stable at fixed interaction. Absent when no real boundary exists.
struct MottWindow {
    double mu_minus = 0.0;
    double mu_plus = 0.0;
    bool present = false;

    static MottWindow absent() { return {}; }
    static MottWindow of(double lo, double hi) { return {lo, hi, true}; }

    // Strict interior membership.
    bool contains(double mu) const { return present && mu > mu_minus && mu < mu_plus; }
    double width() const { return present ? mu_plus - mu_minus : 0.0; }
    MottWindow shifted(double delta) const {
        return present ? of(mu_minus + delta, mu_plus + delta) : absent();
    }
};

// Lobe n of the single-component model in zJ units: roots of
//   1 + (n+1)/(mu - u n) + n/(-mu + u (n-1)) = 0,
// kept only when both lie strictly between the two poles u(n-1) and u n.
MottWindow single_mott_window(int n, double u);

struct LobeTip {
    double u = 0.0;
    double mu = 0.0;
};

LobeTip single_lobe_tip(int n);

// Two-component lobe for `species` (unbarred mu, species' own zJ units).
// Requires the species' own occupancy >= 1.
MottWindow two_mott_window(Species species, const Occupation& occ, const ScaledParams& sp);

}  // namespace bhcav
