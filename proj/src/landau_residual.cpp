#include "bhcav/landau_residual.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bhcav/errors.hpp"

namespace bhcav {

namespace {

double term(double numerator, double denominator, const char* name) {
    if (numerator == 0.0) return 0.0;
    if (std::abs(denominator) < 1e-12) throw PoleError(name, denominator);
    return numerator / denominator;
}

double hopping_bracket(double mu, double n, double u, double shift, const char* upper,
                       const char* lower) {
    return term(n + 1.0, mu - u * n - shift, upper) + term(n, -mu + u * (n - 1.0) + shift, lower);
}

bool is_pole(double x, double pole) {
    return std::abs(x - pole) <= 1e-12 * std::max(1.0, std::abs(pole));
}

struct Pole {
    double at;
    bool present;
};

// Bisection on a continuous function with f(lo), f(hi) of opposite sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo) {
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Roots of f on [a, b], continuous in the open interval. Ends flagged as
// poles are approached geometrically instead of evaluated.
void scan_interval(const std::function<double(double)>& f, double a, bool a_pole, double b,
                   bool b_pole, int n, std::vector<double>& roots) {
    const double width = b - a;
    std::vector<double> xs;
    if (a_pole) {
        for (int k = 12; k >= 3; --k) xs.push_back(a + width * std::pow(10.0, -k));
    } else {
        xs.push_back(a);
    }
    for (int i = 1; i < n; ++i) xs.push_back(a + width * i / n);
    if (b_pole) {
        for (int k = 3; k <= 12; ++k) xs.push_back(b - width * std::pow(10.0, -k));
    } else {
        xs.push_back(b);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<std::pair<double, double>> samples;
    samples.reserve(xs.size());
    for (double x : xs) {
        if (!(x > a || !a_pole) || !(x < b || !b_pole)) continue;
        try {
            samples.emplace_back(x, f(x));
        } catch (const PoleError&) {
            // too close to a pole of the unknown to resolve; skip the sample
        }
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [x0, f0] = samples[i];
        if (f0 == 0.0) {
            roots.push_back(x0);
            continue;
        }
        if (i + 1 == samples.size()) break;
        const auto [x1, f1] = samples[i + 1];
        if (f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) roots.push_back(bisect(f, x0, x1, f0));
    }
}

std::function<double(double)> component_function(Species unknown, Coefficient coefficient,
                                                  const Occupation& occ, const ScaledParams& sp,
                                                  double mu_other, double hopping_weight) {
    return [=](double mu) {
        ChemicalPotentials cp = unknown == Species::ground ? ChemicalPotentials{mu, mu_other}
                                                           : ChemicalPotentials{mu_other, mu};
        const auto r = residual(cp, occ, sp, {hopping_weight});
        return coefficient == Coefficient::phi_g ? r.c_g : r.c_e;
    };
}

}  // namespace

BoundaryResidual residual(const ChemicalPotentials& mu, const Occupation& occ,
                          const ScaledParams& sp, const ResidualOptions& opts) {
    const double ng = occ.n_g;
    const double ne = occ.n_e;
    const double nc = occ.n_c;
    const double w = opts.hopping_weight;

    BoundaryResidual r;
    r.c_g = 1.0;
    r.c_e = 1.0;
    if (w != 0.0) {
        r.c_g += w * hopping_bracket(mu.mu_g, ng, sp.u_g, sp.u_eg_g * ne,
                                     "mu_g-U_g n_g-U_eg n_e", "-mu_g+U_g(n_g-1)+U_eg n_e");
        r.c_e += w * hopping_bracket(mu.mu_e, ne, sp.u_e, sp.u_eg_e * ng,
                                     "mu_e-U_e n_e-U_eg n_g", "-mu_e+U_e(n_e-1)+U_eg n_g");
    }
    if (sp.F != 0.0) {
        r.c_g += sp.F * (term((ne + 1.0) * nc,
                              mu.mu_e + sp.eps_c_e - sp.u_e * ne - sp.u_eg_e * ng,
                              "mu_e+eps_c-U_e n_e-U_eg n_g") +
                         term(ne * (nc + 1.0),
                              -mu.mu_e - sp.eps_c_e + sp.u_e * (ne - 1.0) + sp.u_eg_e * ng,
                              "-mu_e-eps_c+U_e(n_e-1)+U_eg n_g"));
        r.c_e += sp.F * (term(ng * nc,
                              -mu.mu_g + sp.eps_c_g + sp.u_g * (ng - 1.0) + sp.u_eg_g * ne,
                              "-mu_g+eps_c+U_g(n_g-1)+U_eg n_e") +
                         term((ng + 1.0) * (nc + 1.0),
                              mu.mu_g - sp.eps_c_g - sp.u_g * ng - sp.u_eg_g * ne,
                              "mu_g-eps_c-U_g n_g-U_eg n_e"));
    }
    return r;
}

std::vector<double> coefficient_poles(Species unknown, Coefficient coefficient,
                                      const Occupation& occ, const ScaledParams& sp,
                                      double hopping_weight) {
    const double ng = occ.n_g;
    const double ne = occ.n_e;
    const double nc = occ.n_c;
    std::vector<Pole> poles;
    const bool own = coefficient == own_coefficient(unknown);
    if (own && hopping_weight != 0.0) {
        if (unknown == Species::ground)
            poles = {{sp.u_g * ng + sp.u_eg_g * ne, true},
                     {sp.u_g * (ng - 1.0) + sp.u_eg_g * ne, ng != 0.0}};
        else
            poles = {{sp.u_e * ne + sp.u_eg_e * ng, true},
                     {sp.u_e * (ne - 1.0) + sp.u_eg_e * ng, ne != 0.0}};
    } else if (!own && sp.F != 0.0) {
        if (unknown == Species::ground)
            poles = {{sp.eps_c_g + sp.u_g * (ng - 1.0) + sp.u_eg_g * ne, ng * nc != 0.0},
                     {sp.eps_c_g + sp.u_g * ng + sp.u_eg_g * ne, true}};
        else
            poles = {{-sp.eps_c_e + sp.u_e * ne + sp.u_eg_e * ng, (ne + 1.0) * nc != 0.0},
                     {-sp.eps_c_e + sp.u_e * (ne - 1.0) + sp.u_eg_e * ng, ne * (nc + 1.0) != 0.0}};
    }
    std::vector<double> out;
    for (const auto& p : poles)
        if (p.present) out.push_back(p.at);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> boundary_solve(Species unknown, const Occupation& occ,
                                   const ScaledParams& sp, std::optional<double> mu_other,
                                   Bracket bracket, const SolveOptions& opts) {
    validate(occ);
    if (!(bracket.hi > bracket.lo)) throw ValidationError("boundary_solve: empty bracket");
    const Coefficient coefficient = opts.coefficient.value_or(own_coefficient(unknown));
    const auto stationary = mu_stationary(occ, sp);
    const double other = mu_other.value_or(unknown == Species::ground ? stationary.mu_e
                                                                      : stationary.mu_g);
    const auto f = component_function(unknown, coefficient, occ, sp, other, opts.hopping_weight);
    const auto poles = coefficient_poles(unknown, coefficient, occ, sp, opts.hopping_weight);

    for (double p : poles)
        if (is_pole(bracket.lo, p) || is_pole(bracket.hi, p))
            throw BracketPoleError("boundary_solve: bracket endpoint lies on a pole at mu = " +
                                   std::to_string(p));

    // Split points: interior poles.
    std::vector<double> cuts{bracket.lo};
    for (double p : poles)
        if (p > bracket.lo && p < bracket.hi) cuts.push_back(p);
    cuts.push_back(bracket.hi);

    // Denominators independent of the unknown surface here as PoleError.
    f(0.5 * (cuts[0] + cuts[1]));

    const int n = std::max(64, opts.scan_points);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        scan_interval(f, cuts[i], i != 0, cuts[i + 1], i + 2 != cuts.size(), n, roots);

    std::sort(roots.begin(), roots.end());
    std::vector<double> distinct;
    for (double r : roots)
        if (distinct.empty() || r - distinct.back() > 1e-9) distinct.push_back(r);
    return distinct;
}

MottWindow general_window(Species unknown, const Occupation& occ, const ScaledParams& sp,
                          std::optional<double> mu_other, const SolveOptions& opts) {
    const Coefficient coefficient = opts.coefficient.value_or(own_coefficient(unknown));
    const auto poles = coefficient_poles(unknown, coefficient, occ, sp, opts.hopping_weight);
    if (poles.size() < 2)
        throw ValidationError("general_window: coefficient has fewer than two poles in mu");
    const auto stationary = mu_stationary(occ, sp);
    const double other = mu_other.value_or(unknown == Species::ground ? stationary.mu_e
                                                                      : stationary.mu_g);
    const auto f = component_function(unknown, coefficient, occ, sp, other, opts.hopping_weight);
    f(0.5 * (poles.front() + poles.back()));

    std::vector<double> roots;
    scan_interval(f, poles.front(), true, poles.back(), true, std::max(64, opts.scan_points), roots);
    std::sort(roots.begin(), roots.end());
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        if (f(0.5 * (roots[i] + roots[i + 1])) > 0.0) return MottWindow::of(roots[i], roots[i + 1]);
    }
    return MottWindow::absent();
}

}  // namespace bhcav
