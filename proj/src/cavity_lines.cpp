#include "bhcav/cavity_lines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bhcav/errors.hpp"

namespace bhcav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_term(double numerator, double denominator, const char* name) {
    if (numerator == 0.0) return 0.0;
    if (std::abs(denominator) < 1e-12) throw PoleError(name, denominator);
    return numerator / denominator;
}

void require_equal_hopping(const ScaledParams& sp) {
    if (!sp.has_equal_hopping())
        throw ValidationError(
            "cavity-limit closed forms need J_g == J_e; use landau-residual for unequal hoppings");
}

// Set of x in the domain where a x^2 + b x + c >= 0. `open_at_zero` drops
// intervals that touch the domain only at x == 0.
ExistenceSet nonnegative_set(double a, double b, double c, bool open_at_zero) {
    ExistenceSet out;
    std::vector<Interval> raw;

    if (a == 0.0) {
        if (b == 0.0) {
            if (c >= 0.0) raw.push_back({-kInf, kInf});
        } else {
            const double r = -c / b;
            out.roots.push_back(r);
            if (b > 0.0)
                raw.push_back({r, kInf});
            else
                raw.push_back({-kInf, r});
        }
    } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) {
            if (a > 0.0) raw.push_back({-kInf, kInf});
        } else {
            const double s = std::sqrt(disc);
            double r1;
            double r2;
            if (b == 0.0 && c == 0.0) {
                r1 = r2 = 0.0;
            } else {
                const double q = -0.5 * (b + std::copysign(s, b));
                r1 = q / a;
                r2 = c / q;
            }
            if (r1 > r2) std::swap(r1, r2);
            out.roots.push_back(r1);
            if (r2 != r1) out.roots.push_back(r2);
            if (a > 0.0) {
                raw.push_back({-kInf, r1});
                raw.push_back({r2, kInf});
            } else {
                raw.push_back({r1, r2});
            }
        }
    }

    for (Interval iv : raw) {
        if (iv.hi < 0.0 || (open_at_zero && iv.hi <= 0.0)) continue;
        iv.lo = std::max(iv.lo, 0.0);
        if (!out.intervals.empty() && out.intervals.back().hi >= iv.lo)
            out.intervals.back().hi = std::max(out.intervals.back().hi, iv.hi);
        else
            out.intervals.push_back(iv);
    }
    return out;
}

}  // namespace

OccupancyFactors occupancy_factors(Species species, const Occupation& occ) {
    if (species == Species::ground)
        return {occ.n_g + occ.n_c + 1.0, (occ.n_g + 1.0) * (occ.n_c + 1.0)};
    return {occ.n_c - occ.n_e, (occ.n_e + 1.0) * occ.n_c};
}

CavityLineCoefficients cavity_coefficients(Species species, const Occupation& occ,
                                           const ScaledParams& sp) {
    require_equal_hopping(sp);
    validate(occ);
    const auto [m, q] = occupancy_factors(species, occ);
    CavityLineCoefficients c;
    if (species == Species::ground) {
        c.L = sp.u_g * (occ.n_g - 0.5) + sp.u_eg_g * occ.n_e - 0.5 * sp.F * m;
        c.G = sp.u_g + sp.F * m;
        c.K = sp.F * sp.u_g * q;
    } else {
        c.L = sp.u_e * (occ.n_e - 0.5) + sp.u_eg_e * occ.n_g - 0.5 * sp.F * m;
        c.G = sp.u_e + sp.F * m;
        c.K = sp.F * sp.u_e * q;
    }
    return c;
}

MottWindow cavity_mu_bounds(Species species, const Occupation& occ, const ScaledParams& sp) {
    const auto c = cavity_coefficients(species, occ, sp);
    const double disc = c.discriminant();
    if (disc < 0.0) return MottWindow::absent();
    const double offset = species == Species::ground ? sp.eps_g_s + sp.eps_c_g
                                                     : sp.eps_e_s - sp.eps_c_e;
    const double half = 0.5 * std::sqrt(disc);
    return MottWindow::of(offset + c.L - half, offset + c.L + half);
}

double cavity_limit_residual(Species species, double mu, const Occupation& occ,
                             const ScaledParams& sp) {
    const double ng = occ.n_g;
    const double ne = occ.n_e;
    const double nc = occ.n_c;
    if (species == Species::ground) {
        const double eps_c = sp.eps_c_g;
        return 1.0 + sp.F * (checked_term(ng * nc, -mu + eps_c + sp.u_g * (ng - 1.0) + sp.u_eg_g * ne,
                                          "-mu_g+eps_c+U_g(n_g-1)+U_eg n_e") +
                             checked_term((ng + 1.0) * (nc + 1.0),
                                          mu - eps_c - sp.u_g * ng - sp.u_eg_g * ne,
                                          "mu_g-eps_c-U_g n_g-U_eg n_e"));
    }
    const double eps_c = sp.eps_c_e;
    return 1.0 + sp.F * (checked_term((ne + 1.0) * nc, mu + eps_c - sp.u_e * ne - sp.u_eg_e * ng,
                                      "mu_e+eps_c-U_e n_e-U_eg n_g") +
                         checked_term(ne * (nc + 1.0),
                                      -mu - eps_c + sp.u_e * (ne - 1.0) + sp.u_eg_e * ng,
                                      "-mu_e-eps_c+U_e(n_e-1)+U_eg n_g"));
}

bool ExistenceSet::contains(double x) const {
    return std::any_of(intervals.begin(), intervals.end(),
                       [x](const Interval& iv) { return iv.contains(x); });
}

ExistenceSet mott_existence_in_u(Species species, const Occupation& occ, double F) {
    const auto [m, q] = occupancy_factors(species, occ);
    // (u + F m)^2 - 4 F u q
    return nonnegative_set(1.0, 2.0 * F * m - 4.0 * F * q, F * F * m * m, true);
}

ExistenceSet mott_existence_in_F(Species species, const Occupation& occ, double u) {
    const auto [m, q] = occupancy_factors(species, occ);
    return nonnegative_set(m * m, 2.0 * u * m - 4.0 * u * q, u * u, false);
}

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::u: return "u";
        case SweepAxis::u_eg: return "u_eg";
        case SweepAxis::eps_c: return "eps_c";
        case SweepAxis::F: return "F";
        case SweepAxis::n_c: return "n_c";
    }
    return "?";
}

std::optional<SweepAxis> parse_sweep_axis(const std::string& name) {
    for (auto axis : {SweepAxis::u, SweepAxis::u_eg, SweepAxis::eps_c, SweepAxis::F, SweepAxis::n_c})
        if (name == to_string(axis)) return axis;
    return std::nullopt;
}

ScaledParams with_axis_value(SweepAxis axis, double value, const ScaledParams& fixed) {
    ScaledParams sp = fixed;
    switch (axis) {
        case SweepAxis::u: sp.u_g = sp.u_e = value; break;
        case SweepAxis::u_eg: sp.u_eg_g = sp.u_eg_e = value; break;
        case SweepAxis::eps_c: sp.eps_c_g = sp.eps_c_e = value; break;
        case SweepAxis::F: sp.F = value; break;
        case SweepAxis::n_c: break;
    }
    return sp;
}

Occupation with_axis_value(SweepAxis axis, double value, const Occupation& fixed) {
    Occupation occ = fixed;
    if (axis == SweepAxis::n_c) occ.n_c = value;
    return occ;
}

std::vector<SweepRow> sweep(SweepAxis axis, std::span<const double> values,
                            const ScaledParams& fixed, const Occupation& occ) {
    std::vector<SweepRow> rows(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow& row = rows[i];
        row.value = values[i];
        try {
            const auto sp = with_axis_value(axis, row.value, fixed);
            const auto o = with_axis_value(axis, row.value, occ);
            row.ground = cavity_mu_bounds(Species::ground, o, sp);
            row.excited = cavity_mu_bounds(Species::excited, o, sp);
        } catch (const std::exception& e) {
            row.ground = row.excited = MottWindow::absent();
            row.error = e.what();
        }
    }
    return rows;
}

std::vector<LineTable> multi_occupancy_lines(std::span<const Occupation> occs,
                                             const ScaledParams& sp,
                                             std::span<const double> u_grid) {
    std::vector<LineTable> out;
    out.reserve(occs.size());
    for (const auto& occ : occs) out.push_back({occ, sweep(SweepAxis::u, u_grid, sp, occ)});
    return out;
}

namespace {

std::optional<double> branch_value(Species s, const Occupation& occ, const ScaledParams& sp,
                                   double u, Branch branch) {
    const auto w = cavity_mu_bounds(s, occ, with_axis_value(SweepAxis::u, u, sp));
    if (!w.present) return std::nullopt;
    return branch == Branch::lower ? w.mu_minus : w.mu_plus;
}

}  // namespace

std::vector<Crossing> find_crossings(Species species_a, const Occupation& a, Species species_b,
                                     const Occupation& b, const ScaledParams& sp,
                                     std::span<const double> u_grid) {
    std::vector<Crossing> out;
    for (Branch branch : {Branch::lower, Branch::upper}) {
        auto diff = [&](double u) -> std::optional<double> {
            const auto va = branch_value(species_a, a, sp, u, branch);
            const auto vb = branch_value(species_b, b, sp, u, branch);
            if (!va || !vb) return std::nullopt;
            return *va - *vb;
        };
        for (std::size_t i = 0; i + 1 < u_grid.size(); ++i) {
            const auto d0 = diff(u_grid[i]);
            const auto d1 = diff(u_grid[i + 1]);
            if (!d0 || !d1 || !((*d0 < 0.0 && *d1 > 0.0) || (*d0 > 0.0 && *d1 < 0.0))) continue;
            double lo = u_grid[i];
            double hi = u_grid[i + 1];
            double f_lo = *d0;
            while (hi - lo > 1e-8) {
                const double mid = 0.5 * (lo + hi);
                const auto dm = diff(mid);
                if (!dm) break;
                if ((*dm < 0.0) == (f_lo < 0.0)) {
                    lo = mid;
                    f_lo = *dm;
                } else {
                    hi = mid;
                }
            }
            out.push_back({0.5 * (lo + hi), branch});
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.u < y.u; });
    return out;
}

}  // namespace bhcav
