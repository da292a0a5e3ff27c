#include "bhcav/diagram.hpp"

#include <algorithm>
#include <cstdio>

#include "bhcav/errors.hpp"
#include "bhcav/landau_residual.hpp"

namespace bhcav {

namespace {

double own_offset(Species s, const ScaledParams& sp) {
    return s == Species::ground ? sp.eps_g_s : sp.eps_e_s;
}

int own_occupancy(Species s, const Occupation& occ) {
    return s == Species::ground ? occ.n_g : occ.n_e;
}

double own_mu(Species s, const ChemicalPotentials& mu) {
    return s == Species::ground ? mu.mu_g : mu.mu_e;
}

// Sign test of the own Landau coefficient at the actual pair of chemical
// potentials, restricted to the interval between its two poles.
bool general_mott(Species s, const Occupation& occ, const ScaledParams& sp,
                  const ChemicalPotentials& mu_barred) {
    if (own_occupancy(s, occ) == 0) return false;
    const auto poles = coefficient_poles(s, own_coefficient(s), occ, sp, 1.0);
    if (poles.size() < 2) return false;
    const ChemicalPotentials mu{mu_barred.mu_g - sp.eps_g_s, mu_barred.mu_e - sp.eps_e_s};
    const double m = own_mu(s, mu);
    if (!(m > poles.front() && m < poles.back())) return false;
    const auto r = residual(mu, occ, sp);
    return (s == Species::ground ? r.c_g : r.c_e) > 0.0;
}

bool species_mott(ModelVariant variant, Species s, const Occupation& occ, const ScaledParams& sp,
                  const ChemicalPotentials& mu_barred, std::string* diagnostic) {
    try {
        if (variant == ModelVariant::general) return general_mott(s, occ, sp, mu_barred);
        return line_window({occ, s}, sp, variant).contains(own_mu(s, mu_barred));
    } catch (const std::exception& e) {
        if (diagnostic) {
            if (!diagnostic->empty()) *diagnostic += "; ";
            *diagnostic += std::string(to_string(s)) + ": " + e.what();
        }
        return false;
    }
}

ScaledParams cavity_params(double u_eg, double eps_c) {
    // Atomic transition on resonance with the cavity mode.
    return ScaledParams::equal_hopping(0.0, u_eg, 25.0, eps_c, 0.0, eps_c);
}

FigurePreset cavity_u_preset(std::string id, double u_eg, double eps_c,
                             std::vector<Occupation> occs, std::vector<LineSpec> lines) {
    FigurePreset p;
    p.id = std::move(id);
    p.variant = ModelVariant::cavity;
    p.params = cavity_params(u_eg, eps_c);
    p.occupations = std::move(occs);
    p.lines = std::move(lines);
    p.x = {"u", 0.0, 1000.0};
    p.y = {"mu", 0.0, 1000.0};
    p.notes = "axis ranges are preset defaults";
    return p;
}

FigurePreset sweep_preset(std::string id, SweepAxis axis, AxisRange x, AxisRange y) {
    FigurePreset p;
    p.id = std::move(id);
    p.variant = ModelVariant::cavity;
    p.params = cavity_params(15.0, 100.0);
    p.params.u_g = p.params.u_e = 250.0;
    p.occupations = {{1, 1, 1.0}};
    p.lines = {{{1, 1, 1.0}, Species::ground}, {{1, 1, 1.0}, Species::excited}};
    p.x = std::move(x);
    p.y = std::move(y);
    p.sweep_axis = axis;
    p.notes = "axis ranges are preset defaults";
    return p;
}

LineSpec g(int ng, int ne, double nc = 1.0) { return {{ng, ne, nc}, Species::ground}; }
LineSpec e(int ng, int ne, double nc = 1.0) { return {{ng, ne, nc}, Species::excited}; }

}  // namespace

const char* to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::SF: return "SF";
        case PhaseLabel::MI: return "MI";
        case PhaseLabel::SM: return "SM";
        case PhaseLabel::MS: return "MS";
    }
    return "?";
}

PhaseLabel label_from(bool ground_mott, bool excited_mott) {
    if (ground_mott && excited_mott) return PhaseLabel::MI;
    if (excited_mott) return PhaseLabel::SM;
    if (ground_mott) return PhaseLabel::MS;
    return PhaseLabel::SF;
}

const char* to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::single: return "single";
        case ModelVariant::two: return "two";
        case ModelVariant::cavity: return "cavity";
        case ModelVariant::general: return "general";
    }
    return "?";
}

std::optional<ModelVariant> parse_model_variant(const std::string& name) {
    for (auto v : {ModelVariant::single, ModelVariant::two, ModelVariant::cavity,
                   ModelVariant::general})
        if (name == to_string(v)) return v;
    return std::nullopt;
}

std::string line_tag(const LineSpec& line) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s_%d_%d_%.12g", to_string(line.species), line.occ.n_g,
                  line.occ.n_e, line.occ.n_c);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw ValidationError("linspace: need at least two samples");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

std::vector<std::string> figure_ids() {
    return {"fig1",  "fig3",  "fig4",  "fig5",  "fig7",  "fig8",  "fig9",  "fig10",
            "fig11", "fig12", "fig13", "fig14", "fig15", "fig16", "fig17", "fig18"};
}

FigurePreset figure_preset(const std::string& id) {
    if (id == "fig1") {
        FigurePreset p;
        p.id = id;
        p.variant = ModelVariant::single;
        p.occupations = {{1, 0, 0.0}, {2, 0, 0.0}, {3, 0, 0.0}};
        for (const auto& o : p.occupations) p.lines.push_back({o, Species::ground});
        p.x = {"u", 0.0, 30.0};
        p.y = {"mu", 0.0, 90.0};
        p.notes = "axis ranges are preset defaults";
        return p;
    }
    if (id == "fig3" || id == "fig4" || id == "fig5") {
        FigurePreset p;
        p.id = id;
        p.variant = ModelVariant::two;
        p.params = ScaledParams::equal_hopping(0.0, 15.0, 0.0, 1.0);
        if (id == "fig4") {
            p.params.u_eg_e = 20.0;
            p.params.hopping_ratio = 4.0 / 3.0;
        }
        if (id == "fig5") p.params.eps_e_s = 100.0;
        p.occupations = {{1, 1, 0.0}};
        p.lines = {g(1, 1, 0.0), e(1, 1, 0.0)};
        p.x = {"u", 0.0, 60.0};
        p.y = {"mu", 0.0, id == "fig5" ? 180.0 : 80.0};
        p.notes = "axis ranges are preset defaults";
        return p;
    }
    if (id == "fig7") {
        auto p = cavity_u_preset(id, 15.0, 100.0, {{1, 1, 1.0}}, {g(1, 1), e(1, 1)});
        p.reference_u = 250.0;
        return p;
    }
    if (id == "fig8") return sweep_preset(id, SweepAxis::u_eg, {"u_eg", 0.0, 200.0}, {"mu", 0.0, 500.0});
    if (id == "fig9")
        return sweep_preset(id, SweepAxis::eps_c, {"eps_c", 0.0, 400.0}, {"mu", -200.0, 600.0});
    if (id == "fig10") return sweep_preset(id, SweepAxis::F, {"F", 0.0, 300.0}, {"mu", -500.0, 600.0});
    if (id == "fig11") return sweep_preset(id, SweepAxis::n_c, {"n_c", 0.0, 3.0}, {"mu", 0.0, 400.0});
    if (id == "fig12" || id == "fig13")
        return cavity_u_preset(id, id == "fig12" ? 50.0 : 500.0, 200.0, {{1, 1, 1.0}, {2, 0, 1.0}},
                               {g(1, 1), e(1, 1), g(2, 0)});
    if (id == "fig14" || id == "fig15")
        return cavity_u_preset(id, id == "fig14" ? 500.0 : 50.0, 200.0, {{1, 1, 1.0}, {1, 0, 1.0}},
                               {g(1, 1), e(1, 1), g(1, 0)});
    if (id == "fig16")
        return cavity_u_preset(id, 250.0, 200.0, {{1, 1, 1.0}, {1, 0, 1.0}, {2, 0, 1.0}},
                               {g(1, 1), e(1, 1), g(1, 0), g(2, 0)});
    if (id == "fig17")
        return cavity_u_preset(id, 30.0, 100.0, {{1, 1, 1.0}, {1, 0, 1.0}, {0, 1, 1.0}},
                               {g(1, 1), e(1, 1), g(1, 0), e(0, 1)});
    if (id == "fig18")
        return cavity_u_preset(id, 30.0, 100.0, {{1, 1, 1.0}, {2, 0, 1.0}, {0, 2, 1.0}},
                               {g(1, 1), e(1, 1), g(2, 0), e(0, 2)});
    throw ValidationError("unknown figure id '" + id + "'");
}

MottWindow line_window(const LineSpec& line, const ScaledParams& sp, ModelVariant variant) {
    const Species s = line.species;
    switch (variant) {
        case ModelVariant::single:
            return single_mott_window(line.occ.n_g, sp.u_g);
        case ModelVariant::two:
            if (own_occupancy(s, line.occ) == 0) return MottWindow::absent();
            return two_mott_window(s, line.occ, sp).shifted(own_offset(s, sp));
        case ModelVariant::cavity:
            return cavity_mu_bounds(s, line.occ, sp);
        case ModelVariant::general:
            if (own_occupancy(s, line.occ) == 0) return MottWindow::absent();
            return general_window(s, line.occ, sp, std::nullopt).shifted(own_offset(s, sp));
    }
    return MottWindow::absent();
}

Classification classify_point(UPair u, const ChemicalPotentials& mu_barred, const Occupation& occ,
                              const ScaledParams& sp, ModelVariant variant) {
    ScaledParams at = sp;
    at.u_g = u.u_g;
    at.u_e = u.u_e;
    Classification c;
    if (variant == ModelVariant::single) {
        const bool mott =
            species_mott(variant, Species::ground, occ, at, mu_barred, &c.diagnostic);
        c.label = mott ? PhaseLabel::MI : PhaseLabel::SF;
        return c;
    }
    const bool gm = species_mott(variant, Species::ground, occ, at, mu_barred, &c.diagnostic);
    const bool em = species_mott(variant, Species::excited, occ, at, mu_barred, &c.diagnostic);
    c.label = label_from(gm, em);
    return c;
}

ScaledParams params_at(const FigurePreset& preset, double x) {
    return with_axis_value(preset.sweep_axis, x, preset.params);
}

Occupation occupation_at(const FigurePreset& preset, const Occupation& occ, double x) {
    return with_axis_value(preset.sweep_axis, x, occ);
}

PhaseGrid scan_grid(const FigurePreset& preset, int nx, int ny) {
    if (nx < 2 || ny < 2) throw ValidationError("scan_grid: resolution must be at least 2x2");
    if (!(preset.x.hi > preset.x.lo)) throw ValidationError("scan_grid: empty x axis range");
    if (!(preset.y.hi > preset.y.lo)) throw ValidationError("scan_grid: empty y axis range");
    if (preset.occupations.empty()) throw ValidationError("scan_grid: no occupations");

    PhaseGrid grid;
    grid.preset_id = preset.id;
    grid.x = preset.x;
    grid.y = preset.y;
    grid.xs = linspace(preset.x.lo, preset.x.hi, nx);
    grid.ys = linspace(preset.y.lo, preset.y.hi, ny);
    const std::size_t n = grid.xs.size() * grid.ys.size();

    if (preset.variant == ModelVariant::single) {
        LabelLayer layer{"all", std::vector<PhaseLabel>(n, PhaseLabel::SF)};
        for (std::size_t j = 0; j < grid.ys.size(); ++j)
            for (std::size_t i = 0; i < grid.xs.size(); ++i)
                for (const auto& occ : preset.occupations) {
                    const auto sp = params_at(preset, grid.xs[i]);
                    const auto c = classify_point({sp.u_g, sp.u_e}, {grid.ys[j], grid.ys[j]}, occ,
                                                  sp, preset.variant);
                    if (!c.diagnostic.empty()) ++grid.failed_points;
                    if (c.label == PhaseLabel::MI) {
                        layer.labels[j * grid.xs.size() + i] = PhaseLabel::MI;
                        break;
                    }
                }
        grid.layers.push_back(std::move(layer));
    } else {
        for (const auto& base : preset.occupations) {
            char name[64];
            std::snprintf(name, sizeof name, "%d_%d_%.12g", base.n_g, base.n_e, base.n_c);
            LabelLayer layer{name, std::vector<PhaseLabel>(n)};
            for (std::size_t j = 0; j < grid.ys.size(); ++j)
                for (std::size_t i = 0; i < grid.xs.size(); ++i) {
                    const auto sp = params_at(preset, grid.xs[i]);
                    const auto occ = occupation_at(preset, base, grid.xs[i]);
                    const auto c = classify_point({sp.u_g, sp.u_e}, {grid.ys[j], grid.ys[j]}, occ,
                                                  sp, preset.variant);
                    if (!c.diagnostic.empty()) ++grid.failed_points;
                    layer.labels[j * grid.xs.size() + i] = c.label;
                }
            grid.layers.push_back(std::move(layer));
        }
    }

    for (const auto& line : preset.lines) {
        const Membership member = [&](double x, double y) {
            const auto sp = params_at(preset, x);
            const auto occ = occupation_at(preset, line.occ, x);
            return species_mott(preset.variant, line.species, occ, sp, {y, y}, nullptr);
        };
        std::vector<char> inside(n);
        for (std::size_t j = 0; j < grid.ys.size(); ++j)
            for (std::size_t i = 0; i < grid.xs.size(); ++i)
                inside[j * grid.xs.size() + i] = member(grid.xs[i], grid.ys[j]) ? 1 : 0;
        const std::string species =
            preset.variant == ModelVariant::single ? "single" : to_string(line.species);
        for (auto& poly : trace_boundaries(grid.xs, grid.ys, inside, member, kBoundaryTolerance))
            grid.boundaries.push_back({line, species, std::move(poly)});
    }
    return grid;
}

std::vector<CrossingReport> preset_crossings(const FigurePreset& preset, int samples) {
    if (preset.variant != ModelVariant::cavity || preset.sweep_axis != SweepAxis::u)
        throw ValidationError("preset_crossings: needs a cavity preset with a u axis");
    const auto grid = linspace(preset.x.lo, preset.x.hi, samples);
    std::vector<CrossingReport> out;
    for (std::size_t i = 0; i < preset.lines.size(); ++i)
        for (std::size_t k = i + 1; k < preset.lines.size(); ++k) {
            const auto& a = preset.lines[i];
            const auto& b = preset.lines[k];
            if (a.occ == b.occ) continue;
            out.push_back({a, b, find_crossings(a.species, a.occ, b.species, b.occ, preset.params,
                                                grid)});
        }
    return out;
}

std::vector<OverlapSample> overlap_profile(const FigurePreset& preset, const LineSpec& a,
                                           const LineSpec& b, std::span<const double> u_grid) {
    std::vector<OverlapSample> out;
    out.reserve(u_grid.size());
    auto window = [&](const LineSpec& line, double x) {
        try {
            const LineSpec at{occupation_at(preset, line.occ, x), line.species};
            return line_window(at, params_at(preset, x), preset.variant);
        } catch (const std::exception&) {
            return MottWindow::absent();
        }
    };
    for (double u : u_grid) {
        const auto wa = window(a, u);
        const auto wb = window(b, u);
        OverlapSample s{u, wa.present, wb.present, false};
        s.overlap = wa.present && wb.present &&
                    std::max(wa.mu_minus, wb.mu_minus) < std::min(wa.mu_plus, wb.mu_plus);
        out.push_back(s);
    }
    return out;
}

}  // namespace bhcav
