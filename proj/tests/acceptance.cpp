// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bhcav/cavity_lines.hpp"
#include "bhcav/diagram.hpp"
#include "bhcav/hubbard_lines.hpp"
#include "bhcav/landau_residual.hpp"
#include "bhcav/perturbation_oracle.hpp"

using namespace bhcav;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

ScaledParams fig7_params(double u = 250.0) {
    return ScaledParams::equal_hopping(u, 15.0, 25.0, 100.0, 0.0, 100.0);
}

double hopping_condition(double mu, int n, double u, double s) {
    return 1.0 + (n + 1.0) / (mu - u * n - s) + n / (-mu + u * (n - 1.0) + s);
}

double ground_condition(double mu, const Occupation& o, const ScaledParams& sp) {
    return 1.0 + sp.F * (o.n_g * o.n_c / (-mu + sp.eps_c_g + sp.u_g * (o.n_g - 1) + sp.u_eg_g * o.n_e) +
                         (o.n_g + 1) * (o.n_c + 1) / (mu - sp.eps_c_g - sp.u_g * o.n_g - sp.u_eg_g * o.n_e));
}

double excited_condition(double mu, const Occupation& o, const ScaledParams& sp) {
    return 1.0 + sp.F * ((o.n_e + 1) * o.n_c / (mu + sp.eps_c_e - sp.u_e * o.n_e - sp.u_eg_e * o.n_g) +
                         o.n_e * (o.n_c + 1) / (-mu - sp.eps_c_e + sp.u_e * (o.n_e - 1) + sp.u_eg_e * o.n_g));
}

// Discriminant of the condition multiplied through by both denominators,
// with a magnitude for the relative comparison.
double cleared_discriminant(Species s, const Occupation& o, const ScaledParams& sp, double& scale) {
    double a, b, p, q;
    if (s == Species::ground) {
        a = sp.u_g * (o.n_g - 1);
        b = sp.u_g * o.n_g;
        p = -sp.F * o.n_g * o.n_c;
        q = sp.F * (o.n_g + 1) * (o.n_c + 1);
    } else {
        a = sp.u_e * o.n_e;
        b = sp.u_e * (o.n_e - 1);
        p = sp.F * (o.n_e + 1) * o.n_c;
        q = -sp.F * o.n_e * (o.n_c + 1);
    }
    const double B = -a - b + p + q;
    const double C = a * b - p * b - q * a;
    const double m = std::abs(a) + std::abs(b) + std::abs(p) + std::abs(q);
    scale = std::max(1.0, m * m);
    return B * B - 4.0 * C;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Bracket just inside the outermost poles.
Bracket inside(const std::vector<double>& poles) {
    const double lo = poles.front();
    const double hi = poles.back();
    return {lo + 1e-9 * std::max(1.0, std::abs(lo)), hi - 1e-9 * std::max(1.0, std::abs(hi))};
}

Outcome lobe_tips() {
    Outcome o;
    const double expected[] = {5.82842712474619, 9.898979485566356, 13.928203230275509};
    for (int n = 1; n <= 3; ++n) {
        const double u = single_lobe_tip(n).u;
        o.require(near(u, (2 * n + 1) + 2 * std::sqrt(n * (n + 1.0)), 1e-9), "tip formula");
        o.require(near(u, expected[n - 1], 1e-9), "tip value");
        o.require(!single_mott_window(n, u * (1 - 1e-6)).present, "window below tip");
        o.require(single_mott_window(n, u * (1 + 1e-6)).present, "no window above tip");
    }
    // Three ordered, disjoint lobes across the fig1 preset range.
    const auto grid = scan_grid(figure_preset("fig1"), 301, 301);
    for (double u : {15.0, 20.0, 30.0}) {
        double prev = -1.0;
        for (int n = 1; n <= 3; ++n) {
            const auto w = single_mott_window(n, u);
            o.require(w.present && w.mu_minus > prev, "lobes not ordered");
            prev = w.mu_plus;
        }
    }
    o.require(grid.boundaries.size() >= 3, "fewer than three lobe boundaries");
    return o;
}

Outcome hopping_closure() {
    Outcome o;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int present = 0;
    while (present < 1000) {
        const int n = 1 + static_cast<int>(5 * d(rng));
        const double u = single_lobe_tip(n).u * (1.0 + 30.0 * d(rng));
        auto sp = ScaledParams::equal_hopping(u, 0.9 * u * d(rng), 0.0, 1.0);
        const Occupation occ{n, 1 + static_cast<int>(3 * d(rng)), 0.0};
        const auto w = two_mott_window(Species::ground, occ, sp);
        if (!w.present) continue;
        const double s = sp.u_eg_g * occ.n_e;
        for (double mu : {w.mu_minus, w.mu_plus})
            o.require(std::abs(hopping_condition(mu, n, u, s)) < 1e-9, "residual above 1e-9");
        ++present;
    }
    return o;
}

Outcome cavity_closure() {
    Outcome o;
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int present = 0;
    int draws = 0;
    while (present < 1000 && ++draws < 1000000) {
        const double u = 1.0 + 499.0 * d(rng);
        const double eps_c = 1.0 + 299.0 * d(rng);
        const auto sp = ScaledParams::equal_hopping(u, 0.95 * u * d(rng), 100.0 * d(rng), eps_c,
                                                    50.0 * d(rng), eps_c + 50.0 * (d(rng) - 0.5));
        // Non-zero occupations keep every term of the conditions live.
        const Occupation occ{1 + static_cast<int>(3 * d(rng)), 1 + static_cast<int>(3 * d(rng)),
                             1.0 + std::floor(3 * d(rng))};
        const Species s = d(rng) < 0.5 ? Species::ground : Species::excited;
        const auto c = cavity_coefficients(s, occ, sp);
        double scale = 1.0;
        const double brute = cleared_discriminant(s, occ, sp, scale);
        o.require(std::abs(c.discriminant() - brute) <= 1e-10 * scale, "discriminant mismatch");
        const auto w = cavity_mu_bounds(s, occ, sp);
        if (!w.present) continue;
        const double eps = s == Species::ground ? sp.eps_g_s : sp.eps_e_s;
        for (double mu : {w.mu_minus, w.mu_plus}) {
            const double r = s == Species::ground ? ground_condition(mu - eps, occ, sp)
                                                  : excited_condition(mu - eps, occ, sp);
            o.require(std::abs(r) < 1e-9, "residual above 1e-9");
        }
        ++present;
    }
    o.require(present == 1000, "too few present windows");
    return o;
}

Outcome fig7_values() {
    Outcome o;
    const Occupation occ{1, 1, 1.0};
    const auto g = cavity_mu_bounds(Species::ground, occ, fig7_params());
    const auto e = cavity_mu_bounds(Species::excited, occ, fig7_params());
    o.require(g.present && g.mu_minus == 165.0 && g.mu_plus == 240.0, "ground window");
    o.require(e.present && near(e.mu_minus, 140.0 - 0.5 * std::sqrt(12500.0), 1e-9) &&
                  near(e.mu_plus, 140.0 + 0.5 * std::sqrt(12500.0), 1e-9),
              "excited window");
    // The ground window opens at u = 225 and the excited one at u = 200.
    o.require(!cavity_mu_bounds(Species::ground, occ, fig7_params(224.0)).present &&
                  cavity_mu_bounds(Species::ground, occ, fig7_params(226.0)).present,
              "ground threshold");
    o.require(!cavity_mu_bounds(Species::excited, occ, fig7_params(199.0)).present &&
                  cavity_mu_bounds(Species::excited, occ, fig7_params(201.0)).present,
              "excited threshold");
    return o;
}

Outcome existence() {
    Outcome o;
    const Occupation occ{1, 1, 1.0};
    const auto gu = mott_existence_in_u(Species::ground, occ, 25.0);
    const auto eu = mott_existence_in_u(Species::excited, occ, 25.0);
    o.require(gu.roots.size() == 2 && near(gu.roots[0], 25.0, 1e-8) && near(gu.roots[1], 225.0, 1e-8),
              "ground u roots");
    o.require(eu.roots.size() == 2 && near(eu.roots[0], 0.0, 1e-8) && near(eu.roots[1], 200.0, 1e-8),
              "excited u roots");
    const auto gF = mott_existence_in_F(Species::ground, occ, 250.0);
    const auto eF = mott_existence_in_F(Species::excited, occ, 250.0);
    o.require(gF.roots.size() == 2 && near(gF.roots[0], 250.0 / 9.0, 1e-8) &&
                  near(gF.roots[1], 250.0, 1e-8),
              "ground F roots");
    o.require(eF.roots.size() == 1 && near(eF.roots[0], 31.25, 1e-8) && eF.contains(31.25) &&
                  !eF.contains(31.25 + 1e-6) && eF.contains(0.0),
              "excited F set");
    const double n_c[] = {0.0, 1.0, 2.0};
    const auto rows = sweep(SweepAxis::n_c, n_c, fig7_params(), occ);
    o.require(rows[0].ground.present && rows[1].ground.present && !rows[2].ground.present,
              "photon-number sweep");
    return o;
}

Outcome oracle() {
    Outcome o;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = verify_seed(seed);
        o.require(r.pass, "seed " + std::to_string(seed) + " failed");
        for (const auto& c : r.checks) o.require(std::abs(c.residual) < 1e-10, c.name);
    }
    return o;
}

Outcome limits() {
    Outcome o;
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const auto sp = ScaledParams::equal_hopping(10.0 + 200.0 * d(rng), 30.0 * d(rng), 0.0,
                                                    5.0 + 100.0 * d(rng));
        const Occupation occ{1 + checked % 3, checked % 3, 1.0};
        const auto w = two_mott_window(Species::ground, occ, sp);
        if (!w.present) continue;
        const auto poles = coefficient_poles(Species::ground, Coefficient::phi_g, occ, sp, 1.0);
        for (double F : {0.0, 1e-12}) {
            auto at = sp;
            at.F = F;
            const auto roots = boundary_solve(Species::ground, occ, at, std::nullopt,
                                              inside(poles));
            o.require(roots.size() == 2 && near(roots[0], w.mu_minus, 1e-8) &&
                          near(roots[1], w.mu_plus, 1e-8),
                      "hopping limit");
        }
        ++checked;
    }
    checked = 0;
    while (checked < 100) {
        const double eps_c = 20.0 + 200.0 * d(rng);
        const auto sp = ScaledParams::equal_hopping(200.0 + 400.0 * d(rng), 50.0 * d(rng),
                                                    1.0 + 30.0 * d(rng), eps_c, 0.0, eps_c);
        const Occupation occ{1 + checked % 2, 1 + checked % 3, 1.0};
        const Species s = checked % 2 == 0 ? Species::ground : Species::excited;
        const auto expected = cavity_mu_bounds(s, occ, sp);
        if (!expected.present) continue;
        SolveOptions opts;
        opts.hopping_weight = 0.0;
        opts.coefficient = s == Species::ground ? Coefficient::phi_e : Coefficient::phi_g;
        const auto poles = coefficient_poles(s, *opts.coefficient, occ, sp, 0.0);
        const double eps = s == Species::ground ? sp.eps_g_s : sp.eps_e_s;
        if (expected.mu_minus - eps < poles.front() || expected.mu_plus - eps > poles.back()) continue;
        const auto roots = boundary_solve(s, occ, sp, std::nullopt,
                                          inside(poles), opts);
        o.require(roots.size() == 2 && near(roots[0], expected.mu_minus - eps, 1e-8) &&
                      near(roots[1], expected.mu_plus - eps, 1e-8),
                  "cavity limit");
        ++checked;
    }
    return o;
}

bool flips_near(const FigurePreset& preset, const LineSpec& line, double x, double y, double h) {
    auto member = [&](double px, double py) {
        return line_window({occupation_at(preset, line.occ, px), line.species},
                           params_at(preset, px), preset.variant)
            .contains(py);
    };
    const bool first = member(x - h, y - h);
    for (double dx : {-h, h})
        for (double dy : {-h, h})
            if (member(x + dx, y + dy) != first) return true;
    return false;
}

Outcome figure_structure() {
    Outcome o;
    {
        const auto g = scan_grid(figure_preset("fig3"), 400, 400);
        std::vector<const Boundary*> ground, excited;
        for (const auto& b : g.boundaries)
            (b.line.species == Species::ground ? ground : excited).push_back(&b);
        bool same = !ground.empty() && ground.size() == excited.size();
        for (std::size_t k = 0; same && k < ground.size(); ++k) {
            same = ground[k]->points.size() == excited[k]->points.size();
            for (std::size_t i = 0; same && i < ground[k]->points.size(); ++i)
                same = ground[k]->points[i].x == excited[k]->points[i].x &&
                       ground[k]->points[i].y == excited[k]->points[i].y;
        }
        o.require(same, "fig3 polylines differ");
    }
    {
        const auto g = scan_grid(figure_preset("fig4"), 400, 400);
        for (auto l : {PhaseLabel::SF, PhaseLabel::MI, PhaseLabel::SM, PhaseLabel::MS}) {
            bool found = false;
            for (auto x : g.layers[0].labels) found = found || x == l;
            o.require(found, std::string("fig4 region missing: ") + to_string(l));
        }
    }
    {
        const auto f3 = figure_preset("fig3");
        const auto f5 = figure_preset("fig5");
        const auto g = scan_grid(f5, 400, 400);
        int checked = 0;
        for (const auto& b : g.boundaries) {
            if (b.line.species != Species::excited) continue;
            for (const auto& p : b.points) {
                if (p.y - 100.0 < f3.y.lo || p.y - 100.0 > f3.y.hi) continue;
                o.require(flips_near(f3, f3.lines[1], p.x, p.y - 100.0, 2e-6 * std::max(1.0, p.y)),
                          "fig5 excited line not displaced by 100");
                ++checked;
            }
        }
        o.require(checked > 0, "fig5 has no excited boundary");
    }
    {
        std::size_t n12 = 0;
        std::size_t n13 = 0;
        for (const auto& r : preset_crossings(figure_preset("fig12"))) n12 += r.crossings.size();
        for (const auto& r : preset_crossings(figure_preset("fig13"))) n13 += r.crossings.size();
        o.require(n12 == 0, "fig12 has a crossing");
        o.require(n13 > 0, "fig13 has no crossing");
    }
    {
        const auto grid = linspace(0.0, 1000.0, 1001);
        const LineSpec a{{1, 1, 1.0}, Species::ground};
        const LineSpec b{{1, 0, 1.0}, Species::ground};
        int weak = 0;
        for (const auto& s : overlap_profile(figure_preset("fig15"), a, b, grid)) weak += s.overlap;
        o.require(weak > 0 && weak < static_cast<int>(grid.size()), "fig15 overlap not partial");
        bool separated = true;
        for (const auto& s : overlap_profile(figure_preset("fig14"), a, b, grid))
            if (s.u <= 100.0) separated = separated && !s.overlap;
        o.require(separated, "fig14 lines overlap at small u");
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism() {
    Outcome o;
    const auto base = fs::temp_directory_path() / "bhcav_acceptance";
    fs::remove_all(base);
    const fs::path a = base / "a";
    const fs::path b = base / "b";
    for (const auto& dir : {a, b}) {
        const std::string cmd = std::string(PHASES_EXE) + " figure fig7 --out " + dir.string() + " 2>/dev/null";
        o.require(std::system(cmd.c_str()) == 0, "figure fig7 failed");
    }
    int files = 0;
    if (fs::exists(a))
        for (const auto& entry : fs::directory_iterator(a)) {
            const auto other = b / entry.path().filename();
            o.require(fs::exists(other) && slurp(entry.path()) == slurp(other),
                      entry.path().filename().string() + " differs");
            ++files;
        }
    o.require(files > 0, "no output files");
    fs::remove_all(base);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;  // 0: no runtime bound
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "single-component lobe tips", 1.0, lobe_tips},
        {2, "residual closure, hopping limit", 1.0, hopping_closure},
        {3, "residual closure, cavity limit", 1.0, cavity_closure},
        {4, "cavity windows at the fig7 reference point", 0.0, fig7_values},
        {5, "existence thresholds", 1.0, existence},
        {6, "oracle equivalence", 5.0, oracle},
        {7, "limit continuity of the general solver", 2.0, limits},
        {8, "figure structure", 10.0, figure_structure},
        {9, "determinism of figure fig7", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && s >= c.budget_s) o.require(false, "runtime over budget");
        std::printf("criterion %d: %s  %s  (%.3f s)%s%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, s,
                    o.pass ? "" : "  ", o.detail.c_str());
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
