#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bhcav/cavity_lines.hpp"
#include "bhcav/errors.hpp"
#include "bhcav/hubbard_lines.hpp"
#include "bhcav/landau_residual.hpp"

using namespace bhcav;

namespace {

ScaledParams fig7_params() {
    return ScaledParams::equal_hopping(250.0, 15.0, 25.0, 100.0, 0.0, 100.0);
}

}  // namespace

TEST_CASE("residual example") {
    const auto sp = ScaledParams::equal_hopping(250.0, 15.0, 25.0, 100.0);
    const auto r = residual({150.0, 150.0}, {1, 1, 1.0}, sp);
    const double expected = 1.0 + 2.0 / -115.0 + 1.0 / -135.0 + 25.0 * (2.0 / -15.0 + 2.0 / -235.0);
    CHECK(std::abs(r.c_g - expected) < 1e-12);
    CHECK(r.c_g == doctest::Approx(-2.570898).epsilon(1e-6));
}

TEST_CASE("residual raises on a vanishing denominator") {
    const auto sp = ScaledParams::equal_hopping(250.0, 15.0, 25.0, 100.0);
    // mu_g - u n_g - u_eg n_e = 0
    CHECK_THROWS_AS(residual({265.0, 0.0}, {1, 1, 1.0}, sp), PoleError);
    try {
        residual({265.0, 0.0}, {1, 1, 1.0}, sp);
    } catch (const PoleError& e) {
        CHECK_FALSE(e.which().empty());
    }
    // Zero numerators never raise: n_g = 0 drops the lower hopping pole.
    CHECK_NOTHROW(residual({-235.0, 10.0}, {0, 1, 1.0}, sp));
}

TEST_CASE("vanishing photon coupling leaves only the hopping terms") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double u = 6.0 + 100.0 * d(rng);
        auto sp = ScaledParams::equal_hopping(u, 0.5 * u * d(rng), 0.0, 50.0);
        const Occupation occ{1 + i % 3, 1 + (i / 3) % 3, 1.0};
        const double mu_g = u * (occ.n_g - 1) + sp.u_eg_g * occ.n_e + u * (0.05 + 0.9 * d(rng));
        const double mu_e = u * (occ.n_e - 1) + sp.u_eg_e * occ.n_g + u * (0.05 + 0.9 * d(rng));
        const auto r = residual({mu_g, mu_e}, occ, sp);
        const double s = sp.u_eg_g * occ.n_e;
        const double expected = 1.0 + (occ.n_g + 1.0) / (mu_g - u * occ.n_g - s) +
                                occ.n_g / (-mu_g + u * (occ.n_g - 1.0) + s);
        CHECK(std::abs(r.c_g - expected) < 1e-12 * std::max(1.0, std::abs(expected)));

        // Cavity limit with no photon coupling: both coefficients are 1.
        const auto c = residual({mu_g, mu_e}, occ, sp, {0.0});
        CHECK(c.c_g == 1.0);
        CHECK(c.c_e == 1.0);
    }
}

TEST_CASE("tiny photon coupling recovers the two-component windows") {
    const auto sp = ScaledParams::equal_hopping(20.0, 15.0, 1e-12, 1.0);
    const Occupation occ{1, 1, 1.0};
    const auto roots = boundary_solve(Species::ground, occ, sp, std::nullopt, {15.5, 34.0});
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(16.1186).epsilon(1e-5));
    CHECK(roots[1] == doctest::Approx(32.8814).epsilon(1e-5));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int checked = 0;
    while (checked < 200) {
        auto p = ScaledParams::equal_hopping(10.0 + 200.0 * d(rng), 30.0 * d(rng), 1e-12,
                                             5.0 + 100.0 * d(rng));
        const Occupation o{1 + checked % 3, checked % 2, 1.0};
        const auto expected = two_mott_window(Species::ground, o, p);
        if (!expected.present) continue;
        const auto w = general_window(Species::ground, o, p, std::nullopt);
        REQUIRE(w.present);
        CHECK(std::abs(w.mu_minus - expected.mu_minus) < 1e-8);
        CHECK(std::abs(w.mu_plus - expected.mu_plus) < 1e-8);
        ++checked;
    }
}

TEST_CASE("zero hopping weight recovers the cavity-limit lines") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int checked = 0;
    int draws = 0;
    int outside = 0;
    while (checked < 300) {
        REQUIRE(++draws < 100000);
        const double eps_c = 20.0 + 200.0 * d(rng);
        const auto sp = ScaledParams::equal_hopping(20.0 + 500.0 * d(rng), 50.0 * d(rng),
                                                    1.0 + 60.0 * d(rng), eps_c, 30.0 * d(rng),
                                                    eps_c + 30.0 * d(rng));
        const Occupation occ{1 + checked % 3, 1 + (checked / 3) % 3, 1.0 + checked % 2};
        const Species s = checked % 2 == 0 ? Species::ground : Species::excited;
        const auto expected = cavity_mu_bounds(s, occ, sp);
        if (!expected.present || expected.width() < 1e-3) continue;
        SolveOptions opts;
        opts.hopping_weight = 0.0;
        opts.coefficient = s == Species::ground ? Coefficient::phi_e : Coefficient::phi_g;
        const double eps = s == Species::ground ? sp.eps_g_s : sp.eps_e_s;
        const auto poles = coefficient_poles(s, *opts.coefficient, occ, sp, 0.0);
        REQUIRE(poles.size() == 2);
        if (expected.mu_plus - eps < poles.front() || expected.mu_minus - eps > poles.back()) {
            // Strong coupling pushes both roots past a pole; the coefficient
            // is then negative between them.
            const double mid = 0.5 * (expected.mu_minus + expected.mu_plus) - eps;
            CHECK(cavity_limit_residual(s, mid, occ, sp) < 0.0);
            ++outside;
            continue;
        }
        const auto w = general_window(s, occ, sp, std::nullopt, opts);
        REQUIRE(w.present);
        CHECK(std::abs(w.mu_minus - (expected.mu_minus - eps)) < 1e-8);
        CHECK(std::abs(w.mu_plus - (expected.mu_plus - eps)) < 1e-8);
        ++checked;
    }
    CHECK(outside > 0);

    // The same roots come out of boundary_solve on a bracket spanning the poles.
    const auto sp = fig7_params();
    SolveOptions opts;
    opts.hopping_weight = 0.0;
    opts.coefficient = Coefficient::phi_e;
    const auto roots = boundary_solve(Species::ground, {1, 1, 1.0}, sp, std::nullopt, {0.5, 500.5}, opts);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - 165.0) < 1e-8);
    CHECK(std::abs(roots[1] - 240.0) < 1e-8);
}

TEST_CASE("coefficient is positive inside a window and negative just outside") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int checked = 0;
    while (checked < 300) {
        const auto sp = ScaledParams::equal_hopping(6.0 + 300.0 * d(rng), 40.0 * d(rng),
                                                    5.0 * d(rng), 10.0 + 100.0 * d(rng));
        const Occupation occ{1 + checked % 3, 1 + (checked / 3) % 2, 1.0};
        const auto w = general_window(Species::ground, occ, sp, std::nullopt);
        if (!w.present || w.width() < 1e-3) continue;
        const auto stationary = mu_stationary(occ, sp);
        auto c_g = [&](double mu) { return residual({mu, stationary.mu_e}, occ, sp).c_g; };
        CHECK(c_g(0.5 * (w.mu_minus + w.mu_plus)) > 0.0);
        CHECK(c_g(w.mu_minus - 1e-6 * std::max(1.0, w.width())) < 0.0);
        CHECK(c_g(w.mu_plus + 1e-6 * std::max(1.0, w.width())) < 0.0);
        ++checked;
    }
}

TEST_CASE("solver contract") {
    const auto sp = ScaledParams::equal_hopping(20.0, 15.0, 1e-12, 1.0);
    const Occupation occ{1, 1, 1.0};
    const auto poles = coefficient_poles(Species::ground, Coefficient::phi_g, occ, sp, 1.0);
    REQUIRE(poles.size() == 2);
    CHECK(poles[0] == doctest::Approx(15.0));
    CHECK(poles[1] == doctest::Approx(35.0));
    CHECK_THROWS_AS(boundary_solve(Species::ground, occ, sp, std::nullopt, {15.0, 30.0}),
                    BracketPoleError);
    CHECK_THROWS_AS(boundary_solve(Species::ground, occ, sp, std::nullopt, {30.0, 30.0}),
                    ValidationError);
    // Deep in the Mott window there is no sign change.
    CHECK(boundary_solve(Species::ground, occ, sp, std::nullopt, {20.0, 30.0}).empty());

    // A wide bracket crossing both poles still yields sorted, distinct roots.
    const auto roots = boundary_solve(Species::ground, occ, sp, std::nullopt, {-100.0, 200.0});
    REQUIRE(roots.size() >= 2);
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) CHECK(roots[i + 1] - roots[i] > 1e-9);
    for (double r : roots)
        CHECK(std::abs(residual({r, mu_stationary(occ, sp).mu_e}, occ, sp).c_g) < 1e-6);

    CHECK_THROWS_AS(general_window(Species::excited, {1, 0, 1.0}, sp, std::nullopt), ValidationError);
}
