// Drift-diffusion solver verification: exact propagation of pure heat
// modes, stationarity of the equilibrium profile, mass conservation,
// second-order self-convergence of the drift corrector, the invariant-region
// monitor in the overdamped regime (including a case where the naive bounds
// genuinely break), and the coupled comparison against the momentum system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eulab/euler.hpp"
#include "eulab/fft.hpp"
#include "eulab/parabolic.hpp"
#include "eulab/potential.hpp"
#include "eulab/spectral.hpp"

#include <cmath>
#include <functional>
#include <vector>

using namespace eulab;

namespace {

double sup_abs(const RealField& f) {
    double w = 0.0;
    for (double x : f.v) w = std::max(w, std::abs(x));
    return w;
}

double sup_diff(const RealField& a, const RealField& b) {
    double w = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) w = std::max(w, std::abs(a.v[i] - b.v[i]));
    return w;
}

double l2_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    for (std::size_t i = 0; i < d.v.size(); ++i) d.v[i] -= b.v[i];
    return l2_norm(d);
}

void run_to(DiffusionState& s, const Potential& P, double T, double dt) {
    std::vector<double> mult = heat_multiplier(s.grid, s.gamma, dt);
    int steps = static_cast<int>(std::llround(T / dt));
    for (int k = 0; k < steps; ++k) step_parabolic(s, P, mult, dt);
}

} // namespace

TEST_CASE("pure heat modes decay exactly") {
    Grid g(16, 2.0 * pi);
    Potential P = zero_potential(g);
    double gamma = 0.5, T = 1.0, dt = 0.1;

    RealField rho0 = sample_field(g, [](double x, double y, double z) {
        return 1.0 + 0.3 * std::cos(x) + 0.2 * std::cos(2.0 * y) - 0.15 * std::sin(z) +
               0.1 * std::cos(x) * std::cos(y);
    });
    DiffusionState s = make_diffusion_state(g, rho0, gamma);

    // The integrating factor must be exp(-|xi|^2 dt / gamma) mode for mode.
    std::vector<double> mult = heat_multiplier(g, gamma, dt);
    double worst = 0.0;
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        double xi2 = g.wavenumber(i) * g.wavenumber(i) + g.wavenumber(j) * g.wavenumber(j) +
                     g.wavenumber(k) * g.wavenumber(k);
        worst = std::max(worst, std::abs(mult[idx] - std::exp(-xi2 * dt / gamma)));
    });
    CHECK(worst < 1e-15);

    run_to(s, P, T, dt);
    CHECK(s.t == doctest::Approx(T).epsilon(1e-14));

    double d1 = std::exp(-T / gamma), d4 = std::exp(-4.0 * T / gamma), d2 = std::exp(-2.0 * T / gamma);
    RealField exact = sample_field(g, [=](double x, double y, double z) {
        return 1.0 + 0.3 * d1 * std::cos(x) + 0.2 * d4 * std::cos(2.0 * y) -
               0.15 * d1 * std::sin(z) + 0.1 * d2 * std::cos(x) * std::cos(y);
    });
    CHECK(sup_diff(transform_inverse(s.rho_hat), exact) < 1e-13);

    double box = std::pow(2.0 * pi, 3);
    CHECK(total_mass(s) == doctest::Approx(box).epsilon(1e-13));
}

TEST_CASE("constants are invariant without a potential") {
    Grid g(16, 2.0 * pi);
    Potential P = zero_potential(g);
    RealField rho0 = sample_field(g, [](double, double, double) { return 0.7; });
    DiffusionState s = make_diffusion_state(g, rho0, 1.3);
    run_to(s, P, 2.0, 0.25);
    RealField r = transform_inverse(s.rho_hat);
    for (double v : r.v) CHECK(std::abs(v - 0.7) < 1e-15);
}

TEST_CASE("the equilibrium profile is discretely steady") {
    // rho = e^{-V} balances diffusion against drift exactly; a sign error in
    // the drift term would push the profile toward e^{+V}, two decades above
    // the tolerance here.
    Grid g(32, 2.0 * pi);
    Potential P = gaussian_potential(g, 1e-3);
    double gamma = 0.8;

    DiffusionState s = make_diffusion_state(g, P.rho_inf, gamma);
    RealField start = transform_inverse(s.rho_hat);
    double mass0 = total_mass(s);

    run_to(s, P, 2.0, 0.05);

    CHECK(sup_diff(transform_inverse(s.rho_hat), start) < 1e-6);
    CHECK(std::abs(total_mass(s) - mass0) < 1e-13 * std::abs(mass0));
}

TEST_CASE("mass is exact with a strong potential") {
    Grid g(16, 2.0 * pi);
    Potential P = gaussian_potential(g, 5e-2);
    RealField rho0 = sample_field(g, [](double x, double y, double z) {
        return 1.0 + 0.5 * std::cos(x) * std::cos(y) * std::cos(z);
    });
    DiffusionState s = make_diffusion_state(g, rho0, 0.7);
    double mass0 = total_mass(s);
    run_to(s, P, 2.0, 0.02);
    CHECK(std::abs(total_mass(s) - mass0) < 1e-13 * std::abs(mass0));
}

TEST_CASE("drift corrector is second order in the step size") {
    Grid g(16, 2.0 * pi);
    Potential P = gaussian_potential(g, 5e-2);
    double gamma = 0.7, T = 1.0;
    RealField rho0 = sample_field(g, [](double x, double y, double z) {
        return 1.0 + 0.5 * std::cos(x) * std::cos(y) * std::cos(z);
    });

    auto solve = [&](double dt) {
        DiffusionState s = make_diffusion_state(g, rho0, gamma);
        run_to(s, P, T, dt);
        return s.rho_hat;
    };
    SpectralField a = solve(0.04), b = solve(0.02), c = solve(0.01);
    double gap_ab = l2_diff(a, b), gap_bc = l2_diff(b, c);
    CHECK(gap_bc > 0.0);
    double ratio = gap_ab / gap_bc;
    CHECK(ratio > 3.4);
    CHECK(ratio < 4.7);
}

TEST_CASE("invariant region holds across the overdamped suite") {
    Grid g(16, 2.0 * pi);
    Potential P = gaussian_potential(g, 1e-2);
    double gamma = 50.0;

    std::vector<std::function<double(double, double, double)>> cases = {
        [](double x, double y, double z) { return 1.0 + 0.5 * std::cos(x) * std::cos(y) * std::cos(z); },
        [](double x, double y, double) { return 1.0 + 0.25 * std::cos(x) + 0.25 * std::sin(2.0 * y); },
        [](double, double, double z) { return 1.0 + 0.45 * std::cos(2.0 * z); },
        [](double x, double y, double z) { return 1.0 + 0.3 * std::cos(x + y) + 0.2 * std::cos(z - x); },
        [](double, double y, double z) { return 0.8 + 0.25 * std::cos(y) * std::cos(z); },
    };
    for (const auto& fn : cases) {
        RealField rho0 = sample_field(g, fn);
        BoundMonitor mon = run_max_principle(g, P, rho0, gamma, 5.0, 0.05, 10);
        CHECK(mon.steps == 100);
        CHECK(mon.rho_lo >= 0.5 - 1e-12);
        CHECK(mon.worst_violation < 1e-6);
        CHECK(mon.mass_drift < 1e-12);
        CHECK(mon.min_seen > 0.0);
        CHECK(mon.max_seen <= mon.rho_hi + 1e-6);
    }
}

TEST_CASE("a steep well does break the naive bounds") {
    // At moderate damping the profile relaxes toward e^{-V} scaled to the
    // conserved mass, which leaves the initial range on both sides. The
    // monitor must report that honestly.
    Grid g(16, 2.0 * pi);
    Potential P = gaussian_potential(g, 0.5);
    RealField rho0 = sample_field(g, [](double, double, double) { return 1.0; });

    BoundMonitor mon = run_max_principle(g, P, rho0, 0.5, 3.0, 0.02, 5);
    CHECK(mon.worst_violation > 1e-4);
    CHECK(mon.min_seen < 1.0 - 1e-4);
    CHECK(mon.mass_drift < 1e-12);
    CHECK(mon.t_of_worst > 0.0);
}

TEST_CASE("coupled density gap shrinks with damping") {
    Grid g(16, 2.0 * pi);
    Potential P = gaussian_potential(g, 1e-2);
    RealField rho0 = sample_field(g, [](double x, double, double) {
        return 1.0 + 0.1 * std::cos(x);
    });

    std::vector<double> gammas = {10.0, 30.0, 100.0};
    std::vector<double> gaps;
    for (double gamma : gammas) {
        CompareSeries cs = compare_density(g, P, rho0, gamma, 1.0, 0.02, 5);
        CHECK(cs.euler_status == std::string("completed"));
        CHECK(cs.cfl_halvings == 0);
        CHECK(cs.bracket_ok);
        CHECK(cs.rho_lo == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(cs.rho_hi == doctest::Approx(1.1).epsilon(1e-12));
        CHECK(cs.gap_max < 1e-2);
        CHECK(cs.gap.size() == cs.t.size());
        gaps.push_back(cs.gap_max);
    }
    CHECK(gaps[0] > gaps[1]);
    CHECK(gaps[1] > gaps[2]);
    CHECK(gaps[2] < 0.5 * gaps[0]);
}

TEST_CASE("stability bound and input validation") {
    Grid g(16, 2.0 * pi);
    Potential flat = zero_potential(g);
    CHECK(std::isinf(parabolic_dt_bound(g, flat, 1.0)));

    Potential P = gaussian_potential(g, 5e-2);
    double ximax = std::sqrt(3.0) * (g.n / 2) * (2.0 * pi / g.L);
    double gmax = 0.0;
    for (std::size_t i = 0; i < P.V.v.size(); ++i) {
        double m2 = 0.0;
        for (int ax = 0; ax < 3; ++ax) m2 += P.gradV[ax].v[i] * P.gradV[ax].v[i];
        gmax = std::max(gmax, std::sqrt(m2));
    }
    double expected = 0.5 * 2.0 / (ximax * gmax);
    CHECK(parabolic_dt_bound(g, P, 2.0) == doctest::Approx(expected).epsilon(1e-12));

    RealField bad = sample_field(g, [](double x, double, double) { return std::cos(x); });
    CHECK_THROWS_AS(make_diffusion_state(g, bad, 1.0), std::invalid_argument);
    RealField ok = sample_field(g, [](double, double, double) { return 1.0; });
    CHECK_THROWS_AS(make_diffusion_state(g, ok, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(run_max_principle(g, P, ok, 1.0, 1.0, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(compare_density(g, P, ok, 1.0, 1.0, 0.1, 0), std::invalid_argument);
}
