// Linear solution-operator verification: characteristic roots against an
// independent companion-matrix eigensolver, symbol identities (t = 0,
// semigroup, generator ODE), mode-wise propagation against a brute-force
// RK4 integration, radial decay norms against closed forms, the decay-rate
// table, and the two-sided low-frequency bound.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eulab/green.hpp"
#include "eulab/quadrature.hpp"
#include "eulab/radial.hpp"
#include "eulab/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace eulab;

namespace {

double rel_err(double got, double want) {
    double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

// Independent root oracle: eigenvalues of the companion matrix of
// z^2 + gamma z + r^2, sorted by real part (descending).
std::pair<cplx, cplx> companion_roots(double r, double gamma) {
    Eigen::Matrix2d m;
    m << 0.0, 1.0, -r * r, -gamma;
    Eigen::EigenSolver<Eigen::Matrix2d> es(m);
    cplx a = es.eigenvalues()(0), b = es.eigenvalues()(1);
    if (a.real() < b.real() ||
        (a.real() == b.real() && a.imag() < b.imag()))
        std::swap(a, b);
    return {a, b};
}

double mat_max_abs(const Mat4& m) {
    double w = 0.0;
    for (const auto& row : m)
        for (const cplx& c : row)
            w = std::max(w, std::abs(c));
    return w;
}

Mat4 mat_sub(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            c[i][j] = a[i][j] - b[i][j];
    return c;
}

Mat4 identity4() {
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        m[i][i] = cplx{1.0, 0.0};
    return m;
}

// Brute-force reference: classical RK4 on the 4-dim mode ODE W' = -Ahat W.
void rk4_mode(const std::array<double, 3>& xi, double gamma, double T,
              double dt, cplx& phi, std::array<cplx, 3>& u) {
    auto rhs = [&](const std::array<cplx, 4>& w, std::array<cplx, 4>& dw) {
        const cplx I{0.0, 1.0};
        dw[0] = -I * (xi[0] * w[1] + xi[1] * w[2] + xi[2] * w[3]);
        for (int j = 0; j < 3; ++j)
            dw[j + 1] = -I * xi[j] * w[0] - gamma * w[j + 1];
    };
    std::array<cplx, 4> w{phi, u[0], u[1], u[2]};
    long steps = std::lround(T / dt);
    for (long s = 0; s < steps; ++s) {
        std::array<cplx, 4> k1, k2, k3, k4, tmp;
        rhs(w, k1);
        for (int i = 0; i < 4; ++i) tmp[i] = w[i] + 0.5 * dt * k1[i];
        rhs(tmp, k2);
        for (int i = 0; i < 4; ++i) tmp[i] = w[i] + 0.5 * dt * k2[i];
        rhs(tmp, k3);
        for (int i = 0; i < 4; ++i) tmp[i] = w[i] + dt * k3[i];
        rhs(tmp, k4);
        for (int i = 0; i < 4; ++i)
            w[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    phi = w[0];
    u = {w[1], w[2], w[3]};
}

} // namespace

// ============================================================ eigenvalues

TEST_CASE("eigenvalues: closed cases") {
    // xi = 0: roots 0 and -gamma.
    EigenPair e0 = eigenvalues(0.0, 2.0);
    CHECK(std::abs(e0.lambda3) < 1e-15);
    CHECK(std::abs(e0.lambda4 - cplx{-2.0, 0.0}) < 1e-15);

    // |xi| = gamma/2: repeated root -gamma/2.
    EigenPair er = eigenvalues(1.0, 2.0);
    CHECK(std::abs(er.lambda3 - cplx{-1.0, 0.0}) < 1e-15);
    CHECK(std::abs(er.lambda4 - cplx{-1.0, 0.0}) < 1e-15);

    // |xi| = 1, gamma = 1: conjugate pair -1/2 +- i sqrt(3)/2.
    EigenPair ec = eigenvalues(1.0, 1.0);
    CHECK(std::abs(ec.lambda3 - cplx{-0.5, std::sqrt(3.0) / 2.0}) < 1e-15);
    CHECK(std::abs(ec.lambda4 - cplx{-0.5, -std::sqrt(3.0) / 2.0}) < 1e-15);
}

TEST_CASE("eigenvalues: sum/product identities and companion oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(0.0, 10.0);
    std::uniform_real_distribution<double> ug(1e-3, 10.0);
    double worst_sum = 0.0, worst_prod = 0.0, worst_oracle = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double r = ur(rng), gamma = ug(rng);
        EigenPair e = eigenvalues(r, gamma);
        worst_sum = std::max(worst_sum, std::abs(e.lambda3 + e.lambda4 + gamma));
        worst_prod = std::max(worst_prod, std::abs(e.lambda3 * e.lambda4 - r * r));
        CHECK(e.lambda3.real() >= e.lambda4.real());
        if (i % 100 == 0) {
            auto [a, b] = companion_roots(r, gamma);
            worst_oracle = std::max(worst_oracle, std::abs(e.lambda3 - a));
            worst_oracle = std::max(worst_oracle, std::abs(e.lambda4 - b));
        }
    }
    CHECK(worst_sum < 1e-11);
    CHECK(worst_prod < 1e-11);
    CHECK(worst_oracle < 1e-7); // iterative oracle, looser by nature
}

TEST_CASE("spectral_gap: closed values and eigenvalue sweep") {
    CHECK(spectral_gap(0.1, 2.0) == doctest::Approx(0.005).epsilon(1e-14));
    CHECK(spectral_gap(1.0, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS(spectral_gap(1.0, 1.0)); // needs r0 < gamma/2

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ug(0.1, 8.0);
    for (int trial = 0; trial < 50; ++trial) {
        double gamma = ug(rng);
        double r0 = 0.49 * gamma * std::uniform_real_distribution<double>(0.05, 1.0)(rng);
        double eta = spectral_gap(r0, gamma);
        for (int s = 0; s <= 200; ++s) {
            double r = r0 + (10.0 * gamma - r0) * s / 200.0;
            EigenPair e = eigenvalues(r, gamma);
            CHECK(e.lambda3.real() <= -eta + 1e-12);
            CHECK(e.lambda4.real() <= -eta + 1e-12);
        }
    }
}

TEST_CASE("low_freq_expansion_error: heat-like root defect") {
    CHECK(low_freq_expansion_error(0.01, 1.0) < 1e-3);
    CHECK(low_freq_expansion_error(0.1, 1.0) < 1.1e-2);
    // Defect shrinks quadratically with |xi|.
    double e1 = low_freq_expansion_error(0.02, 1.0);
    double e2 = low_freq_expansion_error(0.01, 1.0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

// ================================================================= symbol

TEST_CASE("green_hat: identity at t = 0") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::uniform_real_distribution<double> ug(0.1, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        double gamma = ug(rng);
        std::array<double, 3> xi{u(rng), u(rng), u(rng)};
        if (i == 0) xi = {0.0, 0.0, 0.0};
        if (i == 1) xi = {0.5 * gamma, 0.0, 0.0}; // exactly at the double root
        Mat4 g0 = green_matrix(green_hat(xi, 0.0, gamma));
        worst = std::max(worst, mat_max_abs(mat_sub(g0, identity4())));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("green_hat: closed forms at and around the repeated root") {
    double gamma = 2.0;
    std::array<double, 3> xi{1.0, 0.0, 0.0}; // |xi| = gamma/2
    for (double t : {0.3, 1.0, 4.0}) {
        GreenHat gh = green_hat(xi, t, gamma);
        // phi response collapses to e^{-gamma t/2}(1 + gamma t/2).
        double want = std::exp(-t) * (1.0 + t);
        CHECK(rel_err(gh.g11.real(), want) < 1e-12);
        CHECK(std::abs(gh.g11.imag()) == 0.0);
        // Difference quotient collapses to t e^{-gamma t / 2}.
        double want_s = t * std::exp(-t);
        CHECK(rel_err(-gh.g12[0].imag(), want_s) < 1e-12);

        // Continuity across the double root: perturb |xi| by 1e-6.
        for (double dr : {-1e-6, 1e-6}) {
            GreenHat gp = green_hat({1.0 + dr, 0.0, 0.0}, t, gamma);
            CHECK(std::abs(gp.g11 - gh.g11) < 1e-4);
            CHECK(std::abs(gp.g12[0] - gh.g12[0]) < 1e-4);
            CHECK(std::abs(gp.g22[0][0] - gh.g22[0][0]) < 1e-4);
        }
    }
}

TEST_CASE("green_hat: zero mode keeps phi and damps u") {
    for (double gamma : {0.5, 1.0, 3.0}) {
        for (double t : {0.0, 0.7, 5.0}) {
            GreenHat gh = green_hat({0.0, 0.0, 0.0}, t, gamma);
            CHECK(rel_err(gh.g11.real(), 1.0) < 1e-14);
            for (int j = 0; j < 3; ++j) {
                CHECK(std::abs(gh.g12[j]) == 0.0);
                CHECK(std::abs(gh.g21[j]) == 0.0);
                for (int i = 0; i < 3; ++i) {
                    double want = i == j ? std::exp(-gamma * t) : 0.0;
                    CHECK(std::abs(gh.g22[i][j] - cplx{want, 0.0}) < 1e-14);
                }
            }
        }
    }
}

TEST_CASE("green_hat: semigroup property") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> ug(0.1, 5.0);
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        double gamma = ug(rng);
        std::array<double, 3> xi{u(rng), u(rng), u(rng)};
        double t = ut(rng), s = ut(rng);
        Mat4 gts = green_matrix(green_hat(xi, t + s, gamma));
        Mat4 prod = mat_mul(green_matrix(green_hat(xi, t, gamma)),
                            green_matrix(green_hat(xi, s, gamma)));
        worst = std::max(worst, mat_max_abs(mat_sub(gts, prod)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("green_ode_residual: second order in dt, exact exponential at xi=0") {
    std::array<double, 3> xi{0.8, -0.4, 0.3};
    double gamma = 1.2, t = 2.0;
    double r1 = green_ode_residual(xi, t, gamma, 1e-3);
    double r2 = green_ode_residual(xi, t, gamma, 5e-4);
    double r3 = green_ode_residual(xi, t, gamma, 2.5e-4);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.15));

    // xi = 0: the symbol is diag(1, e^{-gamma t} I); with dt = 1e-5 the
    // centered difference of the exponential sits below 1e-10.
    CHECK(green_ode_residual({0.0, 0.0, 0.0}, 2.0, 1.0, 1e-5) < 1e-10);
}

TEST_CASE("propagate_linear: against brute-force mode integration") {
    Grid g(16, 2.0 * pi);
    double gamma = 1.3, T = 5.0;
    RealField phi0 = random_smooth_field(g, 301);
    RealField u0x = random_smooth_field(g, 302);
    RealField u0y = random_smooth_field(g, 303);
    RealField u0z = random_smooth_field(g, 304);

    SpectralField phi = transform_forward(phi0);
    std::array<SpectralField, 3> u{transform_forward(u0x), transform_forward(u0y),
                                   transform_forward(u0z)};
    SpectralField phi_ref = phi;
    std::array<SpectralField, 3> u_ref = u;

    propagate_linear(phi, u, T, gamma);

    double worst = 0.0, scale = 0.0;
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        std::array<double, 3> xi{g.wavenumber(i), g.wavenumber(j),
                                 g.wavenumber(k)};
        cplx p = phi_ref.v[size_t(idx)];
        std::array<cplx, 3> uu{u_ref[0].v[size_t(idx)], u_ref[1].v[size_t(idx)],
                               u_ref[2].v[size_t(idx)]};
        rk4_mode(xi, gamma, T, 1e-3, p, uu);
        worst = std::max(worst, std::abs(p - phi.v[size_t(idx)]));
        scale = std::max(scale, std::abs(p));
        for (int c = 0; c < 3; ++c) {
            worst = std::max(worst, std::abs(uu[c] - u[c].v[size_t(idx)]));
            scale = std::max(scale, std::abs(uu[c]));
        }
    });
    CHECK(worst / std::max(scale, 1e-30) < 1e-8);

    // Real data stays real through the propagator.
    CHECK(imag_residual(phi) < 1e-12);
    CHECK(imag_residual(u[0]) < 1e-12);
}

// ========================================================== radial norms

TEST_CASE("radial_decay_norm: t = 0 closed forms") {
    RadialProfile gauss = [](double r) { return std::exp(-0.5 * r * r); };
    // 4 pi int r^2 e^{-r^2} dr = pi^{3/2}.
    double n0 = radial_decay_norm(gauss, GreenBlock::b11, 0, 0.0, 1.0, 12.0);
    CHECK(rel_err(n0, std::pow(pi, 0.75)) < 1e-10);
    // Off-diagonal block vanishes at t = 0.
    double n21 = radial_decay_norm(gauss, GreenBlock::b21, 0, 0.0, 1.0, 12.0);
    CHECK(n21 == 0.0);
    // b22 at t = 0 is the identity: same norm as the data.
    double n22 = radial_decay_norm(gauss, GreenBlock::b22, 0, 0.0, 1.0, 12.0);
    CHECK(rel_err(n22, std::pow(pi, 0.75)) < 1e-10);
    // One derivative of the Gaussian data: 4 pi int r^4 e^{-r^2} = (3/2) pi^{3/2}.
    double n1 = radial_decay_norm(gauss, GreenBlock::b11, 1, 0.0, 1.0, 12.0);
    CHECK(rel_err(n1, std::sqrt(1.5) * std::pow(pi, 0.75)) < 1e-10);
}

TEST_CASE("heat kernel control: modified symbol matches (8 pi t)^{-3/4}") {
    // With the heat-like root -r^2/gamma in place of lambda3 and flat data
    // (2 pi)^{-3/2} on [0,b], the k = 0 norm is the free heat kernel norm.
    double gamma = 1.0, b = 2.0;
    for (double t : {5.0, 10.0, 40.0}) {
        auto integrand = [&](double r) {
            double w = std::exp(-2.0 * r * r * t / gamma);
            double f = std::pow(2.0 * pi, -1.5);
            return r * r * w * f * f;
        };
        double val = std::sqrt(4.0 * pi * integrate(integrand, 0.0, b, {}, 1e-13));
        double want = std::pow(8.0 * pi * t / gamma, -0.75);
        CHECK(rel_err(val, want) < 1e-10);

        // Same integral against the erf closed form at finite truncation:
        // int_0^b r^2 e^{-a r^2} dr, a = 2t/gamma.
        double a = 2.0 * t / gamma;
        double closed = 0.25 * std::sqrt(pi / (a * a * a)) * std::erf(std::sqrt(a) * b) -
                        0.5 * b / a * std::exp(-a * b * b);
        double raw = integrate([&](double r) { return r * r * std::exp(-a * r * r); },
                               0.0, b, {}, 1e-13);
        CHECK(rel_err(raw, closed) < 1e-11);
    }
}

TEST_CASE("decay table: fitted slopes of the block norms") {
    // gamma = 2 with data e^{-r^2/2} makes the model integral decay exactly
    // like (1+t)^{-(2k+3)/4} (resp. -(2k+5)/4), so the fitted slopes land
    // on the expected table values well within the +-0.05 band.
    double gamma = 2.0;
    RadialProfile gauss = [](double r) { return std::exp(-0.5 * r * r); };
    std::vector<double> ts;
    for (int i = 0; i <= 32; ++i)
        ts.push_back(10.0 * std::pow(100.0, i / 32.0));

    struct Row { GreenBlock b; int k; double want; };
    const Row rows[] = {
        {GreenBlock::b11, 0, -0.75}, {GreenBlock::b11, 1, -1.25},
        {GreenBlock::b11, 2, -1.75}, {GreenBlock::b21, 0, -1.25},
        {GreenBlock::b21, 1, -1.75}, {GreenBlock::b22, 0, -1.75},
        {GreenBlock::b12, 0, -1.25},
    };
    for (const Row& row : rows) {
        std::vector<double> vals;
        for (double t : ts)
            vals.push_back(
                radial_decay_norm(gauss, row.b, row.k, t, gamma, 10.0));
        DecayFit fit = fit_decay_exponent(ts, vals);
        CAPTURE(block_name(row.b));
        CAPTURE(row.k);
        CAPTURE(fit.slope);
        CHECK(std::abs(fit.slope - row.want) < 0.05);
    }
}

TEST_CASE("fit_decay_exponent: recovers a synthetic power law") {
    std::vector<double> t, v;
    for (int i = 0; i <= 20; ++i) {
        double tt = 5.0 * std::pow(50.0, i / 20.0);
        t.push_back(tt);
        v.push_back(3.0 * std::pow(1.0 + tt, -1.5));
    }
    DecayFit fit = fit_decay_exponent(t, v);
    CHECK(rel_err(fit.slope, -1.5) < 1e-12);
    CHECK(rel_err(fit.intercept, std::log(3.0)) < 1e-10);
    CHECK(fit.max_residual < 1e-12);
}

// ====================================================== two-sided bounds

TEST_CASE("lower_bound_certificate: flat low-frequency data") {
    double gamma = 1.0, r0 = 0.3;
    RadialProfile flat = [r0](double r) {
        if (r <= r0) return 1.0;
        if (r >= 2.0 * r0) return 0.0;
        return 0.5 * (1.0 + std::cos(pi * (r - r0) / r0));
    };
    std::vector<double> ts;
    for (int i = 0; i <= 28; ++i)
        ts.push_back(10.0 * std::pow(100.0, i / 28.0));

    LowerBoundReport rep =
        lower_bound_certificate(flat, r0, gamma, ts, 8.0, 50.0);

    CHECK(rep.profile_inf >= 1.0 - 1e-12);
    CHECK(rep.sandwich_ok);
    CHECK(rep.t0 <= 10.0);
    CHECK(rep.d_phi > 0.0);
    CHECK(rep.d_u > 0.0);

    // Envelope slopes reproduce the data-driven lower rates; remainders die
    // exponentially so their fitted slopes are far below any algebraic rate.
    std::vector<double> tt, ep, eu;
    for (size_t i = 0; i < ts.size(); ++i)
        if (ts[i] >= 50.0) {
            tt.push_back(ts[i]);
            ep.push_back(rep.envelope_phi[i]);
            eu.push_back(rep.envelope_u[i]);
        }
    CHECK(std::abs(fit_decay_exponent(tt, ep).slope + 0.75) < 0.05);
    CHECK(std::abs(fit_decay_exponent(tt, eu).slope + 1.25) < 0.05);
    CHECK(fit_decay_exponent(rep.t, rep.remainder_phi).slope <= -1.70);
    CHECK(fit_decay_exponent(rep.t, rep.remainder_u).slope <= -1.70);
    // Full norms obey the same rates from above.
    CHECK(std::abs(fit_decay_exponent(tt, std::vector<double>(
                       rep.full_phi.end() - tt.size(), rep.full_phi.end()))
                       .slope + 0.75) < 0.05);
}
