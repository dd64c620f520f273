#include "eulab/green.hpp"

#include <cmath>
#include <stdexcept>

namespace eulab {

namespace {

// sinh(x)/x, even series below 1e-4 (next term ~ 1e-20, below roundoff).
double sinhc(double x) {
    double a = std::abs(x);
    if (a < 1e-4) {
        double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

double sinc(double x) {
    double a = std::abs(x);
    if (a < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace

EigenPair eigenvalues(double xi_abs, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("eigenvalues: gamma must be positive");
    double disc = gamma * gamma - 4.0 * xi_abs * xi_abs;
    double lbar = -0.5 * gamma;
    EigenPair e;
    e.discriminant = disc;
    if (disc >= 0.0) {
        double d = 0.5 * std::sqrt(disc);
        e.lambda3 = cplx{lbar + d, 0.0};
        e.lambda4 = cplx{lbar - d, 0.0};
    } else {
        double w = 0.5 * std::sqrt(-disc);
        e.lambda3 = cplx{lbar, w};
        e.lambda4 = cplx{lbar, -w};
    }
    return e;
}

double spectral_gap(double r0, double gamma) {
    // Valid up to and including the double-root radius r0 = gamma/2.
    if (!(0.0 < r0 && r0 <= 0.5 * gamma))
        throw std::invalid_argument("spectral_gap: need 0 < r0 <= gamma/2");
    return std::min(r0 * r0 / gamma, 0.5 * gamma);
}

double low_freq_expansion_error(double xi_abs, double gamma) {
    double xi2 = xi_abs * xi_abs;
    if (xi2 == 0.0)
        return 0.0;
    cplx l3 = eigenvalues(xi_abs, gamma).lambda3;
    return std::abs(l3 + xi2 / gamma) / xi2;
}

GreenScalars green_scalars(double xi_abs, double t, double gamma) {
    const double lbar = -0.5 * gamma;
    const double d2 = 0.25 * gamma * gamma - xi_abs * xi_abs;
    GreenScalars gs;
    gs.egt = std::exp(-gamma * t);
    if (d2 < 0.0) {
        // Conjugate pair: bounded trig responses.
        double w = std::sqrt(-d2);
        double E = std::exp(lbar * t);
        double c = std::cos(w * t);
        double sc = sinc(w * t);
        gs.g11 = E * (c - lbar * t * sc);
        gs.s = E * t * sc;
        gs.p = E * (c + lbar * t * sc);
        return gs;
    }
    double d = std::sqrt(d2);
    if (d * t > 30.0) {
        // Both exponentials are far apart; no cancellation, and cosh(dt)
        // would overflow before e^{lbar t} rescues it.
        double l3 = lbar + d, l4 = lbar - d;
        double e3 = std::exp(l3 * t), e4 = std::exp(l4 * t);
        gs.g11 = (l3 * e4 - l4 * e3) / (2.0 * d);
        gs.s = (e3 - e4) / (2.0 * d);
        gs.p = (l3 * e3 - l4 * e4) / (2.0 * d);
        return gs;
    }
    double E = std::exp(lbar * t);
    double c = std::cosh(d * t);
    double sc = sinhc(d * t);
    gs.g11 = E * (c - lbar * t * sc);
    gs.s = E * t * sc;
    gs.p = E * (c + lbar * t * sc);
    return gs;
}

GreenHat green_hat(const std::array<double, 3>& xi, double t, double gamma) {
    double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    GreenScalars gs = green_scalars(std::sqrt(r2), t, gamma);
    GreenHat gh;
    gh.g11 = cplx{gs.g11, 0.0};
    for (int j = 0; j < 3; ++j) {
        gh.g12[j] = cplx{0.0, -xi[j] * gs.s};
        gh.g21[j] = cplx{0.0, -xi[j] * gs.s};
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double diag = (i == j) ? gs.egt : 0.0;
            double proj = r2 > 0.0 ? (gs.p - gs.egt) * xi[i] * xi[j] / r2 : 0.0;
            gh.g22[i][j] = cplx{diag + proj, 0.0};
        }
    return gh;
}

Mat4 green_matrix(const GreenHat& gh) {
    Mat4 m{};
    m[0][0] = gh.g11;
    for (int j = 0; j < 3; ++j) {
        m[0][j + 1] = gh.g12[j];
        m[j + 1][0] = gh.g21[j];
        for (int i = 0; i < 3; ++i)
            m[i + 1][j + 1] = gh.g22[i][j];
    }
    return m;
}

Mat4 generator_matrix(const std::array<double, 3>& xi, double gamma) {
    Mat4 a{};
    for (int j = 0; j < 3; ++j) {
        a[0][j + 1] = cplx{0.0, xi[j]};
        a[j + 1][0] = cplx{0.0, xi[j]};
        a[j + 1][j + 1] = cplx{gamma, 0.0};
    }
    return a;
}

Mat4 mat_mul(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            cplx aik = a[i][k];
            if (aik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < 4; ++j)
                c[i][j] += aik * b[k][j];
        }
    return c;
}

double green_ode_residual(const std::array<double, 3>& xi, double t,
                          double gamma, double dt) {
    Mat4 gp = green_matrix(green_hat(xi, t + dt, gamma));
    Mat4 gm = green_matrix(green_hat(xi, t - dt, gamma));
    Mat4 g0 = green_matrix(green_hat(xi, t, gamma));
    Mat4 ag = mat_mul(generator_matrix(xi, gamma), g0);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx r = (gp[i][j] - gm[i][j]) / (2.0 * dt) + ag[i][j];
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

void apply_green_mode(const std::array<double, 3>& xi, const GreenScalars& gs,
                      cplx& phi, std::array<cplx, 3>& u) {
    double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    cplx xdotu = xi[0] * u[0] + xi[1] * u[1] + xi[2] * u[2];
    cplx phi0 = phi;
    const cplx mi{0.0, -1.0};
    phi = gs.g11 * phi0 + mi * gs.s * xdotu;
    if (r2 > 0.0) {
        cplx longi = (gs.p - gs.egt) * xdotu / r2;
        for (int j = 0; j < 3; ++j)
            u[j] = mi * gs.s * xi[j] * phi0 + gs.egt * u[j] + longi * xi[j];
    } else {
        for (int j = 0; j < 3; ++j)
            u[j] = gs.egt * u[j];
    }
}

void propagate_linear(SpectralField& phi, std::array<SpectralField, 3>& u,
                      double t, double gamma) {
    const Grid& g = phi.grid;
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        std::array<double, 3> xi{g.wavenumber(i), g.wavenumber(j),
                                 g.wavenumber(k)};
        double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        GreenScalars gs = green_scalars(r, t, gamma);
        std::array<cplx, 3> uv{u[0].v[size_t(idx)], u[1].v[size_t(idx)],
                               u[2].v[size_t(idx)]};
        apply_green_mode(xi, gs, phi.v[size_t(idx)], uv);
        for (int c = 0; c < 3; ++c)
            u[c].v[size_t(idx)] = uv[c];
    });
}

} // namespace eulab
