#include "eulab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace eulab {

// ============================================================ derivatives

SpectralField spectral_derivative(const SpectralField& fh, int axis) {
    const Grid& g = fh.grid;
    SpectralField out(g);
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        int m = axis == 0 ? i : axis == 1 ? j : k;
        double xi = g.wavenumber(m);
        out.v[size_t(idx)] = cplx{0.0, xi} * fh.v[size_t(idx)];
    });
    return out;
}

std::array<SpectralField, 3> spectral_gradient(const SpectralField& fh) {
    return {spectral_derivative(fh, 0), spectral_derivative(fh, 1),
            spectral_derivative(fh, 2)};
}

SpectralField lambda_power(const SpectralField& fh, double a) {
    const Grid& g = fh.grid;
    SpectralField out(g);
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        double kx = g.wavenumber(i), ky = g.wavenumber(j), kz = g.wavenumber(k);
        double r2 = kx * kx + ky * ky + kz * kz;
        if (r2 == 0.0) {
            out.v[size_t(idx)] = a < 0.0 ? cplx{0.0, 0.0}
                                         : (a == 0.0 ? fh.v[size_t(idx)] : cplx{0.0, 0.0});
        } else {
            out.v[size_t(idx)] = std::pow(r2, 0.5 * a) * fh.v[size_t(idx)];
        }
    });
    return out;
}

void dealias(SpectralField& fh) {
    const Grid& g = fh.grid;
    const int cut = g.n / 3;
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        if (std::abs(g.fold(i)) > cut || std::abs(g.fold(j)) > cut ||
            std::abs(g.fold(k)) > cut)
            fh.v[size_t(idx)] = cplx{0.0, 0.0};
    });
}

void remove_mean(SpectralField& fh) { fh.v[0] = cplx{0.0, 0.0}; }

// ================================================================= norms

double l2_norm(const SpectralField& fh) { return sobolev_seminorm(fh, 0); }

double sobolev_seminorm(const SpectralField& fh, int j) {
    const Grid& g = fh.grid;
    const double w = std::pow(g.spacing(), 3);
    double acc = 0.0;
    for_modes(g, [&](int a, int b, int c, std::int64_t idx) {
        double kx = g.wavenumber(a), ky = g.wavenumber(b), kz = g.wavenumber(c);
        double r2 = kx * kx + ky * ky + kz * kz;
        double mag2 = std::norm(fh.v[size_t(idx)]);
        acc += (j == 0 ? 1.0 : std::pow(r2, j)) * mag2;
    });
    return std::sqrt(w * acc);
}

double sobolev_norm(const SpectralField& fh, int k) {
    if (k < 0 || k > 4)
        throw std::invalid_argument("sobolev_norm: k must be in [0,4]");
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
        double s = sobolev_seminorm(fh, j);
        acc += s * s;
    }
    return std::sqrt(acc);
}

double lp_norm(const RealField& f, int p) {
    if (p <= 0)
        return linf_norm(f);
    if (p != 1 && p != 2 && p != 3 && p != 6)
        throw std::invalid_argument("lp_norm: p must be 1, 2, 3, 6 or <=0 for max");
    const double w = std::pow(f.grid.spacing(), 3);
    double acc = 0.0;
    for (double x : f.v)
        acc += std::pow(std::abs(x), p);
    return std::pow(w * acc, 1.0 / p);
}

double linf_norm(const RealField& f) {
    double m = 0.0;
    for (double x : f.v)
        m = std::max(m, std::abs(x));
    return m;
}

double lp_norm(const std::array<RealField, 3>& f, int p) {
    if (p <= 0)
        return linf_norm(f);
    if (p != 1 && p != 2 && p != 3 && p != 6)
        throw std::invalid_argument("lp_norm: p must be 1, 2, 3, 6 or <=0 for max");
    const double w = std::pow(f[0].grid.spacing(), 3);
    double acc = 0.0;
    for (size_t i = 0; i < f[0].v.size(); ++i) {
        double m = std::sqrt(f[0].v[i] * f[0].v[i] + f[1].v[i] * f[1].v[i] +
                             f[2].v[i] * f[2].v[i]);
        acc += std::pow(m, p);
    }
    return std::pow(w * acc, 1.0 / p);
}

double linf_norm(const std::array<RealField, 3>& f) {
    double worst = 0.0;
    for (size_t i = 0; i < f[0].v.size(); ++i) {
        double m2 = f[0].v[i] * f[0].v[i] + f[1].v[i] * f[1].v[i] +
                    f[2].v[i] * f[2].v[i];
        worst = std::max(worst, m2);
    }
    return std::sqrt(worst);
}

// =========================================================== freq split

CutoffProfile::CutoffProfile(double r0_, double R0_) : r0(r0_), R0(R0_) {
    if (!(0.0 < r0 && r0 < R0))
        throw std::invalid_argument("CutoffProfile: need 0 < r0 < R0");
}

CutoffProfile::CutoffProfile(const Grid& g)
    : CutoffProfile(0.5 * (2.0 * pi / g.L), 2.0 * (2.0 * pi / g.L)) {}

double CutoffProfile::chi(double r) const {
    if (r <= r0) return 1.0;
    if (r >= R0) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (r - r0) / (R0 - r0)));
}

FreqSplit freq_split(const SpectralField& fh, const CutoffProfile& profile) {
    const Grid& g = fh.grid;
    FreqSplit out{SpectralField(g), SpectralField(g)};
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        double kx = g.wavenumber(i), ky = g.wavenumber(j), kz = g.wavenumber(k);
        double c = profile.chi(std::sqrt(kx * kx + ky * ky + kz * kz));
        cplx f = fh.v[size_t(idx)];
        out.low.v[size_t(idx)] = c * f;
        out.high.v[size_t(idx)] = (1.0 - c) * f;
    });
    return out;
}

// ======================================================== field builders

RealField random_smooth_field(const Grid& g, std::uint64_t seed, int kmax,
                              double decay) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealField out(g);
    // Sum of real cosine modes: automatically real and smooth.
    for (int a = -kmax; a <= kmax; ++a)
        for (int b = -kmax; b <= kmax; ++b)
            for (int c = -kmax; c <= kmax; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                double m2 = double(a * a + b * b + c * c);
                if (m2 > double(kmax * kmax)) continue;
                double amp = gauss(rng) * std::exp(-decay * m2);
                double phase = gauss(rng);
                double kx = 2.0 * pi / g.L * a, ky = 2.0 * pi / g.L * b,
                       kz = 2.0 * pi / g.L * c;
                for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
                    auto p = g.point(i, j, k);
                    out.v[size_t(idx)] +=
                        amp * std::cos(kx * p[0] + ky * p[1] + kz * p[2] + phase);
                });
            }
    return out;
}

} // namespace eulab
