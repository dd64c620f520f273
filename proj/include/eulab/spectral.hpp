// Spectral-space calculus on the periodic box: derivatives, fractional
// |xi|^a multipliers, Sobolev/Lebesgue norms, and smooth low/high frequency
// splitting. Norm conventions: the L2 norm is the continuum integral norm,
// i.e. h^3 * sum over grid points (rectangle rule), which by the unitary
// transform equals h^3 * sum over modes in spectral space.
#ifndef EULAB_SPECTRAL_HPP
#define EULAB_SPECTRAL_HPP

#include "eulab/fft.hpp"
#include "eulab/grid.hpp"

#include <array>
#include <cstdint>

namespace eulab {

// ============================================================ derivatives

// Component j of the spectral gradient: (i xi_j) fhat.
SpectralField spectral_derivative(const SpectralField& fh, int axis);
std::array<SpectralField, 3> spectral_gradient(const SpectralField& fh);

// |xi|^a multiplier. For a < 0 the zero mode is annihilated (the inverse
// has no mean component); for a >= 0 it maps through as |0|^a.
SpectralField lambda_power(const SpectralField& fh, double a);

// Zero every mode with any |folded index| > n/3 (2/3-rule dealiasing).
void dealias(SpectralField& fh);

// Zero the mean mode.
void remove_mean(SpectralField& fh);

// ================================================================= norms

// L2 norm via Parseval (h^3 weight included).
double l2_norm(const SpectralField& fh);

// Homogeneous Sobolev seminorm |nabla^j f|_{L2}.
double sobolev_seminorm(const SpectralField& fh, int j);

// Full H^k norm, k <= 4: sqrt(sum_{j<=k} seminorm_j^2).
double sobolev_norm(const SpectralField& fh, int k);

// Rectangle-rule Lp norm, p in {1,2,3,6} or p<=0 for the max norm.
double lp_norm(const RealField& f, int p);
double linf_norm(const RealField& f);

// Pointwise Euclidean magnitude of a vector field, then Lp as above.
double lp_norm(const std::array<RealField, 3>& f, int p);
double linf_norm(const std::array<RealField, 3>& f);

// =========================================================== freq split

// Raised-cosine radial cutoff: 1 on [0,r0], 0 on [R0,inf),
// 0.5*(1+cos(pi(r-r0)/(R0-r0))) between. Requires 0 < r0 < R0.
struct CutoffProfile {
    double r0;
    double R0;

    CutoffProfile(double r0_, double R0_);
    // Grid defaults: r0 = half the fundamental wavenumber 2pi/L, R0 = 4 r0.
    explicit CutoffProfile(const Grid& g);

    double chi(double r) const;
};

struct FreqSplit {
    SpectralField low;
    SpectralField high;
};

// low = chi(|xi|) fhat, high = (1 - chi(|xi|)) fhat; low + high == fhat
// exactly (the complement is formed from the same chi evaluation).
FreqSplit freq_split(const SpectralField& fh, const CutoffProfile& profile);

// ======================================================== field builders

// Band-limited random real field: modes with folded index within kmax get
// Gaussian coefficients damped by exp(-decay*|m|^2); deterministic in seed.
RealField random_smooth_field(const Grid& g, std::uint64_t seed,
                              int kmax = 4, double decay = 0.5);

// Evaluate fn(x,y,z) at grid points.
template <typename F>
RealField sample_field(const Grid& g, F&& fn) {
    RealField out(g);
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        auto p = g.point(i, j, k);
        out.v[size_t(idx)] = fn(p[0], p[1], p[2]);
    });
    return out;
}

} // namespace eulab

#endif
