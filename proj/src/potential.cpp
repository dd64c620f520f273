#include "eulab/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace eulab {

namespace {

// Fill the derived members from V: gradient, equilibrium, gradient norms.
Potential finish(const Grid& g, RealField V) {
    Potential P;
    P.grid = g;
    P.V = std::move(V);

    SpectralField Vh = transform_forward(P.V);
    std::array<double, 4> sq{};
    for (int ax = 0; ax < 3; ++ax) {
        SpectralField dVh = spectral_derivative(Vh, ax);
        for (int k = 0; k <= 3; ++k) {
            double nk = sobolev_norm(dVh, k);
            sq[size_t(k)] += nk * nk;
        }
        P.gradV[size_t(ax)] = transform_inverse(dVh);
    }
    for (int k = 0; k <= 3; ++k)
        P.grad_hk[size_t(k)] = std::sqrt(sq[size_t(k)]);

    P.rho_inf = RealField(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
        P.rho_inf.v[size_t(i)] = std::exp(-P.V.v[size_t(i)]);
    return P;
}

} // namespace

Potential zero_potential(const Grid& g) { return finish(g, RealField(g)); }

Potential gaussian_potential(const Grid& g, double target_grad_h3,
                             double sigma) {
    if (!(target_grad_h3 >= 0.0))
        throw std::invalid_argument("gaussian_potential: target must be >= 0");
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_potential: sigma must be > 0");
    if (target_grad_h3 == 0.0) return zero_potential(g);

    // Unit-amplitude bump, summed over the 27 nearest periodic images so the
    // sampled field is exactly periodic (not just up to a truncated tail).
    double c = 0.5 * g.L;
    double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    RealField V1 = sample_field(g, [&](double x, double y, double z) {
        double s = 0.0;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                for (int d = -1; d <= 1; ++d) {
                    double dx = x - c - a * g.L;
                    double dy = y - c - b * g.L;
                    double dz = z - c - d * g.L;
                    s += std::exp(-(dx * dx + dy * dy + dz * dz) * inv2s2);
                }
        return s;
    });

    double unit = finish(g, V1).grad_hk[3];
    double amp = target_grad_h3 / unit;
    for (double& v : V1.v) v *= amp;
    return finish(g, std::move(V1));
}

} // namespace eulab
