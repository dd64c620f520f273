// Mode-wise solution operator of the linearized damped system
//
//   d/dt phihat = -i xi . uhat
//   d/dt uhat   = -i xi phihat - gamma uhat
//
// The 4x4 block symbol Ghat(xi,t) is assembled from three scalar response
// functions of r = |xi|: the characteristic roots are
//   lambda_{3,4} = (-gamma +/- sqrt(gamma^2 - 4 r^2)) / 2,
// and with lbar = -gamma/2, d = sqrt(gamma^2/4 - r^2) (real or imaginary)
//   g11 = e^{lbar t} (cosh(dt) - lbar t sinhc(dt))   [phi <- phi]
//   s   = e^{lbar t} t sinhc(dt)                     [difference quotient]
//   p   = e^{lbar t} (cosh(dt) + lbar t sinhc(dt))   [u_par <- u_par]
// where sinhc(x) = sinh(x)/x (series near 0, so the repeated root
// r = gamma/2 is the smooth limit, g11 -> e^{lbar t}(1 - lbar t)).
// For large real dt the factored exponentials e^{lambda_3 t}, e^{lambda_4 t}
// are used directly to avoid overflow of cosh.
#ifndef EULAB_GREEN_HPP
#define EULAB_GREEN_HPP

#include "eulab/grid.hpp"

#include <array>

namespace eulab {

struct EigenPair {
    cplx lambda3; // root with the larger real part
    cplx lambda4;
    double discriminant; // gamma^2 - 4 |xi|^2
};

EigenPair eigenvalues(double xi_abs, double gamma);

// Exponential decay rate of the symbol away from xi = 0:
// eta = min(r0^2/gamma, gamma/2). Requires 0 < r0 < gamma/2.
double spectral_gap(double r0, double gamma);

// |lambda3 + |xi|^2/gamma| / |xi|^2, the relative defect of the heat-like
// low-frequency expansion.
double low_freq_expansion_error(double xi_abs, double gamma);

// Scalar responses at one radius; all real for every (r,t,gamma).
struct GreenScalars {
    double g11; // phi response to phi data
    double s;   // (e^{l3 t} - e^{l4 t}) / (l3 - l4)
    double p;   // longitudinal u response to u data
    double egt; // e^{-gamma t}, transverse u response
};

GreenScalars green_scalars(double xi_abs, double t, double gamma);

// Full block symbol at one wavevector.
struct GreenHat {
    cplx g11;
    std::array<cplx, 3> g12;                // row: phi <- u
    std::array<cplx, 3> g21;                // column: u <- phi
    std::array<std::array<cplx, 3>, 3> g22; // u <- u
};

GreenHat green_hat(const std::array<double, 3>& xi, double t, double gamma);

using Mat4 = std::array<std::array<cplx, 4>, 4>;

Mat4 green_matrix(const GreenHat& gh);
Mat4 generator_matrix(const std::array<double, 3>& xi, double gamma); // Ahat
Mat4 mat_mul(const Mat4& a, const Mat4& b);

// Max-entry residual of (Ghat(t+dt)-Ghat(t-dt))/(2dt) + Ahat Ghat(t);
// second-order small in dt since the symbol solves the ODE exactly.
double green_ode_residual(const std::array<double, 3>& xi, double t,
                          double gamma, double dt);

// Apply Ghat(xi, t) to one mode in place.
void apply_green_mode(const std::array<double, 3>& xi, const GreenScalars& gs,
                      cplx& phi, std::array<cplx, 3>& u);

// Exact linear evolution of spectral fields by time t.
void propagate_linear(SpectralField& phi, std::array<SpectralField, 3>& u,
                      double t, double gamma);

} // namespace eulab

#endif
