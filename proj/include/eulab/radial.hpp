// Whole-space decay norms of the block symbol applied to radial data,
// reduced to 1-d integrals:
//   |nabla^k G_b * f0|_{L2}^2 = 4 pi int_0^inf r^{2k+2} w_b(r,t) |f0(r)|^2 dr
// with w_b the rotationally averaged squared block symbol. Log-log slope
// fits of such norms against (1+t) recover the algebraic decay rates, and
// a low-frequency splitting of the phi response gives certified two-sided
// bounds (the torus solver cannot exhibit these rates; its spectrum is
// discrete, so algebraic decay lives here in the continuum radial picture).
#ifndef EULAB_RADIAL_HPP
#define EULAB_RADIAL_HPP

#include <functional>
#include <string>
#include <vector>

namespace eulab {

using RadialProfile = std::function<double(double)>;

enum class GreenBlock { b11, b12, b21, b22 };

std::string block_name(GreenBlock b);

// Rotationally averaged squared magnitude of one block at radius r:
//   b11: g11^2        b12, b21: r^2 s^2        b22: (p^2 + 2 e^{-2 gamma t})/3.
double block_weight(GreenBlock b, double r, double t, double gamma);

// sqrt(4 pi int_0^ximax r^{2k+2} w_b |f0(r)|^2 dr); the integrand is split
// at r = gamma/2 where the discriminant changes sign.
double radial_decay_norm(const RadialProfile& f0, GreenBlock b, int k,
                         double t, double gamma, double xi_max,
                         std::vector<double> extra_splits = {});

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    double t_min = 0.0, t_max = 0.0;
    int n = 0;
};

// Least squares of log(v) against log(1+t). Nonpositive or denormal-tiny
// values are skipped (late-time exponential tails underflow).
DecayFit fit_decay_exponent(const std::vector<double>& t,
                            const std::vector<double>& v);

// Low-frequency two-sided bound for data phi0 = radial profile, u0 = 0.
// On |xi| <= r0 the phi response splits exactly into
//   -lambda4 e^{lambda3 t}/(lambda3-lambda4) f0   (slow, heat-like)
//   +lambda3 e^{lambda4 t}/(lambda3-lambda4) f0   (fast)
// and similarly for u with the factor -i xi e^{lambda_i t}/(lambda3-lambda4).
// The certificate is |field(t)| >= leading(t) - remainder(t) > 0.
struct LowerBoundReport {
    std::vector<double> t;
    std::vector<double> leading_phi, remainder_phi, envelope_phi, full_phi;
    std::vector<double> leading_u, remainder_u, envelope_u, full_u;
    double profile_inf = 0.0; // inf of |f0| on [0, r0]
    double t0 = 0.0;          // first sweep time with both envelopes positive
    // Certified constants over t >= t_certify:
    double d_phi = 0.0, c_phi = 0.0; // d (1+t)^{-3/4} <= |phi| <= c (1+t)^{-3/4}
    double d_u = 0.0, c_u = 0.0;     // d (1+t)^{-5/4} <= |u|  <= c (1+t)^{-5/4}
    bool sandwich_ok = false;
};

LowerBoundReport lower_bound_certificate(const RadialProfile& f0, double r0,
                                         double gamma,
                                         const std::vector<double>& t_list,
                                         double xi_max, double t_certify);

} // namespace eulab

#endif
