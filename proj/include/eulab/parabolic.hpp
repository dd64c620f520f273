#ifndef EULAB_PARABOLIC_HPP
#define EULAB_PARABOLIC_HPP

// ============================================================================
// Drift-diffusion companion solver.
//
// Evolves d_t rho = (1/gamma) div(grad rho + rho grad V) on the periodic box,
// the overdamped limit of the momentum system. Integrates the diffusion part
// exactly in Fourier space and the drift term with a Heun-type two-stage
// corrector, so constants and pure heat modes are propagated to roundoff.
// The drift is applied in conservative form; total mass is exact up to
// roundoff regardless of step size.
// ============================================================================

#include <string>
#include <vector>

#include "eulab/fft.hpp"
#include "eulab/grid.hpp"
#include "eulab/potential.hpp"

namespace eulab {

struct DiffusionState {
    Grid grid;
    SpectralField rho_hat;
    double gamma = 1.0;
    double t = 0.0;
};

// rho0 must be strictly positive; the spectral representation is dealiased.
DiffusionState make_diffusion_state(const Grid& g, const RealField& rho0, double gamma);

// Exact integrating factor exp(-|xi|^2 dt / gamma) for every mode.
std::vector<double> heat_multiplier(const Grid& g, double gamma, double dt);

// One Lawson-Heun step. `mult` must be heat_multiplier(g, gamma, dt) for the
// same dt; the caller caches it across steps.
void step_parabolic(DiffusionState& s, const Potential& P, const std::vector<double>& mult, double dt);

// Largest stable step for the explicit drift stage: 0.5 * gamma /
// (|xi|_max * max|grad V|). Infinite when the potential is flat.
double parabolic_dt_bound(const Grid& g, const Potential& P, double gamma);

// h^3 * sum of the physical field; exact for the conservative drift.
double total_mass(const DiffusionState& s);

struct BoundMonitor {
    double rho_lo = 0.0;         // min of the initial data
    double rho_hi = 0.0;         // max of the initial data
    double min_seen = 0.0;       // running extrema over all sampled times
    double max_seen = 0.0;
    double worst_violation = 0.0;  // max overshoot beyond [rho_lo, rho_hi]
    double t_of_worst = 0.0;
    double mass_drift = 0.0;     // max |mass(t) - mass(0)| / mass(0)
    int steps = 0;
};

// Runs to time T and monitors the invariant-region bounds min rho0 <= rho <=
// max rho0. dt is clipped to the drift stability bound.
BoundMonitor run_max_principle(const Grid& g, const Potential& P, const RealField& rho0,
                               double gamma, double T, double dt, int stride);

struct CompareSeries {
    std::vector<double> t;
    std::vector<double> gap;     // sup |rho_euler - rho_diffusion| at samples
    double gap_max = 0.0;
    double rho_lo = 0.0;         // initial-data bounds, shared by both runs
    double rho_hi = 0.0;
    double euler_min = 0.0;      // extrema of the momentum-system density
    double euler_max = 0.0;
    bool bracket_ok = false;     // euler density stayed in [rho_lo/2, 3 rho_hi/2]
    int cfl_halvings = 0;
    std::string euler_status;
};

// Couples the momentum system (started from the gradient-flow ansatz
// u0 = -(1/gamma) grad(ln rho0 + V)) with the drift-diffusion equation from
// the same density, stepping both with a shared clock, and records the sup
// distance between the densities. Large gamma should shrink the gap.
CompareSeries compare_density(const Grid& g, const Potential& P, const RealField& rho0,
                              double gamma, double T, double dt, int stride);

}  // namespace eulab

#endif
