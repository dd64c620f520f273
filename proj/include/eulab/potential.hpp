// Exterior potential on the periodic box and the stationary profile it
// induces, rho_inf = e^{-V}. The bump sits at the box center, so periodic
// images talk to each other only through tails below roundoff.
#ifndef EULAB_POTENTIAL_HPP
#define EULAB_POTENTIAL_HPP

#include "eulab/spectral.hpp"

#include <array>

namespace eulab {

struct Potential {
    Grid grid;
    RealField V;                    // >= 0, vanishing toward the box faces
    std::array<RealField, 3> gradV; // spectral gradient, physical space
    RealField rho_inf;              // e^{-V}, in (0, 1]
    std::array<double, 4> grad_hk{}; // ||grad V||_{H^k}, k = 0..3

    double grad_h3() const { return grad_hk[3]; }
};

// V == 0: constant equilibrium rho_inf == 1.
Potential zero_potential(const Grid& g);

// Periodized Gaussian bump of width sigma at the box center, scaled so that
// ||grad V||_{H^3} == target exactly (scaling is linear in the amplitude).
// target == 0 gives the zero potential.
Potential gaussian_potential(const Grid& g, double target_grad_h3,
                             double sigma = 0.5);

} // namespace eulab

#endif
