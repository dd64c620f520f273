// Quadrature utilities: adaptive Gauss-Kronrod integration on a segment
// with interior split points (the radial integrands have kinks where the
// eigenvalue discriminant changes sign), and tensor Gauss-Legendre node
// sets for volume integrals against a Gaussian envelope.
#ifndef EULAB_QUADRATURE_HPP
#define EULAB_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

namespace eulab {

// Adaptive Gauss-Kronrod (15 point) on [a,b], subdivided first at the given
// interior split points. Relative tolerance; absolute error returned if
// requested.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> splits = {}, double rel_tol = 1e-12,
                 double* err_out = nullptr);

struct QuadratureNode {
    std::array<double, 3> x;
    double w;
};

// Tensor product of n-point Gauss-Legendre rules on [-half, half]^3.
std::vector<QuadratureNode> tensor_nodes(int n, double half);

} // namespace eulab

#endif
