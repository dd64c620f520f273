#include "eulab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eulab {

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> splits, double rel_tol, double* err_out) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    std::vector<double> pts;
    pts.push_back(a);
    std::sort(splits.begin(), splits.end());
    for (double s : splits)
        if (s > a && s < b)
            pts.push_back(s);
    pts.push_back(b);

    double total = 0.0, err_total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double err = 0.0;
        total += gk::integrate(f, pts[i], pts[i + 1], 15, rel_tol, &err);
        err_total += err;
    }
    if (err_out)
        *err_out = err_total;
    return total;
}

namespace {

template <unsigned N>
void gl_rule(std::vector<double>& x, std::vector<double>& w) {
    using gauss = boost::math::quadrature::gauss<double, N>;
    const auto& ax = gauss::abscissa(); // nonnegative half of the rule
    const auto& aw = gauss::weights();
    for (size_t i = 0; i < ax.size(); ++i) {
        x.push_back(ax[i]);
        w.push_back(aw[i]);
        if (ax[i] != 0.0) {
            x.push_back(-ax[i]);
            w.push_back(aw[i]);
        }
    }
}

} // namespace

std::vector<QuadratureNode> tensor_nodes(int n, double half) {
    std::vector<double> x, w;
    switch (n) {
        case 16: gl_rule<16>(x, w); break;
        case 24: gl_rule<24>(x, w); break;
        case 32: gl_rule<32>(x, w); break;
        case 48: gl_rule<48>(x, w); break;
        case 64: gl_rule<64>(x, w); break;
        case 96: gl_rule<96>(x, w); break;
        default:
            throw std::invalid_argument(
                "tensor_nodes: supported sizes are 16, 24, 32, 48, 64, 96");
    }
    for (double& xi : x)
        xi *= half;
    for (double& wi : w)
        wi *= half;

    std::vector<QuadratureNode> nodes;
    nodes.reserve(x.size() * x.size() * x.size());
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
            for (size_t k = 0; k < x.size(); ++k)
                nodes.push_back({{x[i], x[j], x[k]}, w[i] * w[j] * w[k]});
    return nodes;
}

} // namespace eulab
