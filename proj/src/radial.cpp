#include "eulab/radial.hpp"

#include "eulab/green.hpp"
#include "eulab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eulab {

std::string block_name(GreenBlock b) {
    switch (b) {
        case GreenBlock::b11: return "11";
        case GreenBlock::b12: return "12";
        case GreenBlock::b21: return "21";
        case GreenBlock::b22: return "22";
    }
    return "?";
}

double block_weight(GreenBlock b, double r, double t, double gamma) {
    GreenScalars gs = green_scalars(r, t, gamma);
    switch (b) {
        case GreenBlock::b11:
            return gs.g11 * gs.g11;
        case GreenBlock::b12:
        case GreenBlock::b21:
            return r * r * gs.s * gs.s;
        case GreenBlock::b22:
            return (gs.p * gs.p + 2.0 * gs.egt * gs.egt) / 3.0;
    }
    return 0.0;
}

double radial_decay_norm(const RadialProfile& f0, GreenBlock b, int k,
                         double t, double gamma, double xi_max,
                         std::vector<double> extra_splits) {
    extra_splits.push_back(0.5 * gamma);
    auto integrand = [&](double r) {
        double f = f0(r);
        return std::pow(r, 2 * k + 2) * block_weight(b, r, t, gamma) * f * f;
    };
    double val = integrate(integrand, 0.0, xi_max, extra_splits, 1e-12);
    return std::sqrt(std::max(0.0, 4.0 * pi * val));
}

DecayFit fit_decay_exponent(const std::vector<double>& t,
                            const std::vector<double>& v) {
    if (t.size() != v.size())
        throw std::invalid_argument("fit_decay_exponent: size mismatch");
    std::vector<double> x, y;
    for (size_t i = 0; i < t.size(); ++i) {
        if (v[i] > 1e-290) {
            x.push_back(std::log1p(t[i]));
            y.push_back(std::log(v[i]));
        }
    }
    DecayFit fit;
    fit.n = int(x.size());
    if (fit.n < 2)
        throw std::invalid_argument("fit_decay_exponent: fewer than 2 usable samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double nn = double(x.size());
    double denom = nn * sxx - sx * sx;
    fit.slope = (nn * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / nn;
    for (size_t i = 0; i < x.size(); ++i)
        fit.max_residual = std::max(
            fit.max_residual, std::abs(y[i] - fit.slope * x[i] - fit.intercept));
    auto [mn, mx] = std::minmax_element(t.begin(), t.end());
    fit.t_min = *mn;
    fit.t_max = *mx;
    return fit;
}

namespace {

// sqrt(4 pi int_0^r0 r^{2+2m} |coef(r)|^2 e^{2 Re(l) t} |f0|^2 dr) where the
// slow/fast factor and exponent are chosen per term. m = 0 for the phi
// split, m = 1 for the u split (one extra |xi| from the off-diagonal block).
double split_term(const RadialProfile& f0, double r0, double gamma, double t,
                  bool slow, int m) {
    auto integrand = [&](double r) {
        EigenPair e = eigenvalues(r, gamma);
        cplx den = e.lambda3 - e.lambda4;
        double den2 = std::norm(den);
        // m = 0: phi split, coefficients -lambda4 (slow) / +lambda3 (fast).
        // m = 1: u split, coefficient -i xi e^{lambda t} for both terms.
        double num2 = m == 1 ? r * r
                             : (slow ? std::norm(e.lambda4) : std::norm(e.lambda3));
        double expo = std::exp(2.0 * (slow ? e.lambda3.real() : e.lambda4.real()) * t);
        double f = f0(r);
        return r * r * num2 / den2 * expo * f * f;
    };
    double val = integrate(integrand, 0.0, r0, {}, 1e-12);
    return std::sqrt(std::max(0.0, 4.0 * pi * val));
}

} // namespace

LowerBoundReport lower_bound_certificate(const RadialProfile& f0, double r0,
                                         double gamma,
                                         const std::vector<double>& t_list,
                                         double xi_max, double t_certify) {
    if (!(0.0 < r0 && r0 < 0.5 * gamma))
        throw std::invalid_argument("lower_bound_certificate: need 0 < r0 < gamma/2");
    LowerBoundReport rep;
    rep.t = t_list;

    // inf of the data profile on the low ball (the nondegeneracy hypothesis).
    rep.profile_inf = std::abs(f0(0.0));
    for (int i = 1; i <= 256; ++i)
        rep.profile_inf =
            std::min(rep.profile_inf, std::abs(f0(r0 * i / 256.0)));

    for (double t : t_list) {
        double lp = split_term(f0, r0, gamma, t, true, 0);
        double rp = split_term(f0, r0, gamma, t, false, 0);
        double lu = split_term(f0, r0, gamma, t, true, 1);
        double ru = split_term(f0, r0, gamma, t, false, 1);
        rep.leading_phi.push_back(lp);
        rep.remainder_phi.push_back(rp);
        rep.envelope_phi.push_back(std::max(0.0, lp - rp));
        rep.leading_u.push_back(lu);
        rep.remainder_u.push_back(ru);
        rep.envelope_u.push_back(std::max(0.0, lu - ru));
        rep.full_phi.push_back(
            radial_decay_norm(f0, GreenBlock::b11, 0, t, gamma, xi_max));
        rep.full_u.push_back(
            radial_decay_norm(f0, GreenBlock::b21, 0, t, gamma, xi_max));
    }

    rep.t0 = -1.0;
    for (size_t i = 0; i < t_list.size(); ++i)
        if (rep.envelope_phi[i] > 0.0 && rep.envelope_u[i] > 0.0) {
            rep.t0 = t_list[i];
            break;
        }

    rep.sandwich_ok = rep.t0 >= 0.0;
    rep.d_phi = rep.d_u = 1e300;
    for (size_t i = 0; i < t_list.size(); ++i) {
        if (t_list[i] < t_certify)
            continue;
        double w34 = std::pow(1.0 + t_list[i], 0.75);
        double w54 = std::pow(1.0 + t_list[i], 1.25);
        rep.d_phi = std::min(rep.d_phi, rep.envelope_phi[i] * w34);
        rep.c_phi = std::max(rep.c_phi, rep.full_phi[i] * w34);
        rep.d_u = std::min(rep.d_u, rep.envelope_u[i] * w54);
        rep.c_u = std::max(rep.c_u, rep.full_u[i] * w54);
        // Certified sandwich: positive lower envelope below the full norm.
        if (!(rep.envelope_phi[i] > 0.0 &&
              rep.envelope_phi[i] <= rep.full_phi[i] * (1.0 + 1e-12) &&
              rep.envelope_u[i] > 0.0 &&
              rep.envelope_u[i] <= rep.full_u[i] * (1.0 + 1e-12)))
            rep.sandwich_ok = false;
    }
    return rep;
}

} // namespace eulab
