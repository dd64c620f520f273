#include "eulab/blowup.hpp"

#include "eulab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eulab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double det3(const Mat3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Coefficients of det(I + s A) = 1 + c1 s + c2 s^2 + c3 s^3.
struct Cubic {
    double c1, c2, c3;
    double eval(double s) const { return 1.0 + s * (c1 + s * (c2 + s * c3)); }
};

Cubic jacobian_cubic(const Mat3& a) {
    Cubic c;
    c.c1 = a[0][0] + a[1][1] + a[2][2];
    c.c2 = a[0][0] * a[1][1] - a[0][1] * a[1][0] +
           a[0][0] * a[2][2] - a[0][2] * a[2][0] +
           a[1][1] * a[2][2] - a[1][2] * a[2][1];
    c.c3 = det3(a);
    return c;
}

// First vanishing of J(s) = 1 + c1 s + c2 s^2 + c3 s^3 = prod_i (1 + l_i s)
// on (0, smax); +inf when J stays positive there. In v = 1/s the factored
// form becomes the monic cubic v^3 + c1 v^2 + c2 v + c3 = prod_i (v + l_i),
// so the first vanishing is 1/vmax for the largest positive real root vmax.
// The roots come from the closed form, not from sign probes of J: rounding
// noise in a Horner evaluation is ~1e-16, so a bisection can only place a
// root of multiplicity m to (1e-16)^(1/m), far too coarse near a uniform
// contraction's triple root. Touching roots (even multiplicity, J >= 0 on
// both sides) are genuine vanishings and are found by the same formula.
double first_root_s(const Cubic& c, double smax) {
    // depress about the root mean: v = w - c1/3
    double shift = c.c1 / 3.0;
    double p = c.c2 - c.c1 * shift;
    double q = c.c1 * (2.0 * shift * shift - c.c2) / 3.0 + c.c3;
    double vmax;
    if (p == 0.0 && q == 0.0) {
        vmax = -shift;
    } else {
        double D = 0.25 * q * q + p * p * p / 27.0;
        if (D > 0.0) {
            // one real root; pick the large cube root first to avoid
            // cancellation, the partner follows from the product -p/3
            double big = -0.5 * q - std::copysign(std::sqrt(D), q);
            double A = std::cbrt(big);
            double B = (A != 0.0) ? -p / (3.0 * A) : 0.0;
            vmax = A + B - shift;
        } else if (D == 0.0) {
            // double root -A, simple root 2A
            double A = std::cbrt(-0.5 * q);
            vmax = std::max(2.0 * A, -A) - shift;
        } else {
            // three real roots; k = 0 carries the largest cosine
            double m = std::sqrt(-p / 3.0);
            double arg = std::clamp(-0.5 * q / (m * m * m), -1.0, 1.0);
            vmax = 2.0 * m * std::cos(std::acos(arg) / 3.0) - shift;
        }
    }
    if (!(vmax > 0.0) || !(vmax * smax > 1.0)) return inf;
    return 1.0 / vmax;
}

double map_t(double s, double gamma) {
    double arg = 1.0 - gamma * s;
    if (arg <= 0.0) return inf;
    return -std::log(arg) / gamma;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return double(splitmix64(state) >> 11) * 0x1.0p-53;
}

int coarser_rule(int n1d) {
    switch (n1d) {
        case 96: return 64;
        case 64: return 48;
        case 48: return 32;
        case 32: return 24;
        case 24: return 16;
        default:
            throw std::invalid_argument("initial_functionals: no coarser rule below 16");
    }
}

struct Moments {
    double A1, A2, E0;
};

Moments raw_moments(const TrajectoryEnsemble& e) {
    Moments m{0.0, 0.0, 0.0};
    for (std::size_t n = 0; n < e.nodes.size(); ++n) {
        double w = e.nodes[n].w * e.rho0[n];
        const Vec3& x = e.nodes[n].x;
        const Vec3& u = e.u0[n];
        Vec3 gh = weight_gradH(x, e.gamma);
        m.A1 += w * (u[0] * gh[0] + u[1] * gh[1] + u[2] * gh[2]);
        m.A2 += w * weight_H(x, e.gamma);
        m.E0 += w * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    }
    return m;
}

} // namespace

VelocityProfile plane_stretch_profile(double gamma, double a0) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("plane_stretch_profile: gamma must be positive");
    VelocityProfile p;
    p.u0 = [gamma](const Vec3& x) -> Vec3 {
        double e = std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / gamma);
        return {x[0] * e, 0.0, x[2] * e};
    };
    p.grad_u0 = [gamma](const Vec3& x) -> Mat3 {
        double e = std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / gamma);
        Mat3 g{};
        for (int j = 0; j < 3; ++j) {
            g[0][j] = -2.0 * x[j] * x[0] / gamma * e;
            g[2][j] = -2.0 * x[j] * x[2] / gamma * e;
        }
        g[0][0] += e;
        g[2][2] += e;
        return g;
    };
    p.envelope_radius = 6.0 * std::sqrt(gamma);
    p.a0 = a0;
    return p;
}

VelocityProfile linear_profile(const Mat3& A) {
    VelocityProfile p;
    p.u0 = [A](const Vec3& x) -> Vec3 {
        return {A[0][0] * x[0] + A[0][1] * x[1] + A[0][2] * x[2],
                A[1][0] * x[0] + A[1][1] * x[1] + A[1][2] * x[2],
                A[2][0] * x[0] + A[2][1] * x[1] + A[2][2] * x[2]};
    };
    p.grad_u0 = [A](const Vec3&) { return A; };
    p.envelope_radius = 6.0;
    p.a0 = 0.0;
    return p;
}

double profile_consistency(const VelocityProfile& p, std::uint64_t seed, int n) {
    std::uint64_t state = seed;
    double env = p.envelope_radius;
    double h = 1e-3 * env / 6.0;
    double worst_abs = 0.0;
    double scale = 0.0;
    for (int s = 0; s < n; ++s) {
        Vec3 x;
        for (int d = 0; d < 3; ++d)
            x[d] = env * (2.0 * uniform01(state) - 1.0);
        Mat3 g = p.grad_u0(x);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                scale = std::max(scale, std::abs(g[i][j]));
        for (int j = 0; j < 3; ++j) {
            Vec3 xp = x, xm = x, xp2 = x, xm2 = x;
            xp[j] += h;
            xm[j] -= h;
            xp2[j] += 2.0 * h;
            xm2[j] -= 2.0 * h;
            Vec3 fp = p.u0(xp), fm = p.u0(xm), fp2 = p.u0(xp2), fm2 = p.u0(xm2);
            for (int i = 0; i < 3; ++i) {
                double fd = (-fp2[i] + 8.0 * fp[i] - 8.0 * fm[i] + fm2[i]) / (12.0 * h);
                worst_abs = std::max(worst_abs, std::abs(fd - g[i][j]));
            }
        }
    }
    return scale > 0.0 ? worst_abs / scale : worst_abs;
}

double stretch_h3_norm(double gamma) {
    // Each homogeneous piece of the squared norm is, via the Gaussian
    // Fourier transform of x e^{-|x|^2/gamma} reduced to a radial integral,
    //   S_j = (pi/24) 2^{j+5/2} Gamma(j+5/2) gamma^{5/2-j}.
    double total = 0.0;
    for (int j = 0; j <= 3; ++j)
        total += pi / 24.0 * std::pow(2.0, j + 2.5) * std::tgamma(j + 2.5) *
                 std::pow(gamma, 2.5 - j);
    return std::sqrt(total);
}

double stretch_linf_norm(double gamma) {
    // |u0|^2 = (x1^2 + x3^2) e^{-2|x|^2/gamma} peaks at x2 = 0,
    // x1^2 + x3^2 = gamma/2.
    return std::sqrt(0.5 * gamma) * std::exp(-0.5);
}

double weight_H(const Vec3& x, double gamma) {
    double q = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / gamma;
    return gamma * std::exp(-q);
}

Vec3 weight_gradH(const Vec3& x, double gamma) {
    double q = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / gamma;
    double e = std::exp(-q);
    return {-2.0 * x[0] * e, -2.0 * x[1] * e, -2.0 * x[2] * e};
}

Mat3 weight_hessH(const Vec3& x, double gamma) {
    double q = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / gamma;
    double e = std::exp(-q);
    Mat3 h{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            h[i][j] = 4.0 * x[i] * x[j] / gamma * e;
        h[i][i] -= 2.0 * e;
    }
    return h;
}

double weight_hess_opnorm(const Vec3& x, double gamma) {
    // Eigenvalues are (4q-2) e^{-q} along x and -2 e^{-q} twice across.
    double q = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / gamma;
    return std::exp(-q) * std::max(2.0, std::abs(4.0 * q - 2.0));
}

double weight_hess_bound(const Vec3& x, double gamma) {
    return 10.0 * weight_H(x, gamma) / gamma;
}

TrajectoryEnsemble make_ensemble(const VelocityProfile& p, const DensityFn& rho0,
                                 double gamma, int n1d) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("make_ensemble: gamma must be positive");
    TrajectoryEnsemble e;
    e.gamma = gamma;
    e.n1d = n1d;
    // The weight integrands have width ~ sqrt(gamma), and the stretch flow
    // only moves particles outward (|X| >= |x|), so the weight's preimage
    // never leaves this ball. Scaling R with sqrt(gamma) keeps the rule's
    // resolution of the integrands uniform in gamma.
    e.R = 6.0 * std::sqrt(gamma);
    e.nodes = tensor_nodes(n1d, e.R);
    e.profile = p;
    e.density = rho0;

    double wq = std::min(1.0, e.R / 4.6);
    double qsum = 0.0;
    e.u0.resize(e.nodes.size());
    e.g0.resize(e.nodes.size());
    e.rho0.resize(e.nodes.size());
    for (std::size_t n = 0; n < e.nodes.size(); ++n) {
        const Vec3& x = e.nodes[n].x;
        e.u0[n] = p.u0(x);
        e.g0[n] = p.grad_u0(x);
        e.rho0[n] = rho0(x);
        double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        qsum += e.nodes[n].w * std::exp(-r2 / (wq * wq));
    }
    double exact = std::pow(pi * wq * wq, 1.5);
    e.quad_check = std::abs(qsum - exact) / exact;
    if (!(e.quad_check < 1e-8))
        throw std::runtime_error("make_ensemble: Gaussian reproduction check failed");
    return e;
}

InitialFunctionals initial_functionals(const TrajectoryEnsemble& e) {
    Moments fine = raw_moments(e);
    TrajectoryEnsemble ec = make_ensemble(e.profile, e.density, e.gamma,
                                          coarser_rule(e.n1d));
    Moments coarse = raw_moments(ec);

    InitialFunctionals f;
    f.A1_0 = fine.A1;
    f.A2_0 = fine.A2;
    f.E0 = fine.E0;
    auto rel = [](double a, double b) {
        double d = std::abs(a - b);
        double s = std::max(std::abs(a), std::abs(b));
        return s > 0.0 ? d / s : 0.0;
    };
    f.err_rel = std::max({rel(fine.A1, coarse.A1), rel(fine.A2, coarse.A2),
                          rel(fine.E0, coarse.E0)});
    if (!(f.err_rel < 1e-6))
        throw std::runtime_error("initial_functionals: quadrature not converged");
    return f;
}

BlowupCriterion criterion_check(const InitialFunctionals& f, double a0,
                                double Cstar, double gamma, double u0_h3) {
    BlowupCriterion c;
    c.A1_0 = f.A1_0;
    c.A2_0 = f.A2_0;
    c.E0 = f.E0;
    c.a0 = a0;
    c.Cstar = Cstar;
    c.gamma = gamma;
    double denom = f.A2_0 + f.E0;
    c.Mstar = denom > 0.0 ? -f.A1_0 / denom : 0.0;
    c.threshold = std::pow(8.0 * Cstar * Cstar * a0 * a0, 0.2);
    c.margin_threshold = c.Mstar - c.threshold;
    if (c.Mstar > 0.0) {
        double m2 = c.Mstar * c.Mstar;
        c.gamma_low = 4.0 * (Cstar * a0 / m2) * (Cstar * a0 / m2);
        c.gamma_high = 0.5 * c.Mstar;
    }
    c.margin_low = gamma - c.gamma_low;
    c.margin_high = c.gamma_high - gamma;
    c.u0_h3 = u0_h3;
    c.a0_covers_h3 = a0 >= u0_h3;

    std::string bad;
    auto fail = [&bad](const char* name) {
        if (!bad.empty()) bad += "+";
        bad += name;
    };
    if (!(c.margin_threshold > 0.0)) fail("moment-ratio");
    if (!(c.Mstar > 0.0 && c.margin_low > 0.0)) fail("damping-low");
    if (!(c.Mstar > 0.0 && c.margin_high > 0.0)) fail("damping-high");
    c.violated = bad;
    c.verdict = bad.empty();
    return c;
}

FlowPoint characteristics(const Vec3& x0, double t, const VelocityProfile& p,
                          double gamma) {
    double egt = std::exp(-gamma * t);
    double s = (1.0 - egt) / gamma;
    Vec3 u0 = p.u0(x0);
    FlowPoint fp;
    for (int d = 0; d < 3; ++d) {
        fp.X[d] = x0[d] + s * u0[d];
        fp.u[d] = u0[d] * egt;
    }
    fp.J = jacobian_cubic(p.grad_u0(x0)).eval(s);
    return fp;
}

BlowupTime blowup_time(const TrajectoryEnsemble& e) {
    const double smax = 1.0 / e.gamma;
    BlowupTime bt;
    bt.t_star = inf;

    double s_best = inf;
    for (std::size_t n = 0; n < e.nodes.size(); ++n) {
        double s = first_root_s(jacobian_cubic(e.g0[n]), smax);
        if (s < s_best) {
            s_best = s;
            bt.x_star = e.nodes[n].x;
        }
    }
    if (!(s_best < inf))
        return bt;

    // Pattern-search descent in the seed position; the root is a smooth
    // function of x near a simple vanishing.
    auto obj = [&](const Vec3& x) {
        return first_root_s(jacobian_cubic(e.profile.grad_u0(x)), smax);
    };
    double h = 2.0 * e.R / e.n1d;
    Vec3 x = bt.x_star;
    double s_cur = s_best;
    for (int it = 0; it < 400 && h > 1e-9 * e.R; ++it) {
        bool moved = false;
        for (int d = 0; d < 3 && !moved; ++d) {
            for (double sgn : {1.0, -1.0}) {
                Vec3 xt = x;
                xt[d] += sgn * h;
                double st = obj(xt);
                if (st < s_cur) {
                    x = xt;
                    s_cur = st;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) h *= 0.5;
    }
    bt.x_star = x;

    // The closed-form root is the reported value; the bracket around it is
    // a certificate. When J changes sign across the root, bisection shrinks
    // a verified sign bracket below 1e-10 in t. At a multiple root J's sign
    // is lost in rounding noise, so the bracket is the constructed pad.
    Cubic c = jacobian_cubic(e.profile.grad_u0(x));
    double lo = s_cur * (1.0 - 1e-6);
    double hi = std::min(smax, s_cur * (1.0 + 1e-6));
    if (c.eval(lo) > 0.0 && c.eval(hi) < 0.0) {
        for (int it = 0; it < 300; ++it) {
            double tw = map_t(hi, e.gamma) - map_t(lo, e.gamma);
            if (std::isfinite(tw) && tw < 1e-10) break;
            double mid = 0.5 * (lo + hi);
            if (c.eval(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
    } else {
        lo = s_cur * (1.0 - 1e-11);
        hi = std::min(smax, s_cur * (1.0 + 1e-11));
    }
    bt.t_star = map_t(s_cur, e.gamma);
    bt.bisect_width = map_t(hi, e.gamma) - map_t(lo, e.gamma);
    return bt;
}

FunctionalSeries evolve_functionals(const TrajectoryEnsemble& e,
                                    const std::vector<double>& t_list) {
    if (t_list.size() < 2)
        throw std::invalid_argument("evolve_functionals: need at least two samples");
    double dt = t_list[1] - t_list[0];
    for (std::size_t i = 1; i < t_list.size(); ++i)
        if (std::abs(t_list[i] - t_list[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("evolve_functionals: samples must be uniform");

    std::size_t nn = e.nodes.size();
    std::vector<Cubic> cubics(nn);
    for (std::size_t n = 0; n < nn; ++n)
        cubics[n] = jacobian_cubic(e.g0[n]);

    FunctionalSeries fs;
    fs.t = t_list;
    std::size_t nt = t_list.size();
    fs.A1.resize(nt);
    fs.A2.resize(nt);
    fs.ke.resize(nt);
    fs.hess_term.resize(nt);

    double e0 = 0.0;
    for (std::size_t n = 0; n < nn; ++n) {
        const Vec3& u = e.u0[n];
        e0 += e.nodes[n].w * e.rho0[n] * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    }

    for (std::size_t i = 0; i < nt; ++i) {
        double t = t_list[i];
        double egt = std::exp(-e.gamma * t);
        double s = (1.0 - egt) / e.gamma;
        double a1 = 0.0, a2 = 0.0, ht = 0.0;
        for (std::size_t n = 0; n < nn; ++n) {
            if (!(cubics[n].eval(s) > 0.0))
                throw std::runtime_error("evolve_functionals: Jacobian vanished before a sample");
            double w = e.nodes[n].w * e.rho0[n];
            const Vec3& x0 = e.nodes[n].x;
            const Vec3& u = e.u0[n];
            Vec3 X{x0[0] + s * u[0], x0[1] + s * u[1], x0[2] + s * u[2]};
            double q = (X[0] * X[0] + X[1] * X[1] + X[2] * X[2]) / e.gamma;
            double ex = std::exp(-q);
            a2 += w * e.gamma * ex;
            double ug = u[0] * X[0] + u[1] * X[1] + u[2] * X[2];
            a1 += w * egt * (-2.0 * ug * ex);
            // u' D2H u = e^{-q} (4 (u.X)^2 / gamma - 2 |u|^2)
            double uu = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
            ht += w * egt * egt * ex * (4.0 * ug * ug / e.gamma - 2.0 * uu);
        }
        fs.A1[i] = a1;
        fs.A2[i] = a2;
        fs.ke[i] = e0 * egt * egt;
        fs.hess_term[i] = ht;
    }

    fs.d1.resize(nt);
    fs.d2.resize(nt);
    auto& A2 = fs.A2;
    for (std::size_t i = 1; i + 1 < nt; ++i) {
        fs.d1[i] = (A2[i + 1] - A2[i - 1]) / (2.0 * dt);
        fs.d2[i] = (A2[i + 1] - 2.0 * A2[i] + A2[i - 1]) / (dt * dt);
    }
    if (nt >= 4) {
        fs.d1[0] = (-3.0 * A2[0] + 4.0 * A2[1] - A2[2]) / (2.0 * dt);
        fs.d1[nt - 1] = (3.0 * A2[nt - 1] - 4.0 * A2[nt - 2] + A2[nt - 3]) / (2.0 * dt);
        fs.d2[0] = (2.0 * A2[0] - 5.0 * A2[1] + 4.0 * A2[2] - A2[3]) / (dt * dt);
        fs.d2[nt - 1] =
            (2.0 * A2[nt - 1] - 5.0 * A2[nt - 2] + 4.0 * A2[nt - 3] - A2[nt - 4]) /
            (dt * dt);
    } else {
        fs.d1[0] = fs.d1[1];
        fs.d1[nt - 1] = fs.d1[nt - 2];
        fs.d2[0] = fs.d2[1];
        fs.d2[nt - 1] = fs.d2[nt - 2];
    }
    return fs;
}

InequalityReport inequality_monitor(const FunctionalSeries& s, double gamma,
                                    double u0_inf, double Dstar) {
    InequalityReport r;
    r.t = s.t;
    std::size_t nt = s.t.size();
    r.lhs.resize(nt);
    r.rhs_sharp.resize(nt);
    r.rhs_star.resize(nt);
    double e0 = s.ke.empty() ? 0.0 : s.ke[0] * std::exp(2.0 * gamma * s.t[0]);
    r.min_slack_sharp = inf;
    r.min_slack_star = inf;
    for (std::size_t i = 0; i < nt; ++i) {
        double uinf = u0_inf * std::exp(-gamma * s.t[i]);
        r.lhs[i] = s.hess_term[i];
        r.rhs_sharp[i] = uinf * std::sqrt(s.ke[i]) * std::sqrt(10.0 * s.A2[i] / gamma);
        r.rhs_star[i] = Dstar * (s.A2[i] + e0);
        r.min_slack_sharp = std::min(r.min_slack_sharp, r.rhs_sharp[i] - r.lhs[i]);
        r.min_slack_star = std::min(r.min_slack_star, r.rhs_star[i] - r.lhs[i]);
        double defect = std::abs(s.d2[i] + gamma * s.d1[i] - s.hess_term[i]);
        r.max_discrete_defect = std::max(r.max_discrete_defect, defect);
    }
    return r;
}

double riccati_beta(double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw std::invalid_argument("riccati_beta: needs c1 > 0 and c2 > 0");
    return 0.5 * (-c1 + std::sqrt(c1 * c1 + 4.0 * c2));
}

double riccati_bound(double h0, double h0p, double c1, double c2, double c3,
                     double t) {
    double beta = riccati_beta(c1, c2);
    double G = (h0p - beta * h0 - c3 / (beta + c1)) / (c1 + 2.0 * beta);
    double P = c3 / (beta * (beta + c1));
    return (h0 + P + G) * std::exp(beta * t) - G * std::exp(-(c1 + beta) * t) - P;
}

ContradictionReport contradiction_certificate(const BlowupCriterion& c,
                                              const BlowupTime& bt) {
    if (!c.verdict)
        throw std::invalid_argument("contradiction_certificate: criterion verdict is false");
    ContradictionReport r;
    r.Dstar = c.Cstar * c.a0 / std::sqrt(c.gamma);
    double c1 = c.gamma, c2 = r.Dstar, c3 = r.Dstar * c.E0;
    r.beta = riccati_beta(c1, c2);
    r.K = r.Dstar * (c.A2_0 + c.E0) + r.beta * c.A1_0;
    // The window conditions imply beta > D*/M*, i.e. K < 0; if this ever
    // trips the criterion arithmetic is wrong, not the data.
    if (!(r.K < 0.0))
        throw std::logic_error("contradiction_certificate: K >= 0 with a true verdict");
    r.lead_coeff = r.K / (r.beta * (c1 + 2.0 * r.beta));

    auto bound = [&](double t) {
        return riccati_bound(c.A2_0, c.A1_0, c1, c2, c3, t);
    };
    double hi = 1.0;
    int guard = 0;
    while (bound(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 80)
            throw std::runtime_error("contradiction_certificate: no sign change found");
    }
    double lo = hi > 1.0 ? hi * 0.5 : 0.0;
    if (bound(lo) <= 0.0) lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (bound(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    r.T_neg = 0.5 * (lo + hi);
    r.t_star = bt.t_star;
    r.consistent = bt.t_star <= r.T_neg;
    return r;
}

} // namespace eulab
