#include "eulab/parabolic.hpp"

#include "eulab/euler.hpp"
#include "eulab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace eulab {

namespace {

// Conservative drift term sum_ax D_ax F[rho grad V_ax]; callers scale by
// 1/gamma. The derivative annihilates the mean mode, so the total mass of
// every stage is preserved exactly.
SpectralField drift_rhs(const Grid& g, const Potential& P, const SpectralField& rho_hat) {
    SpectralField out(g);
    RealField rho = transform_inverse(rho_hat);
    RealField prod(g);
    for (int ax = 0; ax < 3; ++ax) {
        for (std::int64_t i = 0; i < g.size(); ++i)
            prod.v[i] = rho.v[i] * P.gradV[ax].v[i];
        SpectralField ph = transform_forward(prod);
        SpectralField dph = spectral_derivative(ph, ax);
        for (std::int64_t i = 0; i < g.size(); ++i)
            out.v[i] += dph.v[i];
    }
    dealias(out);
    return out;
}

} // namespace

DiffusionState make_diffusion_state(const Grid& g, const RealField& rho0, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("make_diffusion_state: gamma must be positive");
    for (double r : rho0.v)
        if (!(r > 0.0))
            throw std::invalid_argument("make_diffusion_state: rho0 must be strictly positive");
    DiffusionState s;
    s.grid = g;
    s.rho_hat = transform_forward(rho0);
    dealias(s.rho_hat);
    s.gamma = gamma;
    s.t = 0.0;
    return s;
}

std::vector<double> heat_multiplier(const Grid& g, double gamma, double dt) {
    std::vector<double> mult(g.size());
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        double xi = g.wavenumber(i);
        double xj = g.wavenumber(j);
        double xk = g.wavenumber(k);
        double r2 = xi * xi + xj * xj + xk * xk;
        mult[idx] = std::exp(-r2 * dt / gamma);
    });
    return mult;
}

void step_parabolic(DiffusionState& s, const Potential& P, const std::vector<double>& mult, double dt) {
    const Grid& g = s.grid;
    const bool flat = P.grad_hk[0] == 0.0;
    if (flat) {
        for (std::int64_t i = 0; i < g.size(); ++i)
            s.rho_hat.v[i] *= mult[i];
        s.t += dt;
        return;
    }

    const double ig = 1.0 / s.gamma;
    SpectralField n1 = drift_rhs(g, P, s.rho_hat);
    SpectralField pred(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
        pred.v[i] = mult[i] * (s.rho_hat.v[i] + dt * ig * n1.v[i]);
    SpectralField n2 = drift_rhs(g, P, pred);
    for (std::int64_t i = 0; i < g.size(); ++i)
        s.rho_hat.v[i] = mult[i] * s.rho_hat.v[i] +
                         0.5 * dt * ig * (mult[i] * n1.v[i] + n2.v[i]);
    s.t += dt;
}

double parabolic_dt_bound(const Grid& g, const Potential& P, double gamma) {
    double gv = linf_norm(P.gradV);
    if (gv == 0.0)
        return std::numeric_limits<double>::infinity();
    double xi_max = std::sqrt(3.0) * pi * g.n / g.L;
    return 0.5 * gamma / (xi_max * gv);
}

double total_mass(const DiffusionState& s) {
    // Unitary transform: hat(0) = N^{-1/2} sum f, so h^3 sum f = h^3 sqrt(N) hat(0).
    const Grid& g = s.grid;
    double h = g.spacing();
    return h * h * h * std::sqrt(double(g.size())) * s.rho_hat.v[0].real();
}

BoundMonitor run_max_principle(const Grid& g, const Potential& P, const RealField& rho0,
                               double gamma, double T, double dt, int stride) {
    if (stride < 1)
        throw std::invalid_argument("run_max_principle: stride must be >= 1");
    DiffusionState s = make_diffusion_state(g, rho0, gamma);

    BoundMonitor mon;
    mon.rho_lo = *std::min_element(rho0.v.begin(), rho0.v.end());
    mon.rho_hi = *std::max_element(rho0.v.begin(), rho0.v.end());
    mon.min_seen = mon.rho_lo;
    mon.max_seen = mon.rho_hi;
    double mass0 = total_mass(s);

    auto sample = [&](const DiffusionState& st) {
        RealField r = transform_inverse(st.rho_hat);
        double lo = *std::min_element(r.v.begin(), r.v.end());
        double hi = *std::max_element(r.v.begin(), r.v.end());
        mon.min_seen = std::min(mon.min_seen, lo);
        mon.max_seen = std::max(mon.max_seen, hi);
        double over = std::max(mon.rho_lo - lo, hi - mon.rho_hi);
        if (over > mon.worst_violation) {
            mon.worst_violation = over;
            mon.t_of_worst = st.t;
        }
        mon.mass_drift = std::max(mon.mass_drift,
                                  std::abs(total_mass(st) - mass0) / std::abs(mass0));
    };
    sample(s);

    double dt_eff = std::min(dt, parabolic_dt_bound(g, P, gamma));
    std::map<double, std::vector<double>> tables;
    const double t_eps = 1e-9 * std::max(1.0, std::abs(T));
    while (s.t < T - t_eps) {
        double h = std::min(dt_eff, T - s.t);
        auto it = tables.find(h);
        if (it == tables.end())
            it = tables.emplace(h, heat_multiplier(g, gamma, h)).first;
        step_parabolic(s, P, it->second, h);
        ++mon.steps;
        if (mon.steps % stride == 0)
            sample(s);
    }
    sample(s);
    return mon;
}

CompareSeries compare_density(const Grid& g, const Potential& P, const RealField& rho0,
                              double gamma, double T, double dt, int stride) {
    if (stride < 1)
        throw std::invalid_argument("compare_density: stride must be >= 1");
    EulerState es = relaxation_state(P, gamma, rho0);
    DiffusionState ps = make_diffusion_state(g, rho0, gamma);

    CompareSeries cs;
    cs.rho_lo = *std::min_element(rho0.v.begin(), rho0.v.end());
    cs.rho_hi = *std::max_element(rho0.v.begin(), rho0.v.end());
    cs.euler_min = cs.rho_lo;
    cs.euler_max = cs.rho_hi;
    cs.euler_status = "completed";

    auto sample = [&]() {
        MomentumView mv = momentum_view(es, P);
        RealField rp = transform_inverse(ps.rho_hat);
        double gap = 0.0;
        for (std::int64_t i = 0; i < g.size(); ++i) {
            gap = std::max(gap, std::abs(mv.rho.v[i] - rp.v[i]));
            cs.euler_min = std::min(cs.euler_min, mv.rho.v[i]);
            cs.euler_max = std::max(cs.euler_max, mv.rho.v[i]);
        }
        cs.t.push_back(es.t);
        cs.gap.push_back(gap);
        cs.gap_max = std::max(cs.gap_max, gap);
    };
    sample();

    // Shared clock: both systems advance with the same accepted step. The
    // momentum side additionally halves under its CFL guard.
    double uinf = 0.0;
    {
        std::array<RealField, 3> up;
        for (int ax = 0; ax < 3; ++ax)
            up[ax] = transform_inverse(es.u[ax]);
        uinf = linf_norm(up);
    }
    double dt_cap = std::min(dt, parabolic_dt_bound(g, P, gamma));
    std::map<double, StepTable> etabs;
    std::map<double, std::vector<double>> ptabs;
    const double hx = g.spacing();
    const double t_eps = 1e-9 * std::max(1.0, std::abs(T));
    int steps = 0;
    while (es.t < T - t_eps) {
        double h = std::min(dt_cap, T - es.t);
        while (h > 0.5 * hx / (2.0 + uinf)) {
            h *= 0.5;
            ++cs.cfl_halvings;
        }
        auto et = etabs.find(h);
        if (et == etabs.end())
            et = etabs.emplace(h, make_step_table(g, gamma, h)).first;
        auto pt = ptabs.find(h);
        if (pt == ptabs.end())
            pt = ptabs.emplace(h, heat_multiplier(g, gamma, h)).first;
        uinf = step_ifrk4(es, P, et->second, true, false);
        step_parabolic(ps, P, pt->second, h);
        ++steps;
        if (!std::isfinite(uinf)) {
            cs.euler_status = "aborted: nonfinite velocity";
            break;
        }
        if (steps % stride == 0)
            sample();
    }
    if (cs.euler_status == "completed")
        sample();
    cs.bracket_ok = cs.euler_min >= 0.5 * cs.rho_lo && cs.euler_max <= 1.5 * cs.rho_hi;
    return cs;
}

} // namespace eulab
