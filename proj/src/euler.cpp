#include "eulab/euler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace eulab {

namespace {

struct Pair {
    SpectralField phi;
    std::array<SpectralField, 3> u;
};

Pair make_pair(const Grid& g) {
    return Pair{SpectralField(g), {SpectralField(g), SpectralField(g), SpectralField(g)}};
}

Pair copy_state(const EulerState& s) { return Pair{s.phi, s.u}; }

// dst = a + c*b
void lincomb(Pair& dst, const Pair& a, double c, const Pair& b) {
    std::int64_t n = std::int64_t(a.phi.v.size());
    for (std::int64_t i = 0; i < n; ++i)
        dst.phi.v[size_t(i)] = a.phi.v[size_t(i)] + c * b.phi.v[size_t(i)];
    for (int j = 0; j < 3; ++j)
        for (std::int64_t i = 0; i < n; ++i)
            dst.u[size_t(j)].v[size_t(i)] =
                a.u[size_t(j)].v[size_t(i)] + c * b.u[size_t(j)].v[size_t(i)];
}

// Half-step exact propagator, applied in place.
void apply_half(const Grid& g, const StepTable& tab, Pair& w) {
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        std::array<double, 3> xi = {g.wavenumber(i), g.wavenumber(j),
                                    g.wavenumber(k)};
        std::array<cplx, 3> uv = {w.u[0].v[size_t(idx)], w.u[1].v[size_t(idx)],
                                  w.u[2].v[size_t(idx)]};
        apply_green_mode(xi, tab.half[size_t(idx)], w.phi.v[size_t(idx)], uv);
        w.u[0].v[size_t(idx)] = uv[0];
        w.u[1].v[size_t(idx)] = uv[1];
        w.u[2].v[size_t(idx)] = uv[2];
    });
}

// Variable-coefficient bucket f1 = -u.grad phi + u.grad V, f2 = -u.grad u,
// products pointwise, derivatives spectral. Returns ||u||_inf, measured on
// the physical velocity this evaluation needs anyway.
double eval_nonlinear(const Grid& g, const Potential& P,
                      const SpectralField& phi,
                      const std::array<SpectralField, 3>& u,
                      bool dealias_products, Pair& out) {
    std::array<RealField, 3> up;
    for (int i = 0; i < 3; ++i) up[size_t(i)] = transform_inverse(u[size_t(i)]);
    double uinf = linf_norm(up);

    std::int64_t n = g.size();
    RealField f1(g);
    for (int ax = 0; ax < 3; ++ax) {
        RealField dphi = transform_inverse(spectral_derivative(phi, ax));
        const RealField& gv = P.gradV[size_t(ax)];
        for (std::int64_t i = 0; i < n; ++i)
            f1.v[size_t(i)] +=
                up[size_t(ax)].v[size_t(i)] * (gv.v[size_t(i)] - dphi.v[size_t(i)]);
    }
    out.phi = transform_forward(f1);
    if (dealias_products) dealias(out.phi);

    for (int i = 0; i < 3; ++i) {
        RealField f2(g);
        for (int ax = 0; ax < 3; ++ax) {
            RealField du = transform_inverse(spectral_derivative(u[size_t(i)], ax));
            for (std::int64_t m = 0; m < n; ++m)
                f2.v[size_t(m)] -= up[size_t(ax)].v[size_t(m)] * du.v[size_t(m)];
        }
        out.u[size_t(i)] = transform_forward(f2);
        if (dealias_products) dealias(out.u[size_t(i)]);
    }
    return uinf;
}

double trapezoid(double prev_int, double dt, double f_prev, double f_cur) {
    return prev_int + 0.5 * dt * (f_prev + f_cur);
}

} // namespace

EulerState steady_state(const Potential& P, double gamma) {
    EulerState s;
    s.grid = P.grid;
    s.phi = SpectralField(P.grid);
    for (int i = 0; i < 3; ++i) s.u[size_t(i)] = SpectralField(P.grid);
    s.gamma = gamma;
    return s;
}

EulerState perturbed_state(const Potential& P, double gamma, double delta,
                           std::uint64_t seed) {
    EulerState s = steady_state(P, gamma);
    std::array<SpectralField*, 4> fields = {&s.phi, &s.u[0], &s.u[1], &s.u[2]};
    double sq = 0.0;
    for (int f = 0; f < 4; ++f) {
        *fields[size_t(f)] =
            transform_forward(random_smooth_field(P.grid, seed + std::uint64_t(f)));
        remove_mean(*fields[size_t(f)]);
        dealias(*fields[size_t(f)]);
        double nk = sobolev_norm(*fields[size_t(f)], 3);
        sq += nk * nk;
    }
    double scale = delta / std::sqrt(sq);
    for (int f = 0; f < 4; ++f)
        for (cplx& c : fields[size_t(f)]->v) c *= scale;
    return s;
}

EulerState relaxation_state(const Potential& P, double gamma,
                            const RealField& rho0) {
    RealField lp(P.grid);
    for (std::int64_t i = 0; i < P.grid.size(); ++i) {
        double r = rho0.v[size_t(i)];
        if (!(r > 0.0))
            throw std::invalid_argument("relaxation_state: rho0 must be positive");
        lp.v[size_t(i)] = std::log(r) + P.V.v[size_t(i)];
    }
    EulerState s = steady_state(P, gamma);
    s.phi = transform_forward(lp);
    dealias(s.phi);
    for (int ax = 0; ax < 3; ++ax) {
        s.u[size_t(ax)] = spectral_derivative(s.phi, ax);
        for (cplx& c : s.u[size_t(ax)].v) c *= -1.0 / gamma;
    }
    return s;
}

EulerRhs rhs_full(const EulerState& s, const Potential& P,
                  bool dealias_products) {
    const Grid& g = s.grid;
    Pair nl = make_pair(g);
    eval_nonlinear(g, P, s.phi, s.u, dealias_products, nl);

    EulerRhs out{SpectralField(g), {SpectralField(g), SpectralField(g), SpectralField(g)}};
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        std::array<double, 3> xi = {g.wavenumber(i), g.wavenumber(j),
                                    g.wavenumber(k)};
        cplx div{0.0, 0.0};
        for (int ax = 0; ax < 3; ++ax)
            div += cplx(0.0, xi[size_t(ax)]) * s.u[size_t(ax)].v[size_t(idx)];
        out.phi_dot.v[size_t(idx)] = -div + nl.phi.v[size_t(idx)];
        for (int ax = 0; ax < 3; ++ax)
            out.u_dot[size_t(ax)].v[size_t(idx)] =
                -cplx(0.0, xi[size_t(ax)]) * s.phi.v[size_t(idx)] -
                s.gamma * s.u[size_t(ax)].v[size_t(idx)] +
                nl.u[size_t(ax)].v[size_t(idx)];
    });
    return out;
}

StepTable make_step_table(const Grid& g, double gamma, double dt) {
    StepTable tab;
    tab.half_dt = 0.5 * dt;
    tab.half.resize(size_t(g.size()));
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        double x = g.wavenumber(i), y = g.wavenumber(j), z = g.wavenumber(k);
        double r = std::sqrt(x * x + y * y + z * z);
        tab.half[size_t(idx)] = green_scalars(r, tab.half_dt, gamma);
    });
    return tab;
}

double step_ifrk4(EulerState& s, const Potential& P, const StepTable& tab,
                  bool dealias_products, bool zero_nonlinearity) {
    const Grid& g = s.grid;
    const double h = 2.0 * tab.half_dt;

    if (zero_nonlinearity) {
        std::array<RealField, 3> up;
        for (int i = 0; i < 3; ++i) up[size_t(i)] = transform_inverse(s.u[size_t(i)]);
        double uinf = linf_norm(up);
        Pair w{std::move(s.phi), std::move(s.u)};
        apply_half(g, tab, w);
        apply_half(g, tab, w);
        s.phi = std::move(w.phi);
        s.u = std::move(w.u);
        s.t += h;
        return uinf;
    }

    Pair n1 = make_pair(g);
    double uinf = eval_nonlinear(g, P, s.phi, s.u, dealias_products, n1);

    Pair acc = n1; // becomes E_h N1
    apply_half(g, tab, acc);
    apply_half(g, tab, acc);

    Pair w{std::move(s.phi), std::move(s.u)};
    Pair stage = make_pair(g);
    lincomb(stage, w, 0.5 * h, n1); // W + h/2 N1
    apply_half(g, tab, stage);
    Pair n2 = make_pair(g);
    eval_nonlinear(g, P, stage.phi, stage.u, dealias_products, n2);

    Pair ehw = w; // becomes E_{h/2} W, then E_h W
    apply_half(g, tab, ehw);
    lincomb(stage, ehw, 0.5 * h, n2);
    Pair n3 = make_pair(g);
    eval_nonlinear(g, P, stage.phi, stage.u, dealias_products, n3);
    apply_half(g, tab, n3); // E_{h/2} N3, used by stage 4 and the combination

    apply_half(g, tab, ehw); // E_h W
    lincomb(stage, ehw, h, n3);
    Pair n4 = make_pair(g);
    eval_nonlinear(g, P, stage.phi, stage.u, dealias_products, n4);

    apply_half(g, tab, n2); // E_{h/2} N2

    std::int64_t n = g.size();
    const double c = h / 6.0;
    for (std::int64_t i = 0; i < n; ++i)
        w.phi.v[size_t(i)] =
            ehw.phi.v[size_t(i)] +
            c * (acc.phi.v[size_t(i)] + 2.0 * (n2.phi.v[size_t(i)] + n3.phi.v[size_t(i)]) +
                 n4.phi.v[size_t(i)]);
    for (int j = 0; j < 3; ++j)
        for (std::int64_t i = 0; i < n; ++i)
            w.u[size_t(j)].v[size_t(i)] =
                ehw.u[size_t(j)].v[size_t(i)] +
                c * (acc.u[size_t(j)].v[size_t(i)] +
                     2.0 * (n2.u[size_t(j)].v[size_t(i)] + n3.u[size_t(j)].v[size_t(i)]) +
                     n4.u[size_t(j)].v[size_t(i)]);

    s.phi = std::move(w.phi);
    s.u = std::move(w.u);
    s.t += h;
    return uinf;
}

MomentumView momentum_view(const EulerState& s, const Potential& P) {
    const Grid& g = s.grid;
    RealField phip = transform_inverse(s.phi);
    MomentumView mv{RealField(g), RealField(g), {}};
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double rho = P.rho_inf.v[size_t(i)] * std::exp(phip.v[size_t(i)]);
        if (!std::isfinite(rho) || rho <= 0.0)
            throw std::runtime_error("momentum_view: nonpositive density");
        mv.rho.v[size_t(i)] = rho;
        mv.rho_pert.v[size_t(i)] = rho - P.rho_inf.v[size_t(i)];
    }
    for (int ax = 0; ax < 3; ++ax) {
        RealField up = transform_inverse(s.u[size_t(ax)]);
        mv.m[size_t(ax)] = RealField(g);
        for (std::int64_t i = 0; i < g.size(); ++i)
            mv.m[size_t(ax)].v[size_t(i)] = mv.rho.v[size_t(i)] * up.v[size_t(i)];
    }
    return mv;
}

EnergyRecord record_energies(const EulerState& s, const Potential& P,
                             const EnergyRecord* prev, double n0) {
    const Grid& g = s.grid;
    EnergyRecord r;
    r.t = s.t;
    r.n0 = n0;

    for (int k = 0; k <= 3; ++k) {
        r.phi_hk[size_t(k)] = sobolev_norm(s.phi, k);
        double sq = 0.0;
        for (int ax = 0; ax < 3; ++ax) {
            double nk = sobolev_norm(s.u[size_t(ax)], k);
            sq += nk * nk;
        }
        r.u_hk[size_t(k)] = std::sqrt(sq);
    }
    double sem1 = sobolev_seminorm(s.phi, 1);
    double sem2 = sobolev_seminorm(s.phi, 2);
    double sem3 = sobolev_seminorm(s.phi, 3);
    r.grad_phi_h2 = std::sqrt(sem1 * sem1 + sem2 * sem2 + sem3 * sem3);
    r.energy = r.phi_hk[3] + r.u_hk[3];
    r.dissipation = r.grad_phi_h2 + r.u_hk[3];
    r.en2 = r.phi_hk[3] * r.phi_hk[3] + r.u_hk[3] * r.u_hk[3];

    // Cross term sum_{k<=2} int grad^k u . grad^{k+1} phi, mode-wise.
    double h3 = std::pow(g.spacing(), 3);
    double cross = 0.0;
    for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
        std::array<double, 3> xi = {g.wavenumber(i), g.wavenumber(j),
                                    g.wavenumber(k)};
        double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        double wgt = 1.0 + r2 + r2 * r2;
        cplx acc{0.0, 0.0};
        for (int ax = 0; ax < 3; ++ax)
            acc += s.u[size_t(ax)].v[size_t(idx)] *
                   std::conj(cplx(0.0, xi[size_t(ax)]) * s.phi.v[size_t(idx)]);
        cross += wgt * acc.real();
    });
    r.cross = h3 * cross;

    // Physical views and momentum fields.
    std::array<RealField, 3> up;
    for (int ax = 0; ax < 3; ++ax) up[size_t(ax)] = transform_inverse(s.u[size_t(ax)]);
    r.u_inf = linf_norm(up);
    RealField phip = transform_inverse(s.phi);

    RealField rho(g), rho_pert(g);
    r.rho_min = 1e300;
    r.rho_max = -1e300;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double rv = P.rho_inf.v[size_t(i)] * std::exp(phip.v[size_t(i)]);
        rho.v[size_t(i)] = rv;
        rho_pert.v[size_t(i)] = rv - P.rho_inf.v[size_t(i)];
        r.rho_min = std::min(r.rho_min, rv);
        r.rho_max = std::max(r.rho_max, rv);
    }
    SpectralField rph = transform_forward(rho_pert);
    r.rho_pert_h3 = sobolev_norm(rph, 3);
    double gr1 = sobolev_seminorm(rph, 1);
    double gr2 = sobolev_seminorm(rph, 2);
    double gr3 = sobolev_seminorm(rph, 3);
    double grad_rho_h2 = std::sqrt(gr1 * gr1 + gr2 * gr2 + gr3 * gr3);

    std::array<SpectralField, 3> mh;
    double msq = 0.0;
    std::array<RealField, 3> mp;
    for (int ax = 0; ax < 3; ++ax) {
        mp[size_t(ax)] = RealField(g);
        for (std::int64_t i = 0; i < g.size(); ++i)
            mp[size_t(ax)].v[size_t(i)] = rho.v[size_t(i)] * up[size_t(ax)].v[size_t(i)];
        mh[size_t(ax)] = transform_forward(mp[size_t(ax)]);
        double nk = sobolev_norm(mh[size_t(ax)], 3);
        msq += nk * nk;
    }
    r.m_h3 = std::sqrt(msq);
    r.triple_h3 = std::sqrt(r.rho_pert_h3 * r.rho_pert_h3 + msq +
                            r.u_hk[3] * r.u_hk[3]);

    // Momentum-form consistency: both groupings of div(rho u (x) u). The
    // difference is the spectral product-rule defect on the grid, which for
    // resolved fields sits at the level of squared spectral tails.
    double a_scale = 0.0, b_scale = 0.0, diff = 0.0;
    {
        SpectralField divm(g);
        for_modes(g, [&](int i, int j, int k, std::int64_t idx) {
            std::array<double, 3> xi = {g.wavenumber(i), g.wavenumber(j),
                                        g.wavenumber(k)};
            cplx acc{0.0, 0.0};
            for (int ax = 0; ax < 3; ++ax)
                acc += cplx(0.0, xi[size_t(ax)]) * mh[size_t(ax)].v[size_t(idx)];
            divm.v[size_t(idx)] = acc;
        });
        RealField divm_p = transform_inverse(divm);

        for (int i = 0; i < 3; ++i) {
            SpectralField a_hat(g);
            for (int ax = 0; ax < 3; ++ax) {
                RealField prod(g);
                for (std::int64_t m = 0; m < g.size(); ++m)
                    prod.v[size_t(m)] =
                        mp[size_t(i)].v[size_t(m)] * up[size_t(ax)].v[size_t(m)];
                SpectralField ph = spectral_derivative(transform_forward(prod), ax);
                for (std::int64_t m = 0; m < g.size(); ++m)
                    a_hat.v[size_t(m)] += ph.v[size_t(m)];
            }
            RealField conv(g);
            for (int ax = 0; ax < 3; ++ax) {
                RealField du = transform_inverse(spectral_derivative(s.u[size_t(i)], ax));
                for (std::int64_t m = 0; m < g.size(); ++m)
                    conv.v[size_t(m)] += up[size_t(ax)].v[size_t(m)] * du.v[size_t(m)];
            }
            RealField bfield(g);
            for (std::int64_t m = 0; m < g.size(); ++m)
                bfield.v[size_t(m)] = divm_p.v[size_t(m)] * up[size_t(i)].v[size_t(m)] +
                                      rho.v[size_t(m)] * conv.v[size_t(m)];
            SpectralField b_hat = transform_forward(bfield);
            double na = l2_norm(a_hat), nb = l2_norm(b_hat);
            a_scale = std::max(a_scale, na);
            b_scale = std::max(b_scale, nb);
            for (std::int64_t m = 0; m < g.size(); ++m)
                b_hat.v[size_t(m)] -= a_hat.v[size_t(m)];
            diff = std::max(diff, l2_norm(b_hat));
        }
    }
    r.mf_residual = diff / std::max({a_scale, b_scale, 1e-300});

    r.imag_resid = imag_residual(s.phi);
    for (int ax = 0; ax < 3; ++ax)
        r.imag_resid = std::max(r.imag_resid, imag_residual(s.u[size_t(ax)]));

    // Running accumulations.
    double f_gphi = r.grad_phi_h2 * r.grad_phi_h2;
    double f_u = r.u_hk[3] * r.u_hk[3];
    double f_mu = msq + f_u;
    double f_grho = grad_rho_h2 * grad_rho_h2;
    double f_d = r.dissipation * r.dissipation;
    double qv = std::pow(1.0 + r.t, 0.75) * r.phi_hk[0] +
                std::pow(1.0 + r.t, 1.25) * (r.grad_phi_h2 + r.u_hk[3]);
    double grad2_phi_h1 = std::sqrt(sem2 * sem2 + sem3 * sem3);
    double gu_sq = 0.0;
    for (int ax = 0; ax < 3; ++ax)
        for (int j = 1; j <= 3; ++j) {
            double sm = sobolev_seminorm(s.u[size_t(ax)], j);
            gu_sq += sm * sm;
        }
    double mv = std::pow(1.0 + r.t, 1.75) * (grad2_phi_h1 + std::sqrt(gu_sq));

    if (prev == nullptr) {
        r.q_weighted = qv;
        r.m_weighted = mv;
    } else {
        double dt = r.t - prev->t;
        double p_gphi = prev->grad_phi_h2 * prev->grad_phi_h2;
        double p_u = prev->u_hk[3] * prev->u_hk[3];
        double p_m = prev->m_h3 * prev->m_h3;
        r.int_grad_phi_h2_sq = trapezoid(prev->int_grad_phi_h2_sq, dt, p_gphi, f_gphi);
        r.int_u_h3_sq = trapezoid(prev->int_u_h3_sq, dt, p_u, f_u);
        r.int_mu_h3_sq = trapezoid(prev->int_mu_h3_sq, dt, p_m + p_u, f_mu);
        r.int_grad_rho_h2_sq = trapezoid(prev->int_grad_rho_h2_sq, dt,
                                         prev->grad_rho_h2_last, f_grho);
        r.int_d_sq = trapezoid(prev->int_d_sq, dt,
                               prev->dissipation * prev->dissipation, f_d);
        r.q_weighted = std::max(prev->q_weighted, qv);
        r.m_weighted = std::max(prev->m_weighted, mv);
    }
    r.grad_rho_h2_last = f_grho;
    double g1 = s.gamma;
    r.z1 = r.triple_h3 / std::sqrt(g1) + std::sqrt(r.int_mu_h3_sq);
    r.z2 = std::sqrt(r.int_grad_rho_h2_sq / g1);
    return r;
}

DissipationReport check_dissipation(const std::vector<EnergyRecord>& recs,
                                    double c4_cap) {
    DissipationReport rep;
    if (recs.size() < 2) {
        rep.c4_fit = c4_cap;
        return rep;
    }
    double e0sq = recs[0].energy * recs[0].energy;
    double d0sq = recs[0].dissipation * recs[0].dissipation;
    rep.norm0 = std::sqrt(recs[0].en2);
    double rate_tol = 1e-6 * e0sq;
    double c4 = c4_cap;
    double worst_rate = -1e300;
    double worst_norm_inc = -1e300;
    int used = 0;
    for (size_t i = 0; i + 1 < recs.size(); ++i) {
        double dt = recs[i + 1].t - recs[i].t;
        if (!(dt > 0.0)) continue;
        double rate = (recs[i + 1].en2 - recs[i].en2) / dt;
        worst_rate = std::max(worst_rate, rate);
        if (rate > rate_tol) rep.monotone = false;
        double ninc = std::sqrt(recs[i + 1].en2) - std::sqrt(recs[i].en2);
        worst_norm_inc = std::max(worst_norm_inc, ninc);
        double dbar = 0.5 * (recs[i].dissipation * recs[i].dissipation +
                             recs[i + 1].dissipation * recs[i + 1].dissipation);
        if (dbar >= 1e-6 * d0sq && dbar > 0.0) {
            c4 = std::min(c4, -rate / dbar);
            ++used;
        }
    }
    rep.worst_rate = worst_rate;
    rep.worst_norm_increase = worst_norm_inc;
    rep.intervals_used = used;
    rep.c4_fit = used > 0 ? c4 : c4_cap;
    double int_d2 = recs.back().int_d_sq;
    double en2_0 = recs[0].en2;
    if (en2_0 > 0.0) {
        rep.budget_ratio =
            (recs.back().en2 + 0.5 * std::max(rep.c4_fit, 0.0) * int_d2) / en2_0;
        rep.budget_ok = rep.budget_ratio <= 1.0 + 1e-4;
    } else {
        rep.budget_ratio = 0.0;
        rep.budget_ok = true;
    }
    return rep;
}

EulerRun run_euler(const EulerState& s0, const Potential& P,
                   const EulerConfig& cfg) {
    if (!(cfg.dt > 0.0))
        throw std::invalid_argument("run_euler: dt must be positive");
    EulerRun out;
    out.final_state = s0;
    out.final_state.gamma = cfg.gamma;
    EulerState& s = out.final_state;
    const Grid& g = s.grid;

    {
        RealField phip = transform_inverse(s.phi);
        std::array<RealField, 3> up;
        for (int ax = 0; ax < 3; ++ax) up[size_t(ax)] = transform_inverse(s.u[size_t(ax)]);
        double n0 = lp_norm(phip, 1) + lp_norm(up, 1);
        out.records.push_back(record_energies(s, P, nullptr, n0));
    }
    double n0 = out.records[0].n0;
    double data_h3 = std::sqrt(out.records[0].en2);
    out.outside_regime =
        data_h3 > cfg.delta0 * (1.0 + 1e-12) || P.grad_h3() > cfg.eps0 * (1.0 + 1e-12);

    double uinf0 = out.records[0].u_inf;
    double uinf_prev = uinf0;
    const double hx = g.spacing();
    const double t_eps = 1e-9 * std::max(1.0, std::abs(cfg.t_end));
    std::map<double, StepTable> cache;
    int since_record = 0;
    out.status = "completed";

    while (s.t < cfg.t_end - t_eps) {
        double dt = std::min(cfg.dt, cfg.t_end - s.t);
        double bound = 0.5 * hx / (2.0 + uinf_prev);
        while (dt > bound) {
            dt *= 0.5;
            ++out.cfl_halvings;
        }
        auto it = cache.find(dt);
        if (it == cache.end())
            it = cache.emplace(dt, make_step_table(g, cfg.gamma, dt)).first;
        double uinf = step_ifrk4(s, P, it->second, cfg.dealias_products,
                                 cfg.zero_nonlinearity);
        ++out.steps;
        ++since_record;
        uinf_prev = uinf;
        bool bad = !std::isfinite(uinf) ||
                   uinf > cfg.abort_factor * std::max(uinf0, 1e-30) ||
                   !std::isfinite(s.phi.v[0].real());
        if (bad) {
            out.status = "aborted: velocity blow-up or non-finite state";
            out.records.push_back(record_energies(s, P, &out.records.back(), n0));
            return out;
        }
        if (since_record >= cfg.output_stride || s.t >= cfg.t_end - t_eps) {
            out.records.push_back(record_energies(s, P, &out.records.back(), n0));
            since_record = 0;
        }
    }
    return out;
}

} // namespace eulab
