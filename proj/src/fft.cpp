#include "eulab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace eulab {

namespace {

// One cached plan pair per grid size. FFTW planning is not thread-safe and
// plan execution reuses the workspace buffers, so the whole transform is
// serialized per plan. Grids in this project are small; the lock is cheap.
struct PlanSet {
    int n;
    fftw_complex* buf;
    fftw_plan fwd;
    fftw_plan bwd;
    std::mutex mtx;

    explicit PlanSet(int n_) : n(n_) {
        std::int64_t N = std::int64_t(n) * n * n;
        buf = fftw_alloc_complex(size_t(N));
        fwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~PlanSet() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
};

PlanSet& plans_for(int n) {
    static std::mutex table_mtx;
    static std::map<int, PlanSet*> table;
    std::lock_guard<std::mutex> lk(table_mtx);
    auto it = table.find(n);
    if (it == table.end())
        it = table.emplace(n, new PlanSet(n)).first;
    return *it->second;
}

} // namespace

SpectralField transform_forward(const RealField& f) {
    const Grid& g = f.grid;
    PlanSet& p = plans_for(g.n);
    SpectralField out(g);
    const double scale = 1.0 / std::sqrt(double(g.size()));
    std::lock_guard<std::mutex> lk(p.mtx);
    for (std::int64_t i = 0; i < g.size(); ++i) {
        p.buf[i][0] = f.v[size_t(i)];
        p.buf[i][1] = 0.0;
    }
    fftw_execute(p.fwd);
    for (std::int64_t i = 0; i < g.size(); ++i)
        out.v[size_t(i)] = cplx{p.buf[i][0], p.buf[i][1]} * scale;
    return out;
}

SpectralField transform_inverse_complex(const SpectralField& fh) {
    const Grid& g = fh.grid;
    PlanSet& p = plans_for(g.n);
    SpectralField out(g);
    const double scale = 1.0 / std::sqrt(double(g.size()));
    std::lock_guard<std::mutex> lk(p.mtx);
    for (std::int64_t i = 0; i < g.size(); ++i) {
        p.buf[i][0] = fh.v[size_t(i)].real();
        p.buf[i][1] = fh.v[size_t(i)].imag();
    }
    fftw_execute(p.bwd);
    for (std::int64_t i = 0; i < g.size(); ++i)
        out.v[size_t(i)] = cplx{p.buf[i][0], p.buf[i][1]} * scale;
    return out;
}

RealField transform_inverse(const SpectralField& fh) {
    SpectralField z = transform_inverse_complex(fh);
    RealField out(fh.grid);
    for (size_t i = 0; i < z.v.size(); ++i)
        out.v[i] = z.v[i].real();
    return out;
}

double imag_residual(const SpectralField& fh) {
    SpectralField z = transform_inverse_complex(fh);
    double worst = 0.0, scale = 0.0;
    for (const cplx& c : z.v) {
        worst = std::max(worst, std::abs(c.imag()));
        scale = std::max(scale, std::abs(c.real()));
    }
    return scale > 0.0 ? worst / scale : worst;
}

} // namespace eulab
