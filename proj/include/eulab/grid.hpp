// Periodic box discretization: uniform n^3 grid on [0,L)^3 and the matching
// lattice of wavevectors. Fields are value types; every operation on them is
// a pure function elsewhere in the library.
#ifndef EULAB_GRID_HPP
#define EULAB_GRID_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace eulab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct Grid {
    int n = 0;      // points per axis, power of two, >= 8
    double L = 0.0; // box edge length

    Grid() = default;
    Grid(int n_, double L_) : n(n_), L(L_) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two >= 8");
        if (!(L > 0.0))
            throw std::invalid_argument("Grid: L must be positive");
    }

    double spacing() const { return L / n; }
    std::int64_t size() const { return std::int64_t(n) * n * n; }

    std::int64_t index(int i, int j, int k) const {
        return (std::int64_t(i) * n + j) * n + k;
    }

    // Mode integer folded to the symmetric range [-n/2, n/2).
    int fold(int i) const { return i < n / 2 ? i : i - n; }

    // Wavevector component of mode index i along one axis.
    double wavenumber(int i) const { return 2.0 * pi / L * fold(i); }

    std::array<double, 3> point(int i, int j, int k) const {
        double h = spacing();
        return {h * i, h * j, h * k};
    }

    bool operator==(const Grid&) const = default;
};

struct RealField {
    Grid grid;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(const Grid& g) : grid(g), v(g.size(), 0.0) {}

    double& operator()(int i, int j, int k) { return v[grid.index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return v[grid.index(i, j, k)]; }
};

struct SpectralField {
    Grid grid;
    std::vector<cplx> v;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), v(g.size(), cplx{0.0, 0.0}) {}

    cplx& operator()(int i, int j, int k) { return v[grid.index(i, j, k)]; }
    cplx operator()(int i, int j, int k) const { return v[grid.index(i, j, k)]; }
};

// Loop helper: calls fn(i, j, k, flat_index) over the full lattice.
template <typename F>
void for_modes(const Grid& g, F&& fn) {
    std::int64_t idx = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k, ++idx)
                fn(i, j, k, idx);
}

} // namespace eulab

#endif
