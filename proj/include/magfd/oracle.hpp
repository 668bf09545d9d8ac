#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "magfd/constants.hpp"
#include "magfd/fft.hpp"
#include "magfd/grid.hpp"
#include "magfd/newell.hpp"
#include "magfd/vector_field.hpp"

// Brute-force reference implementations used only by tests and the selftest
// subcommand.  Deliberately simple, single-threaded, and written with their
// own loops so equivalence against the production FFT pipeline is a
// meaningful check.  Everything accumulates in long double.
namespace magfd::oracle {

// Direct O(N^2) evaluation of the demag convolution
//   H_x(i,j,k) = sum_{l,m,n} Mx Kxx(l-i,m-j,n-k) + My Kxy(...) + Mz Kxz(...)
// with tensor entries evaluated per displacement (no FFT, no padding).
// A displacement-indexed entry table is built first so the cost is
// O(N) Newell evaluations plus the O(N^2) sum.
template <class T>
VectorField<double> directDemag(const VectorField<T>& M, const Grid& grid,
                                std::size_t maxSourceCells = 12 * 12 * 12) {
    if (!(M.grid == grid)) throw std::invalid_argument("directDemag: grid mismatch");
    if (grid.cellCount() > maxSourceCells)
        throw std::invalid_argument("directDemag: grid exceeds brute-force cap");

    const int rx = grid.nx - 1, ry = grid.ny - 1, rz = grid.nz - 1;
    const int ex = 2 * rx + 1, ey = 2 * ry + 1, ez = 2 * rz + 1;
    std::vector<newell::TensorEntry> table(static_cast<std::size_t>(ex) * ey * ez);
    auto entryAt = [&](int di, int dj, int dk) -> const newell::TensorEntry& {
        return table[static_cast<std::size_t>(di + rx) +
                     static_cast<std::size_t>(ex) * ((dj + ry) +
                                                     static_cast<std::size_t>(ey) * (dk + rz))];
    };
    for (int dk = -rz; dk <= rz; ++dk)
        for (int dj = -ry; dj <= ry; ++dj)
            for (int di = -rx; di <= rx; ++di)
                table[static_cast<std::size_t>(di + rx) +
                      static_cast<std::size_t>(ex) *
                          ((dj + ry) + static_cast<std::size_t>(ey) * (dk + rz))] =
                    newell::demagTensorEntry(di, dj, dk, grid.dx, grid.dy, grid.dz);

    VectorField<double> H(grid);
    for (int k = 0; k < grid.nz; ++k)
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                long double hx = 0, hy = 0, hz = 0;
                for (int n = 0; n < grid.nz; ++n)
                    for (int m = 0; m < grid.ny; ++m)
                        for (int l = 0; l < grid.nx; ++l) {
                            const std::size_t src = grid.index(l, m, n);
                            const newell::TensorEntry& e = entryAt(l - i, m - j, n - k);
                            const long double mx = M.x[src], my = M.y[src], mz = M.z[src];
                            hx += mx * e.xx + my * e.xy + mz * e.xz;
                            hy += mx * e.xy + my * e.yy + mz * e.yz;
                            hz += mx * e.xz + my * e.yz + mz * e.zz;
                        }
                const std::size_t c = grid.index(i, j, k);
                H.x[c] = static_cast<double>(hx);
                H.y[c] = static_cast<double>(hy);
                H.z[c] = static_cast<double>(hz);
            }
    return H;
}

// Literal double loop of the 1D convolution H(i) = sum_l M(l) K(i-l), with
// the kernel given on displacements [-(n-1), n-1] at index d + n - 1.
inline std::vector<double> directConvolve1d(std::span<const double> m,
                                            std::span<const double> kernel) {
    const int n = static_cast<int>(m.size());
    if (kernel.size() != static_cast<std::size_t>(2 * n - 1))
        throw std::invalid_argument("directConvolve1d: kernel must cover [-(n-1), n-1]");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        long double s = 0;
        for (int l = 0; l < n; ++l) s += static_cast<long double>(m[l]) * kernel[i - l + n - 1];
        out[i] = static_cast<double>(s);
    }
    return out;
}

// Direct triple-sum DFT of a real lattice (unnormalized forward transform).
inline fft::Spectrum<double> naiveDft3d(std::span<const double> lattice, fft::Dims3 dims,
                                        std::size_t maxSize = 4096) {
    if (lattice.size() != dims.count())
        throw std::invalid_argument("naiveDft3d: lattice length mismatch");
    if (dims.count() > maxSize)
        throw std::invalid_argument("naiveDft3d: size exceeds brute-force cap");

    using C = std::complex<long double>;
    auto phases = [](int P) {
        std::vector<C> w(P);
        for (int k = 0; k < P; ++k) {
            const long double a = -2.0L * constants::pi * k / P;
            w[k] = {std::cos(a), std::sin(a)};
        }
        return w;
    };
    const auto wx = phases(dims.x), wy = phases(dims.y), wz = phases(dims.z);

    fft::Spectrum<double> s(dims);
    std::size_t bin = 0;
    for (int w = 0; w < dims.z; ++w)
        for (int v = 0; v < dims.y; ++v)
            for (int u = 0; u < dims.x; ++u, ++bin) {
                C acc{0, 0};
                std::size_t src = 0;
                for (int n = 0; n < dims.z; ++n)
                    for (int m = 0; m < dims.y; ++m)
                        for (int l = 0; l < dims.x; ++l, ++src) {
                            const C ph = wx[static_cast<std::size_t>(u) * l % dims.x] *
                                         wy[static_cast<std::size_t>(v) * m % dims.y] *
                                         wz[static_cast<std::size_t>(w) * n % dims.z];
                            acc += static_cast<long double>(lattice[src]) * ph;
                        }
                s.data[bin] = {static_cast<double>(acc.real()),
                               static_cast<double>(acc.imag())};
            }
    return s;
}

// Central finite difference of a scalar energy functional with respect to
// one M component of one cell, without renormalization:
//   (E(M + h e) - E(M - h e)) / (2h),  J per (A/m).
template <class T>
double fdGradient(const std::function<double(const VectorField<T>&)>& energyFn,
                  VectorField<T> M, int component, std::size_t cellIndex, double h) {
    if (!(h > 0)) throw std::invalid_argument("fdGradient: h must be > 0");
    auto& comp = component == 0 ? M.x : component == 1 ? M.y : M.z;
    const T original = comp[cellIndex];
    comp[cellIndex] = original + static_cast<T>(h);
    const double ePlus = energyFn(M);
    comp[cellIndex] = original - static_cast<T>(h);
    const double eMinus = energyFn(M);
    comp[cellIndex] = original;
    return (ePlus - eMinus) / (2.0 * h);
}

} // namespace magfd::oracle
