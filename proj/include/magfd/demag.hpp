#pragma once

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "magfd/backend.hpp"
#include "magfd/fft.hpp"
#include "magfd/grid.hpp"
#include "magfd/newell.hpp"
#include "magfd/vector_field.hpp"

namespace magfd::demag {

using fft::Dims3;
using fft::FftPlan;
using fft::Spectrum;

// Padded size per axis: the next power of two >= 2n (so exactly 2n when n is
// a power of two).  Degenerate axes (n = 1) pad to 2: displacement 0 plus one
// zero slot keeps the convolution exact.
inline int paddedSize(int n) { return fft::nextPowerOfTwoAtLeast(2 * n); }

inline Dims3 paddedDimsFor(const Grid& g) {
    return {paddedSize(g.nx), paddedSize(g.ny), paddedSize(g.nz)};
}

// Wrap-around storage slot for a kernel displacement d in [-(n-1), n-1]:
// non-negative displacements keep their index, negative ones wrap to the top
// of the padded axis.  Slots covered by no valid displacement stay zero.
inline int wrapIndex(int d, int n, int P) {
    if (d <= -n || d >= n)
        throw std::invalid_argument("wrapIndex: |displacement| must be < n");
    return d >= 0 ? d : P + d;
}

// Six padded real lattices of the symmetric demag tensor in wrap-around
// layout.  Sign convention: H = K * M, self-term trace -1 (a uniformly
// magnetized isolated cubic cell sees H = -M/3).
template <class T>
struct DemagTensor {
    Grid grid;
    Dims3 padded;
    std::vector<T> xx, yy, zz, xy, xz, yz;
};

template <class T>
DemagTensor<T> buildDemagTensor(const Grid& grid, Dims3 padded, const Backend& backend) {
    if (padded.x < 2 * grid.nx - 1 || padded.y < 2 * grid.ny - 1 || padded.z < 2 * grid.nz - 1)
        throw std::invalid_argument("buildDemagTensor: padded dims too small for grid");
    DemagTensor<T> t{grid, padded, {}, {}, {}, {}, {}, {}};
    const std::size_t n = padded.count();
    t.xx.assign(n, T(0));
    t.yy.assign(n, T(0));
    t.zz.assign(n, T(0));
    t.xy.assign(n, T(0));
    t.xz.assign(n, T(0));
    t.yz.assign(n, T(0));

    const std::size_t px = padded.x, pxy = static_cast<std::size_t>(padded.x) * padded.y;
    // One Newell evaluation per non-negative displacement octant; mirror
    // slots get the same values with the parity signs, which keeps the
    // tensor's symmetries exact in floating point.
    backend.forEach(grid.cellCount(), [&](std::size_t cell) {
        int i, j, k;
        grid.unindex(cell, i, j, k);
        const newell::TensorEntry e =
            newell::demagTensorEntry(i, j, k, grid.dx, grid.dy, grid.dz);
        for (int sx = 0; sx < (i > 0 ? 2 : 1); ++sx)
            for (int sy = 0; sy < (j > 0 ? 2 : 1); ++sy)
                for (int sz = 0; sz < (k > 0 ? 2 : 1); ++sz) {
                    const int di = sx ? -i : i, dj = sy ? -j : j, dk = sz ? -k : k;
                    const std::size_t slot = wrapIndex(di, grid.nx, padded.x) +
                                             px * wrapIndex(dj, grid.ny, padded.y) +
                                             pxy * wrapIndex(dk, grid.nz, padded.z);
                    const double ox = sx ? -1.0 : 1.0;
                    const double oy = sy ? -1.0 : 1.0;
                    const double oz = sz ? -1.0 : 1.0;
                    t.xx[slot] = static_cast<T>(e.xx);
                    t.yy[slot] = static_cast<T>(e.yy);
                    t.zz[slot] = static_cast<T>(e.zz);
                    t.xy[slot] = static_cast<T>(ox * oy * e.xy);
                    t.xz[slot] = static_cast<T>(ox * oz * e.xz);
                    t.yz[slot] = static_cast<T>(oy * oz * e.yz);
                }
    });
    return t;
}

template <class T>
DemagTensor<T> buildDemagTensor(const Grid& grid, const Backend& backend) {
    return buildDemagTensor<T>(grid, paddedDimsFor(grid), backend);
}

// Fourier-domain tensor: built once per (grid, precision) and reused every
// step; the tensor transforms never run again after initialization.
template <class T>
struct DemagSpectrum {
    Dims3 padded;
    Spectrum<T> xx, yy, zz, xy, xz, yz;
};

template <class T>
DemagSpectrum<T> precomputeSpectrum(const DemagTensor<T>& tensor, const FftPlan<T>& plan,
                                    const Backend& backend) {
    if (!(plan.dims() == tensor.padded))
        throw std::invalid_argument("precomputeSpectrum: plan dims do not match tensor");
    DemagSpectrum<T> s;
    s.padded = tensor.padded;
    s.xx = plan.forward3d(std::span<const T>(tensor.xx), backend);
    s.yy = plan.forward3d(std::span<const T>(tensor.yy), backend);
    s.zz = plan.forward3d(std::span<const T>(tensor.zz), backend);
    s.xy = plan.forward3d(std::span<const T>(tensor.xy), backend);
    s.xz = plan.forward3d(std::span<const T>(tensor.xz), backend);
    s.yz = plan.forward3d(std::span<const T>(tensor.yz), backend);
    return s;
}

// Copies M into the lower corner [0, n) per axis of three padded scalar
// lattices; every other slot is zero.
template <class T>
void padMagnetization(const VectorField<T>& M, Dims3 padded, std::span<T> outX,
                      std::span<T> outY, std::span<T> outZ, const Backend& backend) {
    const Grid& g = M.grid;
    if (padded.x < g.nx || padded.y < g.ny || padded.z < g.nz)
        throw std::invalid_argument("padMagnetization: padded dims smaller than grid");
    if (outX.size() != padded.count() || outY.size() != padded.count() ||
        outZ.size() != padded.count())
        throw std::invalid_argument("padMagnetization: output length mismatch");
    backend.forEach(padded.count(), [&](std::size_t p) {
        outX[p] = T(0);
        outY[p] = T(0);
        outZ[p] = T(0);
    });
    const std::size_t px = padded.x, pxy = static_cast<std::size_t>(padded.x) * padded.y;
    backend.forEach(g.cellCount(), [&](std::size_t cell) {
        int i, j, k;
        g.unindex(cell, i, j, k);
        const std::size_t p = i + px * j + pxy * k;
        outX[p] = M.x[cell];
        outY[p] = M.y[cell];
        outZ[p] = M.z[cell];
    });
}

// Per-bin symmetric 3x3 matrix-vector product in the Fourier domain.
// Output spans may alias the inputs.
template <class T>
void spectralMultiply(const DemagSpectrum<T>& ks, std::span<const std::complex<T>> mx,
                      std::span<const std::complex<T>> my, std::span<const std::complex<T>> mz,
                      std::span<std::complex<T>> hx, std::span<std::complex<T>> hy,
                      std::span<std::complex<T>> hz, const Backend& backend) {
    const std::size_t n = ks.padded.count();
    if (mx.size() != n || my.size() != n || mz.size() != n || hx.size() != n ||
        hy.size() != n || hz.size() != n)
        throw std::invalid_argument("spectralMultiply: dims mismatch");
    const std::complex<T>* kxx = ks.xx.data.data();
    const std::complex<T>* kyy = ks.yy.data.data();
    const std::complex<T>* kzz = ks.zz.data.data();
    const std::complex<T>* kxy = ks.xy.data.data();
    const std::complex<T>* kxz = ks.xz.data.data();
    const std::complex<T>* kyz = ks.yz.data.data();
    backend.forEach(n, [&](std::size_t b) {
        const std::complex<T> x = mx[b], y = my[b], z = mz[b];
        hx[b] = x * kxx[b] + y * kxy[b] + z * kxz[b];
        hy[b] = x * kxy[b] + y * kyy[b] + z * kyz[b];
        hz[b] = x * kxz[b] + y * kyz[b] + z * kzz[b];
    });
}

// Demag field via the three-phase padded-convolution pipeline: pad, three
// forward FFTs, per-bin multiply, three inverse FFTs, truncate back to the
// grid.  Exactly six transforms per call.  Owns its plan, spectra and
// scratch so per-step calls allocate nothing; one instance must not run
// concurrently with itself.
template <class T>
class DemagConvolution {
public:
    DemagConvolution(const Grid& grid, const Backend& backend)
        : DemagConvolution(grid, paddedDimsFor(grid), backend) {}

    DemagConvolution(const Grid& grid, Dims3 padded, const Backend& backend)
        : grid_(grid), plan_(FftPlan<T>::create(padded)),
          spectrum_(precomputeSpectrum(buildDemagTensor<T>(grid, padded, backend), plan_,
                                       backend)),
          mx_(padded.count()), my_(padded.count()), mz_(padded.count()) {}

    const Grid& grid() const { return grid_; }
    const FftPlan<T>& plan() const { return plan_; }
    const DemagSpectrum<T>& spectrum() const { return spectrum_; }

    void field(const VectorField<T>& M, VectorField<T>& out, const Backend& backend,
               StepTiming* timing = nullptr) {
        if (!(M.grid == grid_))
            throw std::invalid_argument("DemagConvolution::field: grid mismatch");
        if (!(out.grid == grid_)) out = VectorField<T>(grid_);
        PhaseClock clock;
        const Dims3 pd = plan_.dims();
        const std::size_t px = pd.x, pxy = static_cast<std::size_t>(pd.x) * pd.y;
        const std::size_t nx = grid_.nx, srcRow = grid_.nx;

        // pad: write each padded x-row once (source values or zeros)
        const std::size_t padRows = static_cast<std::size_t>(pd.y) * pd.z;
        backend.forEach(padRows, [&](std::size_t r) {
            const std::size_t j = r % pd.y, k = r / pd.y;
            std::complex<T>* dx = mx_.data() + px * j + pxy * k;
            std::complex<T>* dy = my_.data() + px * j + pxy * k;
            std::complex<T>* dz = mz_.data() + px * j + pxy * k;
            const bool inside = j < static_cast<std::size_t>(grid_.ny) &&
                                k < static_cast<std::size_t>(grid_.nz);
            std::size_t i = 0;
            if (inside) {
                const std::size_t src = srcRow * (j + static_cast<std::size_t>(grid_.ny) * k);
                for (; i < nx; ++i) {
                    dx[i] = {M.x[src + i], T(0)};
                    dy[i] = {M.y[src + i], T(0)};
                    dz[i] = {M.z[src + i], T(0)};
                }
            }
            for (; i < px; ++i) dx[i] = dy[i] = dz[i] = std::complex<T>(0, 0);
        });
        if (timing) timing->pad += clock.lap();

        plan_.forwardPaddedInPlace(mx_.data(), grid_.ny, grid_.nz, backend);
        plan_.forwardPaddedInPlace(my_.data(), grid_.ny, grid_.nz, backend);
        plan_.forwardPaddedInPlace(mz_.data(), grid_.ny, grid_.nz, backend);
        if (timing) timing->forwardFft += clock.lap();

        spectralMultiply<T>(spectrum_, {mx_}, {my_}, {mz_}, {mx_}, {my_}, {mz_}, backend);
        if (timing) timing->spectralMultiply += clock.lap();

        plan_.inverseCornerInPlace(mx_.data(), grid_.ny, grid_.nz, backend);
        plan_.inverseCornerInPlace(my_.data(), grid_.ny, grid_.nz, backend);
        plan_.inverseCornerInPlace(mz_.data(), grid_.ny, grid_.nz, backend);
        // truncate: copy back the [0, n) corner rows, scaled
        const T scale = static_cast<T>(plan_.normalization());
        const std::size_t outRows = static_cast<std::size_t>(grid_.ny) * grid_.nz;
        backend.forEach(outRows, [&](std::size_t r) {
            const std::size_t j = r % grid_.ny, k = r / grid_.ny;
            const std::size_t p = px * j + pxy * k;
            const std::size_t dst = srcRow * r;
            for (std::size_t i = 0; i < nx; ++i) {
                out.x[dst + i] = mx_[p + i].real() * scale;
                out.y[dst + i] = my_[p + i].real() * scale;
                out.z[dst + i] = mz_[p + i].real() * scale;
            }
        });
        if (timing) timing->inverseFft += clock.lap();
    }

private:
    Grid grid_;
    FftPlan<T> plan_;
    DemagSpectrum<T> spectrum_;
    std::vector<std::complex<T>> mx_, my_, mz_;
};

// Allocating one-shot convenience over a prebuilt spectrum.
template <class T>
VectorField<T> demagField(const VectorField<T>& M, const DemagSpectrum<T>& spectrum,
                          const FftPlan<T>& plan, const Backend& backend) {
    if (!(plan.dims() == spectrum.padded))
        throw std::invalid_argument("demagField: plan dims do not match spectrum");
    const Dims3 pd = plan.dims();
    const std::size_t nPad = pd.count();
    std::vector<std::complex<T>> wx(nPad), wy(nPad), wz(nPad);
    const Grid& g = M.grid;
    if (pd.x < 2 * g.nx - 1 || pd.y < 2 * g.ny - 1 || pd.z < 2 * g.nz - 1)
        throw std::invalid_argument("demagField: spectrum padded dims too small for grid");
    const std::size_t px = pd.x, pxy = static_cast<std::size_t>(pd.x) * pd.y;
    for (std::size_t cell = 0; cell < g.cellCount(); ++cell) {
        int i, j, k;
        g.unindex(cell, i, j, k);
        const std::size_t p = i + px * j + pxy * k;
        wx[p] = {M.x[cell], T(0)};
        wy[p] = {M.y[cell], T(0)};
        wz[p] = {M.z[cell], T(0)};
    }
    plan.forwardInPlace(wx.data(), backend);
    plan.forwardInPlace(wy.data(), backend);
    plan.forwardInPlace(wz.data(), backend);
    spectralMultiply<T>(spectrum, {wx}, {wy}, {wz}, {wx}, {wy}, {wz}, backend);
    plan.inverseInPlace(wx.data(), backend);
    plan.inverseInPlace(wy.data(), backend);
    plan.inverseInPlace(wz.data(), backend);
    const T scale = static_cast<T>(plan.normalization());
    VectorField<T> out(g);
    for (std::size_t cell = 0; cell < g.cellCount(); ++cell) {
        int i, j, k;
        g.unindex(cell, i, j, k);
        const std::size_t p = i + px * j + pxy * k;
        out.x[cell] = wx[p].real() * scale;
        out.y[cell] = wy[p].real() * scale;
        out.z[cell] = wz[p].real() * scale;
    }
    return out;
}

// 1D padded-convolution reference pipeline: H(i) = sum_l M(l) K(i-l) for a
// kernel given on displacements [-(n-1), n-1] (stored at index d + n - 1).
// Pads M to the next power of two >= 2n, stores K wrap-around, transforms,
// multiplies member-wise, inverse-transforms and truncates to n.
template <class T>
std::vector<T> fftConvolve1d(std::span<const T> m, std::span<const T> kernel) {
    const int n = static_cast<int>(m.size());
    if (n < 1 || kernel.size() != static_cast<std::size_t>(2 * n - 1))
        throw std::invalid_argument("fftConvolve1d: kernel must cover [-(n-1), n-1]");
    const int P = paddedSize(n);
    fft::LineTransform<T> line(P);

    std::vector<std::complex<T>> mp(P), kp(P);
    for (int i = 0; i < n; ++i) mp[i] = {m[i], T(0)};
    for (int d = -(n - 1); d <= n - 1; ++d)
        kp[wrapIndex(d, n, P)] = {kernel[d + n - 1], T(0)};

    line.forward(mp.data());
    line.forward(kp.data());
    for (int i = 0; i < P; ++i) mp[i] *= kp[i];
    line.inverse(mp.data());

    std::vector<T> out(n);
    const T scale = T(1) / static_cast<T>(P);
    for (int i = 0; i < n; ++i) out[i] = mp[i].real() * scale;
    return out;
}

} // namespace magfd::demag
