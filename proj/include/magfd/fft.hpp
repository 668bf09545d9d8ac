#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "magfd/backend.hpp"
#include "magfd/constants.hpp"

namespace magfd::fft {

struct Dims3 {
    int x = 0, y = 0, z = 0;
    std::size_t count() const {
        return static_cast<std::size_t>(x) * y * z;
    }
    friend bool operator==(Dims3 a, Dims3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

inline bool isPowerOfTwo(int n) { return n >= 1 && (n & (n - 1)) == 0; }

inline int nextPowerOfTwoAtLeast(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Full-layout complex spectrum of a dims.count() lattice.
template <class T>
struct Spectrum {
    Dims3 dims;
    std::vector<std::complex<T>> data;

    Spectrum() = default;
    explicit Spectrum(Dims3 d) : dims(d), data(d.count()) {}
};

// Iterative radix-2 transform tables for one axis length n (a power of two
// >= 2).  Twiddles are tabulated in long double and the butterflies run in
// T, so the f32 path is genuinely single precision.
//
// The same tables serve two access patterns:
//   forward/inverse:          one contiguous line, in place;
//   forwardRows/inverseRows:  n "rows" of a lattice at a fixed stride,
//                             restricted to columns [lo, hi) -- the butterfly
//                             inner loop streams contiguous memory, which is
//                             what makes the y and z passes of the 3D
//                             transform cache-friendly.
template <class T>
class LineTransform {
public:
    LineTransform() = default;
    explicit LineTransform(int n) : n_(n) {
        if (!isPowerOfTwo(n) || n < 2)
            throw std::invalid_argument("LineTransform: size must be a power of two >= 2");
        rev_.resize(n);
        int bits = 0;
        while ((1 << bits) < n) ++bits;
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < bits; ++b)
                if (i & (1 << b)) r |= 1 << (bits - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        for (int k = 0; k < n / 2; ++k) {
            const long double a = -2.0L * constants::pi * k / n;
            tw_[k] = {static_cast<T>(std::cos(a)), static_cast<T>(std::sin(a))};
        }
    }

    int size() const { return n_; }

    void forward(std::complex<T>* line) const { transformRows(line, 1, 0, 1, false); }
    void inverse(std::complex<T>* line) const { transformRows(line, 1, 0, 1, true); }

    void forwardRows(std::complex<T>* base, std::size_t rowStride, std::size_t lo,
                     std::size_t hi) const {
        transformRows(base, rowStride, lo, hi, false);
    }
    void inverseRows(std::complex<T>* base, std::size_t rowStride, std::size_t lo,
                     std::size_t hi) const {
        transformRows(base, rowStride, lo, hi, true);
    }

private:
    void transformRows(std::complex<T>* base, std::size_t rowStride, std::size_t lo,
                       std::size_t hi, bool conjTwiddle) const {
        for (int j = 0; j < n_; ++j)
            if (rev_[j] > j)
                std::swap_ranges(base + j * rowStride + lo, base + j * rowStride + hi,
                                 base + rev_[j] * rowStride + lo);
        for (int len = 2; len <= n_; len <<= 1) {
            const int half = len >> 1;
            const int twStride = n_ / len;
            for (int rowBase = 0; rowBase < n_; rowBase += len) {
                for (int j = 0; j < half; ++j) {
                    std::complex<T> w = tw_[j * twStride];
                    if (conjTwiddle) w = std::conj(w);
                    std::complex<T>* a = base + (rowBase + j) * rowStride;
                    std::complex<T>* b = base + (rowBase + j + half) * rowStride;
                    for (std::size_t col = lo; col < hi; ++col) {
                        const std::complex<T> u = a[col];
                        const std::complex<T> v = b[col] * w;
                        a[col] = u + v;
                        b[col] = u - v;
                    }
                }
            }
        }
    }

    int n_ = 0;
    std::vector<int> rev_;
    std::vector<std::complex<T>> tw_;
};

// Provider seam: an engine performs unnormalized in-place complex 3D
// transforms over a fixed dims.  Swapping in an optimized provider leaves
// the demag pipeline untouched.
//
// The padded-convolution pipeline additionally exposes sparsity to the
// engine: a forward input that is nonzero only in rows j < activeY, k <
// activeZ (zero-padded), and an inverse whose output is consumed only in
// that corner.  The base implementations ignore the hints.
template <class T>
class Engine {
public:
    virtual ~Engine() = default;
    virtual Dims3 dims() const = 0;
    virtual void forward(std::complex<T>* data, const Backend& backend) const = 0;
    virtual void inverse(std::complex<T>* data, const Backend& backend) const = 0;
    // Precondition: rows with j >= activeY or k >= activeZ are all zero.
    virtual void forwardPadded(std::complex<T>* data, int activeY, int activeZ,
                               const Backend& backend) const {
        (void)activeY;
        (void)activeZ;
        forward(data, backend);
    }
    // Postcondition: only rows with j < neededY and k < neededZ are valid.
    virtual void inverseCorner(std::complex<T>* data, int neededY, int neededZ,
                               const Backend& backend) const {
        (void)neededY;
        (void)neededZ;
        inverse(data, backend);
    }
};

template <class T>
class Radix2Engine final : public Engine<T> {
public:
    explicit Radix2Engine(Dims3 d)
        : dims_(d), lx_(d.x), ly_(d.y), lz_(d.z),
          parallelWorthwhile_(d.count() >= 16384) {}

    Dims3 dims() const override { return dims_; }
    // forward runs x, y, z; inverse mirrors it as z, y, x so the corner
    // restriction below prunes the same way on both sides.
    void forward(std::complex<T>* data, const Backend& b) const override {
        forwardPadded(data, dims_.y, dims_.z, b);
    }
    void inverse(std::complex<T>* data, const Backend& b) const override {
        inverseCorner(data, dims_.y, dims_.z, b);
    }
    // Zero rows transform to zero rows, so lines outside the active corner
    // are skipped outright (they already hold zeros); the result is
    // bit-identical to the unrestricted transform.
    void forwardPadded(std::complex<T>* data, int activeY, int activeZ,
                       const Backend& b) const override {
        passX(data, b, false, activeY, activeZ);
        passY(data, b, false, activeZ);
        passZ(data, b, false);
    }
    // Running z, y, x and pruning to the needed rows computes exactly the
    // corner values of the full inverse; slots outside it are left stale.
    void inverseCorner(std::complex<T>* data, int neededY, int neededZ,
                       const Backend& b) const override {
        passZ(data, b, true);
        passY(data, b, true, neededZ);
        passX(data, b, true, neededY, neededZ);
    }

private:
    template <class F>
    void dispatch(const Backend& b, std::size_t n, F&& fn) const {
        // Small transforms run serially: the pool round-trip costs more than
        // the work.  The per-item results are identical either way.
        if (parallelWorthwhile_ && b.kind() == BackendKind::parallel) {
            b.forEach(n, fn, 1);
        } else {
            for (std::size_t i = 0; i < n; ++i) fn(i);
        }
    }

    // x lines are contiguous: transform each in place.
    void passX(std::complex<T>* data, const Backend& b, bool inv, int rowsY,
               int rowsZ) const {
        const std::size_t lines = static_cast<std::size_t>(rowsY) * rowsZ;
        const std::size_t n = dims_.x;
        dispatch(b, lines, [&](std::size_t l) {
            const std::size_t j = l % rowsY, k = l / rowsY;
            std::complex<T>* line = data + (j + static_cast<std::size_t>(dims_.y) * k) * n;
            inv ? lx_.inverse(line) : lx_.forward(line);
        });
    }
    // y rows within one z-plane are x-contiguous: stream row butterflies,
    // one plane per task.
    void passY(std::complex<T>* data, const Backend& b, bool inv, int planes) const {
        const std::size_t plane = static_cast<std::size_t>(dims_.x) * dims_.y;
        dispatch(b, planes, [&](std::size_t k) {
            std::complex<T>* base = data + k * plane;
            inv ? ly_.inverseRows(base, dims_.x, 0, dims_.x)
                : ly_.forwardRows(base, dims_.x, 0, dims_.x);
        });
    }
    // z columns: rows are whole xy-planes; split the plane index range into
    // independent column slabs.
    void passZ(std::complex<T>* data, const Backend& b, bool inv) const {
        const std::size_t plane = static_cast<std::size_t>(dims_.x) * dims_.y;
        const std::size_t slabs =
            parallelWorthwhile_ && b.kind() == BackendKind::parallel
                ? std::min<std::size_t>(plane, std::size_t(b.threads()) * 8)
                : 1;
        const std::size_t per = (plane + slabs - 1) / slabs;
        dispatch(b, slabs, [&](std::size_t s) {
            const std::size_t lo = s * per;
            const std::size_t hi = std::min(plane, lo + per);
            if (lo >= hi) return;
            inv ? lz_.inverseRows(data, plane, lo, hi)
                : lz_.forwardRows(data, plane, lo, hi);
        });
    }

    Dims3 dims_;
    LineTransform<T> lx_, ly_, lz_;
    bool parallelWorthwhile_;
};

// Reusable transform plan for one padded size.  Immutable after creation and
// safe for concurrent read-only use; repeated transforms allocate nothing.
template <class T>
class FftPlan {
public:
    FftPlan() = default;

    static FftPlan create(Dims3 dims) {
        if (!isPowerOfTwo(dims.x) || dims.x < 2 || !isPowerOfTwo(dims.y) || dims.y < 2 ||
            !isPowerOfTwo(dims.z) || dims.z < 2)
            throw std::invalid_argument("FftPlan: padded sizes must be powers of two >= 2");
        FftPlan p;
        p.engine_ = std::make_shared<Radix2Engine<T>>(dims);
        return p;
    }

    Dims3 dims() const { return engine_->dims(); }
    double normalization() const { return 1.0 / static_cast<double>(dims().count()); }

    // Unnormalized in-place complex transforms (pipeline primitives).
    void forwardInPlace(std::complex<T>* data, const Backend& b) const { engine_->forward(data, b); }
    void inverseInPlace(std::complex<T>* data, const Backend& b) const { engine_->inverse(data, b); }
    // Sparsity-aware variants for zero-padded inputs / corner-only outputs.
    void forwardPaddedInPlace(std::complex<T>* data, int activeY, int activeZ,
                              const Backend& b) const {
        engine_->forwardPadded(data, activeY, activeZ, b);
    }
    void inverseCornerInPlace(std::complex<T>* data, int neededY, int neededZ,
                              const Backend& b) const {
        engine_->inverseCorner(data, neededY, neededZ, b);
    }

    // Unnormalized forward DFT of a real lattice:
    // S(u,v,w) = sum x(l,m,n) * exp(-2*pi*i*(u*l/Px + v*m/Py + w*n/Pz)).
    Spectrum<T> forward3d(std::span<const T> real, const Backend& b) const {
        if (real.size() != dims().count())
            throw std::invalid_argument("forward3d: input length does not match plan dims");
        Spectrum<T> s(dims());
        b.forEach(real.size(), [&](std::size_t i) { s.data[i] = {real[i], T(0)}; });
        forwardInPlace(s.data.data(), b);
        return s;
    }

    // Inverse DFT normalized by 1/(Px*Py*Pz); returns the real part, so
    // inverse3d(forward3d(x)) == x for real x.
    std::vector<T> inverse3d(const Spectrum<T>& spectrum, const Backend& b) const {
        if (!(spectrum.dims == dims()))
            throw std::invalid_argument("inverse3d: spectrum dims do not match plan");
        std::vector<std::complex<T>> work(spectrum.data);
        inverseInPlace(work.data(), b);
        const T scale = static_cast<T>(normalization());
        std::vector<T> out(work.size());
        b.forEach(work.size(), [&](std::size_t i) { out[i] = work[i].real() * scale; });
        return out;
    }

private:
    std::shared_ptr<const Engine<T>> engine_;
};

template <class T>
FftPlan<T> planFor(Dims3 dims) {
    return FftPlan<T>::create(dims);
}

} // namespace magfd::fft
