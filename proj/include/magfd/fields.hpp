#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <type_traits>

#include "magfd/backend.hpp"
#include "magfd/constants.hpp"
#include "magfd/demag.hpp"
#include "magfd/material.hpp"
#include "magfd/state.hpp"
#include "magfd/vector_field.hpp"

namespace magfd::fields {

// Exchange field: 7-point second-difference stencil of each M component,
// scaled by 2A/(mu0*Ms^2) so H comes out in A/m.  Free (Neumann) boundaries:
// a missing neighbor contributes nothing, which makes uniform states exact
// equilibria.
template <class T, bool Accumulate>
void exchangeFieldImpl(const VectorField<T>& M, double A, double Ms, const Backend& backend,
                       VectorField<T>& out) {
    const Grid& g = M.grid;
    const T cx = static_cast<T>(2.0 * A / (constants::mu0 * Ms * Ms) / (g.dx * g.dx));
    const T cy = static_cast<T>(2.0 * A / (constants::mu0 * Ms * Ms) / (g.dy * g.dy));
    const T cz = static_cast<T>(2.0 * A / (constants::mu0 * Ms * Ms) / (g.dz * g.dz));
    const std::size_t sx = 1, sy = g.nx, sz = static_cast<std::size_t>(g.nx) * g.ny;

    backend.forEach(g.cellCount(), [&](std::size_t c) {
        int i, j, k;
        g.unindex(c, i, j, k);
        Vec3<T> h{};
        auto add = [&](std::size_t nbr, T w) {
            h.x += w * (M.x[nbr] - M.x[c]);
            h.y += w * (M.y[nbr] - M.y[c]);
            h.z += w * (M.z[nbr] - M.z[c]);
        };
        if (i > 0) add(c - sx, cx);
        if (i < g.nx - 1) add(c + sx, cx);
        if (j > 0) add(c - sy, cy);
        if (j < g.ny - 1) add(c + sy, cy);
        if (k > 0) add(c - sz, cz);
        if (k < g.nz - 1) add(c + sz, cz);
        if constexpr (Accumulate) {
            out.x[c] += h.x;
            out.y[c] += h.y;
            out.z[c] += h.z;
        } else {
            out.set(c, h);
        }
    });
}

template <class T>
VectorField<T> exchangeField(const VectorField<T>& M, double A, double Ms,
                             const Backend& backend) {
    if (A < 0) throw std::invalid_argument("exchangeField: A must be >= 0");
    VectorField<T> out(M.grid);
    exchangeFieldImpl<T, false>(M, A, Ms, backend, out);
    return out;
}

// Uniaxial anisotropy field H = 2Ku/(mu0*Ms^2) (M.axis) axis, the
// energy-consistent form for density Ku*(1 - (m.axis)^2).
template <class T, bool Accumulate>
void anisotropyFieldImpl(const VectorField<T>& M, double Ku, double Ms, Vec3d axis,
                         const Backend& backend, VectorField<T>& out) {
    const T c = static_cast<T>(2.0 * Ku / (constants::mu0 * Ms * Ms));
    const Vec3<T> a = axis.cast<T>();
    backend.forEach(M.size(), [&](std::size_t i) {
        const T proj = c * dot(M.at(i), a);
        if constexpr (Accumulate) {
            out.x[i] += proj * a.x;
            out.y[i] += proj * a.y;
            out.z[i] += proj * a.z;
        } else {
            out.set(i, proj * a);
        }
    });
}

template <class T>
VectorField<T> anisotropyField(const VectorField<T>& M, double Ku, double Ms, Vec3d axis,
                               const Backend& backend) {
    if (std::abs(norm(axis) - 1.0) > 1e-12)
        throw std::invalid_argument("anisotropyField: easy axis must be a unit vector");
    VectorField<T> out(M.grid);
    anisotropyFieldImpl<T, false>(M, Ku, Ms, axis, backend, out);
    return out;
}

// Configured field contributions; terms left disabled contribute zero.
template <class T>
struct FieldTerms {
    std::optional<VectorField<T>> exchange, anisotropy, demag, zeeman;
};

// Component-wise sum of the enabled terms plus an optional uniform external
// field.
template <class T>
VectorField<T> effectiveField(const FieldTerms<T>& terms, const Grid& grid,
                              Vec3d uniformExtern, const Backend& backend) {
    VectorField<T> out(grid);
    out.fill(uniformExtern.cast<T>());
    auto accumulate = [&](const std::optional<VectorField<T>>& term) {
        if (!term) return;
        if (!(term->grid == grid))
            throw std::invalid_argument("effectiveField: term grid mismatch");
        backend.forEach(out.size(), [&](std::size_t i) {
            out.x[i] += term->x[i];
            out.y[i] += term->y[i];
            out.z[i] += term->z[i];
        });
    };
    accumulate(terms.exchange);
    accumulate(terms.anisotropy);
    accumulate(terms.demag);
    accumulate(terms.zeeman);
    return out;
}

// Cell-volume-integrated energies, J.  Exchange uses the nearest-neighbor
// link form A*V/Ms^2 * sum_links |dM|^2/delta^2, whose gradient is exactly
// the stencil field above; demag uses the supplied field (no extra
// convolution); Zeeman couples to the uniform external field.
template <class T>
EnergyBreakdown energies(const VectorField<T>& M,
                         const std::type_identity_t<VectorField<T>>* Hdemag, Vec3d Hextern,
                         const MaterialParams& mat, const Backend& backend) {
    const Grid& g = M.grid;
    const double V = g.cellVolume();
    const std::size_t n = g.cellCount();
    const std::size_t sx = 1, sy = g.nx, sz = static_cast<std::size_t>(g.nx) * g.ny;

    double exch = 0;
    if (mat.A > 0) {
        const double wx = 1.0 / (g.dx * g.dx), wy = 1.0 / (g.dy * g.dy),
                     wz = 1.0 / (g.dz * g.dz);
        exch = backend.reduceSum(n, [&](std::size_t c) {
            int i, j, k;
            g.unindex(c, i, j, k);
            auto link = [&](std::size_t nbr, double w) {
                const double ex = static_cast<double>(M.x[nbr]) - M.x[c];
                const double ey = static_cast<double>(M.y[nbr]) - M.y[c];
                const double ez = static_cast<double>(M.z[nbr]) - M.z[c];
                return w * (ex * ex + ey * ey + ez * ez);
            };
            double s = 0;
            if (i < g.nx - 1) s += link(c + sx, wx);
            if (j < g.ny - 1) s += link(c + sy, wy);
            if (k < g.nz - 1) s += link(c + sz, wz);
            return s;
        });
        exch *= mat.A * V / (mat.Ms * mat.Ms);
    }

    double anis = 0;
    if (mat.Ku != 0) {
        const Vec3d a = mat.easyAxis;
        anis = backend.reduceSum(n, [&](std::size_t c) {
            const Vec3d m = M.at(c).template cast<double>() / mat.Ms;
            const double p = dot(m, a);
            return 1.0 - p * p;
        });
        anis *= mat.Ku * V;
    }

    double dem = 0;
    if (Hdemag) {
        if (!(Hdemag->grid == g))
            throw std::invalid_argument("energies: demag field grid mismatch");
        dem = backend.reduceSum(n, [&](std::size_t c) {
            return static_cast<double>(Hdemag->x[c]) * M.x[c] +
                   static_cast<double>(Hdemag->y[c]) * M.y[c] +
                   static_cast<double>(Hdemag->z[c]) * M.z[c];
        });
        dem *= -0.5 * constants::mu0 * V;
    }

    double zee = 0;
    if (Hextern.x != 0 || Hextern.y != 0 || Hextern.z != 0) {
        zee = backend.reduceSum(n, [&](std::size_t c) {
            return Hextern.x * M.x[c] + Hextern.y * M.y[c] + Hextern.z * M.z[c];
        });
        zee *= -constants::mu0 * V;
    }

    return EnergyBreakdown::make(exch, anis, dem, zee);
}

// Which contributions an effective-field provider evaluates.
struct FieldConfig {
    bool exchange = true;
    bool anisotropy = true;
    bool demag = true;
    bool zeeman = true;
    Vec3d externField{0, 0, 0};
};

// Configured H_eff provider.  Evaluation order per step: demag (six FFTs),
// exchange, anisotropy, Zeeman.  The demag field of the last compute() is
// kept for energy accounting.
template <class T>
class EffectiveFieldProvider {
public:
    EffectiveFieldProvider(const Grid& grid, const MaterialParams& mat, FieldConfig config,
                           const Backend& backend)
        : grid_(grid), mat_(mat), config_(config) {
        mat_.validate();
        if (config_.demag) {
            conv_ = std::make_unique<demag::DemagConvolution<T>>(grid, backend);
            hdemag_ = VectorField<T>(grid);
        }
    }

    const FieldConfig& config() const { return config_; }
    const MaterialParams& material() const { return mat_; }

    void compute(const VectorField<T>& M, VectorField<T>& heff, const Backend& backend,
                 StepTiming* timing = nullptr) {
        if (!(M.grid == grid_))
            throw std::invalid_argument("EffectiveFieldProvider: grid mismatch");
        if (!(heff.grid == grid_)) heff = VectorField<T>(grid_);

        PhaseClock clock;
        if (config_.demag) {
            conv_->field(M, hdemag_, backend, timing);
            clock.lap();
            backend.forEach(heff.size(), [&](std::size_t i) {
                heff.x[i] = hdemag_.x[i];
                heff.y[i] = hdemag_.y[i];
                heff.z[i] = hdemag_.z[i];
            });
        } else {
            clock.lap();
            heff.zero();
        }
        if (config_.exchange && mat_.A > 0)
            exchangeFieldImpl<T, true>(M, mat_.A, mat_.Ms, backend, heff);
        if (config_.anisotropy && mat_.Ku != 0)
            anisotropyFieldImpl<T, true>(M, mat_.Ku, mat_.Ms, mat_.easyAxis, backend, heff);
        if (config_.zeeman) {
            const Vec3<T> h = config_.externField.cast<T>();
            if (h.x != 0 || h.y != 0 || h.z != 0)
                backend.forEach(heff.size(), [&](std::size_t i) {
                    heff.x[i] += h.x;
                    heff.y[i] += h.y;
                    heff.z[i] += h.z;
                });
        }
        if (timing) timing->localFields += clock.lap();
    }

    // Energies of M using the demag field from the most recent compute(M).
    EnergyBreakdown energies(const VectorField<T>& M, const Backend& backend) const {
        MaterialParams m = mat_;
        if (!config_.exchange) m.A = 0;
        if (!config_.anisotropy) m.Ku = 0;
        const Vec3d hx = config_.zeeman ? config_.externField : Vec3d{0, 0, 0};
        return fields::energies(M, config_.demag ? &hdemag_ : nullptr, hx, m, backend);
    }

    const VectorField<T>& lastDemagField() const {
        if (!config_.demag)
            throw std::logic_error("lastDemagField: demag term is disabled");
        return hdemag_;
    }

private:
    Grid grid_;
    MaterialParams mat_;
    FieldConfig config_;
    std::unique_ptr<demag::DemagConvolution<T>> conv_;
    VectorField<T> hdemag_;
};

} // namespace magfd::fields
