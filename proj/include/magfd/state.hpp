#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "magfd/grid.hpp"
#include "magfd/material.hpp"
#include "magfd/vector_field.hpp"

namespace magfd {

// Cell-volume-integrated energy totals, J.
struct EnergyBreakdown {
    double exchange = 0, anisotropy = 0, demag = 0, zeeman = 0, total = 0;

    static EnergyBreakdown make(double ex, double an, double de, double ze) {
        return {ex, an, de, ze, ex + an + de + ze};
    }
};

template <class T>
struct SimState {
    VectorField<T> M;      // A/m
    double t = 0;          // s
    long step = 0;
    std::optional<EnergyBreakdown> energy; // cached; cleared on every update

    SimState() = default;
    explicit SimState(const Grid& g) : M(g) {}
};

// Signed coordinate axis, used for vortex core directions.
enum class SignedAxis { xPlus, xMinus, yPlus, yMinus, zPlus, zMinus };

inline Vec3d axisVector(SignedAxis a) {
    switch (a) {
        case SignedAxis::xPlus: return {1, 0, 0};
        case SignedAxis::xMinus: return {-1, 0, 0};
        case SignedAxis::yPlus: return {0, 1, 0};
        case SignedAxis::yMinus: return {0, -1, 0};
        case SignedAxis::zPlus: return {0, 0, 1};
        case SignedAxis::zMinus: return {0, 0, -1};
    }
    throw std::logic_error("axisVector: bad axis");
}

inline std::string axisName(SignedAxis a) {
    switch (a) {
        case SignedAxis::xPlus: return "+x";
        case SignedAxis::xMinus: return "-x";
        case SignedAxis::yPlus: return "+y";
        case SignedAxis::yMinus: return "-y";
        case SignedAxis::zPlus: return "+z";
        case SignedAxis::zMinus: return "-z";
    }
    throw std::logic_error("axisName: bad axis");
}

inline std::optional<SignedAxis> parseAxis(const std::string& s) {
    if (s == "+x" || s == "x") return SignedAxis::xPlus;
    if (s == "-x") return SignedAxis::xMinus;
    if (s == "+y" || s == "y") return SignedAxis::yPlus;
    if (s == "-y") return SignedAxis::yMinus;
    if (s == "+z" || s == "z") return SignedAxis::zPlus;
    if (s == "-z") return SignedAxis::zMinus;
    return std::nullopt;
}

template <class T>
SimState<T> makeUniformState(const Grid& grid, Vec3d direction, double Ms) {
    if (!(Ms > 0)) throw std::invalid_argument("makeUniformState: Ms must be > 0");
    if (std::abs(norm(direction) - 1.0) > 1e-9)
        throw std::invalid_argument("makeUniformState: direction must be a unit vector");
    SimState<T> s(grid);
    s.M.fill((Ms * direction).template cast<T>());
    return s;
}

// Vortex circulating around coreAxis through the grid center, right-handed
// about the axis.  Cells whose perpendicular offset from the axis is smaller
// than one (minimum) in-plane cell size form the core and point along the
// axis; magnitude is Ms everywhere.
template <class T>
SimState<T> makeVortexState(const Grid& grid, SignedAxis coreAxis, double Ms) {
    if (!(Ms > 0)) throw std::invalid_argument("makeVortexState: Ms must be > 0");
    const Vec3d axis = axisVector(coreAxis);
    const bool alongX = axis.x != 0, alongY = axis.y != 0;
    const int nPerp1 = alongX ? grid.ny : grid.nx;
    const int nPerp2 = (alongX || alongY) ? grid.nz : grid.ny;
    if (nPerp1 < 2 || nPerp2 < 2)
        throw std::invalid_argument("makeVortexState: need >= 2 cells along each axis "
                                    "perpendicular to the core");
    const double dPerp1 = alongX ? grid.dy : grid.dx;
    const double dPerp2 = (alongX || alongY) ? grid.dz : grid.dy;
    const double coreRadius = std::min(dPerp1, dPerp2);

    SimState<T> s(grid);
    const double cx = 0.5 * (grid.nx - 1), cy = 0.5 * (grid.ny - 1), cz = 0.5 * (grid.nz - 1);
    for (int k = 0; k < grid.nz; ++k)
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                Vec3d r{(i - cx) * grid.dx, (j - cy) * grid.dy, (k - cz) * grid.dz};
                Vec3d rPerp = r - dot(r, axis) * axis;
                Vec3d m = norm(rPerp) < coreRadius ? axis : normalized(cross(axis, rPerp));
                s.M.set(grid.index(i, j, k), (Ms * m).template cast<T>());
            }
    return s;
}

// Volume average of M/Ms.
template <class T>
Vec3d reducedMean(const SimState<T>& state, double Ms) {
    double sx = 0, sy = 0, sz = 0;
    const std::size_t n = state.M.size();
    for (std::size_t c = 0; c < n; ++c) {
        sx += state.M.x[c];
        sy += state.M.y[c];
        sz += state.M.z[c];
    }
    const double scale = 1.0 / (Ms * static_cast<double>(n));
    return {sx * scale, sy * scale, sz * scale};
}

} // namespace magfd
