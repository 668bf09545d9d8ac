#pragma once

#include <cstddef>
#include <vector>

#include "magfd/grid.hpp"
#include "magfd/vec3.hpp"

namespace magfd {

// Per-cell 3-vector field stored structure-of-arrays: one contiguous scalar
// lattice per component, so FFT and stencil passes consume each component
// whole without gather/scatter.
template <class T>
struct VectorField {
    Grid grid;
    std::vector<T> x, y, z;

    VectorField() = default;
    explicit VectorField(const Grid& g)
        : grid(g), x(g.cellCount(), T(0)), y(g.cellCount(), T(0)), z(g.cellCount(), T(0)) {}

    std::size_t size() const { return x.size(); }

    Vec3<T> at(std::size_t cell) const { return {x[cell], y[cell], z[cell]}; }
    void set(std::size_t cell, Vec3<T> v) {
        x[cell] = v.x;
        y[cell] = v.y;
        z[cell] = v.z;
    }

    void fill(Vec3<T> v) {
        std::fill(x.begin(), x.end(), v.x);
        std::fill(y.begin(), y.end(), v.y);
        std::fill(z.begin(), z.end(), v.z);
    }
    void zero() { fill({T(0), T(0), T(0)}); }

    template <class U>
    VectorField<U> cast() const {
        VectorField<U> out(grid);
        for (std::size_t c = 0; c < size(); ++c) out.set(c, at(c).template cast<U>());
        return out;
    }
};

} // namespace magfd
