#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace magfd {

// Uniform rectangular discretization: nx*ny*nz cells of edge lengths
// dx, dy, dz (meters).  Cells are addressed zero-indexed with x fastest:
// index = i + nx*(j + ny*k).
struct Grid {
    int nx = 0, ny = 0, nz = 0;
    double dx = 0, dy = 0, dz = 0;

    Grid() = default;
    Grid(int nx_, int ny_, int nz_, double dx_, double dy_, double dz_)
        : nx(nx_), ny(ny_), nz(nz_), dx(dx_), dy(dy_), dz(dz_) {
        if (nx < 1 || ny < 1 || nz < 1)
            throw std::invalid_argument("Grid: cell counts must be >= 1");
        if (!(dx > 0) || !(dy > 0) || !(dz > 0))
            throw std::invalid_argument("Grid: cell sizes must be > 0");
    }

    std::size_t cellCount() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    double cellVolume() const { return dx * dy * dz; }

    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) +
                                               static_cast<std::size_t>(ny) * k);
    }
    void unindex(std::size_t cell, int& i, int& j, int& k) const {
        i = static_cast<int>(cell % nx);
        j = static_cast<int>((cell / nx) % ny);
        k = static_cast<int>(cell / (static_cast<std::size_t>(nx) * ny));
    }
    bool inBounds(int i, int j, int k) const {
        return i >= 0 && i < nx && j >= 0 && j < ny && k >= 0 && k < nz;
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.nx == b.nx && a.ny == b.ny && a.nz == b.nz &&
               a.dx == b.dx && a.dy == b.dy && a.dz == b.dz;
    }
};

} // namespace magfd
