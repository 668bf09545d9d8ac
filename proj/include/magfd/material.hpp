#pragma once

#include <cmath>
#include <stdexcept>

#include "magfd/constants.hpp"
#include "magfd/vec3.hpp"

namespace magfd {

// Single-material sample parameters (spatially uniform).
struct MaterialParams {
    double A = 0.0;       // exchange constant, J/m
    double Ku = 0.0;      // uniaxial anisotropy constant, J/m^3
    double Ms = 0.0;      // saturation magnetization, A/m
    double alpha = 1.0;   // Gilbert damping constant, dimensionless
    double gamma = constants::gamma_e; // gyromagnetic ratio, rad/(s*T)
    Vec3d easyAxis{0, 0, 1};           // unit vector

    void validate() const {
        if (!(Ms > 0)) throw std::invalid_argument("MaterialParams: Ms must be > 0");
        if (A < 0) throw std::invalid_argument("MaterialParams: A must be >= 0");
        if (alpha < 0) throw std::invalid_argument("MaterialParams: alpha must be >= 0");
        if (!(gamma > 0)) throw std::invalid_argument("MaterialParams: gamma must be > 0");
        if (std::abs(norm(easyAxis) - 1.0) > 1e-12)
            throw std::invalid_argument("MaterialParams: easyAxis must be a unit vector");
    }

    // Magnetostatic energy density scale Km = mu0*Ms^2/2, J/m^3.
    double Km() const { return 0.5 * constants::mu0 * Ms * Ms; }
    // Exchange length l_ex = sqrt(2A/(mu0*Ms^2)), m.
    double exchangeLength() const { return std::sqrt(2.0 * A / (constants::mu0 * Ms * Ms)); }
};

} // namespace magfd
