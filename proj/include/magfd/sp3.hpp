#pragma once

#include <cmath>

#include "magfd/config.hpp"
#include "magfd/constants.hpp"

namespace magfd::sp3 {

// muMAG standard problem #3: a cube of edge L (in units of the exchange
// length) with uniaxial anisotropy Ku = 0.1 Km along a cube edge (z), no
// applied field.  The flower and vortex states trade places as ground state
// near L = 8.47 l_ex.
//
// The physics depends only on L/l_ex and Ku/Km, so the absolute material
// scale is a free choice.
struct Sp3Material {
    double Ms = 8e5;    // A/m
    double A = 1.3e-11; // J/m
};

inline SimSpec makeSpec(double edgeInExchangeLengths, int cellsPerEdge, InitKind init,
                        const Sp3Material& m = {}) {
    const double km = 0.5 * constants::mu0 * m.Ms * m.Ms;
    const double lex = std::sqrt(2.0 * m.A / (constants::mu0 * m.Ms * m.Ms));
    const double edge = edgeInExchangeLengths * lex;

    SimSpec spec;
    spec.nx = spec.ny = spec.nz = cellsPerEdge;
    spec.dx = spec.dy = spec.dz = edge / cellsPerEdge;
    spec.Ms = m.Ms;
    spec.A = m.A;
    spec.Ku = 0.1 * km;
    spec.easyAxis = {0, 0, 1};
    spec.alpha = 1.0; // overdamped relaxation
    spec.initKind = init;
    spec.initDirection = {0, 0, 1};
    spec.vortexAxis = SignedAxis::zPlus;
    spec.externField = {0, 0, 0};
    spec.termZeeman = false;
    return spec;
}

} // namespace magfd::sp3
