#pragma once

namespace magfd::newell {

// Cell-averaged magnetostatic interaction factors for uniformly magnetized
// rectangular prisms of size (dx, dy, dz) whose centers are displaced by
// (X, Y, Z), after Newell, Williams & Dunlop (1993).  All evaluation runs
// in long double with compensated summation; the factors are O(1) and
// dimensionless, with Nxx(0,0,0) = 1/3 for a cube.
long double selfDemagNx(long double dx, long double dy, long double dz);
long double newellF(long double x, long double y, long double z);
long double newellG(long double x, long double y, long double z);
long double demagNxx(long double X, long double Y, long double Z,
                     long double dx, long double dy, long double dz);
long double demagNxy(long double X, long double Y, long double Z,
                     long double dx, long double dy, long double dz);

// One symmetric demag tensor entry set at integer cell displacement
// (di, dj, dk), in the K convention used by the solver: H = K * M, with
// self-term trace Kxx+Kyy+Kzz = -1 (i.e. K = -N).  Parity is exact by
// construction: diagonal entries are even in every displacement component;
// Kxy is odd in di and dj and vanishes on the di=0 and dj=0 planes (and
// cyclically for Kxz, Kyz).
struct TensorEntry {
    double xx, yy, zz, xy, xz, yz;
};

TensorEntry demagTensorEntry(int di, int dj, int dk, double dx, double dy, double dz);

} // namespace magfd::newell
