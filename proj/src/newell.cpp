#include "magfd/newell.hpp"

#include <cmath>
#include <cstdlib>

namespace magfd::newell {
namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

// Neumaier-compensated sum of a small fixed array.  The 27-term stencils
// below cancel heavily at large displacements; plain summation would lose
// most of the result there.
long double compensatedSum(const long double* v, int n) {
    long double sum = v[0];
    long double comp = 0.0L;
    for (int i = 1; i < n; ++i) {
        const long double t = sum + v[i];
        if (std::fabs(sum) >= std::fabs(v[i]))
            comp += (sum - t) + v[i];
        else
            comp += (v[i] - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace

// Self-demag factor Nxx of a single prism, Newell eq. (16) lineage.
long double selfDemagNx(long double x, long double y, long double z) {
    if (x <= 0.0L || y <= 0.0L || z <= 0.0L) return 0.0L;
    if (x == y && y == z) return 1.0L / 3.0L;

    const long double xsq = x * x, ysq = y * y, zsq = z * z;
    const long double diag = std::sqrt(xsq + ysq + zsq);
    const long double mpxy = (x - y) * (x + y);
    const long double mpxz = (x - z) * (x + z);

    long double arr[15];
    arr[0] = -4.0L * (2.0L * xsq * x - ysq * y - zsq * z);
    arr[1] = 4.0L * (xsq + mpxy) * std::sqrt(xsq + ysq);
    arr[2] = 4.0L * (xsq + mpxz) * std::sqrt(xsq + zsq);
    arr[3] = -4.0L * (ysq + zsq) * std::sqrt(ysq + zsq);
    arr[4] = -4.0L * diag * (mpxy + mpxz);
    arr[5] = 24.0L * x * y * z * std::atan(y * z / (x * diag));
    arr[6] = 12.0L * (z + y) * xsq * std::log(x);
    arr[7] = 12.0L * z * ysq * std::log((std::sqrt(ysq + zsq) + z) / y);
    arr[8] = -12.0L * z * xsq * std::log(std::sqrt(xsq + zsq) + z);
    arr[9] = 12.0L * z * mpxy * std::log(diag + z);
    arr[10] = -6.0L * z * mpxy * std::log(xsq + ysq);
    arr[11] = 12.0L * y * zsq * std::log((std::sqrt(ysq + zsq) + y) / z);
    arr[12] = -12.0L * y * xsq * std::log(std::sqrt(xsq + ysq) + y);
    arr[13] = 12.0L * y * mpxz * std::log(diag + y);
    arr[14] = -6.0L * y * mpxz * std::log(xsq + zsq);

    return compensatedSum(arr, 15) / (12.0L * kPi * x * y * z);
}

// Newell's f, even in all arguments.
long double newellF(long double x, long double y, long double z) {
    x = std::fabs(x);
    y = std::fabs(y);
    z = std::fabs(z);
    const long double xsq = x * x, ysq = y * y, zsq = z * z;
    long double r = xsq + ysq + zsq;
    if (r <= 0.0L) return 0.0L;
    r = std::sqrt(r);

    long double piece[8];
    int count = 0;
    if (z > 0.0L) {
        piece[count++] = 2.0L * (2.0L * xsq - ysq - zsq) * r;
        if (x > 0.0L && y > 0.0L)
            piece[count++] = -12.0L * x * y * z * std::atan2(y * z, x * r);
        if (y > 0.0L && xsq + zsq > 0.0L) {
            const long double lg = std::log(((y + r) * (y + r)) / (xsq + zsq));
            piece[count++] = 3.0L * y * zsq * lg;
            piece[count++] = -3.0L * y * xsq * lg;
        }
        if (xsq + ysq > 0.0L) {
            const long double lg = std::log(((z + r) * (z + r)) / (xsq + ysq));
            piece[count++] = 3.0L * z * ysq * lg;
            piece[count++] = -3.0L * z * xsq * lg;
        }
    } else {
        if (x == y) {
            // 2*sqrt(2) - 6*log(1 + sqrt(2))
            constexpr long double k = -2.4598143973710680537922785014593576970294L;
            piece[count++] = k * xsq * x;
        } else {
            piece[count++] = 2.0L * (2.0L * xsq - ysq) * r;
            if (y > 0.0L && x > 0.0L)
                piece[count++] = -6.0L * y * xsq * std::log((y + r) / x);
        }
    }
    return compensatedSum(piece, count) / 12.0L;
}

// Newell's g, odd in x and y, even in z.
long double newellG(long double x, long double y, long double z) {
    long double sign = 1.0L;
    if (x < 0.0L) sign = -sign;
    if (y < 0.0L) sign = -sign;
    x = std::fabs(x);
    y = std::fabs(y);
    z = std::fabs(z);

    const long double xsq = x * x, ysq = y * y, zsq = z * z;
    long double r = xsq + ysq + zsq;
    if (r <= 0.0L) return 0.0L;
    r = std::sqrt(r);

    long double piece[7];
    int count = 0;
    piece[count++] = -2.0L * x * y * r;
    if (z > 0.0L) {
        piece[count++] = -z * zsq * std::atan2(x * y, z * r);
        piece[count++] = -3.0L * z * ysq * std::atan2(x * z, y * r);
        piece[count++] = -3.0L * z * xsq * std::atan2(y * z, x * r);
        if (xsq + ysq > 0.0L)
            piece[count++] = 6.0L * x * y * z * std::log((z + r) / std::sqrt(xsq + ysq));
        if (ysq + zsq > 0.0L)
            piece[count++] = y * (3.0L * zsq - ysq) * std::log((x + r) / std::sqrt(ysq + zsq));
        if (xsq + zsq > 0.0L)
            piece[count++] = x * (3.0L * zsq - xsq) * std::log((y + r) / std::sqrt(xsq + zsq));
    } else {
        if (y > 0.0L) piece[count++] = -y * ysq * std::log((x + r) / y);
        if (x > 0.0L) piece[count++] = -x * xsq * std::log((y + r) / x);
    }
    return sign * compensatedSum(piece, count) / 6.0L;
}

namespace {

// 27-point second-difference stencil weights applied to f or g lattice
// offsets; collapses Newell's eight corner evaluations per axis pair.
template <class Fn>
long double stencil27(Fn&& fn, long double x, long double y, long double z,
                      long double dx, long double dy, long double dz) {
    long double arr[27];
    arr[0] = -1.0L * fn(x + dx, y + dy, z + dz);
    arr[1] = -1.0L * fn(x + dx, y - dy, z + dz);
    arr[2] = -1.0L * fn(x + dx, y - dy, z - dz);
    arr[3] = -1.0L * fn(x + dx, y + dy, z - dz);
    arr[4] = -1.0L * fn(x - dx, y + dy, z - dz);
    arr[5] = -1.0L * fn(x - dx, y + dy, z + dz);
    arr[6] = -1.0L * fn(x - dx, y - dy, z + dz);
    arr[7] = -1.0L * fn(x - dx, y - dy, z - dz);

    arr[8] = 2.0L * fn(x, y - dy, z - dz);
    arr[9] = 2.0L * fn(x, y - dy, z + dz);
    arr[10] = 2.0L * fn(x, y + dy, z + dz);
    arr[11] = 2.0L * fn(x, y + dy, z - dz);
    arr[12] = 2.0L * fn(x + dx, y + dy, z);
    arr[13] = 2.0L * fn(x + dx, y, z + dz);
    arr[14] = 2.0L * fn(x + dx, y, z - dz);
    arr[15] = 2.0L * fn(x + dx, y - dy, z);
    arr[16] = 2.0L * fn(x - dx, y - dy, z);
    arr[17] = 2.0L * fn(x - dx, y, z + dz);
    arr[18] = 2.0L * fn(x - dx, y, z - dz);
    arr[19] = 2.0L * fn(x - dx, y + dy, z);

    arr[20] = -4.0L * fn(x, y - dy, z);
    arr[21] = -4.0L * fn(x, y + dy, z);
    arr[22] = -4.0L * fn(x, y, z - dz);
    arr[23] = -4.0L * fn(x, y, z + dz);
    arr[24] = -4.0L * fn(x + dx, y, z);
    arr[25] = -4.0L * fn(x - dx, y, z);

    arr[26] = 8.0L * fn(x, y, z);
    return compensatedSum(arr, 27);
}

} // namespace

long double demagNxx(long double X, long double Y, long double Z,
                     long double dx, long double dy, long double dz) {
    if (X == 0.0L && Y == 0.0L && Z == 0.0L) return selfDemagNx(dx, dy, dz);
    return stencil27(newellF, X, Y, Z, dx, dy, dz) / (4.0L * kPi * dx * dy * dz);
}

long double demagNxy(long double X, long double Y, long double Z,
                     long double dx, long double dy, long double dz) {
    return stencil27(newellG, X, Y, Z, dx, dy, dz) / (4.0L * kPi * dx * dy * dz);
}

TensorEntry demagTensorEntry(int di, int dj, int dk, double dx, double dy, double dz) {
    const int ai = std::abs(di), aj = std::abs(dj), ak = std::abs(dk);
    const long double X = ai * static_cast<long double>(dx);
    const long double Y = aj * static_cast<long double>(dy);
    const long double Z = ak * static_cast<long double>(dz);

    TensorEntry e{};
    // K = -N; diagonal entries from Nxx with cyclically permuted arguments.
    e.xx = static_cast<double>(-demagNxx(X, Y, Z, dx, dy, dz));
    e.yy = static_cast<double>(-demagNxx(Y, Z, X, dy, dz, dx));
    e.zz = static_cast<double>(-demagNxx(Z, X, Y, dz, dx, dy));

    const int sx = di < 0 ? -1 : 1, sy = dj < 0 ? -1 : 1, sz = dk < 0 ? -1 : 1;
    // Off-diagonal entries vanish identically on their odd-parity planes.
    if (ai != 0 && aj != 0)
        e.xy = sx * sy * static_cast<double>(-demagNxy(X, Y, Z, dx, dy, dz));
    if (ai != 0 && ak != 0)
        e.xz = sx * sz * static_cast<double>(-demagNxy(X, Z, Y, dx, dz, dy));
    if (aj != 0 && ak != 0)
        e.yz = sy * sz * static_cast<double>(-demagNxy(Y, Z, X, dy, dz, dx));
    return e;
}

} // namespace magfd::newell
