#include "doctest.h"

#include <cmath>

#include "magfd/constants.hpp"
#include "magfd/oracle.hpp"
#include "testutil.hpp"

using namespace magfd;

TEST_CASE("directDemag: single-cell self term and cap") {
    Grid g(1, 1, 1, 3e-9, 3e-9, 3e-9);
    const double Ms = 8e5;
    VectorField<double> M(g);
    M.set(0, {0, 0, Ms});
    auto h = oracle::directDemag(M, g);
    CHECK(h.z[0] == doctest::Approx(-Ms / 3.0).epsilon(1e-12));
    CHECK(std::abs(h.x[0]) == 0.0);
    CHECK(std::abs(h.y[0]) == 0.0);

    Grid big(13, 13, 13, 1e-9, 1e-9, 1e-9);
    VectorField<double> Mb(big);
    CHECK_THROWS_AS(oracle::directDemag(Mb, big), std::invalid_argument);
}

TEST_CASE("directDemag: translation consistency of a single source") {
    Grid g(5, 2, 2, 1e-9, 1.5e-9, 2e-9);
    const Vec3d u = normalized(Vec3d{0.2, -1, 0.7});
    VectorField<double> m1(g), m2(g);
    m1.set(g.index(1, 0, 1), (8e5 * u).cast<double>());
    m2.set(g.index(2, 0, 1), (8e5 * u).cast<double>());
    auto h1 = oracle::directDemag(m1, g);
    auto h2 = oracle::directDemag(m2, g);
    // response shifts with the source: H1 at (i) == H2 at (i+1)
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i + 1 < g.nx; ++i) {
                CHECK(h1.x[g.index(i, j, k)] == h2.x[g.index(i + 1, j, k)]);
                CHECK(h1.y[g.index(i, j, k)] == h2.y[g.index(i + 1, j, k)]);
                CHECK(h1.z[g.index(i, j, k)] == h2.z[g.index(i + 1, j, k)]);
            }
}

TEST_CASE("directConvolve1d: identity and hand expansion") {
    std::vector<double> m{1.5, -2.0, 4.0};
    std::vector<double> kid{0, 0, 1, 0, 0};
    auto out = oracle::directConvolve1d(m, kid);
    CHECK(out == m);

    std::vector<double> m2{1, 0};
    std::vector<double> k2{5, -3, 2}; // K(-1)=5, K(0)=-3, K(1)=2
    auto h = oracle::directConvolve1d(m2, k2);
    CHECK(h[0] == -3.0);
    CHECK(h[1] == 2.0);
}

TEST_CASE("naiveDft3d: delta input, conjugate symmetry, cap") {
    fft::Dims3 d{4, 2, 2};
    std::vector<double> delta(d.count(), 0.0);
    delta[0] = 1.0;
    auto s = oracle::naiveDft3d(delta, d);
    for (auto v : s.data) {
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(v.imag()) <= 1e-14);
    }

    auto gen = testutil::rng(601);
    auto x = testutil::randomLattice(d.count(), gen);
    auto sr = oracle::naiveDft3d(x, d);
    auto at = [&](int u, int v, int w) { return sr.data[u + d.x * (v + std::size_t(d.y) * w)]; };
    for (int w = 0; w < d.z; ++w)
        for (int v = 0; v < d.y; ++v)
            for (int u = 0; u < d.x; ++u)
                CHECK(std::abs(at(u, v, w) -
                               std::conj(at((d.x - u) % d.x, (d.y - v) % d.y,
                                            (d.z - w) % d.z))) <= 1e-13 * double(d.count()));

    std::vector<double> big(8192, 0.0);
    CHECK_THROWS_AS(oracle::naiveDft3d(big, {32, 16, 16}), std::invalid_argument);
}

TEST_CASE("fdGradient: polynomial exactness and linear energy") {
    Grid g(2, 1, 1, 1e-9, 1e-9, 1e-9);
    VectorField<double> M(g);
    M.set(0, {3e5, -2e5, 1e5});
    M.set(1, {-1e5, 4e5, 2e5});

    // quadratic test energy E = c*Mx(0)^2: derivative 2c*Mx within O(h^2)
    const double c = 3.7e-12;
    std::function<double(const VectorField<double>&)> quad =
        [&](const VectorField<double>& f) { return c * f.x[0] * f.x[0]; };
    const double h = 1e-3 * 8e5;
    const double grad = oracle::fdGradient<double>(quad, M, 0, 0, h);
    CHECK(grad == doctest::Approx(2 * c * M.x[0]).epsilon(1e-10));

    // linear (Zeeman-like) energy: central difference is exact
    const Vec3d hext{0, 0, 1e4};
    const double V = g.cellVolume();
    std::function<double(const VectorField<double>&)> zeeman =
        [&](const VectorField<double>& f) {
            double e = 0;
            for (std::size_t i = 0; i < f.size(); ++i)
                e += -constants::mu0 * V * dot(hext, f.at(i).cast<double>());
            return e;
        };
    const double gz = oracle::fdGradient<double>(zeeman, M, 2, 1, h);
    CHECK(gz == doctest::Approx(-constants::mu0 * V * hext.z).epsilon(1e-9));
    const double gx = oracle::fdGradient<double>(zeeman, M, 0, 1, h);
    CHECK(std::abs(gx) <= 1e-30);

    CHECK_THROWS_AS(oracle::fdGradient<double>(quad, M, 0, 0, 0.0), std::invalid_argument);
}
