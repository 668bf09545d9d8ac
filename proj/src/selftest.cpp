#include "magfd/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "magfd/demag.hpp"
#include "magfd/fields.hpp"
#include "magfd/oracle.hpp"

namespace magfd::selftest {
namespace {

template <class T>
VectorField<T> randomUnitField(const Grid& g, double Ms, std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    VectorField<T> f(g);
    for (std::size_t c = 0; c < f.size(); ++c) {
        Vec3d v{dist(gen), dist(gen), dist(gen)};
        while (norm(v) < 1e-6) v = {dist(gen), dist(gen), dist(gen)};
        f.set(c, (Ms * normalized(v)).template cast<T>());
    }
    return f;
}

template <class A, class B>
double relLinf(const VectorField<A>& a, const VectorField<B>& b) {
    double maxDiff = 0, maxRef = 0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        maxDiff = std::max({maxDiff, std::abs(double(a.x[c]) - double(b.x[c])),
                            std::abs(double(a.y[c]) - double(b.y[c])),
                            std::abs(double(a.z[c]) - double(b.z[c]))});
        maxRef = std::max({maxRef, std::abs(double(b.x[c])), std::abs(double(b.y[c])),
                           std::abs(double(b.z[c]))});
    }
    return maxRef > 0 ? maxDiff / maxRef : maxDiff;
}

std::string fmtErr(double v) {
    std::ostringstream o;
    o.precision(3);
    o << std::scientific << v;
    return o.str();
}

template <class T>
CheckResult demagEquivalence(const char* name, double tol, const Backend& backend) {
    std::mt19937_64 gen(20240);
    double worst = 0;
    for (const Grid& g : {Grid(4, 4, 4, 2e-9, 2e-9, 2e-9), Grid(5, 3, 2, 1e-9, 2e-9, 3e-9),
                          Grid(8, 8, 1, 2e-9, 2e-9, 2e-9)}) {
        auto M = randomUnitField<T>(g, 8e5, gen);
        demag::DemagConvolution<T> conv(g, backend);
        VectorField<T> h(g);
        conv.field(M, h, backend);
        auto ref = oracle::directDemag(M, g);
        worst = std::max(worst, relLinf(h, ref));
    }
    return {name, worst <= tol, "max rel Linf " + fmtErr(worst) + " (tol " + fmtErr(tol) + ")"};
}

CheckResult tensorTrace(bool tamper, const Backend& backend) {
    double worst = 0;
    bool cubicOk = true;
    for (Vec3d aspect : {Vec3d{1, 1, 1}, Vec3d{1, 1, 5}, Vec3d{2, 3, 4}}) {
        Grid g(3, 3, 3, aspect.x * 1e-9, aspect.y * 1e-9, aspect.z * 1e-9);
        auto t = demag::buildDemagTensor<double>(g, backend);
        if (tamper)
            for (auto& v : t.xx) v = -v;
        const double trace = t.xx[0] + t.yy[0] + t.zz[0]; // self term at slot 0
        worst = std::max(worst, std::abs(trace + 1.0));
        if (aspect.x == aspect.y && aspect.y == aspect.z)
            cubicOk = std::abs(t.xx[0] + 1.0 / 3.0) <= 1e-12 &&
                      std::abs(t.yy[0] + 1.0 / 3.0) <= 1e-12 &&
                      std::abs(t.zz[0] + 1.0 / 3.0) <= 1e-12;
    }
    const bool pass = worst <= 1e-12 && cubicOk;
    return {"tensor-trace", pass,
            "max |trace+1| " + fmtErr(worst) + (cubicOk ? "" : ", cubic self term off")};
}

CheckResult tensorParity(const Backend& backend) {
    Grid g(5, 5, 5, 1e-9, 2e-9, 1.5e-9);
    auto t = demag::buildDemagTensor<double>(g, backend);
    const auto p = t.padded;
    auto slot = [&](int di, int dj, int dk) {
        return std::size_t(demag::wrapIndex(di, g.nx, p.x)) +
               std::size_t(p.x) * (demag::wrapIndex(dj, g.ny, p.y) +
                                   std::size_t(p.y) * demag::wrapIndex(dk, g.nz, p.z));
    };
    for (int dk = -(g.nz - 1); dk < g.nz; ++dk)
        for (int dj = -(g.ny - 1); dj < g.ny; ++dj)
            for (int di = -(g.nx - 1); di < g.nx; ++di) {
                const auto s = slot(di, dj, dk);
                const bool ok = t.xx[s] == t.xx[slot(-di, dj, dk)] &&
                                t.xx[s] == t.xx[slot(di, -dj, dk)] &&
                                t.xx[s] == t.xx[slot(di, dj, -dk)] &&
                                t.xy[s] == -t.xy[slot(-di, dj, dk)] &&
                                t.xy[s] == -t.xy[slot(di, -dj, dk)] &&
                                t.xy[s] == t.xy[slot(di, dj, -dk)] &&
                                t.xz[s] == -t.xz[slot(-di, dj, dk)] &&
                                t.xz[s] == t.xz[slot(di, -dj, dk)] &&
                                t.yz[s] == -t.yz[slot(di, -dj, dk)];
                if (!ok)
                    return {"tensor-parity", false,
                            "violated at displacement (" + std::to_string(di) + "," +
                                std::to_string(dj) + "," + std::to_string(dk) + ")"};
            }
    return {"tensor-parity", true, "exact on 5^3"};
}

CheckResult gradientConsistency(const Backend& backend) {
    std::mt19937_64 gen(20241);
    Grid g(3, 3, 3, 2e-9, 2e-9, 2e-9);
    MaterialParams mat;
    mat.Ms = 8e5;
    mat.A = 1.3e-11;
    mat.Ku = 4e4;
    mat.easyAxis = normalized(Vec3d{1, 0, 1});
    fields::FieldConfig cfg{true, true, true, true, {2e4, -1e4, 3e4}};
    fields::EffectiveFieldProvider<double> provider(g, mat, cfg, backend);
    auto M = randomUnitField<double>(g, mat.Ms, gen);
    const double V = g.cellVolume();
    const double h = 1e-3 * mat.Ms;

    std::function<double(const VectorField<double>&)> energyFn =
        [&](const VectorField<double>& f) {
            VectorField<double> tmp(g);
            provider.compute(f, tmp, backend);
            return provider.energies(f, backend).total;
        };
    VectorField<double> heff(g);
    provider.compute(M, heff, backend);

    double worst = 0;
    for (auto [cell, comp] :
         {std::pair<std::size_t, int>{0, 0}, {13, 1}, {26, 2}, {5, 2}, {19, 0}}) {
        const double grad = oracle::fdGradient<double>(energyFn, M, comp, cell, h);
        const double want = -constants::mu0 * V *
                            (comp == 0 ? heff.x[cell] : comp == 1 ? heff.y[cell]
                                                                  : heff.z[cell]);
        const double ref = std::max(std::abs(grad), std::abs(want));
        worst = std::max(worst, ref > 0 ? std::abs(grad - want) / ref : 0.0);
    }
    return {"gradient-consistency", worst <= 1e-6,
            "max rel err " + fmtErr(worst) + " (tol 1.0e-06)"};
}

} // namespace

std::vector<CheckResult> run(const Options& opts) {
    Backend backend(opts.backend);
    std::vector<CheckResult> results;
    results.push_back(demagEquivalence<double>("demag-equivalence-f64", 1e-11, backend));
    results.push_back(demagEquivalence<float>("demag-equivalence-f32", 1e-3, backend));
    results.push_back(tensorTrace(opts.tamperTensorSign, backend));
    results.push_back(tensorParity(backend));
    results.push_back(gradientConsistency(backend));
    return results;
}

bool allPassed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace magfd::selftest
