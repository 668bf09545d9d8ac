#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "magfd/backend.hpp"
#include "magfd/constants.hpp"
#include "magfd/material.hpp"
#include "magfd/state.hpp"
#include "magfd/vector_field.hpp"

namespace magfd::dynamics {

struct StepperConfig {
    double dt = 1e-14;             // s
    int renormalizeEvery = 1;      // steps between |M| renormalizations
    long maxSteps = 500000;
    double torqueTolDegPerNs = 0.01; // convergence: max |dm/dt| threshold
    long sampleEvery = 100;          // trajectory log cadence

    void validate() const {
        if (!(dt > 0)) throw std::invalid_argument("StepperConfig: dt must be > 0");
        if (renormalizeEvery < 1)
            throw std::invalid_argument("StepperConfig: renormalizeEvery must be >= 1");
        if (!(torqueTolDegPerNs > 0))
            throw std::invalid_argument("StepperConfig: torque tolerance must be > 0");
    }
};

inline constexpr double radPerSecToDegPerNs = 180.0 / constants::pi * 1e-9;

// Explicit-Euler stability heuristic against the stiffest exchange mode,
// dt_max = (1+alpha^2) * Ms * min(delta)^2 / (gamma * 4A * C) with safety
// C = 10.  Returns +inf when exchange is off.
inline double stabilityDtLimit(const MaterialParams& mat, const Grid& g) {
    if (mat.A <= 0) return std::numeric_limits<double>::infinity();
    const double dmin = std::min({g.dx, g.dy, g.dz});
    constexpr double safety = 10.0;
    return (1.0 + mat.alpha * mat.alpha) * mat.Ms * dmin * dmin /
           (mat.gamma * 4.0 * mat.A * safety);
}

// LLG right-hand side dM/dt, A/(m*s):
//   dM/dt = -gamma/(1+a^2) M x (mu0 Heff) - a*gamma/((1+a^2) Ms) M x (M x mu0 Heff)
template <class T>
void llgRhs(const VectorField<T>& M, const VectorField<T>& heff, const MaterialParams& mat,
            const Backend& backend, VectorField<T>& out) {
    if (!(M.grid == heff.grid)) throw std::invalid_argument("llgRhs: grid mismatch");
    if (!(out.grid == M.grid)) out = VectorField<T>(M.grid);
    const T precess = static_cast<T>(-mat.gamma / (1.0 + mat.alpha * mat.alpha));
    const T damp = static_cast<T>(-mat.alpha * mat.gamma /
                                  ((1.0 + mat.alpha * mat.alpha) * mat.Ms));
    const T mu0 = static_cast<T>(constants::mu0);
    backend.forEach(M.size(), [&](std::size_t i) {
        const Vec3<T> m = M.at(i);
        const Vec3<T> h = mu0 * heff.at(i); // Tesla
        const Vec3<T> mxh = cross(m, h);
        out.set(i, precess * mxh + damp * cross(m, mxh));
    });
}

template <class T>
VectorField<T> llgRhs(const VectorField<T>& M, const VectorField<T>& heff,
                      const MaterialParams& mat, const Backend& backend) {
    VectorField<T> out(M.grid);
    llgRhs(M, heff, mat, backend, out);
    return out;
}

// Max over cells of |dm/dt| in degrees per nanosecond, m = M/Ms.
template <class T>
double maxTorqueRate(const VectorField<T>& rhs, double Ms, const Backend& backend) {
    const double r = backend.reduceMax(rhs.size(), [&](std::size_t i) {
        const Vec3d v = rhs.at(i).template cast<double>();
        return dot(v, v);
    });
    return std::sqrt(r) / Ms * radPerSecToDegPerNs;
}

template <class T>
double maxTorqueRate(const SimState<T>& state, const VectorField<T>& heff,
                     const MaterialParams& mat, const Backend& backend) {
    return maxTorqueRate(llgRhs(state.M, heff, mat, backend), mat.Ms, backend);
}

// In-place Euler update M += dt * rhs, with optional renormalization of every
// cell back to |M| = Ms.  Throws if the update produced non-finite values
// (the usual symptom of dt beyond the stability limit).
template <class T>
void eulerUpdate(SimState<T>& state, const VectorField<T>& rhs, double dt, double Ms,
                 bool renormalize, const Backend& backend) {
    std::atomic<bool> bad{false};
    const T dtT = static_cast<T>(dt);
    const T msT = static_cast<T>(Ms);
    VectorField<T>& M = state.M;
    backend.forEach(M.size(), [&](std::size_t i) {
        Vec3<T> m = M.at(i) + dtT * rhs.at(i);
        if (renormalize) {
            const T n2 = dot(m, m);
            if (!(n2 > T(0)) || !std::isfinite(static_cast<double>(n2))) {
                bad.store(true, std::memory_order_relaxed);
                return;
            }
            m = (msT / std::sqrt(n2)) * m;
        } else if (!std::isfinite(static_cast<double>(m.x + m.y + m.z))) {
            bad.store(true, std::memory_order_relaxed);
            return;
        }
        M.set(i, m);
    });
    if (bad.load())
        throw std::runtime_error("eulerUpdate: non-finite magnetization after step "
                                 "(time step too large?)");
    state.t += dt;
    state.step += 1;
    state.energy.reset();
}

// One Euler step with a caller-supplied field evaluation; returns the
// advanced state.  fieldFn(M, heff) fills heff with H_eff(M).
template <class T, class FieldFn>
SimState<T> eulerStep(const SimState<T>& state, FieldFn&& fieldFn, const StepperConfig& cfg,
                      const MaterialParams& mat, const Backend& backend) {
    cfg.validate();
    SimState<T> next = state;
    VectorField<T> heff(state.M.grid), rhs(state.M.grid);
    fieldFn(next.M, heff);
    llgRhs(next.M, heff, mat, backend, rhs);
    const bool renorm = (next.step + 1) % cfg.renormalizeEvery == 0;
    eulerUpdate(next, rhs, cfg.dt, mat.Ms, renorm, backend);
    return next;
}

struct TrajectorySample {
    long step = 0;
    double t = 0;
    Vec3d m{};                       // reduced mean magnetization
    EnergyBreakdown energy{};
    double maxTorqueDegPerNs = 0;
};

template <class T>
struct RelaxResult {
    SimState<T> state;
    bool converged = false;
    std::vector<TrajectorySample> log;
};

// Repeats Euler steps until the torque criterion is met or maxSteps is
// reached.  The provider must offer compute(M, heff, backend, timing) and
// energies(M, backend); convergence is checked before each step, so an
// already-converged state returns untouched.
template <class T, class Provider>
RelaxResult<T> relax(SimState<T> start, Provider& provider, const StepperConfig& cfg,
                     const MaterialParams& mat, const Backend& backend,
                     StepTiming* accumTiming = nullptr) {
    cfg.validate();
    RelaxResult<T> res{std::move(start), false, {}};
    SimState<T>& state = res.state;
    VectorField<T> heff(state.M.grid), rhs(state.M.grid);

    auto sample = [&](double torque) {
        TrajectorySample s;
        s.step = state.step;
        s.t = state.t;
        s.m = reducedMean(state, mat.Ms);
        s.energy = provider.energies(state.M, backend);
        s.maxTorqueDegPerNs = torque;
        res.log.push_back(s);
    };

    const long startStep = state.step;
    for (long iter = 0;; ++iter) {
        provider.compute(state.M, heff, backend, accumTiming);
        llgRhs(state.M, heff, mat, backend, rhs);
        const double torque = maxTorqueRate(rhs, mat.Ms, backend);

        const bool converged = torque <= cfg.torqueTolDegPerNs;
        const bool exhausted = iter >= cfg.maxSteps;
        if (converged || exhausted || iter % cfg.sampleEvery == 0) sample(torque);
        if (converged) {
            res.converged = true;
            break;
        }
        if (exhausted) break;

        PhaseClock clock;
        const bool renorm = (state.step + 1 - startStep) % cfg.renormalizeEvery == 0;
        eulerUpdate(state, rhs, cfg.dt, mat.Ms, renorm, backend);
        if (accumTiming) accumTiming->integrate += clock.lap();
    }
    state.energy = provider.energies(state.M, backend);
    return res;
}

} // namespace magfd::dynamics
