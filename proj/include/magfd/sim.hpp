#pragma once

#include "magfd/backend.hpp"
#include "magfd/config.hpp"
#include "magfd/dynamics.hpp"
#include "magfd/fields.hpp"
#include "magfd/state.hpp"

namespace magfd {

// Binds a SimSpec to a runnable problem: initial state, field provider,
// stepper.  All field data stays resident in the simulation's buffers across
// steps; it crosses out only at initialization and sampling.
template <class T>
class Simulation {
public:
    Simulation(const SimSpec& spec, const Backend& backend)
        : grid_(spec.toGrid()), mat_(spec.toMaterial()), stepper_(spec.toStepper()),
          provider_(grid_, mat_, spec.toFieldConfig(), backend),
          heff_(grid_), rhs_(grid_), backend_(&backend) {
        state_ = spec.initKind == InitKind::uniform
                     ? makeUniformState<T>(grid_, spec.initDirection, mat_.Ms)
                     : makeVortexState<T>(grid_, spec.vortexAxis, mat_.Ms);
    }

    const Grid& grid() const { return grid_; }
    const MaterialParams& material() const { return mat_; }
    const dynamics::StepperConfig& stepper() const { return stepper_; }
    SimState<T>& state() { return state_; }
    const SimState<T>& state() const { return state_; }

    // One Euler step; returns the pre-step max torque rate (deg/ns).
    double step(StepTiming* timing = nullptr) {
        provider_.compute(state_.M, heff_, *backend_, timing);
        dynamics::llgRhs(state_.M, heff_, mat_, *backend_, rhs_);
        const double torque = dynamics::maxTorqueRate(rhs_, mat_.Ms, *backend_);
        PhaseClock clock;
        const bool renorm = (state_.step + 1) % stepper_.renormalizeEvery == 0;
        dynamics::eulerUpdate(state_, rhs_, stepper_.dt, mat_.Ms, renorm, *backend_);
        if (timing) timing->integrate += clock.lap();
        return torque;
    }

    // Current-state observables (fresh field evaluation).
    dynamics::TrajectorySample sampleNow() {
        provider_.compute(state_.M, heff_, *backend_);
        dynamics::llgRhs(state_.M, heff_, mat_, *backend_, rhs_);
        dynamics::TrajectorySample s;
        s.step = state_.step;
        s.t = state_.t;
        s.m = reducedMean(state_, mat_.Ms);
        s.energy = provider_.energies(state_.M, *backend_);
        s.maxTorqueDegPerNs = dynamics::maxTorqueRate(rhs_, mat_.Ms, *backend_);
        return s;
    }

    dynamics::RelaxResult<T> relax(StepTiming* accumTiming = nullptr) {
        auto res = dynamics::relax(std::move(state_), provider_, stepper_, mat_, *backend_,
                                   accumTiming);
        state_ = res.state;
        return res;
    }

private:
    Grid grid_;
    MaterialParams mat_;
    dynamics::StepperConfig stepper_;
    fields::EffectiveFieldProvider<T> provider_;
    SimState<T> state_;
    VectorField<T> heff_, rhs_;
    const Backend* backend_;
};

} // namespace magfd
