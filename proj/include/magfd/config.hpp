#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "magfd/backend.hpp"
#include "magfd/dynamics.hpp"
#include "magfd/fields.hpp"
#include "magfd/grid.hpp"
#include "magfd/material.hpp"
#include "magfd/state.hpp"

namespace magfd {

enum class Precision { f32, f64 };
enum class InitKind { uniform, vortex };

inline std::string precisionName(Precision p) { return p == Precision::f32 ? "f32" : "f64"; }

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full problem description, parsed from the key = value config format.
struct SimSpec {
    // grid.*
    int nx = 0, ny = 0, nz = 0;
    double dx = 0, dy = 0, dz = 0;
    // material.*
    double A = 0.0;
    double Ku = 0.0;
    double Ms = 0.0;
    double alpha = 1.0;
    double gamma = constants::gamma_e;
    Vec3d easyAxis{0, 0, 1};
    // terms.*
    bool termExchange = true;
    bool termAnisotropy = true;
    bool termDemag = true;
    bool termZeeman = true;
    // field.*
    Vec3d externField{0, 0, 0};
    // init.*
    InitKind initKind = InitKind::uniform;
    Vec3d initDirection{0, 0, 1};
    SignedAxis vortexAxis = SignedAxis::zPlus;
    // stepper.*
    double dt = 1e-14;
    long maxSteps = 500000;
    double torqueTol = 0.01; // deg/ns
    int renormEvery = 1;
    // backend.*
    BackendKind backend = BackendKind::serial;
    unsigned threads = 0; // 0 = hardware concurrency
    // precision
    Precision precision = Precision::f64;
    // output.*
    std::string csvPath = "trajectory.csv";
    std::string dumpPath = "final_state.dump";
    long sampleEvery = 100;

    Grid toGrid() const { return Grid(nx, ny, nz, dx, dy, dz); }
    MaterialParams toMaterial() const {
        MaterialParams m;
        m.A = A;
        m.Ku = Ku;
        m.Ms = Ms;
        m.alpha = alpha;
        m.gamma = gamma;
        m.easyAxis = easyAxis;
        return m;
    }
    fields::FieldConfig toFieldConfig() const {
        return {termExchange, termAnisotropy, termDemag, termZeeman, externField};
    }
    dynamics::StepperConfig toStepper() const {
        dynamics::StepperConfig s;
        s.dt = dt;
        s.maxSteps = maxSteps;
        s.torqueTolDegPerNs = torqueTol;
        s.renormalizeEvery = renormEvery;
        s.sampleEvery = sampleEvery;
        return s;
    }

    friend bool operator==(const SimSpec&, const SimSpec&) = default;
};

// Parses the plain-text config format: one `key = value` per line, `#`
// comments, dotted keys.  Unknown keys, malformed values and missing
// required keys (grid.*, material.Ms) are hard errors naming the offending
// line.  If appliedDefaults is non-null it receives one `key = value` string
// per defaulted optional key.
SimSpec parseConfig(const std::string& text, std::vector<std::string>* appliedDefaults = nullptr);

// Canonical full-state rendering; parseConfig(formatConfig(s)) == s.
std::string formatConfig(const SimSpec& spec);

SimSpec loadConfigFile(const std::string& path,
                       std::vector<std::string>* appliedDefaults = nullptr);

} // namespace magfd
