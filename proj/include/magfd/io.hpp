#pragma once

#include <string>
#include <vector>

#include "magfd/config.hpp"
#include "magfd/dynamics.hpp"
#include "magfd/grid.hpp"
#include "magfd/state.hpp"
#include "magfd/vector_field.hpp"

namespace magfd::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text field dump: `# key value` header lines carrying nx ny nz dx dy dz Ms
// precision, then one line per cell `i j k Mx My Mz` (A/m, i fastest) with 17
// significant digits, so doubles round-trip bitwise.
struct FieldDump {
    Grid grid;
    double Ms = 0;
    Precision precision = Precision::f64;
    VectorField<double> M;
};

void writeFieldDump(const std::string& path, const VectorField<double>& M, double Ms,
                    Precision precision);
FieldDump readFieldDump(const std::string& path);

template <class T>
SimState<T> stateFromDump(const FieldDump& dump) {
    SimState<T> s(dump.grid);
    s.M = dump.M.template cast<T>();
    return s;
}

// Trajectory CSV, columns:
// step,t_s,mx,my,mz,E_exch_J,E_anis_J,E_demag_J,E_zeeman_J,E_total_J,max_torque_deg_per_ns
void writeTrajectoryCsv(const std::string& path,
                        const std::vector<dynamics::TrajectorySample>& log);

} // namespace magfd::io
