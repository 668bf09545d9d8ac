#include "magfd/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <new>

#include "magfd/dynamics.hpp"
#include "magfd/io.hpp"
#include "magfd/sim.hpp"

namespace magfd::cli {
namespace {

std::string fmtSci(double x, int prec = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

Backend makeBackend(const SimSpec& spec) { return Backend(spec.backend, spec.threads); }

void printSummary(std::ostream& out, const dynamics::TrajectorySample& s, bool converged) {
    out << "final: step " << s.step << ", t " << fmtSci(s.t) << " s, "
        << (converged ? "converged" : "NOT converged") << "\n";
    out << "  <m> = (" << fmtSci(s.m.x, 9) << ", " << fmtSci(s.m.y, 9) << ", "
        << fmtSci(s.m.z, 9) << ")\n";
    out << "  E_exch " << fmtSci(s.energy.exchange) << " J, E_anis "
        << fmtSci(s.energy.anisotropy) << " J, E_demag " << fmtSci(s.energy.demag)
        << " J, E_zeeman " << fmtSci(s.energy.zeeman) << " J, E_total "
        << fmtSci(s.energy.total) << " J\n";
    out << "  max torque " << fmtSci(s.maxTorqueDegPerNs) << " deg/ns\n";
}

template <class T>
int relaxImpl(const SimSpec& spec, std::ostream& out) {
    Backend backend = makeBackend(spec);
    Simulation<T> sim(spec, backend);
    const double dtLimit = dynamics::stabilityDtLimit(sim.material(), sim.grid());
    if (spec.dt > dtLimit)
        out << "warning: stepper.dt " << fmtSci(spec.dt) << " s exceeds the stability "
            << "heuristic " << fmtSci(dtLimit) << " s\n";

    auto res = sim.relax();
    try {
        if (!spec.csvPath.empty()) io::writeTrajectoryCsv(spec.csvPath, res.log);
        if (!spec.dumpPath.empty())
            io::writeFieldDump(spec.dumpPath, res.state.M.template cast<double>(), spec.Ms,
                               spec.precision);
    } catch (const io::IoError& e) {
        out << "error: " << e.what() << "\n";
        return exitError;
    }
    printSummary(out, res.log.back(), res.converged);
    return res.converged ? exitOk : exitUnconverged;
}

template <class T>
int runImpl(const SimSpec& spec, long steps, std::ostream& out) {
    Backend backend = makeBackend(spec);
    Simulation<T> sim(spec, backend);
    std::vector<dynamics::TrajectorySample> log;
    for (long i = 0; i < steps; ++i) {
        if (sim.state().step % spec.sampleEvery == 0) log.push_back(sim.sampleNow());
        sim.step();
    }
    log.push_back(sim.sampleNow());
    try {
        if (!spec.csvPath.empty()) io::writeTrajectoryCsv(spec.csvPath, log);
        if (!spec.dumpPath.empty())
            io::writeFieldDump(spec.dumpPath, sim.state().M.template cast<double>(), spec.Ms,
                               spec.precision);
    } catch (const io::IoError& e) {
        out << "error: " << e.what() << "\n";
        return exitError;
    }
    printSummary(out, log.back(), false);
    return exitOk;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class T>
BenchRow benchOne(int size, const SimSpec& tmpl, const Backend& backend, int measured) {
    SimSpec spec = tmpl;
    spec.nx = spec.ny = spec.nz = size;
    spec.initKind = InitKind::uniform;
    spec.initDirection = normalized(Vec3d{1, 1, 1}); // tilted: every term active

    Simulation<T> sim(spec, backend);
    for (int i = 0; i < 3; ++i) sim.step(); // warm-up, discarded

    std::vector<StepTiming> samples;
    samples.reserve(measured);
    for (int i = 0; i < measured; ++i)
        samples.push_back(timeStep([&](StepTiming& t) { sim.step(&t); }));

    auto pick = [&](double StepTiming::*field) {
        std::vector<double> v;
        v.reserve(samples.size());
        for (const auto& s : samples) v.push_back(s.*field);
        return median(std::move(v));
    };
    BenchRow row;
    row.size = size;
    row.ok = true;
    row.median.pad = pick(&StepTiming::pad);
    row.median.forwardFft = pick(&StepTiming::forwardFft);
    row.median.spectralMultiply = pick(&StepTiming::spectralMultiply);
    row.median.inverseFft = pick(&StepTiming::inverseFft);
    row.median.localFields = pick(&StepTiming::localFields);
    row.median.integrate = pick(&StepTiming::integrate);
    row.median.total = pick(&StepTiming::total);
    return row;
}

} // namespace

int cmdRelax(const SimSpec& spec, std::ostream& out) {
    try {
        return spec.precision == Precision::f64 ? relaxImpl<double>(spec, out)
                                                : relaxImpl<float>(spec, out);
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
        return exitError;
    }
}

int cmdRun(const SimSpec& spec, long steps, std::ostream& out) {
    if (steps < 0) {
        out << "error: steps must be >= 0\n";
        return exitError;
    }
    try {
        return spec.precision == Precision::f64 ? runImpl<double>(spec, steps, out)
                                                : runImpl<float>(spec, steps, out);
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
        return exitError;
    }
}

int cmdBench(const std::vector<int>& sizes, const SimSpec& tmpl, const std::string& csvPath,
             std::ostream& out, int measured, std::vector<BenchRow>* rowsOut) {
    std::vector<BenchRow> rows;
    Backend backend = makeBackend(tmpl);
    out << "backend: " << backendName(tmpl.backend) << " (" << backend.threads()
        << " threads), precision: " << precisionName(tmpl.precision) << "\n";
    out << "  size    ms/step        pad    fwd-fft   multiply    inv-fft      local"
           "  integrate\n";
    for (int size : sizes) {
        try {
            BenchRow row = tmpl.precision == Precision::f64
                               ? benchOne<double>(size, tmpl, backend, measured)
                               : benchOne<float>(size, tmpl, backend, measured);
            rows.push_back(row);
            const auto& m = row.median;
            char line[256];
            std::snprintf(line, sizeof line,
                          "%6d %10.4f %10.4f %10.4f %10.4f %10.4f %10.4f %10.4f\n", size,
                          m.total * 1e3, m.pad * 1e3, m.forwardFft * 1e3,
                          m.spectralMultiply * 1e3, m.inverseFft * 1e3, m.localFields * 1e3,
                          m.integrate * 1e3);
            out << line;
        } catch (const std::bad_alloc&) {
            out << "warning: size " << size << "^3 skipped (allocation failure)\n";
        } catch (const std::exception& e) {
            out << "error: size " << size << ": " << e.what() << "\n";
            return exitError;
        }
    }
    if (rowsOut) *rowsOut = rows;
    if (rows.empty()) {
        out << "error: no bench size succeeded\n";
        return exitError;
    }
    if (!csvPath.empty()) {
        std::ofstream csv(csvPath);
        if (!csv) {
            out << "error: cannot open for writing: " << csvPath << "\n";
            return exitError;
        }
        csv << "size,ms_per_step,pad_ms,forward_fft_ms,spectral_multiply_ms,inverse_fft_ms,"
               "local_fields_ms,integrate_ms\n";
        for (const auto& r : rows) {
            csv << r.size << ',' << r.median.total * 1e3 << ',' << r.median.pad * 1e3 << ','
                << r.median.forwardFft * 1e3 << ',' << r.median.spectralMultiply * 1e3 << ','
                << r.median.inverseFft * 1e3 << ',' << r.median.localFields * 1e3 << ','
                << r.median.integrate * 1e3 << '\n';
        }
    }
    return exitOk;
}

int cmdSelftest(const selftest::Options& opts, std::ostream& out) {
    const auto results = selftest::run(opts);
    for (const auto& r : results)
        out << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << "\n";
    const bool ok = selftest::allPassed(results);
    out << (ok ? "selftest: all checks passed\n" : "selftest: FAILURES present\n");
    return ok ? exitOk : exitError;
}

} // namespace magfd::cli
