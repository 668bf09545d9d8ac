// magfd command-line driver: relax / run / bench / selftest.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "magfd/cli.hpp"
#include "magfd/config.hpp"

namespace {

magfd::SimSpec loadSpec(const std::string& path) {
    std::vector<std::string> defaults;
    magfd::SimSpec spec = magfd::loadConfigFile(path, &defaults);
    for (const auto& d : defaults) std::cout << "default applied: " << d << "\n";
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"magfd: finite-difference LLG micromagnetics with FFT demag"};
    app.require_subcommand(1);

    std::string configPath;
    long steps = 0;
    std::vector<int> sizes{8, 16, 32, 64};
    bool with128 = false;
    std::string benchCsv = "bench.csv";
    bool tamper = false;

    auto* relax = app.add_subcommand("relax", "relax to the torque criterion");
    relax->add_option("--config", configPath, "config file")->required();

    auto* run = app.add_subcommand("run", "run a fixed number of steps");
    run->add_option("--config", configPath, "config file")->required();
    run->add_option("--steps", steps, "number of Euler steps")->required();

    auto* bench = app.add_subcommand("bench", "per-step timing sweep over N^3 sizes");
    bench->add_option("--sizes", sizes, "cube edge sizes")->delimiter(',');
    bench->add_option("--config", configPath, "template config (material, backend, ...)");
    bench->add_flag("--with-128", with128, "append the 128^3 size");
    bench->add_option("--csv", benchCsv, "timing CSV output path");

    auto* selftest = app.add_subcommand("selftest", "oracle-equivalence suite");
    selftest->add_flag("--tamper-tensor-sign", tamper,
                       "fault-injection hook: flip a tensor sign (must fail)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (relax->parsed()) return magfd::cli::cmdRelax(loadSpec(configPath), std::cout);
        if (run->parsed()) return magfd::cli::cmdRun(loadSpec(configPath), steps, std::cout);
        if (bench->parsed()) {
            magfd::SimSpec tmpl;
            if (!configPath.empty()) {
                tmpl = loadSpec(configPath);
            } else {
                // default bench problem: SP3-like material on 2.5 nm cells
                tmpl.dx = tmpl.dy = tmpl.dz = 2.5e-9;
                tmpl.Ms = 8e5;
                tmpl.A = 1.3e-11;
                tmpl.Ku = 4e4;
                tmpl.backend = magfd::BackendKind::parallel;
            }
            if (with128) sizes.push_back(128);
            return magfd::cli::cmdBench(sizes, tmpl, benchCsv, std::cout);
        }
        if (selftest->parsed())
            return magfd::cli::cmdSelftest({tamper, magfd::BackendKind::serial}, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return magfd::cli::exitError;
    }
    return magfd::cli::exitError;
}
