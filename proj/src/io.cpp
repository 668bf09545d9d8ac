#include "magfd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace magfd::io {
namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void writeFieldDump(const std::string& path, const VectorField<double>& M, double Ms,
                    Precision precision) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    const Grid& g = M.grid;
    out << "# magfd-dump v1\n";
    out << "# nx " << g.nx << "\n# ny " << g.ny << "\n# nz " << g.nz << "\n";
    out << "# dx " << fmt(g.dx) << "\n# dy " << fmt(g.dy) << "\n# dz " << fmt(g.dz) << "\n";
    out << "# Ms " << fmt(Ms) << "\n";
    out << "# precision " << precisionName(precision) << "\n";
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t c = g.index(i, j, k);
                out << i << ' ' << j << ' ' << k << ' ' << fmt(M.x[c]) << ' ' << fmt(M.y[c])
                    << ' ' << fmt(M.z[c]) << '\n';
            }
    if (!out) throw IoError("write failed: " + path);
}

FieldDump readFieldDump(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);

    int nx = 0, ny = 0, nz = 0;
    double dx = 0, dy = 0, dz = 0, Ms = 0;
    Precision prec = Precision::f64;
    bool sawPrecision = false;

    std::string line;
    std::streampos dataStart = in.tellg();
    while (std::getline(in, line)) {
        if (line.empty()) {
            dataStart = in.tellg();
            continue;
        }
        if (line[0] != '#') break;
        std::istringstream is(line.substr(1));
        std::string key;
        is >> key;
        if (key == "nx") is >> nx;
        else if (key == "ny") is >> ny;
        else if (key == "nz") is >> nz;
        else if (key == "dx") is >> dx;
        else if (key == "dy") is >> dy;
        else if (key == "dz") is >> dz;
        else if (key == "Ms") is >> Ms;
        else if (key == "precision") {
            std::string p;
            is >> p;
            if (p == "f32") prec = Precision::f32;
            else if (p == "f64") prec = Precision::f64;
            else throw IoError("field dump: bad precision '" + p + "'");
            sawPrecision = true;
        }
        // other # lines are comments
        dataStart = in.tellg();
    }
    if (nx < 1 || ny < 1 || nz < 1 || !(dx > 0) || !(dy > 0) || !(dz > 0) || !(Ms > 0) ||
        !sawPrecision)
        throw IoError("field dump: malformed or incomplete header in " + path);

    FieldDump dump{Grid(nx, ny, nz, dx, dy, dz), Ms, prec, VectorField<double>()};
    dump.M = VectorField<double>(dump.grid);

    in.clear();
    in.seekg(dataStart);
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        int i, j, k;
        double mx, my, mz;
        if (!(is >> i >> j >> k >> mx >> my >> mz))
            throw IoError("field dump: malformed data line: '" + line + "'");
        if (!dump.grid.inBounds(i, j, k))
            throw IoError("field dump: cell index out of range: '" + line + "'");
        dump.M.set(dump.grid.index(i, j, k), {mx, my, mz});
        ++count;
    }
    if (count != dump.grid.cellCount())
        throw IoError("field dump: header grid says " + std::to_string(dump.grid.cellCount()) +
                      " cells but body has " + std::to_string(count) + " lines");
    return dump;
}

void writeTrajectoryCsv(const std::string& path,
                        const std::vector<dynamics::TrajectorySample>& log) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "step,t_s,mx,my,mz,E_exch_J,E_anis_J,E_demag_J,E_zeeman_J,E_total_J,"
           "max_torque_deg_per_ns\n";
    for (const auto& s : log) {
        out << s.step << ',' << fmt(s.t) << ',' << fmt(s.m.x) << ',' << fmt(s.m.y) << ','
            << fmt(s.m.z) << ',' << fmt(s.energy.exchange) << ',' << fmt(s.energy.anisotropy)
            << ',' << fmt(s.energy.demag) << ',' << fmt(s.energy.zeeman) << ','
            << fmt(s.energy.total) << ',' << fmt(s.maxTorqueDegPerNs) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace magfd::io
