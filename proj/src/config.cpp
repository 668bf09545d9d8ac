#include "magfd/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace magfd {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parseDouble(const std::string& v, int line, const std::string& key) {
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        fail(line, "malformed number for " + key + ": '" + v + "'");
    }
    if (trim(v.substr(pos)) != "") fail(line, "trailing characters for " + key + ": '" + v + "'");
    if (!std::isfinite(x)) fail(line, "non-finite value for " + key);
    return x;
}

long parseLong(const std::string& v, int line, const std::string& key) {
    std::size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        fail(line, "malformed integer for " + key + ": '" + v + "'");
    }
    if (trim(v.substr(pos)) != "") fail(line, "trailing characters for " + key + ": '" + v + "'");
    return x;
}

bool parseBool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    fail(line, "malformed boolean for " + key + ": '" + v + "' (use true/false)");
}

Vec3d parseVec3(const std::string& v, int line, const std::string& key) {
    std::istringstream is(v);
    Vec3d r;
    std::string rest;
    if (!(is >> r.x >> r.y >> r.z)) fail(line, "malformed 3-vector for " + key + ": '" + v + "'");
    if (is >> rest) fail(line, "trailing characters for " + key + ": '" + v + "'");
    return r;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(Vec3d v) { return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z); }

} // namespace

SimSpec parseConfig(const std::string& text, std::vector<std::string>* appliedDefaults) {
    SimSpec spec;
    std::set<std::string> seen;

    auto positiveInt = [](const std::string& v, int l, const std::string& key) {
        const long x = parseLong(v, l, key);
        if (x < 1) fail(l, key + " must be >= 1, got " + v);
        return static_cast<int>(x);
    };
    auto positiveDouble = [](const std::string& v, int l, const std::string& key) {
        const double x = parseDouble(v, l, key);
        if (!(x > 0)) fail(l, key + " must be > 0, got " + v);
        return x;
    };
    auto nonNegDouble = [](const std::string& v, int l, const std::string& key) {
        const double x = parseDouble(v, l, key);
        if (x < 0) fail(l, key + " must be >= 0, got " + v);
        return x;
    };

    using Setter = std::function<void(const std::string&, int)>;
    const std::map<std::string, Setter> setters = {
        {"grid.nx", [&](const std::string& v, int l) { spec.nx = positiveInt(v, l, "grid.nx"); }},
        {"grid.ny", [&](const std::string& v, int l) { spec.ny = positiveInt(v, l, "grid.ny"); }},
        {"grid.nz", [&](const std::string& v, int l) { spec.nz = positiveInt(v, l, "grid.nz"); }},
        {"grid.dx", [&](const std::string& v, int l) { spec.dx = positiveDouble(v, l, "grid.dx"); }},
        {"grid.dy", [&](const std::string& v, int l) { spec.dy = positiveDouble(v, l, "grid.dy"); }},
        {"grid.dz", [&](const std::string& v, int l) { spec.dz = positiveDouble(v, l, "grid.dz"); }},
        {"material.A", [&](const std::string& v, int l) { spec.A = nonNegDouble(v, l, "material.A"); }},
        {"material.Ku", [&](const std::string& v, int l) { spec.Ku = parseDouble(v, l, "material.Ku"); }},
        {"material.Ms", [&](const std::string& v, int l) { spec.Ms = positiveDouble(v, l, "material.Ms"); }},
        {"material.alpha", [&](const std::string& v, int l) { spec.alpha = nonNegDouble(v, l, "material.alpha"); }},
        {"material.gamma", [&](const std::string& v, int l) { spec.gamma = positiveDouble(v, l, "material.gamma"); }},
        {"material.easy_axis",
         [&](const std::string& v, int l) {
             Vec3d a = parseVec3(v, l, "material.easy_axis");
             if (!(norm(a) > 0)) fail(l, "material.easy_axis must be nonzero");
             spec.easyAxis = normalized(a);
         }},
        {"terms.exchange", [&](const std::string& v, int l) { spec.termExchange = parseBool(v, l, "terms.exchange"); }},
        {"terms.anisotropy", [&](const std::string& v, int l) { spec.termAnisotropy = parseBool(v, l, "terms.anisotropy"); }},
        {"terms.demag", [&](const std::string& v, int l) { spec.termDemag = parseBool(v, l, "terms.demag"); }},
        {"terms.zeeman", [&](const std::string& v, int l) { spec.termZeeman = parseBool(v, l, "terms.zeeman"); }},
        {"field.extern", [&](const std::string& v, int l) { spec.externField = parseVec3(v, l, "field.extern"); }},
        {"init.kind",
         [&](const std::string& v, int l) {
             if (v == "uniform") spec.initKind = InitKind::uniform;
             else if (v == "vortex") spec.initKind = InitKind::vortex;
             else fail(l, "init.kind must be uniform or vortex, got '" + v + "'");
         }},
        {"init.direction",
         [&](const std::string& v, int l) {
             Vec3d d = parseVec3(v, l, "init.direction");
             if (!(norm(d) > 0)) fail(l, "init.direction must be nonzero");
             spec.initDirection = normalized(d);
         }},
        {"init.axis",
         [&](const std::string& v, int l) {
             auto a = parseAxis(v);
             if (!a) fail(l, "init.axis must be one of +x -x +y -y +z -z, got '" + v + "'");
             spec.vortexAxis = *a;
         }},
        {"stepper.dt", [&](const std::string& v, int l) { spec.dt = positiveDouble(v, l, "stepper.dt"); }},
        {"stepper.max_steps",
         [&](const std::string& v, int l) {
             spec.maxSteps = parseLong(v, l, "stepper.max_steps");
             if (spec.maxSteps < 0) fail(l, "stepper.max_steps must be >= 0");
         }},
        {"stepper.torque_tol",
         [&](const std::string& v, int l) { spec.torqueTol = positiveDouble(v, l, "stepper.torque_tol"); }},
        {"stepper.renorm_every",
         [&](const std::string& v, int l) { spec.renormEvery = positiveInt(v, l, "stepper.renorm_every"); }},
        {"backend.kind",
         [&](const std::string& v, int l) {
             if (v == "serial") spec.backend = BackendKind::serial;
             else if (v == "parallel") spec.backend = BackendKind::parallel;
             else fail(l, "backend.kind must be serial or parallel, got '" + v + "'");
         }},
        {"backend.threads",
         [&](const std::string& v, int l) {
             const long t = parseLong(v, l, "backend.threads");
             if (t < 0) fail(l, "backend.threads must be >= 0");
             spec.threads = static_cast<unsigned>(t);
         }},
        {"precision",
         [&](const std::string& v, int l) {
             if (v == "f32") spec.precision = Precision::f32;
             else if (v == "f64") spec.precision = Precision::f64;
             else fail(l, "precision must be f32 or f64, got '" + v + "'");
         }},
        {"output.csv", [&](const std::string& v, int) { spec.csvPath = v; }},
        {"output.dump", [&](const std::string& v, int) { spec.dumpPath = v; }},
        {"output.sample_every",
         [&](const std::string& v, int l) {
             spec.sampleEvery = positiveInt(v, l, "output.sample_every");
         }},
    };

    std::istringstream stream(text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(stream, raw)) {
        ++lineNo;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineNo, "expected key = value, got '" + trim(raw) + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) fail(lineNo, "unknown key '" + key + "'");
        if (!seen.insert(key).second) fail(lineNo, "duplicate key '" + key + "'");
        if (value.empty() && key != "output.csv" && key != "output.dump")
            fail(lineNo, "empty value for " + key);
        it->second(value, lineNo);
    }

    for (const char* req : {"grid.nx", "grid.ny", "grid.nz", "grid.dx", "grid.dy", "grid.dz",
                            "material.Ms"})
        if (!seen.count(req))
            throw ConfigError(std::string("config: missing required key '") + req + "'");

    // cross-field validation
    if (spec.initKind == InitKind::vortex) {
        const Vec3d axis = axisVector(spec.vortexAxis);
        const int perp1 = axis.x != 0 ? spec.ny : spec.nx;
        const int perp2 = (axis.x != 0 || axis.y != 0) ? spec.nz : spec.ny;
        if (perp1 < 2 || perp2 < 2)
            throw ConfigError("config: vortex init needs >= 2 cells along each axis "
                              "perpendicular to init.axis");
    }

    if (appliedDefaults) {
        const SimSpec defaults;
        auto echo = [&](const char* key, const std::string& value) {
            if (!seen.count(key)) appliedDefaults->push_back(std::string(key) + " = " + value);
        };
        echo("material.A", fmt(defaults.A));
        echo("material.Ku", fmt(defaults.Ku));
        echo("material.alpha", fmt(defaults.alpha));
        echo("material.gamma", fmt(defaults.gamma));
        echo("material.easy_axis", fmt(defaults.easyAxis));
        echo("terms.exchange", "true");
        echo("terms.anisotropy", "true");
        echo("terms.demag", "true");
        echo("terms.zeeman", "true");
        echo("field.extern", fmt(defaults.externField));
        echo("init.kind", "uniform");
        echo("init.direction", fmt(defaults.initDirection));
        echo("init.axis", axisName(defaults.vortexAxis));
        echo("stepper.dt", fmt(defaults.dt));
        echo("stepper.max_steps", std::to_string(defaults.maxSteps));
        echo("stepper.torque_tol", fmt(defaults.torqueTol));
        echo("stepper.renorm_every", std::to_string(defaults.renormEvery));
        echo("backend.kind", backendName(defaults.backend));
        echo("backend.threads", std::to_string(defaults.threads));
        echo("precision", precisionName(defaults.precision));
        echo("output.csv", defaults.csvPath);
        echo("output.dump", defaults.dumpPath);
        echo("output.sample_every", std::to_string(defaults.sampleEvery));
    }
    return spec;
}

std::string formatConfig(const SimSpec& s) {
    std::ostringstream o;
    o << "grid.nx = " << s.nx << "\n";
    o << "grid.ny = " << s.ny << "\n";
    o << "grid.nz = " << s.nz << "\n";
    o << "grid.dx = " << fmt(s.dx) << "\n";
    o << "grid.dy = " << fmt(s.dy) << "\n";
    o << "grid.dz = " << fmt(s.dz) << "\n";
    o << "material.A = " << fmt(s.A) << "\n";
    o << "material.Ku = " << fmt(s.Ku) << "\n";
    o << "material.Ms = " << fmt(s.Ms) << "\n";
    o << "material.alpha = " << fmt(s.alpha) << "\n";
    o << "material.gamma = " << fmt(s.gamma) << "\n";
    o << "material.easy_axis = " << fmt(s.easyAxis) << "\n";
    o << "terms.exchange = " << (s.termExchange ? "true" : "false") << "\n";
    o << "terms.anisotropy = " << (s.termAnisotropy ? "true" : "false") << "\n";
    o << "terms.demag = " << (s.termDemag ? "true" : "false") << "\n";
    o << "terms.zeeman = " << (s.termZeeman ? "true" : "false") << "\n";
    o << "field.extern = " << fmt(s.externField) << "\n";
    o << "init.kind = " << (s.initKind == InitKind::uniform ? "uniform" : "vortex") << "\n";
    o << "init.direction = " << fmt(s.initDirection) << "\n";
    o << "init.axis = " << axisName(s.vortexAxis) << "\n";
    o << "stepper.dt = " << fmt(s.dt) << "\n";
    o << "stepper.max_steps = " << s.maxSteps << "\n";
    o << "stepper.torque_tol = " << fmt(s.torqueTol) << "\n";
    o << "stepper.renorm_every = " << s.renormEvery << "\n";
    o << "backend.kind = " << backendName(s.backend) << "\n";
    o << "backend.threads = " << s.threads << "\n";
    o << "precision = " << precisionName(s.precision) << "\n";
    o << "output.csv = " << s.csvPath << "\n";
    o << "output.dump = " << s.dumpPath << "\n";
    o << "output.sample_every = " << s.sampleEvery << "\n";
    return o.str();
}

SimSpec loadConfigFile(const std::string& path, std::vector<std::string>* appliedDefaults) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseConfig(buf.str(), appliedDefaults);
}

} // namespace magfd
