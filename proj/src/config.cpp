#include "chimhd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace chimhd {

namespace {

struct Entry {
    std::string value;
    int line;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

double to_double(const std::string& key, const Entry& e, const std::string& src) {
    double v = 0.0;
    const char* end = e.value.data() + e.value.size();
    auto [p, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) {
        throw ConfigError(where(src, e.line) + key + ": expected a number, got '" + e.value + "'", e.line);
    }
    return v;
}

int to_int(const std::string& key, const Entry& e, const std::string& src) {
    int v = 0;
    const char* end = e.value.data() + e.value.size();
    auto [p, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || p != end) {
        throw ConfigError(where(src, e.line) + key + ": expected an integer, got '" + e.value + "'", e.line);
    }
    return v;
}

bool to_bool(const std::string& key, const Entry& e, const std::string& src) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError(where(src, e.line) + key + ": expected true/false, got '" + e.value + "'", e.line);
}

Scenario to_scenario(const Entry& e, const std::string& src) {
    if (e.value == "rounded_square") return Scenario::RoundedSquare;
    if (e.value == "two_bubbles") return Scenario::TwoBubbles;
    if (e.value == "vortex_only") return Scenario::VortexOnly;
    if (e.value == "droplet") return Scenario::Droplet;
    throw ConfigError(where(src, e.line) + "scenario: unknown value '" + e.value +
                          "' (rounded_square | two_bubbles | vortex_only | droplet)",
                      e.line);
}

const char* const kKeys[] = {
    "scenario", "nx", "ny", "eps", "gamma", "m0", "mobility", "s_stab", "eta1", "eta2", "sigma1", "sigma2", "b",
    "dt", "t_end", "output_dir", "snapshot_every", "tol_ch", "tol_current", "tol_ns", "maxit_ch", "maxit_current",
    "maxit_ns", "restart", "potential", "theta", "freeze_velocity", "surface_phase", "abort_on_breach",
    "energy_tolerance", "droplet_radius", "droplet_inside",
};

bool known_key(const std::string& k) {
    for (const char* s : kKeys)
        if (k == s) return true;
    return false;
}

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::RoundedSquare: return "rounded_square";
        case Scenario::TwoBubbles: return "two_bubbles";
        case Scenario::VortexOnly: return "vortex_only";
        case Scenario::Droplet: return "droplet";
    }
    return "?";
}

RunConfig default_config(Scenario s) {
    RunConfig c;
    c.scenario = s;
    switch (s) {
        case Scenario::RoundedSquare:
            c.t_end = 2.0;
            break;
        case Scenario::TwoBubbles:
            c.phys.eta1 = c.phys.eta2 = 100.0;
            c.phys.sigma1 = c.phys.sigma2 = 100.0;
            c.phys.mobility.m0 = 0.01;
            c.phys.gamma = 0.01;
            c.t_end = 2.5;
            break;
        case Scenario::VortexOnly:
            c.t_end = 1.0;
            c.solver.freeze_phase = true;
            break;
        case Scenario::Droplet:
            c.t_end = 1.0;
            break;
    }
    return c;
}

int RunConfig::num_steps() const { return static_cast<int>(std::llround(t_end / dt)); }

void RunConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (nx < 4 || ny < 4) fail("nx and ny must be >= 4");
    if (!(dt > 0.0)) fail("dt must be > 0");
    if (!(t_end > 0.0)) fail("t_end must be > 0");
    if (num_steps() < 1) fail("t_end / dt must give at least one step");
    if (snapshot_every < 1) fail("snapshot_every must be >= 1");
    if (!(solver.tol_ch > 0.0) || !(solver.tol_current > 0.0) || !(solver.tol_ns > 0.0)) fail("solver tolerances must be > 0");
    if (solver.maxit_ch < 1 || solver.maxit_current < 1 || solver.maxit_ns < 1) fail("maxit values must be >= 1");
    if (solver.restart < 1) fail("restart must be >= 1");
    if (!(energy_tolerance >= 0.0)) fail("energy_tolerance must be >= 0");
    if (output_dir.empty()) fail("output_dir must not be empty");
    if (scenario == Scenario::Droplet) {
        if (!(droplet_radius > 0.0) || !(droplet_radius < 0.5)) fail("droplet_radius must be in (0, 0.5)");
        if (droplet_inside != 1.0 && droplet_inside != -1.0) fail("droplet_inside must be 1 or -1");
    }
    try {
        phys.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

RunConfig parse_config_text(std::string_view text, const std::string& source) {
    std::map<std::string, Entry> kv;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where(source, lineno) + "expected 'key = value'", lineno);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!known_key(key)) throw ConfigError(where(source, lineno) + "unknown key '" + key + "'", lineno);
        if (value.empty()) throw ConfigError(where(source, lineno) + key + ": missing value", lineno);
        if (!kv.emplace(key, Entry{value, lineno}).second) {
            throw ConfigError(where(source, lineno) + "duplicate key '" + key + "'", lineno);
        }
    }

    const auto sc = kv.find("scenario");
    if (sc == kv.end()) throw ConfigError(source + ": scenario missing");
    RunConfig c = default_config(to_scenario(sc->second, source));

    double theta = 3.0;
    std::string potential = "ginzburg_landau";
    int potential_line = 0;
    for (const auto& [key, e] : kv) {
        if (key == "scenario") continue;
        else if (key == "nx") c.nx = to_int(key, e, source);
        else if (key == "ny") c.ny = to_int(key, e, source);
        else if (key == "eps") c.phys.eps = to_double(key, e, source);
        else if (key == "gamma") c.phys.gamma = to_double(key, e, source);
        else if (key == "m0") c.phys.mobility.m0 = to_double(key, e, source);
        else if (key == "mobility") {
            if (e.value == "I") c.phys.mobility.kind = MobilityCase::I;
            else if (e.value == "II") c.phys.mobility.kind = MobilityCase::II;
            else if (e.value == "III") c.phys.mobility.kind = MobilityCase::III;
            else throw ConfigError(where(source, e.line) + "mobility: expected I, II or III", e.line);
        }
        else if (key == "s_stab") c.phys.s_stab = to_double(key, e, source);
        else if (key == "eta1") c.phys.eta1 = to_double(key, e, source);
        else if (key == "eta2") c.phys.eta2 = to_double(key, e, source);
        else if (key == "sigma1") c.phys.sigma1 = to_double(key, e, source);
        else if (key == "sigma2") c.phys.sigma2 = to_double(key, e, source);
        else if (key == "b") c.phys.b = to_double(key, e, source);
        else if (key == "dt") c.dt = to_double(key, e, source);
        else if (key == "t_end") c.t_end = to_double(key, e, source);
        else if (key == "output_dir") c.output_dir = e.value;
        else if (key == "snapshot_every") c.snapshot_every = to_int(key, e, source);
        else if (key == "tol_ch") c.solver.tol_ch = to_double(key, e, source);
        else if (key == "tol_current") c.solver.tol_current = to_double(key, e, source);
        else if (key == "tol_ns") c.solver.tol_ns = to_double(key, e, source);
        else if (key == "maxit_ch") c.solver.maxit_ch = to_int(key, e, source);
        else if (key == "maxit_current") c.solver.maxit_current = to_int(key, e, source);
        else if (key == "maxit_ns") c.solver.maxit_ns = to_int(key, e, source);
        else if (key == "restart") c.solver.restart = to_int(key, e, source);
        else if (key == "potential") {
            potential = e.value;
            potential_line = e.line;
        }
        else if (key == "theta") theta = to_double(key, e, source);
        else if (key == "freeze_velocity") c.solver.freeze_velocity = to_bool(key, e, source);
        else if (key == "surface_phase") {
            if (e.value == "new") c.solver.surface_phase = SurfacePhase::New;
            else if (e.value == "lagged") c.solver.surface_phase = SurfacePhase::Lagged;
            else throw ConfigError(where(source, e.line) + "surface_phase: expected new or lagged", e.line);
        }
        else if (key == "abort_on_breach") c.abort_on_breach = to_bool(key, e, source);
        else if (key == "energy_tolerance") c.energy_tolerance = to_double(key, e, source);
        else if (key == "droplet_radius") c.droplet_radius = to_double(key, e, source);
        else if (key == "droplet_inside") c.droplet_inside = to_double(key, e, source);
    }
    if (potential == "flory_huggins") {
        try {
            c.phys.potential = PotentialKind::flory_huggins(theta);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where(source, potential_line) + e.what(), potential_line);
        }
    } else if (potential != "ginzburg_landau") {
        throw ConfigError(where(source, potential_line) + "potential: expected ginzburg_landau or flory_huggins",
                          potential_line);
    }

    try {
        c.validate();
    } catch (const ConfigError& e) {
        // Point at the line of the first key named in the message, if any.
        const std::string msg = e.what();
        int line = 0;
        for (const auto& [key, entry] : kv) {
            if (msg.rfind(key + " ", 0) == 0 || msg.find(" " + key + " ") != std::string::npos) {
                line = entry.line;
                break;
            }
        }
        throw ConfigError(line ? where(source, line) + msg : source + ": " + msg, line);
    }
    return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    const PhysParams& p = c.phys;
    const char* mob = p.mobility.kind == MobilityCase::I ? "I" : p.mobility.kind == MobilityCase::II ? "II" : "III";
    o << "scenario = " << to_string(c.scenario) << '\n'
      << "nx = " << c.nx << '\n'
      << "ny = " << c.ny << '\n'
      << "eps = " << fmt(p.eps) << '\n'
      << "gamma = " << fmt(p.gamma) << '\n'
      << "m0 = " << fmt(p.mobility.m0) << '\n'
      << "mobility = " << mob << '\n'
      << "s_stab = " << fmt(p.s_stab) << '\n'
      << "eta1 = " << fmt(p.eta1) << '\n'
      << "eta2 = " << fmt(p.eta2) << '\n'
      << "sigma1 = " << fmt(p.sigma1) << '\n'
      << "sigma2 = " << fmt(p.sigma2) << '\n'
      << "b = " << fmt(p.b) << '\n'
      << "potential = "
      << (p.potential.type() == PotentialKind::Type::FloryHuggins ? "flory_huggins" : "ginzburg_landau") << '\n';
    if (p.potential.type() == PotentialKind::Type::FloryHuggins) o << "theta = " << fmt(p.potential.theta()) << '\n';
    o << "dt = " << fmt(c.dt) << '\n'
      << "t_end = " << fmt(c.t_end) << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "snapshot_every = " << c.snapshot_every << '\n'
      << "tol_ch = " << fmt(c.solver.tol_ch) << '\n'
      << "tol_current = " << fmt(c.solver.tol_current) << '\n'
      << "tol_ns = " << fmt(c.solver.tol_ns) << '\n'
      << "maxit_ch = " << c.solver.maxit_ch << '\n'
      << "maxit_current = " << c.solver.maxit_current << '\n'
      << "maxit_ns = " << c.solver.maxit_ns << '\n'
      << "restart = " << c.solver.restart << '\n'
      << "freeze_velocity = " << (c.solver.freeze_velocity ? "true" : "false") << '\n'
      << "surface_phase = " << (c.solver.surface_phase == SurfacePhase::Lagged ? "lagged" : "new") << '\n'
      << "abort_on_breach = " << (c.abort_on_breach ? "true" : "false") << '\n'
      << "energy_tolerance = " << fmt(c.energy_tolerance) << '\n'
      << "droplet_radius = " << fmt(c.droplet_radius) << '\n'
      << "droplet_inside = " << fmt(c.droplet_inside) << '\n';
    return o.str();
}

}  // namespace chimhd
