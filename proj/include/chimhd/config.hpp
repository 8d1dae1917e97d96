/// @file config.hpp
/// @brief Run configuration: `key = value` files with `#` comments.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chimhd/physics.hpp"
#include "chimhd/scheme.hpp"

namespace chimhd {

enum class Scenario {
    RoundedSquare,
    TwoBubbles,
    VortexOnly,  ///< phase frozen at +1, vortex decaying under viscosity and Lorentz damping
    Droplet,     ///< circular droplet at rest
};

std::string to_string(Scenario s);

struct RunConfig {
    Scenario scenario = Scenario::RoundedSquare;
    int nx = 64;
    int ny = 64;
    PhysParams phys{};
    double dt = 0.01;
    double t_end = 2.0;
    std::string output_dir = "output";
    int snapshot_every = 50;
    SolverSettings solver{};
    bool abort_on_breach = true;
    double energy_tolerance = 1e-8;  ///< allowed step increase, relative to E(0)
    double droplet_radius = 0.25;
    double droplet_inside = 1.0;

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
    int num_steps() const;
    bool operator==(const RunConfig&) const = default;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Defaults of a scenario before any overrides.
RunConfig default_config(Scenario s);

RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");
/// Throws ConfigError for a missing file, unknown or duplicate keys, bad
/// values and constraint violations; messages carry the line number.
RunConfig parse_config(const std::filesystem::path& path);
/// Every key, full precision; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

}  // namespace chimhd
