/// @file driver.hpp
/// @brief Time loop, output files and the epsilon sweep.
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "chimhd/config.hpp"
#include "chimhd/contour.hpp"
#include "chimhd/diagnostics.hpp"
#include "chimhd/scheme.hpp"

namespace chimhd {

enum class ExitCode { Ok = 0, ConfigError = 1, SolverFailure = 2, InvariantBreach = 3 };

/// Bounds checked after every step.
struct InvariantLimits {
    double charge = 1e-10;  ///< max |div J|
    double div_u = 1e-9;    ///< max |div u|
    double mass = 1e-9;     ///< |int phi(t) - int phi(0)| / |Omega|
};

struct StepRecord {
    int step = 0;
    double time = 0.0;
    EnergyBreakdown energy;
    double dissipation = 0.0;
    double phase_mass = 0.0;
    double charge_residual = 0.0;
    double div_u_residual = 0.0;
    int iters_ch = 0;
    int iters_current = 0;
    int iters_ns = 0;
};

struct RunResult {
    ExitCode status = ExitCode::Ok;
    std::string message;
    EnergyBreakdown initial_energy;
    double initial_mass = 0.0;
    std::vector<StepRecord> records;  ///< one per completed step
    State final_state{GridSpec(4, 4)};
    /// Largest E(n+1) - E(n) over the run (negative when strictly decreasing).
    double max_energy_increase = 0.0;
    double max_mass_drift = 0.0;  ///< relative to |Omega|
    double max_charge = 0.0;
    double max_div_u = 0.0;
};

/// Initial state of a scenario: phase, consistent chemical potential,
/// projected vortex (zero velocity for the droplet).
State initial_state(const RunConfig& config);

struct SimulateOptions {
    bool write_output = false;
    std::filesystem::path output_dir;  ///< used when write_output
    InvariantLimits limits{};
    /// Called after every step with the new state (e.g. for extra diagnostics).
    std::function<void(const State&, const StepRecord&)> observer;
};

/// Runs the time loop. Never throws for solver failures or invariant
/// breaches; those are reported through RunResult::status and message.
RunResult simulate(const RunConfig& config, const SimulateOptions& options = {});

/// Output directory of a config: CHIMHD_OUTPUT_ROOT / output_dir when the
/// variable is set and output_dir is relative, output_dir otherwise.
std::filesystem::path resolve_output_dir(const std::string& output_dir);

/// simulate() with output files; messages go to `log`. Returns the exit code.
int run(const RunConfig& config, std::ostream& log);

/// Column header of the diagnostics CSV.
std::string csv_header();
std::string csv_row(const StepRecord& r);

/// Legacy ASCII structured-points snapshot of phase, chem, pressure, epot
/// (cell-centred scalars) and velocity, current (face pairs averaged to
/// cell centres).
void write_vtk(const State& s, const std::filesystem::path& path);
void write_contour_csv(const Contour& c, const std::filesystem::path& path);

struct SweepRow {
    double eps = 0.0;
    double hausdorff = 0.0;
    ExitCode status = ExitCode::Ok;
};

struct SweepTable {
    double eps_ref = 0.0;
    std::vector<SweepRow> rows;  ///< in the order of eps_list
};

/// Runs the reference and every member, then tabulates the Hausdorff distance
/// of the final zero contours. Throws std::invalid_argument unless eps_list is
/// nonempty, strictly decreasing and eps_ref < min(eps_list); throws
/// std::runtime_error when a member run fails.
SweepTable sweep_epsilon(const RunConfig& base, const std::vector<double>& eps_list, double eps_ref,
                         bool write_output = false, std::ostream* log = nullptr);

}  // namespace chimhd
