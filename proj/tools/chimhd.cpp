// chimhd: command-line driver.
//
//   chimhd run <config>
//   chimhd sweep <config> --eps 0.1,0.05,0.025,0.0125 --eps-ref 0.01
//   chimhd check

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "chimhd/driver.hpp"
#include "chimhd/selfcheck.hpp"

namespace {

int load(const std::string& path, chimhd::RunConfig& out) {
    try {
        out = chimhd::parse_config(path);
        return 0;
    } catch (const chimhd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return static_cast<int>(chimhd::ExitCode::ConfigError);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-phase inductionless MHD phase-field simulator"};
    app.require_subcommand(1);

    std::string run_cfg;
    auto* run = app.add_subcommand("run", "run one simulation from a config file");
    run->add_option("config", run_cfg, "config file")->required();

    std::string sweep_cfg;
    std::vector<double> eps_list;
    double eps_ref = 0.0;
    auto* sweep = app.add_subcommand("sweep", "interface-width convergence sweep");
    sweep->add_option("config", sweep_cfg, "base config file")->required();
    sweep->add_option("--eps", eps_list, "comma-separated eps values, decreasing")->delimiter(',')->required();
    sweep->add_option("--eps-ref", eps_ref, "reference eps (below every listed value)")->required();

    auto* check = app.add_subcommand("check", "run the invariant self-test battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(chimhd::ExitCode::ConfigError);
    }

    if (*run) {
        chimhd::RunConfig cfg;
        if (const int rc = load(run_cfg, cfg)) return rc;
        return chimhd::run(cfg, std::cout);
    }
    if (*sweep) {
        chimhd::RunConfig cfg;
        if (const int rc = load(sweep_cfg, cfg)) return rc;
        try {
            const chimhd::SweepTable t = chimhd::sweep_epsilon(cfg, eps_list, eps_ref, true, &std::cout);
            std::printf("%-10s %s\n", "eps", "hausdorff(eps, eps_ref)");
            for (const auto& r : t.rows) std::printf("%-10g %.6e\n", r.eps, r.hausdorff);
            return 0;
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return static_cast<int>(chimhd::ExitCode::ConfigError);
        } catch (const std::exception& e) {
            std::cerr << "sweep failed: " << e.what() << '\n';
            return static_cast<int>(chimhd::ExitCode::SolverFailure);
        }
    }
    if (*check) {
        bool all = true;
        for (const auto& r : chimhd::run_selfcheck()) {
            std::printf("%s  %-34s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
            all = all && r.passed;
        }
        return all ? 0 : static_cast<int>(chimhd::ExitCode::InvariantBreach);
    }
    return 0;
}
