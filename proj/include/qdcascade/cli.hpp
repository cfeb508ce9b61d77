#pragma once

#include <optional>
#include <string>

#include "qdcascade/analysis.hpp"

namespace qdc::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitInputData = 4;

// Fully resolved run configuration: defaults, then config-file values, then
// command-line flags. The resolved values are echoed into every output file
// header.
struct RunConfig {
    // source and detector
    double delta_ueV = kPlanck;  // delta/h = 1 GHz unless overridden
    double tau_ns = 0.02;
    double tau_x_ns = 1.0;
    double n0 = 1.0;
    std::optional<double> omega_rad_ns;  // erase drive; default compensating

    // time grid
    int t_steps = 2000;
    std::optional<double> t_min_ns;
    std::optional<double> t_max_ns;
    std::optional<double> proj_dump_t_ns;  // trace: dump projections at this time

    // map sweep
    double tau_min_ns = 0.001;
    double tau_max_ns = 2.0;
    int tau_cells = 60;
    double delta_min_GHz = 0.05;
    double delta_max_GHz = 10.0;
    int delta_cells = 60;
    double contour_level = 0.99;

    // behavior
    int workers = 8;
    Weighting weighting = Weighting::Convolved;
    std::string out_dir = ".";
    std::string input_path;   // tomo
    std::string config_path;  // echoed when a config file was used
    unsigned long seed = 0;   // reserved for synthetic test-data generation
    bool check_convergence = false;

    CascadeParams cascade_params() const { return {delta_ueV, tau_x_ns, n0}; }
    DetectorModel detector() const { return {tau_ns}; }
    TimeGrid time_grid() const;
};

int cmd_map(const RunConfig& cfg);
int cmd_trace(const RunConfig& cfg);
int cmd_erase(const RunConfig& cfg);
int cmd_tomo(const RunConfig& cfg);

// Full argv front end (subcommands map/trace/erase/tomo); returns the
// process exit code.
int run_cli(int argc, const char* const* argv);

// %.9g, locale-independent.
std::string fmt9(double v);

}  // namespace qdc::cli
