#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "qdcascade/cli.hpp"
#include "qdcascade/errors.hpp"

namespace qdc::cli {

namespace {

// Options shared by every subcommand.
void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--config", cfg.config_path,
                    "flat key = value file; keys are the long option names, "
                    "command-line flags take precedence");

    auto* ueV = cmd->add_option("--delta-ueV", cfg.delta_ueV, "FSS energy in ueV");
    cmd->add_option_function<double>(
           "--delta-GHz",
           [&cfg](double ghz) { cfg.delta_ueV = ghz * kPlanck; },
           "FSS as ordinary frequency delta/h in GHz")
        ->excludes(ueV);
    cmd->add_option("--tau-ns", cfg.tau_ns, "detector time resolution FWHM in ns")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--tau-x-ns", cfg.tau_x_ns, "exciton lifetime in ns")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--n0", cfg.n0, "detected pair count")->check(CLI::PositiveNumber);
    cmd->add_option("--t-steps", cfg.t_steps, "time grid points")
        ->check(CLI::Range(2, 2000000));
    cmd->add_option("--t-min-ns", cfg.t_min_ns, "time grid start (default: pulse window)");
    cmd->add_option("--t-max-ns", cfg.t_max_ns, "time grid end (default: pulse window)");
    cmd->add_option("--workers", cfg.workers, "sweep worker threads")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--weighting", cfg.weighting, "time-average weighting")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Weighting>{{"n", Weighting::Emission},
                                             {"convolved", Weighting::Convolved}},
            CLI::ignore_case));
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "seed for synthetic test-data generation");
    cmd->add_flag("--check-convergence", cfg.check_convergence,
                  "verify quadrature convergence before writing results");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Expand `--config FILE` into option tokens inserted right after the
// subcommand name, so explicitly passed flags parse later and win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string config_path;
    std::set<std::string> explicit_options;
    for (size_t k = 0; k < args.size(); ++k) {
        const std::string& a = args[k];
        if (a == "--config" && k + 1 < args.size()) {
            config_path = args[k + 1];
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
        } else if (a.rfind("--", 0) == 0) {
            explicit_options.insert(a.substr(0, a.find('=')));
        }
    }
    if (config_path.empty()) return args;

    std::ifstream is(config_path);
    if (!is) throw std::invalid_argument("cannot open config file " + config_path);

    const bool delta_on_cli = explicit_options.count("--delta-ueV") ||
                              explicit_options.count("--delta-GHz");
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not key = value: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " has an empty key");
        const std::string option = "--" + key;
        if (explicit_options.count(option)) continue;  // flag wins
        if (delta_on_cli && (key == "delta-ueV" || key == "delta-GHz")) continue;
        tokens.push_back(option + "=" + value);
    }

    // insert after the subcommand (the first non-flag token)
    std::vector<std::string> out;
    bool inserted = false;
    for (size_t k = 0; k < args.size(); ++k) {
        out.push_back(args[k]);
        if (!inserted && args[k].rfind("-", 0) != 0) {
            out.insert(out.end(), tokens.begin(), tokens.end());
            inserted = true;
        }
    }
    if (!inserted) out.insert(out.end(), tokens.begin(), tokens.end());
    return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"quantum-dot cascade entanglement simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunConfig cfg;

    auto* map = app.add_subcommand("map", "sweep cbar over (tau, delta) and extract a contour");
    add_common_options(map, cfg);
    map->add_option("--tau-min-ns", cfg.tau_min_ns)->check(CLI::PositiveNumber);
    map->add_option("--tau-max-ns", cfg.tau_max_ns)->check(CLI::PositiveNumber);
    map->add_option("--tau-cells", cfg.tau_cells)->check(CLI::Range(1, 4096));
    map->add_option("--delta-min-GHz", cfg.delta_min_GHz)->check(CLI::NonNegativeNumber);
    map->add_option("--delta-max-GHz", cfg.delta_max_GHz)->check(CLI::PositiveNumber);
    map->add_option("--delta-cells", cfg.delta_cells)->check(CLI::Range(1, 4096));
    map->add_option("--contour-level", cfg.contour_level)
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));

    auto* trace = app.add_subcommand("trace", "time-resolved rates and concurrence at one point");
    add_common_options(trace, cfg);
    trace->add_option("--proj-dump-t-ns", cfg.proj_dump_t_ns,
                      "also write the 36-projection table at this time");

    auto* erase = app.add_subcommand("erase", "rotating-waveplate erasure figures of merit");
    add_common_options(erase, cfg);
    erase->add_option("--omega-rad-per-ns", cfg.omega_rad_ns,
                      "waveplate angular frequency (default: delta/(4 hbar))");

    auto* tomo = app.add_subcommand("tomo", "reconstruct a density matrix from a projection table");
    add_common_options(tomo, cfg);
    tomo->add_option("--input", cfg.input_path, "projection CSV (basis_xx,basis_x,rate)")
        ->required();

    try {
        const std::vector<std::string> args = expand_config({argv + 1, argv + argc});
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const std::string& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (map->parsed()) return cmd_map(cfg);
        if (trace->parsed()) return cmd_trace(cfg);
        if (erase->parsed()) return cmd_erase(cfg);
        if (tomo->parsed()) return cmd_tomo(cfg);
    } catch (const GridTooCoarse& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const InputDataError& e) {
        std::cerr << "input data error: " << e.what() << "\n";
        return kExitInputData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}

}  // namespace qdc::cli
