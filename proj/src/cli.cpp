#include "qdcascade/cli.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "qdcascade/eraser.hpp"
#include "qdcascade/errors.hpp"

namespace qdc::cli {

namespace fs = std::filesystem;

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

TimeGrid RunConfig::time_grid() const {
    TimeGrid g = grid_for_weighting(cascade_params(), detector(), weighting, t_steps);
    if (t_min_ns) g.t_min = *t_min_ns;
    if (t_max_ns) g.t_max = *t_max_ns;
    g.validate();
    return g;
}

namespace {

const char* weighting_name(Weighting w) {
    return w == Weighting::Emission ? "n" : "convolved";
}

void write_header(std::ostream& os, const RunConfig& cfg, const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    os << "# qdcascade " << kVersion << "\n";
    os << "# command = " << command << "\n";
    os << "# delta_ueV = " << fmt9(cfg.delta_ueV) << "\n";
    os << "# delta_GHz = " << fmt9(cfg.delta_ueV / kPlanck) << "\n";
    os << "# tau_ns = " << fmt9(cfg.tau_ns) << "\n";
    os << "# tau_x_ns = " << fmt9(cfg.tau_x_ns) << "\n";
    os << "# n0 = " << fmt9(cfg.n0) << "\n";
    os << "# t_steps = " << cfg.t_steps << "\n";
    if (command != "tomo") {
        const TimeGrid g = cfg.time_grid();
        os << "# t_min_ns = " << fmt9(g.t_min) << "\n";
        os << "# t_max_ns = " << fmt9(g.t_max) << "\n";
    }
    os << "# weighting = " << weighting_name(cfg.weighting) << "\n";
    os << "# workers = " << cfg.workers << "\n";
    os << "# seed = " << cfg.seed << "\n";
    if (!cfg.config_path.empty()) os << "# config = " << cfg.config_path << "\n";
    for (const auto& [k, v] : extra) os << "# " << k << " = " << v << "\n";
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file " + path.string());
    return os;
}

std::string contour_file_name(double level) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "contour_%g.csv", level);
    return buf;
}

int convergence_guard(const RunConfig& cfg, const std::vector<std::pair<double, double>>& cells) {
    for (const auto& [tau, delta] : cells) {
        CascadeParams p{delta, cfg.tau_x_ns, cfg.n0};
        DetectorModel det{tau};
        cbar_checked(p, det, grid_for_weighting(p, det, cfg.weighting, cfg.t_steps),
                     cfg.weighting);
    }
    return kExitOk;
}

// Concurrence of the reconstructed state in one time bin, or nan below the
// rate floor.
double bin_concurrence(const std::array<double, 36>& rates, double floor) {
    ProjectionSet36 ps;
    ps.rates = rates;
    if (ps.total() < floor) return std::numeric_limits<double>::quiet_NaN();
    return concurrence(reconstruct(ps));
}

}  // namespace

int cmd_map(const RunConfig& cfg) {
    SweepGrid grid;
    grid.tau_values_ns = log_spaced(cfg.tau_min_ns, cfg.tau_max_ns, cfg.tau_cells);
    grid.delta_values_ueV = log_spaced(cfg.delta_min_GHz * kPlanck,
                                       cfg.delta_max_GHz * kPlanck, cfg.delta_cells);
    grid.tau_x_ns = cfg.tau_x_ns;

    if (cfg.check_convergence) {
        convergence_guard(cfg, {{cfg.tau_min_ns, grid.delta_values_ueV.front()},
                                {cfg.tau_min_ns, grid.delta_values_ueV.back()},
                                {cfg.tau_max_ns, grid.delta_values_ueV.front()},
                                {cfg.tau_max_ns, grid.delta_values_ueV.back()},
                                {grid.tau_values_ns[cfg.tau_cells / 2],
                                 grid.delta_values_ueV[cfg.delta_cells / 2]}});
    }

    const ConcurrenceMap map = sweep(grid, cfg.t_steps, cfg.workers, cfg.weighting);

    {
        auto os = open_output(cfg, "map.csv");
        write_header(os, cfg, "map",
                     {{"tau_cells", std::to_string(cfg.tau_cells)},
                      {"delta_cells", std::to_string(cfg.delta_cells)},
                      {"tau_min_ns", fmt9(cfg.tau_min_ns)},
                      {"tau_max_ns", fmt9(cfg.tau_max_ns)},
                      {"delta_min_GHz", fmt9(cfg.delta_min_GHz)},
                      {"delta_max_GHz", fmt9(cfg.delta_max_GHz)}});
        os << "tau_ns,delta_ueV,delta_GHz,cbar\n";
        for (size_t i = 0; i < grid.tau_values_ns.size(); ++i) {
            for (size_t j = 0; j < grid.delta_values_ueV.size(); ++j) {
                const double d = grid.delta_values_ueV[j];
                os << fmt9(grid.tau_values_ns[i]) << ',' << fmt9(d) << ','
                   << fmt9(d / kPlanck) << ',' << fmt9(map.at(i, j)) << '\n';
            }
        }
    }

    {
        auto os = open_output(cfg, contour_file_name(cfg.contour_level));
        write_header(os, cfg, "map", {{"contour_level", fmt9(cfg.contour_level)}});
        os << "tau_ns,delta_ueV\n";
        if (cfg.tau_cells < 2 || cfg.delta_cells < 2) {
            os << "# contour = empty\n";
        } else {
            try {
                for (const Polyline& line : contour(map, cfg.contour_level))
                    for (const ContourPoint& pt : line)
                        os << fmt9(pt.tau_ns) << ',' << fmt9(pt.delta_ueV) << '\n';
            } catch (const EmptyContour&) {
                os << "# contour = empty\n";
            }
        }
    }
    return kExitOk;
}

int cmd_trace(const RunConfig& cfg) {
    const CascadeParams p = cfg.cascade_params();
    const DetectorModel det = cfg.detector();
    const TimeGrid grid = cfg.time_grid();
    const double floor = kRateFloorFactor * p.n0 / p.tau_x_ns;

    if (cfg.check_convergence) convergence_guard(cfg, {{cfg.tau_ns, cfg.delta_ueV}});

    std::optional<int> dump_bin;
    if (cfg.proj_dump_t_ns) {
        const double k = std::round((*cfg.proj_dump_t_ns - grid.t_min) / grid.dt());
        dump_bin = std::clamp<int>(static_cast<int>(k), 0, grid.steps - 1);
    }

    auto os = open_output(cfg, "trace.csv");
    write_header(os, cfg, "trace");
    os << "t_ns,envelope,convolved_total,m_DD,m_DA,m_RL,m_RR,concurrence_t\n";
    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.point(k);
        ProjectionSet36 ps;
        ps.rates = convolved_rates(t, p, det);
        const double total = ps.total();
        const double conc = bin_concurrence(ps.rates, floor);
        os << fmt9(t) << ',' << fmt9(envelope(t, p)) << ',' << fmt9(total) << ','
           << fmt9(ps.at(Basis::D, Basis::D)) << ',' << fmt9(ps.at(Basis::D, Basis::A)) << ','
           << fmt9(ps.at(Basis::R, Basis::L)) << ',' << fmt9(ps.at(Basis::R, Basis::R)) << ','
           << fmt9(conc) << '\n';

        if (dump_bin && *dump_bin == k) {
            auto pos = open_output(cfg, "projections.csv");
            write_header(pos, cfg, "trace", {{"projection_dump_t_ns", fmt9(t)}});
            write_projection_csv(pos, ps);
        }
    }
    return kExitOk;
}

int cmd_erase(const RunConfig& cfg) {
    const CascadeParams p = cfg.cascade_params();
    const DetectorModel det = cfg.detector();
    const TimeGrid grid = cfg.time_grid();
    const double omega = cfg.omega_rad_ns.value_or(compensating_omega(cfg.delta_ueV));
    const TwoPhotonKet target = bell_rl_plus_lr();

    if (cfg.check_convergence) convergence_guard(cfg, {{cfg.tau_ns, cfg.delta_ueV}});

    const double gap = which_path_distinguishability(p, omega);

    auto os = open_output(cfg, "erase.csv");
    write_header(os, cfg, "erase", {{"omega_rad_per_ns", fmt9(omega)}});
    os << "t_ns,fidelity_before,fidelity_after,which_path_gap_ueV\n";
    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.point(k);
        const TwoPhotonKet before = qwp_pair_transform(psi(t, cfg.delta_ueV));
        const TwoPhotonKet after = erase(t, cfg.delta_ueV, omega);
        os << fmt9(t) << ',' << fmt9(std::norm(overlap(target, before))) << ','
           << fmt9(std::norm(overlap(target, after))) << ',' << fmt9(gap) << '\n';
    }

    const double cbar_before = cbar(p, det, grid, cfg.weighting);

    // The erased cascade precesses at the residual splitting delta - 4 hbar
    // omega between the |RL> and |LR> branches; zero at the compensating
    // drive, where the source is the stationary Bell state.
    PairSource after_src;
    after_src.branch_static = projector(Basis::R, Basis::L).amp;
    after_src.branch_precessing = projector(Basis::L, Basis::R).amp;
    after_src.branch_static *= 1.0 / std::sqrt(2.0);
    after_src.branch_precessing *= 1.0 / std::sqrt(2.0);
    double delta_eff = p.delta_ueV - 4.0 * kHbar * omega;
    if (delta_eff < 0.0) {
        std::swap(after_src.branch_static, after_src.branch_precessing);
        delta_eff = -delta_eff;
    }
    CascadeParams p_after{delta_eff, p.tau_x_ns, p.n0};
    const double cbar_after =
        cbar(after_src, p_after, det, grid_for_weighting(p_after, det, cfg.weighting, cfg.t_steps),
             cfg.weighting);

    os << "# rf_frequency_MHz = " << fmt9(rf_frequency_MHz(cfg.delta_ueV)) << "\n";
    os << "# cbar_before = " << fmt9(cbar_before) << "\n";
    os << "# cbar_after = " << fmt9(cbar_after) << "\n";
    return kExitOk;
}

int cmd_tomo(const RunConfig& cfg) {
    std::ifstream is(cfg.input_path);
    if (!is) throw InputDataError("cannot open input file " + cfg.input_path);
    const ProjectionSet36 ps = read_projection_csv(is);

    const DensityMatrix4 rho = reconstruct(ps);
    const double conc = concurrence(rho);
    const double fid = fidelity(rho, psi(0.0, 0.0));  // (|HH> + |VV>)/sqrt2

    auto os = open_output(cfg, "tomo.csv");
    write_header(os, cfg, "tomo", {{"input", cfg.input_path}});
    os << "re,im\n";
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            os << fmt9(rho.m(r, c).real()) << ',' << fmt9(rho.m(r, c).imag()) << '\n';

    os << "# concurrence = " << fmt9(conc) << "\n";
    os << "# fidelity_phi_plus = " << fmt9(fid) << "\n";
    os << "# purity = " << fmt9((rho.m * rho.m).trace().real()) << "\n";
    os << "# total_rate = " << fmt9(ps.total()) << "\n";
    static constexpr const char* kGroupNames[9] = {
        "HVxHV", "HVxDA", "HVxRL", "DAxHV", "DAxDA", "DAxRL", "RLxHV", "RLxDA", "RLxRL"};
    const auto sums = ps.group_sums();
    for (int g = 0; g < 9; ++g)
        os << "# group_sum_" << kGroupNames[g] << " = " << fmt9(sums[g]) << "\n";
    const double dev = ps.group_consistency();
    os << "# group_consistency_max_rel_dev = " << fmt9(dev) << "\n";
    if (dev > 1e-6)
        os << "# warning = group sums deviate beyond 1e-6 relative; "
              "the table is not consistent with a single physical source\n";
    return kExitOk;
}

}  // namespace qdc::cli
