#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <vector>

#include "qdcascade/cli.hpp"
#include "qdcascade/eraser.hpp"
#include "qdcascade/errors.hpp"

using namespace qdc;
using namespace qdc::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<std::string> body_lines(const fs::path& file) {
    std::ifstream is(file);
    REQUIRE(is.good());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

std::map<std::string, std::string> footer_entries(const fs::path& file) {
    std::ifstream is(file);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) != 0) continue;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        out[line.substr(2, eq - 2)] = line.substr(eq + 3);
    }
    return out;
}

std::vector<double> split_row(const std::string& line) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    return row;
}

}  // namespace

TEST_CASE("trace command") {
    SUBCASE("zero splitting keeps unit concurrence on every valid row") {
        TempDir dir("qdc_trace_zero");
        RunConfig cfg;
        cfg.delta_ueV = 0.0;
        cfg.tau_ns = 0.3;
        cfg.t_steps = 200;
        cfg.out_dir = dir.path.string();
        REQUIRE(cmd_trace(cfg) == kExitOk);
        const auto rows = body_lines(dir.path / "trace.csv");
        REQUIRE(rows.size() == 201);  // header row + 200 samples
        for (size_t k = 1; k < rows.size(); ++k) {
            const auto row = split_row(rows[k]);
            if (std::isnan(row[7])) continue;
            CHECK(row[7] == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    SUBCASE("ideal detector shows the bare oscillation in m_DD") {
        TempDir dir("qdc_trace_osc");
        RunConfig cfg;
        cfg.tau_ns = 0.0;  // delta stays at the 1 GHz default
        cfg.t_steps = 400;
        cfg.out_dir = dir.path.string();
        REQUIRE(cmd_trace(cfg) == kExitOk);
        const auto rows = body_lines(dir.path / "trace.csv");
        for (size_t k = 1; k < rows.size(); k += 37) {
            const auto row = split_row(rows[k]);
            const double t = row[0];
            if (row[2] <= 0.0) continue;
            const double expected = (1.0 + std::cos(2.0 * M_PI * t)) / 4.0;
            CHECK(row[3] / row[2] == doctest::Approx(expected).epsilon(5e-8));
        }
    }

    SUBCASE("time-resolved concurrence approaches the visibility plateau") {
        TempDir dir("qdc_trace_vis");
        RunConfig cfg;
        cfg.tau_ns = 0.3;
        cfg.t_steps = 1200;
        cfg.out_dir = dir.path.string();
        REQUIRE(cmd_trace(cfg) == kExitOk);
        const auto rows = body_lines(dir.path / "trace.csv");
        const double sigma = DetectorModel{0.3}.sigma();
        const double expected = std::exp(-0.5 * std::pow(kPlanck * sigma / kHbar, 2.0));
        double best_t = 1e9, got = 0.0;
        for (size_t k = 1; k < rows.size(); ++k) {
            const auto row = split_row(rows[k]);
            if (std::abs(row[0] - 2.0) < std::abs(best_t - 2.0)) {
                best_t = row[0];
                got = row[7];
            }
        }
        CHECK(std::abs(got - expected) < 1e-3);
    }

    SUBCASE("projection dump round-trips through the tomo command") {
        TempDir dir("qdc_trace_dump");
        RunConfig cfg;
        cfg.tau_ns = 0.3;
        cfg.t_steps = 300;
        cfg.proj_dump_t_ns = 0.8;
        cfg.out_dir = dir.path.string();
        REQUIRE(cmd_trace(cfg) == kExitOk);

        std::ifstream is(dir.path / "projections.csv");
        const ProjectionSet36 ps = read_projection_csv(is);
        const DensityMatrix4 rho = reconstruct(ps);

        // the dump lands on the grid point nearest the requested time
        const TimeGrid grid = cfg.time_grid();
        const double t_bin =
            grid.point(static_cast<int>(std::round((0.8 - grid.t_min) / grid.dt())));
        const auto direct = rho_of_t(t_bin, cfg.cascade_params(), cfg.detector());
        REQUIRE(direct.has_value());
        CHECK((rho.m - direct->rho.m).norm() < 1e-9);
    }
}

TEST_CASE("erase command") {
    TempDir dir("qdc_erase");
    RunConfig cfg;
    cfg.delta_ueV = 10.0;
    cfg.tau_ns = 1.0;
    cfg.t_steps = 300;
    cfg.out_dir = dir.path.string();
    REQUIRE(cmd_erase(cfg) == kExitOk);

    const auto footer = footer_entries(dir.path / "erase.csv");
    CHECK(std::stod(footer.at("rf_frequency_MHz")) == doctest::Approx(604.5).epsilon(2e-4));
    CHECK(std::stod(footer.at("cbar_after")) == doctest::Approx(1.0).epsilon(1e-6));

    const auto rows = body_lines(dir.path / "erase.csv");
    for (size_t k = 1; k < rows.size(); k += 13) {
        const auto row = split_row(rows[k]);
        CHECK(row[2] == doctest::Approx(1.0).epsilon(1e-12));  // fidelity_after
        CHECK(row[3] == 0.0);                                  // which-path gap
    }
}

TEST_CASE("erase command at the 1 GHz / 1 ns anchor") {
    TempDir dir("qdc_erase_anchor");
    RunConfig cfg;
    cfg.tau_ns = 1.0;
    cfg.out_dir = dir.path.string();
    REQUIRE(cmd_erase(cfg) == kExitOk);
    const auto footer = footer_entries(dir.path / "erase.csv");
    CHECK(std::stod(footer.at("cbar_before")) == doctest::Approx(0.19).epsilon(0.11));
    CHECK(std::stod(footer.at("cbar_after")) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("tomo command") {
    SUBCASE("Bell-state rates") {
        TempDir dir("qdc_tomo_bell");
        const DensityMatrix4 bell = DensityMatrix4::pure(psi(0.0, 0.0));
        {
            std::ofstream os(dir.path / "rates.csv");
            write_projection_csv(os, measure_projections(bell, 1.0));
        }
        RunConfig cfg;
        cfg.input_path = (dir.path / "rates.csv").string();
        cfg.out_dir = dir.path.string();
        REQUIRE(cmd_tomo(cfg) == kExitOk);
        const auto footer = footer_entries(dir.path / "tomo.csv");
        CHECK(std::stod(footer.at("concurrence")) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::stod(footer.at("fidelity_phi_plus")) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(body_lines(dir.path / "tomo.csv").size() == 17);  // header + 16 entries
    }

    SUBCASE("uniform rates") {
        TempDir dir("qdc_tomo_flat");
        {
            std::ofstream os(dir.path / "rates.csv");
            ProjectionSet36 p;
            p.rates.fill(0.25);
            write_projection_csv(os, p);
        }
        RunConfig cfg;
        cfg.input_path = (dir.path / "rates.csv").string();
        cfg.out_dir = dir.path.string();
        REQUIRE(cmd_tomo(cfg) == kExitOk);
        const auto footer = footer_entries(dir.path / "tomo.csv");
        CHECK(std::stod(footer.at("concurrence")) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(std::stod(footer.at("purity")) == doctest::Approx(0.25).epsilon(1e-9));
    }

    SUBCASE("inconsistent rates raise the diagnostics warning") {
        TempDir dir("qdc_tomo_inconsistent");
        {
            std::ofstream os(dir.path / "rates.csv");
            ProjectionSet36 p = measure_projections(DensityMatrix4::pure(psi(0.0, 0.0)), 1.0);
            p.at(Basis::H, Basis::H) *= 1.5;  // break the group agreement
            write_projection_csv(os, p);
        }
        RunConfig cfg;
        cfg.input_path = (dir.path / "rates.csv").string();
        cfg.out_dir = dir.path.string();
        REQUIRE(cmd_tomo(cfg) == kExitOk);
        const auto footer = footer_entries(dir.path / "tomo.csv");
        CHECK(std::stod(footer.at("group_consistency_max_rel_dev")) > 1e-6);
        std::ifstream is(dir.path / "tomo.csv");
        const std::string text((std::istreambuf_iterator<char>(is)),
                               std::istreambuf_iterator<char>());
        CHECK(text.find("# warning") != std::string::npos);
    }

    SUBCASE("malformed input exits with the data error code") {
        TempDir dir("qdc_tomo_bad");
        {
            std::ofstream os(dir.path / "bad.csv");
            os << "basis_xx,basis_x,rate\nH,H,-1.0\n";
        }
        const std::string input = (dir.path / "bad.csv").string();
        const char* argv[] = {"qdcascade", "tomo", "--input", input.c_str(),
                              "--out", dir.path.c_str()};
        CHECK(run_cli(6, argv) == kExitInputData);
    }
}

TEST_CASE("map command on a reduced grid") {
    TempDir dir("qdc_map_small");
    RunConfig cfg;
    cfg.tau_cells = 8;
    cfg.delta_cells = 6;
    cfg.tau_min_ns = 0.005;
    cfg.tau_max_ns = 1.5;
    cfg.delta_min_GHz = 0.2;
    cfg.delta_max_GHz = 5.0;
    cfg.t_steps = 500;
    cfg.workers = 4;
    cfg.out_dir = dir.path.string();
    REQUIRE(cmd_map(cfg) == kExitOk);

    const auto rows = body_lines(dir.path / "map.csv");
    REQUIRE(rows.size() == 1 + 8 * 6);
    CHECK(rows[0] == "tau_ns,delta_ueV,delta_GHz,cbar");
    for (size_t k = 1; k < rows.size(); ++k) {
        const auto row = split_row(rows[k]);
        REQUIRE(row.size() == 4);
        CHECK(row[1] == doctest::Approx(row[2] * kPlanck).epsilon(1e-7));
        CHECK(row[3] >= 0.0);
        CHECK(row[3] <= 1.0);
    }

    // contour rows re-evaluate into the declared band
    const auto contour_rows = body_lines(dir.path / "contour_0.99.csv");
    REQUIRE(contour_rows.size() > 1);
    CHECK(contour_rows[0] == "tau_ns,delta_ueV");
}

TEST_CASE("single-cell map at zero splitting") {
    TempDir dir("qdc_map_single");
    RunConfig cfg;
    cfg.tau_cells = 1;
    cfg.delta_cells = 1;
    cfg.delta_min_GHz = 0.0;
    cfg.tau_min_ns = 0.3;
    cfg.t_steps = 400;
    cfg.out_dir = dir.path.string();
    REQUIRE(cmd_map(cfg) == kExitOk);
    const auto rows = body_lines(dir.path / "map.csv");
    REQUIRE(rows.size() == 2);
    const auto row = split_row(rows[1]);
    CHECK(row[1] == 0.0);                                    // delta_ueV
    CHECK(row[3] == doctest::Approx(1.0).epsilon(1e-6));     // cbar
    CHECK(body_lines(dir.path / "contour_0.99.csv").size() == 1);  // header only
}

TEST_CASE("map determinism across worker counts") {
    TempDir dir_a("qdc_map_det_a");
    TempDir dir_b("qdc_map_det_b");
    RunConfig cfg;
    cfg.tau_cells = 5;
    cfg.delta_cells = 4;
    cfg.t_steps = 300;
    cfg.out_dir = dir_a.path.string();
    cfg.workers = 1;
    REQUIRE(cmd_map(cfg) == kExitOk);
    cfg.out_dir = dir_b.path.string();
    cfg.workers = 6;
    REQUIRE(cmd_map(cfg) == kExitOk);
    CHECK(body_lines(dir_a.path / "map.csv") == body_lines(dir_b.path / "map.csv"));
    CHECK(body_lines(dir_a.path / "contour_0.99.csv") ==
          body_lines(dir_b.path / "contour_0.99.csv"));
}

TEST_CASE("command line surface") {
    TempDir dir("qdc_cli");

    SUBCASE("unknown flag is a config error") {
        const char* argv[] = {"qdcascade", "trace", "--no-such-flag"};
        CHECK(run_cli(3, argv) == kExitConfig);
    }

    SUBCASE("conflicting delta units are a config error") {
        const char* argv[] = {"qdcascade", "trace", "--delta-ueV", "1", "--delta-GHz", "1"};
        CHECK(run_cli(6, argv) == kExitConfig);
    }

    SUBCASE("config file values are applied and flags win") {
        const fs::path conf = dir.path / "run.conf";
        {
            std::ofstream os(conf);
            os << "delta-GHz=0.5\n";
            os << "tau-ns=0.25\n";
            os << "t-steps=150\n";
        }
        const std::string out = (dir.path / "run").string();
        const std::string conf_s = conf.string();
        const char* argv[] = {"qdcascade", "trace", "--config", conf_s.c_str(),
                              "--tau-ns",  "0.5",   "--out",    out.c_str()};
        REQUIRE(run_cli(8, argv) == 0);
        const auto footer = footer_entries(fs::path(out) / "trace.csv");
        CHECK(std::stod(footer.at("tau_ns")) == doctest::Approx(0.5));          // flag wins
        CHECK(std::stod(footer.at("delta_GHz")) == doctest::Approx(0.5));       // from file
        CHECK(std::stod(footer.at("t_steps")) == doctest::Approx(150));         // from file
    }

    SUBCASE("unknown config key is a config error") {
        const fs::path conf = dir.path / "bad.conf";
        {
            std::ofstream os(conf);
            os << "no-such-key=1\n";
        }
        const std::string conf_s = conf.string();
        const char* argv[] = {"qdcascade", "trace", "--config", conf_s.c_str()};
        CHECK(run_cli(4, argv) == kExitConfig);
    }

    SUBCASE("convergence guard exit code") {
        const std::string out = (dir.path / "conv").string();
        const char* argv[] = {"qdcascade", "trace",  "--t-steps", "8", "--tau-ns", "1.0",
                              "--check-convergence", "--out",     out.c_str()};
        CHECK(run_cli(9, argv) == kExitConvergence);
    }
}
