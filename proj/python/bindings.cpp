#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdcascade/analysis.hpp"
#include "qdcascade/eraser.hpp"

namespace py = pybind11;
using namespace qdc;

namespace {

ProjectionSet36 projections_from_dict(const py::dict& d) {
    if (d.size() != 36) throw py::value_error("expected exactly 36 basis pairs");
    ProjectionSet36 p;
    for (const auto& item : d) {
        const std::string key = py::cast<std::string>(item.first);
        if (key.size() != 2) throw py::value_error("keys must be two basis symbols, e.g. 'HV'");
        p.at(basis_from_symbol(key[0]), basis_from_symbol(key[1])) =
            py::cast<double>(item.second);
    }
    return p;
}

py::dict projections_to_dict(const ProjectionSet36& p) {
    py::dict d;
    for (Basis i : kAllBases) {
        for (Basis j : kAllBases) {
            const std::string key = {basis_symbol(i), basis_symbol(j)};
            d[py::str(key)] = p.at(i, j);
        }
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum-dot biexciton-exciton cascade simulator";
    m.attr("HBAR_UEV_NS") = kHbar;
    m.attr("PLANCK_UEV_NS") = kPlanck;

    py::enum_<Basis>(m, "Basis")
        .value("H", Basis::H)
        .value("V", Basis::V)
        .value("D", Basis::D)
        .value("A", Basis::A)
        .value("R", Basis::R)
        .value("L", Basis::L);

    py::class_<CascadeParams>(m, "CascadeParams")
        .def(py::init<double, double, double>(), py::arg("delta_ueV"), py::arg("tau_x_ns") = 1.0,
             py::arg("n0") = 1.0)
        .def_readwrite("delta_ueV", &CascadeParams::delta_ueV)
        .def_readwrite("tau_x_ns", &CascadeParams::tau_x_ns)
        .def_readwrite("n0", &CascadeParams::n0);

    py::class_<DetectorModel>(m, "DetectorModel")
        .def(py::init<double>(), py::arg("tau_fwhm_ns"))
        .def_readwrite("tau_fwhm_ns", &DetectorModel::tau_fwhm_ns)
        .def("sigma", &DetectorModel::sigma);

    // polarization kets and operators move across the boundary as numpy arrays
    m.def("basis_ket", [](Basis b) { return Ket2(basis_ket(b)); });
    m.def("projector", [](Basis i, Basis j) { return Ket4(projector(i, j).amp); });
    m.def("psi", [](double t, double delta) { return Ket4(psi(t, delta).amp); },
          py::arg("t_ns"), py::arg("delta_ueV"));
    m.def("jones_hwp", &jones_hwp, py::arg("theta"));
    m.def("jones_qwp", &jones_qwp, py::arg("theta"));
    m.def(
        "apply_local",
        [](const JonesOperator& a, const JonesOperator& b, const Ket4& s) {
            return Ket4(apply_local(a, b, TwoPhotonKet(s)).amp);
        },
        py::arg("op_a"), py::arg("op_b"), py::arg("state"));

    m.def("concurrence",
          [](const Eigen::Matrix4cd& rho) { return concurrence(DensityMatrix4(rho)); });
    m.def("fidelity", [](const Eigen::Matrix4cd& rho, const Ket4& target) {
        return fidelity(DensityMatrix4(rho), TwoPhotonKet(target));
    });

    m.def("envelope", &envelope, py::arg("t_ns"), py::arg("params"));
    m.def("projection_rate", &projection_rate, py::arg("i"), py::arg("j"), py::arg("t_ns"),
          py::arg("params"));
    m.def(
        "convolved_rate",
        [](Basis i, Basis j, double t, const CascadeParams& p, const DetectorModel& det) {
            return convolved_rate(i, j, t, p, det);
        },
        py::arg("i"), py::arg("j"), py::arg("t_ns"), py::arg("params"), py::arg("detector"));
    m.def(
        "rho_of_t",
        [](double t, const CascadeParams& p, const DetectorModel& det)
            -> std::optional<std::pair<Eigen::Matrix4cd, double>> {
            const auto bin = rho_of_t(t, p, det);
            if (!bin) return std::nullopt;
            return std::make_pair(bin->rho.m, bin->total_rate);
        },
        py::arg("t_ns"), py::arg("params"), py::arg("detector"),
        "density matrix and total rate at one correlation time, or None below the rate floor");

    m.def(
        "measure_projections",
        [](const Eigen::Matrix4cd& rho, double total) {
            return projections_to_dict(measure_projections(DensityMatrix4(rho), total));
        },
        py::arg("rho"), py::arg("total_rate") = 1.0);
    m.def(
        "reconstruct",
        [](const py::dict& rates) { return reconstruct(projections_from_dict(rates)).m; },
        py::arg("rates"), "density matrix from a {'HH': rate, ...} projection table");
    m.def(
        "linear_reconstruct",
        [](const py::dict& rates) { return linear_reconstruct(projections_from_dict(rates)); },
        py::arg("rates"));

    m.def("compensating_omega", &compensating_omega, py::arg("delta_ueV"));
    m.def("rf_frequency_MHz", &rf_frequency_MHz, py::arg("delta_ueV"));
    m.def("bell_rl_plus_lr", [] { return Ket4(bell_rl_plus_lr().amp); });
    m.def(
        "qwp_pair_transform",
        [](const Ket4& s) { return Ket4(qwp_pair_transform(TwoPhotonKet(s)).amp); },
        py::arg("state"));
    m.def("rotating_hwp", &rotating_hwp, py::arg("t_ns"), py::arg("omega_rad_ns"));
    m.def(
        "erase",
        [](double t, double delta, std::optional<double> omega) {
            return Ket4(
                erase(t, delta, omega.value_or(compensating_omega(delta))).amp);
        },
        py::arg("t_ns"), py::arg("delta_ueV"), py::arg("omega_rad_ns") = std::nullopt);
    m.def(
        "which_path_distinguishability",
        [](double delta, double omega) {
            return which_path_distinguishability(CascadeParams{delta, 1.0, 1.0}, omega);
        },
        py::arg("delta_ueV"), py::arg("omega_rad_ns"));
    m.def(
        "shift_photon",
        [](const std::vector<std::tuple<std::string, double, Complex>>& modes, double omega) {
            FreqTaggedPhoton p;
            for (const auto& [pol, det, amp] : modes) {
                if (pol != "R" && pol != "L") throw py::value_error("polarization must be R or L");
                p.modes.push_back({pol == "R" ? Circular::R : Circular::L, det, amp});
            }
            std::vector<std::tuple<std::string, double, Complex>> out;
            for (const auto& mode : shift_photon(p, omega).modes)
                out.emplace_back(mode.pol == Circular::R ? "R" : "L", mode.detuning_ueV, mode.amp);
            return out;
        },
        py::arg("modes"), py::arg("omega_rad_ns"),
        "single-sideband shift of [(pol, detuning_ueV, amplitude), ...] mode lists");

    m.def(
        "cbar",
        [](const CascadeParams& p, const DetectorModel& det, int steps, const std::string& w) {
            const Weighting wt = w == "n" ? Weighting::Emission : Weighting::Convolved;
            return cbar(p, det, TimeGrid::for_params(p, det, steps), wt);
        },
        py::arg("params"), py::arg("detector"), py::arg("t_steps") = 2000,
        py::arg("weighting") = "convolved",
        "photon-weighted time-averaged concurrence of the reconstructed state");
    m.def(
        "cbar_erased",
        [](const CascadeParams& p, const DetectorModel& det, int steps) {
            return cbar(PairSource::constant(bell_rl_plus_lr()), p, det,
                        TimeGrid::for_params(p, det, steps));
        },
        py::arg("params"), py::arg("detector"), py::arg("t_steps") = 2000);

    m.def(
        "sweep",
        [](const std::vector<double>& taus, const std::vector<double>& deltas, double tau_x,
           int steps, int workers) {
            SweepGrid g{taus, deltas, tau_x};
            const ConcurrenceMap map = sweep(g, steps, workers);
            py::array_t<double> out({taus.size(), deltas.size()});
            auto r = out.mutable_unchecked<2>();
            for (size_t i = 0; i < taus.size(); ++i)
                for (size_t j = 0; j < deltas.size(); ++j) r(i, j) = map.at(i, j);
            return out;
        },
        py::arg("tau_values_ns"), py::arg("delta_values_ueV"), py::arg("tau_x_ns") = 1.0,
        py::arg("t_steps") = 2000, py::arg("workers") = 8);

    m.def(
        "contour",
        [](const std::vector<double>& taus, const std::vector<double>& deltas,
           const py::array_t<double>& values, double level) {
            ConcurrenceMap map;
            map.grid = SweepGrid{taus, deltas, 1.0};
            const auto r = values.unchecked<2>();
            for (py::ssize_t i = 0; i < r.shape(0); ++i)
                for (py::ssize_t j = 0; j < r.shape(1); ++j) map.values.push_back(r(i, j));
            std::vector<std::vector<std::pair<double, double>>> out;
            for (const Polyline& line : contour(map, level)) {
                std::vector<std::pair<double, double>> pts;
                for (const ContourPoint& pt : line) pts.emplace_back(pt.tau_ns, pt.delta_ueV);
                out.push_back(std::move(pts));
            }
            return out;
        },
        py::arg("tau_values_ns"), py::arg("delta_values_ueV"), py::arg("values"),
        py::arg("level"));
}
