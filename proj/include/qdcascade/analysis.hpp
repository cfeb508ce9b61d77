#pragma once

#include <vector>

#include "qdcascade/cascade.hpp"
#include "qdcascade/tomography.hpp"

namespace qdc {

struct TimeGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    int steps = 2000;  // number of grid points, uniform spacing

    double dt() const { return (t_max - t_min) / (steps - 1); }
    double point(int k) const { return t_min + k * dt(); }
    void validate() const;

    // Window covering the convolved pulse: [min(0, -6 sigma), 12 tau_x + 5 sigma].
    static TimeGrid for_params(const CascadeParams& p, const DetectorModel& det,
                               int steps = 2000);
};

enum class Weighting {
    // Weight each time bin by the convolved total rate, i.e. by the detected
    // pairs per bin. Default: reproduces the reference anchor values.
    Convolved,
    // Weight by the unconvolved emission rate n(t) instead.
    Emission,
};

// Default window for a weighting mode: the emission weight vanishes for
// t < 0, so its grid starts at zero (keeping the quadrature second order);
// the convolved weight needs the full pulse support.
TimeGrid grid_for_weighting(const CascadeParams& p, const DetectorModel& det, Weighting w,
                            int steps = 2000);

// Photon-weighted time average of the concurrence of the reconstructed
// state: quadrature of w(t) C(rho(t)) / quadrature of w(t) over the grid.
// Each bin's rho comes from the tomographic reconstruction of the 36
// convolved rates; bins below the rate floor inherit the concurrence of the
// nearest valid bin and contribute their analytic weight.
double cbar(const CascadeParams& p, const DetectorModel& det, const TimeGrid& grid,
            Weighting w = Weighting::Convolved);
double cbar(const PairSource& src, const CascadeParams& p, const DetectorModel& det,
            const TimeGrid& grid, Weighting w = Weighting::Convolved);

// Convergence-guarded variant: throws GridTooCoarse when halving the time
// step moves the result by more than 1e-4.
double cbar_checked(const CascadeParams& p, const DetectorModel& det, const TimeGrid& grid,
                    Weighting w = Weighting::Convolved);

struct SweepGrid {
    std::vector<double> tau_values_ns;    // strictly increasing
    std::vector<double> delta_values_ueV; // strictly increasing
    double tau_x_ns = 1.0;
    void validate() const;
};

std::vector<double> log_spaced(double lo, double hi, int n);

struct ConcurrenceMap {
    SweepGrid grid;
    std::vector<double> values;  // values[i * n_delta + j] for (tau_i, delta_j)

    double at(int tau_idx, int delta_idx) const {
        return values[static_cast<size_t>(tau_idx) * grid.delta_values_ueV.size() + delta_idx];
    }
    // Bilinear interpolation in (tau, delta) coordinates; queries are
    // clamped to the grid rectangle.
    double interpolate(double tau_ns, double delta_ueV) const;
};

// Element-wise cbar over the grid, distributed over `workers` threads.
// Deterministic: cell results do not depend on the worker count.
ConcurrenceMap sweep(const SweepGrid& grid, int time_steps, int workers,
                     Weighting w = Weighting::Convolved);

struct ContourPoint {
    double tau_ns;
    double delta_ueV;
};
using Polyline = std::vector<ContourPoint>;

// Marching-squares level set with linear interpolation along cell edges.
// Throws EmptyContour when the level is never crossed.
std::vector<Polyline> contour(const ConcurrenceMap& map, double level);

}  // namespace qdc
