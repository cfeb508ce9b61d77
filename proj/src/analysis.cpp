#include "qdcascade/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "qdcascade/errors.hpp"

namespace qdc {

void TimeGrid::validate() const {
    if (!(t_min < t_max)) throw std::invalid_argument("time grid requires t_min < t_max");
    if (steps < 2) throw std::invalid_argument("time grid requires at least 2 steps");
}

TimeGrid TimeGrid::for_params(const CascadeParams& p, const DetectorModel& det, int steps) {
    const double sigma = det.sigma();
    TimeGrid g;
    g.t_min = std::min(0.0, -6.0 * sigma);
    g.t_max = 12.0 * p.tau_x_ns + 5.0 * sigma;
    g.steps = steps;
    return g;
}

TimeGrid grid_for_weighting(const CascadeParams& p, const DetectorModel& det, Weighting w,
                            int steps) {
    TimeGrid g = TimeGrid::for_params(p, det, steps);
    if (w == Weighting::Emission) g.t_min = 0.0;
    return g;
}

namespace {

double trapezoid(const std::vector<double>& f, double dt) {
    double s = 0.5 * (f.front() + f.back());
    for (size_t k = 1; k + 1 < f.size(); ++k) s += f[k];
    return s * dt;
}

}  // namespace

double cbar(const PairSource& src, const CascadeParams& p, const DetectorModel& det,
            const TimeGrid& grid, Weighting w) {
    p.validate();
    det.validate();
    grid.validate();

    const double floor = kRateFloorFactor * p.n0 / p.tau_x_ns;
    const int n = grid.steps;

    std::vector<double> conc(n, -1.0);  // -1 marks a below-floor bin
    std::vector<double> weight(n, 0.0);
    std::vector<int> valid;
    valid.reserve(n);

    for (int k = 0; k < n; ++k) {
        const double t = grid.point(k);
        ProjectionSet36 ps;
        ps.rates = convolved_rates(t, src, p, det);
        const double total = ps.total();
        if (total >= floor) {
            conc[k] = concurrence(reconstruct(ps));
            valid.push_back(k);
        }
        weight[k] = (w == Weighting::Emission) ? envelope(t, p) : total;
    }

    if (valid.empty()) throw std::invalid_argument("time grid carries no detectable rate");

    // Below-floor bins inherit the concurrence of the nearest valid bin.
    for (int k = 0; k < n; ++k) {
        if (conc[k] >= 0.0) continue;
        auto it = std::lower_bound(valid.begin(), valid.end(), k);
        int best;
        if (it == valid.end()) {
            best = valid.back();
        } else if (it == valid.begin()) {
            best = valid.front();
        } else {
            best = (*it - k < k - *(it - 1)) ? *it : *(it - 1);
        }
        conc[k] = conc[best];
    }

    std::vector<double> weighted(n);
    for (int k = 0; k < n; ++k) weighted[k] = weight[k] * conc[k];

    const double den = trapezoid(weight, grid.dt());
    if (!(den > 0.0)) throw std::invalid_argument("time grid carries no weight");
    return std::clamp(trapezoid(weighted, grid.dt()) / den, 0.0, 1.0);
}

double cbar(const CascadeParams& p, const DetectorModel& det, const TimeGrid& grid,
            Weighting w) {
    return cbar(PairSource::cascade(), p, det, grid, w);
}

double cbar_checked(const CascadeParams& p, const DetectorModel& det, const TimeGrid& grid,
                    Weighting w) {
    const double coarse = cbar(p, det, grid, w);
    TimeGrid fine = grid;
    fine.steps = 2 * (grid.steps - 1) + 1;
    const double refined = cbar(p, det, fine, w);
    if (std::abs(refined - coarse) > 1e-4)
        throw GridTooCoarse("halving the time step moved cbar by " +
                            std::to_string(std::abs(refined - coarse)));
    return coarse;
}

void SweepGrid::validate() const {
    if (tau_values_ns.empty() || delta_values_ueV.empty())
        throw std::invalid_argument("sweep grid axes must be non-empty");
    if (!(tau_x_ns > 0.0)) throw std::invalid_argument("tau_x_ns must be positive");
    for (size_t i = 1; i < tau_values_ns.size(); ++i)
        if (!(tau_values_ns[i] > tau_values_ns[i - 1]))
            throw std::invalid_argument("tau axis must be strictly increasing");
    for (size_t j = 1; j < delta_values_ueV.size(); ++j)
        if (!(delta_values_ueV[j] > delta_values_ueV[j - 1]))
            throw std::invalid_argument("delta axis must be strictly increasing");
    for (double t : tau_values_ns)
        if (!(t >= 0.0)) throw std::invalid_argument("tau values must be nonnegative");
    for (double d : delta_values_ueV)
        if (!(d >= 0.0)) throw std::invalid_argument("delta values must be nonnegative");
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (n == 1) {
        if (!(lo >= 0.0)) throw std::invalid_argument("log_spaced requires lo >= 0");
        return {lo};
    }
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_spaced requires 0 < lo < hi and n >= 2");
    std::vector<double> v(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int k = 0; k < n; ++k) v[k] = lo * std::exp(k * step);
    v.front() = lo;
    v.back() = hi;
    return v;
}

double ConcurrenceMap::interpolate(double tau_ns, double delta_ueV) const {
    const auto& xs = grid.tau_values_ns;
    const auto& ys = grid.delta_values_ueV;
    const auto locate = [](const std::vector<double>& axis, double v) {
        const double c = std::clamp(v, axis.front(), axis.back());
        size_t i = std::upper_bound(axis.begin(), axis.end(), c) - axis.begin();
        i = std::clamp<size_t>(i, 1, axis.size() - 1) - 1;
        const double f = (c - axis[i]) / (axis[i + 1] - axis[i]);
        return std::pair<size_t, double>(i, f);
    };
    if (xs.size() == 1 && ys.size() == 1) return at(0, 0);
    if (xs.size() == 1) {
        const auto [j, fy] = locate(ys, delta_ueV);
        return (1 - fy) * at(0, j) + fy * at(0, j + 1);
    }
    if (ys.size() == 1) {
        const auto [i, fx] = locate(xs, tau_ns);
        return (1 - fx) * at(i, 0) + fx * at(i + 1, 0);
    }
    const auto [i, fx] = locate(xs, tau_ns);
    const auto [j, fy] = locate(ys, delta_ueV);
    return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
           (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
}

ConcurrenceMap sweep(const SweepGrid& grid, int time_steps, int workers, Weighting w) {
    grid.validate();
    const size_t nt = grid.tau_values_ns.size();
    const size_t nd = grid.delta_values_ueV.size();

    ConcurrenceMap map;
    map.grid = grid;
    map.values.assign(nt * nd, 0.0);

    const int nworkers = std::clamp<int>(workers, 1, 256);
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};

    const auto run = [&] {
        for (;;) {
            const size_t cell = next.fetch_add(1);
            if (cell >= nt * nd || failed.load()) break;
            const size_t i = cell / nd;
            const size_t j = cell % nd;
            try {
                CascadeParams p{grid.delta_values_ueV[j], grid.tau_x_ns, 1.0};
                DetectorModel det{grid.tau_values_ns[i]};
                map.values[cell] = cbar(p, det, grid_for_weighting(p, det, w, time_steps), w);
            } catch (const std::exception& e) {
                failed.store(true);
                throw std::runtime_error("sweep cell (tau = " +
                                         std::to_string(grid.tau_values_ns[i]) + " ns, delta = " +
                                         std::to_string(grid.delta_values_ueV[j]) +
                                         " ueV): " + e.what());
            }
        }
    };

    if (nworkers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (int k = 0; k < nworkers; ++k) {
            pool.emplace_back([&] {
                try {
                    run();
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }
    return map;
}

namespace {

// Grid-edge crossings for marching squares. Edges are identified by their
// low corner and direction so that adjacent cells share bit-identical
// vertices.
struct EdgeKey {
    int i, j;
    bool along_tau;  // true: (i,j)-(i+1,j); false: (i,j)-(i,j+1)
    bool operator<(const EdgeKey& o) const {
        return std::tie(i, j, along_tau) < std::tie(o.i, o.j, o.along_tau);
    }
};

}  // namespace

std::vector<Polyline> contour(const ConcurrenceMap& map, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("contour level must lie in (0, 1)");
    const auto& xs = map.grid.tau_values_ns;
    const auto& ys = map.grid.delta_values_ueV;
    const int nt = static_cast<int>(xs.size());
    const int nd = static_cast<int>(ys.size());
    if (nt < 2 || nd < 2) throw std::invalid_argument("contour requires a 2x2 or larger map");

    const auto inside = [&](int i, int j) { return map.at(i, j) >= level; };

    std::map<EdgeKey, ContourPoint> crossings;
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nd; ++j) {
            if (i + 1 < nt && inside(i, j) != inside(i + 1, j)) {
                const double f = (level - map.at(i, j)) / (map.at(i + 1, j) - map.at(i, j));
                crossings[{i, j, true}] = {xs[i] + f * (xs[i + 1] - xs[i]), ys[j]};
            }
            if (j + 1 < nd && inside(i, j) != inside(i, j + 1)) {
                const double f = (level - map.at(i, j)) / (map.at(i, j + 1) - map.at(i, j));
                crossings[{i, j, false}] = {xs[i], ys[j] + f * (ys[j + 1] - ys[j])};
            }
        }
    }
    if (crossings.empty())
        throw EmptyContour("level " + std::to_string(level) + " is never crossed");

    // Per-cell segments connecting the crossed edges.
    std::map<EdgeKey, std::vector<EdgeKey>> links;
    for (int i = 0; i + 1 < nt; ++i) {
        for (int j = 0; j + 1 < nd; ++j) {
            std::vector<EdgeKey> cell;
            const EdgeKey bottom{i, j, true};
            const EdgeKey top{i, j + 1, true};
            const EdgeKey left{i, j, false};
            const EdgeKey right{i + 1, j, false};
            for (const EdgeKey& e : {bottom, right, top, left})
                if (crossings.count(e)) cell.push_back(e);

            if (cell.size() == 2) {
                links[cell[0]].push_back(cell[1]);
                links[cell[1]].push_back(cell[0]);
            } else if (cell.size() == 4) {
                // Saddle cell: split along the diagonal suggested by the mean.
                const double mean = 0.25 * (map.at(i, j) + map.at(i + 1, j) +
                                            map.at(i, j + 1) + map.at(i + 1, j + 1));
                const bool pair_bl = (mean >= level) == inside(i + 1, j);
                const auto connect = [&](const EdgeKey& a, const EdgeKey& b) {
                    links[a].push_back(b);
                    links[b].push_back(a);
                };
                if (pair_bl) {
                    connect(bottom, right);
                    connect(top, left);
                } else {
                    connect(bottom, left);
                    connect(top, right);
                }
            }
        }
    }

    // Stitch linked edges into polylines, open chains first.
    std::map<EdgeKey, bool> used;
    std::vector<Polyline> lines;
    const auto walk = [&](const EdgeKey& start) {
        Polyline line;
        EdgeKey cur = start;
        used[cur] = true;
        line.push_back(crossings.at(cur));
        for (;;) {
            bool advanced = false;
            for (const EdgeKey& nb : links.at(cur)) {
                if (used.count(nb) && used[nb]) continue;
                used[nb] = true;
                line.push_back(crossings.at(nb));
                cur = nb;
                advanced = true;
                break;
            }
            if (!advanced) break;
        }
        return line;
    };

    for (const auto& [edge, nbrs] : links) {
        if (nbrs.size() == 1 && !used[edge]) lines.push_back(walk(edge));
    }
    for (const auto& [edge, nbrs] : links) {
        if (!used[edge]) {
            Polyline loop = walk(edge);
            loop.push_back(loop.front());  // close the loop
            lines.push_back(std::move(loop));
        }
    }
    return lines;
}

}  // namespace qdc
