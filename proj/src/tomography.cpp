#include "qdcascade/tomography.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qdcascade/errors.hpp"

namespace qdc {

namespace {

// Hermitian basis: 4 diagonal units, then for each a < b the symmetric pair
// (E_ab + E_ba) and the antisymmetric pair i(E_ab - E_ba).
std::array<Eigen::Matrix4cd, 16> hermitian_basis() {
    std::array<Eigen::Matrix4cd, 16> g;
    int n = 0;
    for (int a = 0; a < 4; ++a) {
        g[n] = Eigen::Matrix4cd::Zero();
        g[n](a, a) = 1.0;
        ++n;
    }
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            g[n] = Eigen::Matrix4cd::Zero();
            g[n](a, b) = 1.0;
            g[n](b, a) = 1.0;
            ++n;
            g[n] = Eigen::Matrix4cd::Zero();
            g[n](a, b) = Complex(0.0, 1.0);
            g[n](b, a) = Complex(0.0, -1.0);
            ++n;
        }
    }
    return g;
}

struct Design {
    std::array<Eigen::Matrix4cd, 16> basis;
    Eigen::Matrix<double, 16, 36> pinv;  // least-squares inverse of the 36x16 design
};

const Design& design() {
    static const Design d = [] {
        Design dd;
        dd.basis = hermitian_basis();
        Eigen::Matrix<double, 36, 16> a;
        for (Basis i : kAllBases) {
            for (Basis j : kAllBases) {
                const Ket4 proj = projector(i, j).amp;
                for (int m = 0; m < 16; ++m)
                    a(pair_index(i, j), m) = proj.dot(dd.basis[m] * proj).real();
            }
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
        if (cod.rank() != 16)
            throw SingularDesign("36-projector design matrix is rank-deficient");
        dd.pinv = cod.pseudoInverse();
        return dd;
    }();
    return d;
}

}  // namespace

std::array<double, 9> ProjectionSet36::group_sums() const {
    constexpr std::array<std::array<Basis, 2>, 3> classes = {{
        {Basis::H, Basis::V}, {Basis::D, Basis::A}, {Basis::R, Basis::L}}};
    std::array<double, 9> sums{};
    int n = 0;
    for (const auto& ci : classes) {
        for (const auto& cj : classes) {
            double s = 0.0;
            for (Basis i : ci)
                for (Basis j : cj) s += at(i, j);
            sums[n++] = s;
        }
    }
    return sums;
}

double ProjectionSet36::total() const {
    double s = 0.0;
    for (double r : rates) s += r;
    return s / 9.0;
}

double ProjectionSet36::group_consistency() const {
    const double t = total();
    if (t <= 0.0) return 0.0;
    double worst = 0.0;
    for (double s : group_sums()) worst = std::max(worst, std::abs(s - t) / t);
    return worst;
}

void ProjectionSet36::validate() const {
    for (double r : rates)
        if (!std::isfinite(r) || r < 0.0)
            throw std::invalid_argument("projection rates must be finite and nonnegative");
}

ProjectionSet36 measure_projections(const DensityMatrix4& rho, double total_rate) {
    ProjectionSet36 out;
    for (Basis i : kAllBases) {
        for (Basis j : kAllBases) {
            const Ket4 proj = projector(i, j).amp;
            const double prob = proj.dot(rho.m * proj).real();
            out.at(i, j) = total_rate * std::max(prob, 0.0);
        }
    }
    return out;
}

Eigen::Matrix4cd linear_reconstruct(const ProjectionSet36& p) {
    p.validate();
    const double t = p.total();
    if (t <= 0.0) return Eigen::Matrix4cd::Identity() * 0.25;

    Eigen::Matrix<double, 36, 1> y;
    for (int k = 0; k < 36; ++k) y(k) = p.rates[k] / t;

    const Design& d = design();
    const Eigen::Matrix<double, 16, 1> x = d.pinv * y;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int m = 0; m < 16; ++m) rho += x(m) * d.basis[m];

    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-300) return Eigen::Matrix4cd::Identity() * 0.25;
    return rho / tr;
}

DensityMatrix4 project_physical(const Eigen::Matrix4cd& raw) {
    const double herm_residual = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
    if (herm_residual > 1e-8)
        throw NotHermitian("symmetrization residual " + std::to_string(herm_residual) +
                           " exceeds 1e-8");
    const Eigen::Matrix4cd h = 0.5 * (raw + raw.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    const double s = ev.sum();
    if (s <= 0.0) return DensityMatrix4::maximally_mixed();
    ev /= s;
    return DensityMatrix4(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
}

DensityMatrix4 reconstruct(const ProjectionSet36& p) {
    return project_physical(linear_reconstruct(p));
}

void write_projection_csv(std::ostream& os, const ProjectionSet36& p) {
    os << "basis_xx,basis_x,rate\n";
    char buf[40];
    for (Basis i : kAllBases) {
        for (Basis j : kAllBases) {
            std::snprintf(buf, sizeof(buf), "%.9g", p.at(i, j));
            os << basis_symbol(i) << ',' << basis_symbol(j) << ',' << buf << '\n';
        }
    }
}

ProjectionSet36 read_projection_csv(std::istream& is) {
    ProjectionSet36 out;
    std::array<bool, 36> seen{};
    std::string line;
    int row = 0;
    int data_rows = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        if (line == "basis_xx,basis_x,rate" || line.rfind("basis_xx,", 0) == 0) continue;

        std::istringstream ss(line);
        std::string fi, fj, fr;
        if (!std::getline(ss, fi, ',') || !std::getline(ss, fj, ',') || !std::getline(ss, fr))
            throw InputDataError("expected 3 comma-separated fields", row);
        if (fi.size() != 1 || fj.size() != 1)
            throw InputDataError("basis symbols must be single characters", row);

        Basis bi, bj;
        try {
            bi = basis_from_symbol(fi[0]);
            bj = basis_from_symbol(fj[0]);
        } catch (const std::invalid_argument& e) {
            throw InputDataError(e.what(), row);
        }

        double rate = 0.0;
        try {
            size_t pos = 0;
            rate = std::stod(fr, &pos);
            while (pos < fr.size() && std::isspace(static_cast<unsigned char>(fr[pos]))) ++pos;
            if (pos != fr.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw InputDataError("cannot parse rate '" + fr + "'", row);
        }
        if (!std::isfinite(rate) || rate < 0.0)
            throw InputDataError("rate must be finite and nonnegative", row);

        const int idx = pair_index(bi, bj);
        if (seen[idx])
            throw InputDataError(std::string("duplicate basis pair ") + fi[0] + fj[0], row);
        seen[idx] = true;
        out.rates[idx] = rate;
        ++data_rows;
    }
    if (data_rows != 36) {
        for (Basis i : kAllBases)
            for (Basis j : kAllBases)
                if (!seen[pair_index(i, j)])
                    throw InputDataError(std::string("missing basis pair ") + basis_symbol(i) +
                                         basis_symbol(j));
    }
    return out;
}

}  // namespace qdc
