#pragma once

#include <array>
#include <iosfwd>

#include "qdcascade/polarization.hpp"

namespace qdc {

// The 36 projection rates m_ij over {H,V,D,A,R,L} x {H,V,D,A,R,L},
// indexed by pair_index(i, j). The 9 pairings of complete single-photon
// bases ({H,V},{D,A},{R,L} per arm) partition the table into groups whose
// sums all estimate the same total rate.
struct ProjectionSet36 {
    std::array<double, 36> rates{};

    double& at(Basis i, Basis j) { return rates[pair_index(i, j)]; }
    double at(Basis i, Basis j) const { return rates[pair_index(i, j)]; }

    std::array<double, 9> group_sums() const;
    double total() const;              // mean of the nine group sums
    double group_consistency() const;  // max relative deviation of a group sum from total
    void validate() const;             // all entries finite and nonnegative
};

// rates[(i,j)] = total_rate * <ij|rho|ij>
ProjectionSet36 measure_projections(const DensityMatrix4& rho, double total_rate);

// Least-squares inversion of the 36 linear constraints over the
// 16-dimensional real parametrization of Hermitian matrices, so the output
// is Hermitian by construction; the trace is normalized to 1. The result
// may have (slightly) negative eigenvalues; see project_physical.
Eigen::Matrix4cd linear_reconstruct(const ProjectionSet36& p);

// Eigen-decompose the Hermitian part, clip negative eigenvalues to zero and
// renormalize the trace. Throws NotHermitian when the symmetrization
// residual of the input exceeds 1e-8.
DensityMatrix4 project_physical(const Eigen::Matrix4cd& raw);

// project_physical(linear_reconstruct(p)): round-trips measure_projections
// on physical states to ~1e-12.
DensityMatrix4 reconstruct(const ProjectionSet36& p);

// Projection-table CSV, schema: basis_xx,basis_x,rate (one row per pair,
// H,V,D,A,R,L ordering). Lines starting with '#' are ignored on input.
void write_projection_csv(std::ostream& os, const ProjectionSet36& p);
ProjectionSet36 read_projection_csv(std::istream& is);  // throws InputDataError

}  // namespace qdc
