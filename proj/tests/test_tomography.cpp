#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qdcascade/cascade.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/tomography.hpp"
#include "support/random_states.hpp"

using namespace qdc;

namespace {
TwoPhotonKet bell_phi_plus() {
    Ket4 a;
    a << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    return TwoPhotonKet(a);
}
}  // namespace

TEST_CASE("measure_projections on reference states") {
    const ProjectionSet36 hh = measure_projections(
        DensityMatrix4::pure(projector(Basis::H, Basis::H)), 1.0);
    CHECK(hh.at(Basis::H, Basis::H) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hh.at(Basis::H, Basis::V) == doctest::Approx(0.0));
    CHECK(hh.at(Basis::D, Basis::D) == doctest::Approx(0.25).epsilon(1e-12));

    const ProjectionSet36 mixed = measure_projections(DensityMatrix4::maximally_mixed(), 2.0);
    for (double r : mixed.rates) CHECK(r == doctest::Approx(0.5).epsilon(1e-12));

    const ProjectionSet36 bell = measure_projections(DensityMatrix4::pure(bell_phi_plus()), 1.0);
    CHECK(bell.at(Basis::D, Basis::D) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bell.at(Basis::A, Basis::A) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bell.at(Basis::D, Basis::A) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("group sums and total") {
    const ProjectionSet36 bell = measure_projections(DensityMatrix4::pure(bell_phi_plus()), 3.0);
    CHECK(bell.total() == doctest::Approx(3.0).epsilon(1e-12));
    for (double s : bell.group_sums()) CHECK(s == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(bell.group_consistency() < 1e-12);
}

TEST_CASE("linear reconstruction") {
    SUBCASE("round trip on random physical states") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            const DensityMatrix4 rho = qdctest::random_density(rng);
            const ProjectionSet36 p = measure_projections(rho, 0.37);
            const Eigen::Matrix4cd raw = linear_reconstruct(p);
            CHECK((raw - rho.m).norm() < 1e-10);
        }
    }

    SUBCASE("uniform rates give the maximally mixed state") {
        ProjectionSet36 p;
        p.rates.fill(0.25);
        const Eigen::Matrix4cd raw = linear_reconstruct(p);
        CHECK((raw - Eigen::Matrix4cd::Identity() * 0.25).norm() < 1e-12);
    }

    SUBCASE("quarter-period precession fixes the coherence phase") {
        const double delta = 2.0;
        const double t = 0.5 * std::numbers::pi * kHbar / delta;  // delta t / hbar = pi/2
        const DensityMatrix4 rho = DensityMatrix4::pure(psi(t, delta));
        const Eigen::Matrix4cd raw = linear_reconstruct(measure_projections(rho, 1.0));
        CHECK(std::abs(raw(0, 3) - Complex(0.0, 0.5)) < 1e-10);
        CHECK(std::abs(raw(3, 0) - Complex(0.0, -0.5)) < 1e-10);
    }
}

TEST_CASE("physical projection") {
    SUBCASE("identity on already-physical input") {
        std::mt19937_64 rng(5);
        const DensityMatrix4 rho = qdctest::random_density(rng);
        CHECK((project_physical(rho.m).m - rho.m).norm() < 1e-12);
    }

    SUBCASE("clips negative weight and renormalizes") {
        Eigen::Matrix4cd raw = Eigen::Matrix4cd::Zero();
        raw(0, 0) = 1.5;
        raw(1, 1) = -0.5;
        const DensityMatrix4 out = project_physical(raw);
        CHECK(std::abs(out.m(0, 0) - 1.0) < 1e-12);
        CHECK(std::abs(out.m(1, 1)) < 1e-12);
        CHECK(out.trace_error() < 1e-12);
    }

    SUBCASE("barely negative eigenvalue moves the matrix by less than 1e-11") {
        std::mt19937_64 rng(8);
        const DensityMatrix4 rho = qdctest::random_density(rng, 3);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.m);
        Eigen::Vector4d ev = es.eigenvalues();
        ev(0) = -1e-12;
        ev /= ev.sum();
        const Eigen::Matrix4cd raw =
            es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
        const DensityMatrix4 out = project_physical(raw);
        CHECK((out.m - raw).norm() < 1e-11);
        CHECK(out.min_eigenvalue() >= -1e-14);
    }

    SUBCASE("rejects non-Hermitian input") {
        Eigen::Matrix4cd raw = Eigen::Matrix4cd::Identity() * 0.25;
        raw(0, 2) = 1e-3;
        CHECK_THROWS_AS(project_physical(raw), NotHermitian);
    }
}

TEST_CASE("full reconstruction") {
    SUBCASE("left inverse of measurement on 1000 random states") {
        std::mt19937_64 rng(21);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const DensityMatrix4 rho = qdctest::random_density(rng);
            const DensityMatrix4 back = reconstruct(measure_projections(rho, 1.0));
            worst = std::max(worst, (back.m - rho.m).norm());
        }
        CHECK(worst < 1e-9);
    }

    SUBCASE("matches the direct time-bin construction") {
        const CascadeParams p{kPlanck, 1.0, 1.0};
        const DetectorModel det{0.3};
        for (double t : {0.0, 0.4, 1.1, 2.5}) {
            ProjectionSet36 ps;
            ps.rates = convolved_rates(t, p, det);
            const DensityMatrix4 via_tomo = reconstruct(ps);
            const auto direct = rho_of_t(t, p, det);
            REQUIRE(direct.has_value());
            CHECK((via_tomo.m - direct->rho.m).norm() < 1e-9);
        }
    }

    SUBCASE("Bell-state rates reconstruct a unit-concurrence state") {
        const ProjectionSet36 p = measure_projections(DensityMatrix4::pure(bell_phi_plus()), 1.0);
        CHECK(concurrence(reconstruct(p)) == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("scaling invariance") {
        std::mt19937_64 rng(33);
        const DensityMatrix4 rho = qdctest::random_density(rng);
        ProjectionSet36 p = measure_projections(rho, 1.0);
        const DensityMatrix4 a = reconstruct(p);
        for (double& r : p.rates) r *= 123.456;
        const DensityMatrix4 b = reconstruct(p);
        CHECK((a.m - b.m).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("arbitrary nonnegative input still yields a physical state") {
        std::mt19937_64 rng(55);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            ProjectionSet36 p;
            for (double& r : p.rates) r = u(rng);
            const DensityMatrix4 out = reconstruct(p);
            CHECK(out.hermiticity_error() < 1e-12);
            CHECK(out.trace_error() < 1e-12);
            CHECK(out.min_eigenvalue() >= -1e-12);
        }
    }

    SUBCASE("all-zero rates fall back to the maximally mixed state") {
        ProjectionSet36 p;
        const DensityMatrix4 out = reconstruct(p);
        CHECK((out.m - Eigen::Matrix4cd::Identity() * 0.25).norm() < 1e-14);
    }

    SUBCASE("negative rates are rejected") {
        ProjectionSet36 p;
        p.rates.fill(0.1);
        p.at(Basis::R, Basis::L) = -0.1;
        CHECK_THROWS_AS(reconstruct(p), std::invalid_argument);
    }
}

TEST_CASE("projection CSV round trip") {
    const ProjectionSet36 p = measure_projections(DensityMatrix4::pure(bell_phi_plus()), 2.5);
    std::stringstream ss;
    write_projection_csv(ss, p);
    const ProjectionSet36 back = read_projection_csv(ss);
    for (int k = 0; k < 36; ++k)
        CHECK(back.rates[k] == doctest::Approx(p.rates[k]).epsilon(1e-9));
}

TEST_CASE("projection CSV rejects malformed input") {
    const auto read = [](const std::string& text) {
        std::istringstream is(text);
        return read_projection_csv(is);
    };

    CHECK_THROWS_AS(read("basis_xx,basis_x,rate\nH,H,1.0\n"), InputDataError);  // missing pairs
    CHECK_THROWS_AS(read("H,Q,1.0\n"), InputDataError);                        // bad symbol
    CHECK_THROWS_AS(read("H,H,-0.5\n"), InputDataError);                       // negative rate
    CHECK_THROWS_AS(read("H,H,abc\n"), InputDataError);                        // unparsable rate
    CHECK_THROWS_AS(read("H,H\n"), InputDataError);                            // missing field

    // duplicate pair reports its row number
    std::string dup = "basis_xx,basis_x,rate\nH,H,0.1\nH,H,0.2\n";
    try {
        read(dup);
        FAIL("expected InputDataError");
    } catch (const InputDataError& e) {
        CHECK(e.row_number == 3);
    }
}
