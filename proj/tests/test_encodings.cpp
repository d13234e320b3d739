#include <gtest/gtest.h>

#include <random>

#include "gaugeqpe/encodings.hpp"

using namespace gaugeqpe;
using namespace gaugeqpe::enc;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

ComplexVector ground_x() {
    ComplexVector v(2);
    v << 1, -1;
    return v / std::sqrt(2.0);
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexVector e0(Eigen::Index n) {
    ComplexVector v = ComplexVector::Zero(n);
    v[0] = 1;
    return v;
}

}  // namespace

TEST(EncodeHamiltonian, ZeroHamiltonian) {
    const auto g = encode_hamiltonian_as_gauge({HermitianOperator::zero(3), 1.0, e0(3)}, {});
    EXPECT_LT(max_abs(g.gauge.a_phi.matrix()), 1e-15);
    EXPECT_FALSE(g.aliasing_warning);
}

TEST(EncodeHamiltonian, PauliXExample) {
    // E0 / E_R = 2 in natural units: A = -(1 / (2 pi * 2)) * 2 sigma_x = -sigma_x / (2 pi).
    const auto g = encode_hamiltonian_as_gauge({HermitianOperator(2.0 * pauli_x()), 1.0, ground_x()}, {});
    EXPECT_LT(max_abs(g.gauge.a_phi.matrix() + pauli_x() / kTwoPi), 1e-14);
    // Without the velocity factor the raw formula would give -sigma_x / pi.
    EXPECT_GT(max_abs(g.gauge.a_phi.matrix() + pauli_x() / kPi), 0.1);
}

TEST(EncodeHamiltonian, PhysicalConstantsScale) {
    const ring::RingPhysicalParams p{0.5, 2.0, 3.0, 1.0};
    const auto g = encode_hamiltonian_as_gauge({HermitianOperator(2.0 * pauli_x()), 1.0, ground_x()}, p);
    const double factor = -p.hbar / (p.charge_q * kTwoPi * p.radius_r * ring::kVelocityFactor);
    EXPECT_LT(max_abs(g.gauge.a_phi.matrix() - factor * 2.0 * pauli_x()), 1e-14);
}

TEST(EncodeHamiltonian, WrapKeepsUnitaryAndWarns) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 1.5 * kPi;
    h(1, 1) = -0.5;
    const EnergyProblem prob{HermitianOperator(h), 1.0, e0(2)};
    const auto g = encode_hamiltonian_as_gauge(prob, {});
    ASSERT_TRUE(g.aliasing_warning);
    EXPECT_LT(max_abs(gauge_holonomy(g.gauge).matrix() - problem_unitary(prob).matrix()), 1e-12);
    // Wrapped eigenphase -pi/2 maps to lambda = +1/8 with hbar = q = r = 1.
    EXPECT_NEAR(g.gauge.a_phi.matrix()(0, 0).real(), 0.125, 1e-14);
}

TEST(EncodeHamiltonian, RejectsBadProblem) {
    ComplexVector bad(2);
    bad << 1, 1;
    EXPECT_THROW(encode_hamiltonian_as_gauge({HermitianOperator(pauli_x()), 1.0, bad}, {}), PreconditionError);
    EXPECT_THROW(encode_hamiltonian_as_gauge({HermitianOperator(pauli_x()), 0.0, ground_x()}, {}), PreconditionError);
    EXPECT_THROW(encode_hamiltonian_as_gauge({HermitianOperator(pauli_x()), 1.0, e0(3)}, {}), PreconditionError);
}

TEST(EncodeUnitary, IdentityGivesZeroField) {
    const auto g = encode_unitary_as_gauge({UnitaryOperator::identity(3), e0(3), std::nullopt}, {});
    EXPECT_LT(max_abs(g.gauge.a_phi.matrix()), 1e-15);
}

TEST(EncodeUnitary, DiagonalRoundTrip) {
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = std::polar(1.0, kPi / 2);
    u(1, 1) = std::polar(1.0, -kPi / 2);
    const auto g = encode_unitary_as_gauge({UnitaryOperator(u), e0(2), kPi / 2}, {});
    EXPECT_LT(max_abs(gauge_holonomy(g.gauge).matrix() - u), 1e-12);
}

TEST(EncodeUnitary, AgreesWithHamiltonianEncoding) {
    const HermitianOperator h(2.0 * pauli_x());
    const auto u = linalg::unitary_from_hermitian(h, 1.0);
    const auto from_u = encode_unitary_as_gauge({u, ground_x(), std::nullopt}, {});
    const auto from_h = encode_hamiltonian_as_gauge({h, 1.0, ground_x()}, {});
    EXPECT_LT(max_abs(from_u.gauge.a_phi.matrix() - from_h.gauge.a_phi.matrix()), 1e-9);
}

TEST(EncodeUnitary, RejectsInconsistentCachedPhase) {
    EXPECT_THROW(encode_unitary_as_gauge({UnitaryOperator::identity(2), e0(2), 1.0}, {}), PreconditionError);
}

TEST(EncodingProperties, UnitaryRoundTrip) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 8);
        const auto u = linalg::random_unitary(n, seed);
        const ring::RingPhysicalParams p{1.0 + 0.01 * static_cast<double>(seed), seed % 2 ? -1.3 : 0.7, 0.9, 1.0};
        const auto g = encode_unitary_as_gauge({u, e0(n), std::nullopt}, p);
        EXPECT_LT(max_abs(gauge_holonomy(g.gauge).matrix() - u.matrix()), 1e-8) << "seed=" << seed;
    }
}

TEST(EncodingProperties, HamiltonianAndUnitaryRoutesAgree) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 5);
        const HermitianOperator h(linalg::random_hermitian(n, seed));
        const double radius = linalg::eig_hermitian(h).eigenvalues.cwiseAbs().maxCoeff();
        const double e_r = radius / 3.0;  // spectral radius of H / E_R is 3 < pi
        const EnergyProblem prob{h, e_r, e0(n)};
        const auto a = encode_hamiltonian_as_gauge(prob, {});
        const auto b = encode_unitary_as_gauge({problem_unitary(prob), e0(n), std::nullopt}, {});
        EXPECT_LT(max_abs(a.gauge.a_phi.matrix() - b.gauge.a_phi.matrix()), 1e-8) << "seed=" << seed;
    }
}

TEST(EncodingProperties, EigenvectorsPreserved) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 4);
        const HermitianOperator h(linalg::random_hermitian(n, seed));
        const auto eig = linalg::eig_hermitian(h);
        const auto g = encode_hamiltonian_as_gauge({h, 2.0 * eig.eigenvalues.cwiseAbs().maxCoeff(), e0(n)}, {});
        for (Eigen::Index k = 0; k < n; ++k) {
            const ComplexVector v = eig.eigenvectors.col(k);
            const ComplexVector av = g.gauge.a_phi.matrix() * v;
            // Component of A v orthogonal to v.
            EXPECT_LT((av - v.dot(av) * v).norm(), 1e-8);
        }
    }
}

TEST(EncodingProperties, RingReadoutRecoversEigenphase) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 3);
        const auto u = linalg::random_unitary(n, seed + 77);
        const auto eig = eig_unitary(u);
        const auto k = static_cast<Eigen::Index>(seed % static_cast<std::uint64_t>(n));
        const UnitarySpec spec{u, eig.vectors.col(k), ring::wrap_2pi(eig.phases[k])};
        const auto g = encode_unitary_as_gauge(spec, {});
        const auto peaks = ring::estimate_phase_via_ring(g.gauge, spec.eigenstate, 60, 512);
        ASSERT_FALSE(peaks.peaks.empty());
        EXPECT_LT(ring::circular_distance(peaks.peaks[0].phi, *spec.cached_eigenphase), kTwoPi / 121) << "seed=" << seed;
        EXPECT_NEAR(unwrap_phase(peaks.peaks[0].phi), eig.phases[k], kTwoPi / 121 + 1e-12);
    }
}

TEST(PhaseToEnergy, Examples) {
    EXPECT_NEAR(phase_to_energy(-2.0, 1.0), -2.0, 1e-15);  // E0 = 2 E_R
    EXPECT_EQ(phase_to_energy(0.0, 5.0), 0.0);
    EXPECT_NEAR(phase_to_energy(kPi / 3, 3.0), kPi, 1e-15);
}

TEST(UnwrapPhase, Examples) {
    EXPECT_NEAR(unwrap_phase(4.283), -2.0, 1e-3);
    EXPECT_EQ(unwrap_phase(0.0), 0.0);
    EXPECT_EQ(unwrap_phase(kPi), kPi);
    EXPECT_NEAR(unwrap_phase(std::nextafter(kPi, 4.0)), -kPi, 1e-12);
}

TEST(PrincipalAngle, Range) {
    for (double th : {-10.0, -kPi, -1.0, 0.0, 2.0, kPi, 4.0, 12.0}) {
        const double w = principal_angle(th);
        EXPECT_GT(w, -kPi);
        EXPECT_LE(w, kPi);
        EXPECT_NEAR(std::remainder(w - th, kTwoPi), 0.0, 1e-12);
    }
}

TEST(DirectEigenphase, PicksDominantComponent) {
    const auto u = linalg::unitary_from_hermitian(HermitianOperator(2.0 * pauli_x()), 1.0);
    const auto d = direct_eigenphase(u, ground_x());
    EXPECT_NEAR(d.phi, kTwoPi - 2.0, 1e-12);
    EXPECT_NEAR(d.overlap, 1.0, 1e-12);
}
