#include "gaugeqpe/encodings.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace gaugeqpe::enc {

namespace {

void require_unit(const ComplexVector& v, Eigen::Index n, const char* what) {
    if (v.size() != n) {
        std::ostringstream os;
        os << what << ": state has dimension " << v.size() << ", operator has " << n;
        throw PreconditionError(os.str());
    }
    if (std::abs(v.norm() - 1.0) > linalg::kStructuralTol) {
        std::ostringstream os;
        os << what << ": state norm " << v.norm() << " is not 1";
        throw PreconditionError(os.str());
    }
}

// A_phi = -(hbar / (q 2 pi r v)) V diag(theta) V^dagger.
ring::GaugeField gauge_from_phases(const ComplexMatrix& vectors, const RealVector& thetas,
                                   const ring::RingPhysicalParams& params) {
    const double scale = -params.hbar / (params.charge_q * kTwoPi * params.radius_r * ring::kVelocityFactor);
    ComplexMatrix a = scale * (vectors * thetas.cast<cplx>().asDiagonal() * vectors.adjoint());
    return {HermitianOperator(std::move(a), 1e-9), params};
}

}  // namespace

void EnergyProblem::validate() const {
    if (!(reference_energy > 0)) throw PreconditionError("EnergyProblem: E_R must be positive");
    require_unit(candidate, hamiltonian.dim(), "EnergyProblem");
}

void UnitarySpec::validate() const {
    require_unit(eigenstate, u.dim(), "UnitarySpec");
    if (cached_eigenphase) {
        const ComplexVector residual = u.matrix() * eigenstate - std::polar(1.0, *cached_eigenphase) * eigenstate;
        if (residual.norm() > linalg::kSpectralTol)
            throw PreconditionError("UnitarySpec: cached eigenphase does not match U on the eigenstate");
    }
}

double principal_angle(double theta) {
    double w = std::remainder(theta, kTwoPi);  // [-pi, pi]
    if (w <= -kPi) w += kTwoPi;
    return w;
}

double unwrap_phase(double phi) { return phi > kPi ? phi - kTwoPi : phi; }

double phase_to_energy(double phi, double reference_energy) { return reference_energy * phi; }

GaugeEncoding encode_hamiltonian_as_gauge(const EnergyProblem& prob, const ring::RingPhysicalParams& params) {
    prob.validate();
    params.validate();
    const auto eig = linalg::eig_hermitian(prob.hamiltonian);
    RealVector thetas = eig.eigenvalues / prob.reference_energy;
    bool aliased = false;
    for (Eigen::Index k = 0; k < thetas.size(); ++k) {
        const double wrapped = principal_angle(thetas[k]);
        if (std::abs(wrapped - thetas[k]) > 1e-12) aliased = true;
        thetas[k] = wrapped;
    }
    GaugeEncoding out{gauge_from_phases(eig.eigenvectors, thetas, params), std::nullopt};
    if (aliased) {
        std::ostringstream os;
        os << "spectral radius of H/E_R is " << (eig.eigenvalues / prob.reference_energy).cwiseAbs().maxCoeff()
           << " >= pi; eigenphases were folded into (-pi, pi] and energies read from the ring are aliased";
        out.aliasing_warning = os.str();
    }
    return out;
}

UnitaryEigen eig_unitary(const UnitaryOperator& u) {
    Eigen::ComplexSchur<ComplexMatrix> schur(u.matrix());
    if (schur.info() != Eigen::Success) throw DomainError("eig_unitary: Schur decomposition did not converge");
    const ComplexMatrix& t = schur.matrixT();
    const Eigen::Index n = t.rows();
    double off = 0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < j; ++i) off = std::max(off, std::abs(t(i, j)));
    if (off > 1e-8) {
        std::ostringstream os;
        os << "eig_unitary: matrix is not normal (Schur off-diagonal " << off << ")";
        throw PreconditionError(os.str());
    }
    UnitaryEigen out{RealVector(n), schur.matrixU()};
    for (Eigen::Index k = 0; k < n; ++k) out.phases[k] = principal_angle(std::arg(t(k, k)));
    return out;
}

GaugeEncoding encode_unitary_as_gauge(const UnitarySpec& spec, const ring::RingPhysicalParams& params) {
    spec.validate();
    params.validate();
    const UnitaryEigen eig = eig_unitary(spec.u);
    return {gauge_from_phases(eig.vectors, eig.phases, params), std::nullopt};
}

UnitaryOperator gauge_holonomy(const ring::GaugeField& gauge) {
    const auto& p = gauge.params;
    const double scale = -ring::kVelocityFactor * (p.charge_q / p.hbar) * kTwoPi * p.radius_r;
    return linalg::unitary_from_hermitian(gauge.a_phi, scale);
}

UnitaryOperator problem_unitary(const EnergyProblem& prob) {
    return linalg::unitary_from_hermitian(prob.hamiltonian, 1.0 / prob.reference_energy);
}

DirectPhase direct_eigenphase(const UnitaryOperator& u, const ComplexVector& state) {
    require_unit(state, u.dim(), "direct_eigenphase");
    const UnitaryEigen eig = eig_unitary(u);
    const ComplexVector amps = eig.vectors.adjoint() * state;
    Eigen::Index best = 0;
    amps.cwiseAbs2().maxCoeff(&best);
    return {ring::wrap_2pi(eig.phases[best]), std::norm(amps[best])};
}

}  // namespace gaugeqpe::enc
