#pragma once

#include <optional>
#include <string>

#include "gaugeqpe/linalg.hpp"
#include "gaugeqpe/ring.hpp"

namespace gaugeqpe::enc {

// Ground-state style problem: find the eigenphase of exp(i H / E_R) on `candidate`.
struct EnergyProblem {
    HermitianOperator hamiltonian;
    double reference_energy = 1.0;  // E_R
    ComplexVector candidate;

    void validate() const;
};

struct UnitarySpec {
    UnitaryOperator u;
    ComplexVector eigenstate;
    std::optional<double> cached_eigenphase;  // [0, 2 pi)

    void validate() const;
};

struct GaugeEncoding {
    ring::GaugeField gauge;
    // Set when some eigenphase had to be folded back into (-pi, pi].
    std::optional<std::string> aliasing_warning;
};

GaugeEncoding encode_hamiltonian_as_gauge(const EnergyProblem& prob, const ring::RingPhysicalParams& params);

// Inverts U = exp(-i kVelocityFactor (q/hbar) 2 pi r A_phi) on the principal branch.
GaugeEncoding encode_unitary_as_gauge(const UnitarySpec& spec, const ring::RingPhysicalParams& params);

// The unitary realized by one return time on the ring for a given field.
UnitaryOperator gauge_holonomy(const ring::GaugeField& gauge);

UnitaryOperator problem_unitary(const EnergyProblem& prob);

double phase_to_energy(double phi, double reference_energy);

// [0, 2 pi) -> (-pi, pi].
double unwrap_phase(double phi);

// Principal branch of an arbitrary angle, in (-pi, pi].
double principal_angle(double theta);

// Eigenphases of a unitary with an orthonormal eigenbasis, via complex Schur
// form (diagonal for normal matrices).
struct UnitaryEigen {
    RealVector phases;  // (-pi, pi]
    ComplexMatrix vectors;
};
UnitaryEigen eig_unitary(const UnitaryOperator& u);

// Direct read-out: eigenphase in [0, 2 pi) of the eigenvector with the largest
// overlap on `state`, plus that overlap's probability.
struct DirectPhase {
    double phi = 0;
    double overlap = 0;
};
DirectPhase direct_eigenphase(const UnitaryOperator& u, const ComplexVector& state);

}  // namespace gaugeqpe::enc
