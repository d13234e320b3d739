#pragma once

#include <optional>
#include <vector>

#include "gaugeqpe/linalg.hpp"

namespace gaugeqpe::ring {

// Ratio between the dynamical shift a wavepacket accumulates at the return
// time and the one-lap Aharonov-Bohm phase. Group velocity is twice the phase
// velocity for the free ring, so every mode winds its gauge phase twice.
inline constexpr double kVelocityFactor = 2.0;

struct RingPhysicalParams {
    double hbar = 1.0;
    double charge_q = 1.0;
    double radius_r = 1.0;
    double mass_mq = 1.0;

    // Throws PreconditionError unless hbar, radius and mass are positive and
    // the charge is nonzero.
    void validate() const;
};

// Constant angular gauge potential A_phi. Constancy along the ring means the
// holonomy is an ordinary matrix exponential, no path ordering needed.
struct GaugeField {
    HermitianOperator a_phi;
    RingPhysicalParams params;

    Eigen::Index n_colors() const { return a_phi.dim(); }
};

// Mode-space wavefunction. Row m + l holds the color vector of mode m.
class RingState {
public:
    RingState(int mode_cutoff_l, ComplexMatrix coeffs, double norm_tol = linalg::kStructuralTol);

    int mode_cutoff() const { return l_; }
    Eigen::Index n_modes() const { return coeffs_.rows(); }
    Eigen::Index n_colors() const { return coeffs_.cols(); }
    const ComplexMatrix& coeffs() const { return coeffs_; }
    auto mode(int m) const { return coeffs_.row(m + l_); }

    double norm() const { return coeffs_.norm(); }
    // <other|this> over modes and colors.
    cplx overlap(const RingState& other) const;

private:
    int l_;
    ComplexMatrix coeffs_;
};

// Block-diagonal ring Hamiltonian, one n x n block per angular mode m in [-l, l].
class ModeBlockHamiltonian {
public:
    ModeBlockHamiltonian(int mode_cutoff_l, std::vector<HermitianOperator> blocks, RingPhysicalParams params);

    int mode_cutoff() const { return l_; }
    Eigen::Index n_colors() const { return blocks_.front().dim(); }
    const std::vector<HermitianOperator>& blocks() const { return blocks_; }
    const HermitianOperator& block(int m) const { return blocks_.at(static_cast<std::size_t>(m + l_)); }
    const RingPhysicalParams& params() const { return params_; }

    // The whole operator as one dense ((2l+1) n)-square matrix, mode-major.
    ComplexMatrix assemble_dense() const;

private:
    int l_;
    std::vector<HermitianOperator> blocks_;
    RingPhysicalParams params_;
};

struct PositionDensity {
    int grid_size = 0;
    RealVector phi_grid;
    RealVector density;  // per unit angle; sum * 2 pi / N == 1
    std::optional<Eigen::MatrixXd> per_color;  // N x n

    double bin_width() const { return kTwoPi / grid_size; }
};

struct Peak {
    double phi = 0;     // [0, 2 pi)
    double weight = 0;  // integrated probability attributed to the peak
    double width = 0;   // RMS angular spread inside the refinement window
};

struct PeakSet {
    std::vector<Peak> peaks;  // descending weight
    double resolution = 0;    // 2 pi / N
};

struct PeakOptions {
    int max_peaks = 1;
    int window = 5;  // odd; refinement window and minimum peak separation in bins
    // A candidate must reach this fraction of the global maximum...
    double min_relative_height = 0.1;
    // ...and this multiple of the uniform density 1/(2 pi).
    double min_contrast = 2.0;
};

enum class QuadraticTerm { keep, drop };

double return_time(const RingPhysicalParams& params);

// H_m = ((hbar m / r) I - q A_phi)^2 / (2 m_q) for every m in [-l, l]. Dropping
// the quadratic term removes q^2 A_phi^2 / (2 m_q), which only contributes a
// global phase on an A_phi eigencolor.
ModeBlockHamiltonian build_hamiltonian(const GaugeField& gauge, int l, QuadraticTerm quad = QuadraticTerm::keep);

// Truncated delta function at phi = 0 carrying the given color.
RingState initial_localized_state(int l, const ComplexVector& color);

RingState evolve_block(const RingState& state, const ModeBlockHamiltonian& ham, double t);

struct DenseEvolveOptions {
    Eigen::Index max_dim = 4096;
};

// Brute-force counterpart of evolve_block: one dense exponential of the full
// assembled Hamiltonian.
RingState evolve_dense(const RingState& state, const ModeBlockHamiltonian& ham, double t,
                       const DenseEvolveOptions& opts = {}, linalg::OpCount* ops = nullptr);

PositionDensity position_density(const RingState& state, int grid_size, bool with_colors = false);

PeakSet extract_peaks(const PositionDensity& density, const PeakOptions& opts = {});

// Full ring read-out: localize, evolve one return time, sample, pick peaks.
PeakSet estimate_phase_via_ring(const GaugeField& gauge, const ComplexVector& color, int l, int grid_size,
                                const PeakOptions& opts);
PeakSet estimate_phase_via_ring(const GaugeField& gauge, const ComplexVector& color, int l, int grid_size);

// Where the eigencolor with A_phi eigenvalue lambda relocalizes after t_R.
double predicted_peak(const RingPhysicalParams& params, double lambda);

// Circular helpers on [0, 2 pi).
double wrap_2pi(double phi);
double circular_distance(double a, double b);

}  // namespace gaugeqpe::ring
