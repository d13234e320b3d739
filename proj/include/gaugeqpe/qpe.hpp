#pragma once

#include <cstdint>
#include <vector>

#include "gaugeqpe/linalg.hpp"

namespace gaugeqpe::qpe {

inline constexpr int kMaxBits = 24;

struct QpeConfig {
    int t_bits = 8;
    std::uint64_t shots = 0;  // 0 selects the exact distribution
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Joint statevector of register 1 (t qubits) and register 2 (one n-level
// system). Row m is the register-2 vector paired with register-1 basis |m>.
class QpeRegisters {
public:
    QpeRegisters(int t_bits, ComplexMatrix amplitudes);

    int t_bits() const { return t_; }
    Eigen::Index n_colors() const { return amps_.cols(); }
    std::uint64_t register1_size() const { return std::uint64_t{1} << t_; }
    const ComplexMatrix& amplitudes() const { return amps_; }
    double norm() const { return amps_.norm(); }

    // Reduced density matrix of register 2.
    ComplexMatrix register2_density() const { return amps_.transpose() * amps_.conjugate(); }

private:
    int t_;
    ComplexMatrix amps_;
};

enum class MeasureMode { exact, sampled };

struct Register1Distribution {
    std::vector<double> probs;
    MeasureMode mode = MeasureMode::exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

struct QpeResult {
    std::uint64_t k_best = 0;
    double phi = 0;  // 2 pi k / 2^t
    Register1Distribution distribution;
};

QpeRegisters qpe_prepare(int t_bits, const ComplexVector& u);

// Applies sum_m |m><m| (x) U^m, built from U^(2^j) per set bit of m.
QpeRegisters controlled_unitary_all(const QpeRegisters& regs, const UnitaryOperator& u);

// out(k) = 2^(-t/2) sum_m exp(-2 pi i k m / 2^t) in(m), per color.
QpeRegisters qft_inverse(const QpeRegisters& regs);
// out(k) = 2^(-t/2) sum_m exp(+2 pi i k m / 2^t) in(m), per color.
QpeRegisters qft_forward(const QpeRegisters& regs);

Register1Distribution measure_register1(const QpeRegisters& regs, const QpeConfig& cfg);

QpeResult qpe_estimate(const UnitaryOperator& u, const ComplexVector& state, const QpeConfig& cfg);

// P(|k' - m| > e) <= 1 / (2 (e - 1)), e >= 2.
double success_tail_bound(long long e);

// Distance between register indices on the cycle Z_{2^t}.
std::uint64_t circular_index_distance(std::uint64_t a, std::uint64_t b, int t_bits);

// In-place radix-2 transform of a length-2^t sequence; sign selects the
// exponent sign. No normalization is applied.
void fft_radix2(Eigen::Ref<ComplexVector> data, int sign);

}  // namespace gaugeqpe::qpe
