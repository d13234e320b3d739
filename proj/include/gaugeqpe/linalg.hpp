#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "gaugeqpe/errors.hpp"

namespace gaugeqpe {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

namespace linalg {

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kSpectralTol = 1e-8;

// Largest entry of |M - M^dagger|.
template <typename Derived>
typename Derived::RealScalar max_asymmetry(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() == 0) return 0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Largest entry of |M^dagger M - I|.
template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& m) {
    using Plain = typename Derived::PlainObject;
    if (m.rows() == 0) return 0;
    return (m.adjoint() * m - Plain::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

class HermitianOperator {
public:
    HermitianOperator() = default;
    explicit HermitianOperator(ComplexMatrix m, double hermiticity_tol = kStructuralTol);

    static HermitianOperator zero(Eigen::Index n) { return HermitianOperator(ComplexMatrix::Zero(n, n)); }

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    double tolerance() const { return tol_; }

private:
    ComplexMatrix m_;
    double tol_ = kStructuralTol;
};

class UnitaryOperator {
public:
    UnitaryOperator() = default;
    explicit UnitaryOperator(ComplexMatrix m, double unitarity_tol = kStructuralTol);

    static UnitaryOperator identity(Eigen::Index n) { return UnitaryOperator(ComplexMatrix::Identity(n, n)); }

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    double tolerance() const { return tol_; }

private:
    ComplexMatrix m_;
    double tol_ = kStructuralTol;
};

// Eigenvalues ascending; column k of `eigenvectors` pairs with eigenvalues[k].
struct EigenDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    ComplexMatrix reconstruct() const {
        return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
    }
};

EigenDecomposition eig_hermitian(const HermitianOperator& a);

// exp(i * scale * A) through the spectral decomposition of A.
UnitaryOperator unitary_from_hermitian(const HermitianOperator& a, double scale);

// Same as above on a precomputed decomposition.
ComplexMatrix spectral_exponential(const EigenDecomposition& eig, double scale);

UnitaryOperator matrix_power(const UnitaryOperator& u, std::uint64_t p);

// Square-and-multiply on any square complex matrix.
template <typename Derived>
typename Derived::PlainObject binary_power(const Eigen::MatrixBase<Derived>& base, std::uint64_t p) {
    using Plain = typename Derived::PlainObject;
    Plain result = Plain::Identity(base.rows(), base.cols());
    Plain square = base;
    while (p != 0) {
        if (p & 1u) result = result * square;
        p >>= 1;
        if (p != 0) square = square * square;
    }
    return result;
}

// Multiply-accumulate tally for instrumented kernels. Counts are derived from
// kernel shapes (n^3 per dense product, n^3/3 + n^3 for an LU solve with n
// right-hand sides), so they are exactly reproducible.
struct OpCount {
    std::uint64_t mac = 0;
};

struct ExpmOptions {
    Eigen::Index max_dim = 4096;
};

// exp(-i * M * t) by scaling and squaring around a degree-13 Pade core. This is
// the general-purpose dense path; it never diagonalizes M.
ComplexMatrix expm_dense(const ComplexMatrix& m, double t, const ExpmOptions& opts = {},
                         OpCount* ops = nullptr);

// Seeded random generators used by tests, benches and the CLI.
ComplexMatrix random_hermitian(Eigen::Index n, std::uint64_t seed, double scale = 1.0);
UnitaryOperator random_unitary(Eigen::Index n, std::uint64_t seed);

}  // namespace linalg

using linalg::EigenDecomposition;
using linalg::HermitianOperator;
using linalg::UnitaryOperator;

}  // namespace gaugeqpe
