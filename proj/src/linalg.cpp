#include "gaugeqpe/linalg.hpp"

#include <array>
#include <random>
#include <sstream>

namespace gaugeqpe::linalg {

namespace {

void require_square_finite(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw PreconditionError(os.str());
    }
    if (!all_finite(m)) throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
}

double one_norm(const ComplexMatrix& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m, double hermiticity_tol)
    : m_(std::move(m)), tol_(hermiticity_tol) {
    require_square_finite(m_, "HermitianOperator");
    const double asym = max_asymmetry(m_);
    if (asym > tol_) {
        std::ostringstream os;
        os << "HermitianOperator: max |M - M^dagger| = " << asym << " exceeds tolerance " << tol_;
        throw PreconditionError(os.str());
    }
    // Project away sub-tolerance asymmetry so downstream solvers see an exact Hermitian input.
    m_ = (0.5 * (m_ + m_.adjoint())).eval();
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m, double unitarity_tol)
    : m_(std::move(m)), tol_(unitarity_tol) {
    require_square_finite(m_, "UnitaryOperator");
    const double defect = unitarity_defect(m_);
    if (defect > tol_) {
        std::ostringstream os;
        os << "UnitaryOperator: max |M^dagger M - I| = " << defect << " exceeds tolerance " << tol_;
        throw PreconditionError(os.str());
    }
}

EigenDecomposition eig_hermitian(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) throw DomainError("eig_hermitian: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix spectral_exponential(const EigenDecomposition& eig, double scale) {
    const ComplexVector phases =
        eig.eigenvalues.unaryExpr([scale](double lambda) { return std::polar(1.0, scale * lambda); });
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

UnitaryOperator unitary_from_hermitian(const HermitianOperator& a, double scale) {
    return UnitaryOperator(spectral_exponential(eig_hermitian(a), scale));
}

UnitaryOperator matrix_power(const UnitaryOperator& u, std::uint64_t p) {
    // Long products drift off the unitary manifold by ~log2(p) * eps; the
    // looser tolerance only guards against gross errors.
    return UnitaryOperator(binary_power(u.matrix(), p), 1e-8);
}

ComplexMatrix expm_dense(const ComplexMatrix& m, double t, const ExpmOptions& opts, OpCount* ops) {
    if (m.rows() > opts.max_dim || m.cols() > opts.max_dim) {
        std::ostringstream os;
        os << "expm_dense: dimension " << m.rows() << " exceeds guard " << opts.max_dim;
        throw ResourceError(os.str());
    }
    require_square_finite(m, "expm_dense");
    const Eigen::Index n = m.rows();
    const auto n3 = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
    auto tally = [&](std::uint64_t products) {
        if (ops != nullptr) ops->mac += products * n3;
    };

    // Higham (2005) degree-13 coefficients and the matching scaling threshold.
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    ComplexMatrix a = cplx(0.0, -t) * m;
    const double norm = one_norm(a);
    int squarings = 0;
    if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    if (squarings > 0) a /= std::ldexp(1.0, squarings);

    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    tally(3);

    ComplexMatrix inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    ComplexMatrix u_part = a6 * inner;
    u_part += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    ComplexMatrix u = a * u_part;
    tally(2);

    inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    ComplexMatrix v = a6 * inner;
    v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    tally(1);

    ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
    if (ops != nullptr) ops->mac += n3 / 3 + n3;

    for (int i = 0; i < squarings; ++i) r = r * r;
    tally(static_cast<std::uint64_t>(squarings));
    return r;
}

ComplexMatrix random_hermitian(Eigen::Index n, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = cplx(gauss(rng), gauss(rng));
    return scale * 0.5 * (g + g.adjoint());
}

UnitaryOperator random_unitary(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    // Fix the phase of each column so the draw is Haar distributed.
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx d = r(k, k);
        if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
    }
    return UnitaryOperator(q);
}

}  // namespace gaugeqpe::linalg
