#include "gaugeqpe/qpe.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace gaugeqpe::qpe {

void QpeConfig::validate() const {
    if (t_bits < 1 || t_bits > kMaxBits) {
        std::ostringstream os;
        os << "QpeConfig: t_bits=" << t_bits << " outside [1, " << kMaxBits << "]";
        throw PreconditionError(os.str());
    }
}

QpeRegisters::QpeRegisters(int t_bits, ComplexMatrix amplitudes) : t_(t_bits), amps_(std::move(amplitudes)) {
    QpeConfig{t_bits}.validate();
    if (static_cast<std::uint64_t>(amps_.rows()) != register1_size() || amps_.cols() < 1)
        throw PreconditionError("QpeRegisters: amplitude block does not have 2^t rows");
    if (std::abs(amps_.squaredNorm() - 1.0) > linalg::kStructuralTol)
        throw PreconditionError("QpeRegisters: state is not normalized");
}

QpeRegisters qpe_prepare(int t_bits, const ComplexVector& u) {
    QpeConfig{t_bits}.validate();
    if (u.size() == 0 || std::abs(u.norm() - 1.0) > linalg::kStructuralTol)
        throw PreconditionError("qpe_prepare: register-2 state must have unit norm");
    const auto rows = static_cast<Eigen::Index>(std::uint64_t{1} << t_bits);
    const double amp = 1.0 / std::sqrt(static_cast<double>(rows));
    return QpeRegisters(t_bits, (amp * ComplexVector::Ones(rows)) * u.transpose());
}

QpeRegisters controlled_unitary_all(const QpeRegisters& regs, const UnitaryOperator& u) {
    if (u.dim() != regs.n_colors()) throw PreconditionError("controlled_unitary_all: U does not act on register 2");
    const int t = regs.t_bits();
    ComplexMatrix amps = regs.amplitudes();
    // Rows are transposed color vectors, so v -> U v becomes row -> row U^T.
    ComplexMatrix power_t = u.matrix().transpose();
    for (int j = 0; j < t; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << j;
        for (std::uint64_t m = 0; m < regs.register1_size(); ++m) {
            if (m & bit) amps.row(static_cast<Eigen::Index>(m)) = (amps.row(static_cast<Eigen::Index>(m)) * power_t).eval();
        }
        if (j + 1 < t) power_t = (power_t * power_t).eval();
    }
    return QpeRegisters(t, std::move(amps));
}

void fft_radix2(Eigen::Ref<ComplexVector> data, int sign) {
    const auto n = static_cast<std::size_t>(data.size());
    if (n == 0 || (n & (n - 1)) != 0) throw PreconditionError("fft_radix2: length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[static_cast<Eigen::Index>(i)], data[static_cast<Eigen::Index>(j)]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            const cplx w = std::polar(1.0, sign * kTwoPi * static_cast<double>(k) / static_cast<double>(len));
            for (std::size_t start = 0; start < n; start += len) {
                const auto a = static_cast<Eigen::Index>(start + k);
                const auto b = static_cast<Eigen::Index>(start + k + half);
                const cplx odd = w * data[b];
                data[b] = data[a] - odd;
                data[a] += odd;
            }
        }
    }
}

namespace {

QpeRegisters transform(const QpeRegisters& regs, int sign) {
    ComplexMatrix amps = regs.amplitudes();
    const double scale = 1.0 / std::sqrt(static_cast<double>(regs.register1_size()));
    for (Eigen::Index a = 0; a < amps.cols(); ++a) {
        fft_radix2(amps.col(a), sign);
        amps.col(a) *= scale;
    }
    return QpeRegisters(regs.t_bits(), std::move(amps));
}

}  // namespace

QpeRegisters qft_inverse(const QpeRegisters& regs) { return transform(regs, -1); }
QpeRegisters qft_forward(const QpeRegisters& regs) { return transform(regs, +1); }

Register1Distribution measure_register1(const QpeRegisters& regs, const QpeConfig& cfg) {
    cfg.validate();
    Register1Distribution out;
    const Eigen::VectorXd exact = regs.amplitudes().cwiseAbs2().rowwise().sum();
    if (cfg.shots == 0) {
        out.probs.assign(exact.data(), exact.data() + exact.size());
        out.mode = MeasureMode::exact;
        return out;
    }

    // Inverse-CDF sampling driven by mt19937_64 with a 53-bit uniform, which
    // is bit-reproducible across standard libraries.
    std::vector<double> cdf(static_cast<std::size_t>(exact.size()));
    double acc = 0;
    for (Eigen::Index k = 0; k < exact.size(); ++k) cdf[static_cast<std::size_t>(k)] = (acc += exact[k]);
    std::mt19937_64 rng(cfg.rng_seed);
    std::vector<std::uint64_t> counts(cdf.size(), 0);
    for (std::uint64_t s = 0; s < cfg.shots; ++s) {
        const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        if (it == cdf.end()) --it;
        ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    out.probs.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        out.probs[k] = static_cast<double>(counts[k]) / static_cast<double>(cfg.shots);
    out.mode = MeasureMode::sampled;
    out.shots = cfg.shots;
    out.seed = cfg.rng_seed;
    return out;
}

QpeResult qpe_estimate(const UnitaryOperator& u, const ComplexVector& state, const QpeConfig& cfg) {
    cfg.validate();
    QpeRegisters regs = qpe_prepare(cfg.t_bits, state);
    regs = controlled_unitary_all(regs, u);
    regs = qft_inverse(regs);
    QpeResult out;
    out.distribution = measure_register1(regs, cfg);
    const auto& p = out.distribution.probs;
    // max_element keeps the first maximum, so ties resolve to the smallest k.
    out.k_best = static_cast<std::uint64_t>(std::max_element(p.begin(), p.end()) - p.begin());
    out.phi = kTwoPi * static_cast<double>(out.k_best) / static_cast<double>(p.size());
    return out;
}

double success_tail_bound(long long e) {
    if (e <= 1) throw DomainError("success_tail_bound: e must be at least 2");
    return 1.0 / (2.0 * static_cast<double>(e - 1));
}

std::uint64_t circular_index_distance(std::uint64_t a, std::uint64_t b, int t_bits) {
    const std::uint64_t size = std::uint64_t{1} << t_bits;
    const std::uint64_t d = (a > b ? a - b : b - a) % size;
    return std::min(d, size - d);
}

}  // namespace gaugeqpe::qpe
