#include "gaugeqpe/ring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace gaugeqpe::ring {

void RingPhysicalParams::validate() const {
    if (!(hbar > 0) || !(radius_r > 0) || !(mass_mq > 0) || !(charge_q != 0) || !std::isfinite(hbar) ||
        !std::isfinite(radius_r) || !std::isfinite(mass_mq) || !std::isfinite(charge_q)) {
        std::ostringstream os;
        os << "RingPhysicalParams: need hbar, r, m_q > 0 and q != 0 (got hbar=" << hbar << ", q=" << charge_q
           << ", r=" << radius_r << ", m_q=" << mass_mq << ")";
        throw PreconditionError(os.str());
    }
}

RingState::RingState(int mode_cutoff_l, ComplexMatrix coeffs, double norm_tol)
    : l_(mode_cutoff_l), coeffs_(std::move(coeffs)) {
    if (l_ < 0 || coeffs_.rows() != 2 * static_cast<Eigen::Index>(l_) + 1 || coeffs_.cols() < 1) {
        std::ostringstream os;
        os << "RingState: coefficient block " << coeffs_.rows() << "x" << coeffs_.cols()
           << " does not match cutoff l=" << l_;
        throw PreconditionError(os.str());
    }
    const double norm = coeffs_.norm();
    if (!std::isfinite(norm) || std::abs(norm * norm - 1.0) > norm_tol) {
        std::ostringstream os;
        os << "RingState: squared norm " << norm * norm << " differs from 1 by more than " << norm_tol;
        throw PreconditionError(os.str());
    }
}

cplx RingState::overlap(const RingState& other) const {
    if (other.coeffs_.rows() != coeffs_.rows() || other.coeffs_.cols() != coeffs_.cols())
        throw PreconditionError("RingState::overlap: shape mismatch");
    return (other.coeffs_.conjugate().cwiseProduct(coeffs_)).sum();
}

ModeBlockHamiltonian::ModeBlockHamiltonian(int mode_cutoff_l, std::vector<HermitianOperator> blocks,
                                           RingPhysicalParams params)
    : l_(mode_cutoff_l), blocks_(std::move(blocks)), params_(params) {
    if (l_ < 1 || blocks_.size() != static_cast<std::size_t>(2 * l_ + 1))
        throw PreconditionError("ModeBlockHamiltonian: need exactly 2l+1 blocks with l >= 1");
    const Eigen::Index n = blocks_.front().dim();
    for (const auto& b : blocks_)
        if (b.dim() != n) throw PreconditionError("ModeBlockHamiltonian: blocks differ in dimension");
}

ComplexMatrix ModeBlockHamiltonian::assemble_dense() const {
    const Eigen::Index n = n_colors();
    const Eigen::Index dim = static_cast<Eigen::Index>(blocks_.size()) * n;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const auto off = static_cast<Eigen::Index>(k) * n;
        h.block(off, off, n, n) = blocks_[k].matrix();
    }
    return h;
}

double return_time(const RingPhysicalParams& params) {
    params.validate();
    return 4.0 * kPi * params.mass_mq * params.radius_r * params.radius_r / params.hbar;
}

ModeBlockHamiltonian build_hamiltonian(const GaugeField& gauge, int l, QuadraticTerm quad) {
    gauge.params.validate();
    if (l < 1) throw PreconditionError("build_hamiltonian: mode cutoff l must be >= 1");
    const auto& p = gauge.params;
    const Eigen::Index n = gauge.n_colors();
    const ComplexMatrix qa = p.charge_q * gauge.a_phi.matrix();
    const ComplexMatrix qa2 = qa * qa;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const double inv2m = 1.0 / (2.0 * p.mass_mq);

    std::vector<HermitianOperator> blocks;
    blocks.reserve(static_cast<std::size_t>(2 * l + 1));
    for (int m = -l; m <= l; ++m) {
        const double k = p.hbar * m / p.radius_r;
        // (k I - qA)^2 = k^2 I - 2 k qA + (qA)^2
        ComplexMatrix h = (k * k) * id - (2.0 * k) * qa;
        if (quad == QuadraticTerm::keep) h += qa2;
        blocks.emplace_back(inv2m * h);
    }
    return ModeBlockHamiltonian(l, std::move(blocks), p);
}

RingState initial_localized_state(int l, const ComplexVector& color) {
    if (l < 0) throw PreconditionError("initial_localized_state: l must be nonnegative");
    if (color.size() == 0 || std::abs(color.norm() - 1.0) > linalg::kStructuralTol)
        throw PreconditionError("initial_localized_state: color vector must have unit norm");
    const Eigen::Index modes = 2 * static_cast<Eigen::Index>(l) + 1;
    const double amp = 1.0 / std::sqrt(static_cast<double>(modes));
    ComplexMatrix coeffs = (amp * ComplexVector::Ones(modes)) * color.transpose();
    return RingState(l, std::move(coeffs));
}

namespace {

void require_compatible(const RingState& state, const ModeBlockHamiltonian& ham, const char* what) {
    if (state.mode_cutoff() != ham.mode_cutoff() || state.n_colors() != ham.n_colors()) {
        std::ostringstream os;
        os << what << ": state (l=" << state.mode_cutoff() << ", n=" << state.n_colors()
           << ") does not match Hamiltonian (l=" << ham.mode_cutoff() << ", n=" << ham.n_colors() << ")";
        throw PreconditionError(os.str());
    }
}

}  // namespace

RingState evolve_block(const RingState& state, const ModeBlockHamiltonian& ham, double t) {
    require_compatible(state, ham, "evolve_block");
    const int l = state.mode_cutoff();
    const double scale = -t / ham.params().hbar;
    ComplexMatrix out(state.n_modes(), state.n_colors());
    for (int m = -l; m <= l; ++m) {
        const ComplexMatrix u = linalg::spectral_exponential(linalg::eig_hermitian(ham.block(m)), scale);
        out.row(m + l) = (u * state.mode(m).transpose()).transpose();
    }
    return RingState(l, std::move(out));
}

RingState evolve_dense(const RingState& state, const ModeBlockHamiltonian& ham, double t,
                       const DenseEvolveOptions& opts, linalg::OpCount* ops) {
    require_compatible(state, ham, "evolve_dense");
    const Eigen::Index n = state.n_colors();
    const Eigen::Index dim = state.n_modes() * n;
    if (dim > opts.max_dim) {
        std::ostringstream os;
        os << "evolve_dense: dense dimension " << dim << " exceeds guard " << opts.max_dim;
        throw ResourceError(os.str());
    }
    const ComplexMatrix u =
        linalg::expm_dense(ham.assemble_dense(), t / ham.params().hbar, linalg::ExpmOptions{opts.max_dim}, ops);

    // Mode-major flattening: index (m + l) * n + a.
    ComplexVector v(dim);
    for (Eigen::Index row = 0; row < state.n_modes(); ++row) v.segment(row * n, n) = state.coeffs().row(row).transpose();
    const ComplexVector w = u * v;
    if (ops != nullptr) ops->mac += static_cast<std::uint64_t>(dim) * static_cast<std::uint64_t>(dim);

    ComplexMatrix out(state.n_modes(), n);
    for (Eigen::Index row = 0; row < state.n_modes(); ++row) out.row(row) = w.segment(row * n, n).transpose();
    return RingState(state.mode_cutoff(), std::move(out), 1e-8);
}

PositionDensity position_density(const RingState& state, int grid_size, bool with_colors) {
    const int l = state.mode_cutoff();
    if (grid_size < 2 * l + 1) {
        std::ostringstream os;
        os << "position_density: grid of " << grid_size << " points cannot resolve " << 2 * l + 1 << " modes";
        throw ResolutionError(os.str());
    }
    const Eigen::Index n = state.n_colors();
    const double norm2 = state.coeffs().squaredNorm();

    // twiddle[k] = exp(2 pi i k / N); mode m at grid j uses index (m j) mod N.
    ComplexVector twiddle(grid_size);
    for (int k = 0; k < grid_size; ++k) twiddle[k] = std::polar(1.0, kTwoPi * k / grid_size);

    PositionDensity out;
    out.grid_size = grid_size;
    out.phi_grid = RealVector::LinSpaced(grid_size, 0.0, kTwoPi * (grid_size - 1) / grid_size);
    out.density = RealVector::Zero(grid_size);
    Eigen::MatrixXd per_color = Eigen::MatrixXd::Zero(grid_size, n);

    const long long big_n = grid_size;
    for (int j = 0; j < grid_size; ++j) {
        for (Eigen::Index a = 0; a < n; ++a) {
            cplx psi = 0;
            for (int m = -l; m <= l; ++m) {
                long long idx = (static_cast<long long>(m) * j) % big_n;
                if (idx < 0) idx += big_n;
                psi += state.coeffs()(m + l, a) * twiddle[static_cast<Eigen::Index>(idx)];
            }
            per_color(j, a) = std::norm(psi) / (kTwoPi * norm2);
        }
    }
    out.density = per_color.rowwise().sum();
    if (with_colors) out.per_color = std::move(per_color);
    return out;
}

double wrap_2pi(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0) w += kTwoPi;
    if (w >= kTwoPi) w = 0;
    return w;
}

double circular_distance(double a, double b) {
    const double d = wrap_2pi(a - b);
    return std::min(d, kTwoPi - d);
}

PeakSet extract_peaks(const PositionDensity& density, const PeakOptions& opts) {
    if (opts.max_peaks < 1) throw PreconditionError("extract_peaks: max_peaks must be positive");
    if (opts.window < 1 || opts.window % 2 == 0) throw PreconditionError("extract_peaks: window must be a positive odd integer");
    const int bins = density.grid_size;
    if (bins < 3 || density.density.size() != bins) throw PreconditionError("extract_peaks: malformed density");

    const RealVector& d = density.density;
    const double dphi = density.bin_width();
    auto at = [&](int j) { return d[((j % bins) + bins) % bins]; };

    const double global_max = d.maxCoeff();
    const double floor = std::max(opts.min_relative_height * global_max, opts.min_contrast / kTwoPi);

    std::vector<int> candidates;
    for (int j = 0; j < bins; ++j) {
        const double left = at(j - 1), right = at(j + 1), here = d[j];
        if (here >= left && here >= right && (here > left || here > right) && here >= floor) candidates.push_back(j);
    }
    // Highest first; equal heights keep ascending grid order.
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) { return d[a] > d[b]; });

    auto bin_distance = [bins](int a, int b) {
        const int diff = std::abs(a - b) % bins;
        return std::min(diff, bins - diff);
    };

    std::vector<int> chosen;
    for (int j : candidates) {
        if (static_cast<int>(chosen.size()) == opts.max_peaks) break;
        const bool clear = std::all_of(chosen.begin(), chosen.end(), [&](int c) { return bin_distance(c, j) >= opts.window; });
        if (clear) chosen.push_back(j);
    }

    PeakSet out;
    out.resolution = dphi;
    const int half = opts.window / 2;
    for (int j : chosen) {
        cplx centroid = 0;
        for (int o = -half; o <= half; ++o) centroid += at(j + o) * std::polar(1.0, (j + o) * dphi);
        Peak p;
        p.phi = wrap_2pi(std::arg(centroid));
        double mass = 0, spread = 0;
        for (int o = -half; o <= half; ++o) {
            const double w = at(j + o);
            const double delta = std::remainder((j + o) * dphi - p.phi, kTwoPi);
            mass += w;
            spread += w * delta * delta;
        }
        p.width = mass > 0 ? std::sqrt(spread / mass) : 0.0;
        out.peaks.push_back(p);
    }

    // Every grid bin is credited to its nearest peak so the weights capture
    // the Dirichlet sidelobes as well as the main lobe.
    if (!out.peaks.empty()) {
        for (int j = 0; j < bins; ++j) {
            const double phi = j * dphi;
            std::size_t best = 0;
            double best_dist = circular_distance(phi, out.peaks[0].phi);
            for (std::size_t k = 1; k < out.peaks.size(); ++k) {
                const double dist = circular_distance(phi, out.peaks[k].phi);
                if (dist < best_dist) {
                    best = k;
                    best_dist = dist;
                }
            }
            out.peaks[best].weight += d[j] * dphi;
        }
    }
    std::stable_sort(out.peaks.begin(), out.peaks.end(), [](const Peak& a, const Peak& b) { return a.weight > b.weight; });
    return out;
}

PeakSet estimate_phase_via_ring(const GaugeField& gauge, const ComplexVector& color, int l, int grid_size,
                                const PeakOptions& opts) {
    if (color.size() != gauge.n_colors()) throw PreconditionError("estimate_phase_via_ring: color dimension mismatch");
    if (grid_size < 2 * l + 1) {
        std::ostringstream os;
        os << "estimate_phase_via_ring: N=" << grid_size << " < 2l+1=" << 2 * l + 1;
        throw ResolutionError(os.str());
    }
    const RingState start = initial_localized_state(l, color);
    const ModeBlockHamiltonian ham = build_hamiltonian(gauge, l);
    const RingState end = evolve_block(start, ham, return_time(gauge.params));
    return extract_peaks(position_density(end, grid_size), opts);
}

PeakSet estimate_phase_via_ring(const GaugeField& gauge, const ComplexVector& color, int l, int grid_size) {
    PeakOptions opts;
    opts.max_peaks = static_cast<int>(gauge.n_colors());
    return estimate_phase_via_ring(gauge, color, l, grid_size, opts);
}

double predicted_peak(const RingPhysicalParams& params, double lambda) {
    return wrap_2pi(-kVelocityFactor * kTwoPi * params.radius_r * (params.charge_q / params.hbar) * lambda);
}

}  // namespace gaugeqpe::ring
