#include "gaugeqpe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <stdexcept>

#include "gaugeqpe/errors.hpp"
#include "gaugeqpe/qpe.hpp"
#include "gaugeqpe/ring.hpp"

namespace gaugeqpe::bench {

const char* method_name(Method m) {
    switch (m) {
        case Method::dense_expm: return "dense_expm";
        case Method::block_evolve: return "block_evolve";
        case Method::qpe_statevector: return "qpe_statevector";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    for (Method m : {Method::dense_expm, Method::block_evolve, Method::qpe_statevector})
        if (name == method_name(m)) return m;
    throw PreconditionError("unknown bench method '" + name + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

ComplexVector random_unit(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
    return v / v.norm();
}

struct RingWorkload {
    ring::ModeBlockHamiltonian ham;
    ring::RingState state;
    double t;
};

RingWorkload make_ring_workload(long long size, int n, std::uint64_t seed) {
    const int l = std::max<int>(1, static_cast<int>(size / (2 * n)));
    ring::GaugeField gauge{HermitianOperator(linalg::random_hermitian(n, seed, 0.1)), {}};
    const auto state = ring::initial_localized_state(l, random_unit(n, seed + 1));
    return {ring::build_hamiltonian(gauge, l), state, ring::return_time(gauge.params)};
}

// Median seconds per call plus relative spread. The first call is a warm-up
// that also sizes the inner batch.
std::pair<double, double> time_calls(const std::function<void()>& call, int repeats, double min_sample_s) {
    auto t0 = Clock::now();
    call();
    const double first = std::chrono::duration<double>(Clock::now() - t0).count();
    const long long batch = first >= min_sample_s ? 1 : static_cast<long long>(std::ceil(min_sample_s / std::max(first, 1e-9)));

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        t0 = Clock::now();
        for (long long b = 0; b < batch; ++b) call();
        samples.push_back(std::chrono::duration<double>(Clock::now() - t0).count() / static_cast<double>(batch));
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    const double median = samples.size() % 2 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
    return {median, (samples.back() - samples.front()) / median};
}

double max_diff(const ring::RingState& a, const ring::RingState& b) {
    return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
}

void check(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("bench validation failed: " + what);
}

// Block evolution: per mode one Hermitian eigensolve (~9 n^3 for the
// tridiagonal QR route), two n^3 products to rebuild exp(-iHt), one n^2 apply.
std::uint64_t block_ops(const RingWorkload& w) {
    const auto n = static_cast<std::uint64_t>(w.state.n_colors());
    const auto modes = static_cast<std::uint64_t>(w.state.n_modes());
    return modes * (11 * n * n * n + n * n);
}

// Controlled stage: half the rows per bit get an n^2 row update, plus t-1
// squarings of U; inverse QFT: (2^t / 2) t butterflies per color.
std::uint64_t qpe_ops(int t, std::uint64_t n) {
    const std::uint64_t rows = std::uint64_t{1} << t;
    const auto tt = static_cast<std::uint64_t>(t);
    return tt * (rows / 2) * n * n + (tt - 1) * n * n * n + n * (rows / 2) * tt;
}

}  // namespace

SuiteResult run_scaling_suite(const std::vector<long long>& sizes, const SuiteOptions& opts) {
    if (opts.repeats < 3) throw PreconditionError("run_scaling_suite: repeats must be at least 3");
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw PreconditionError("run_scaling_suite: sizes must be ascending");

    SuiteResult out;
    for (Method method : opts.methods) {
        for (long long size : sizes) {
            const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(size);
            BenchPoint point;
            point.method = method;
            point.repeats = opts.repeats;
            point.seed = seed;
            try {
                if (method == Method::qpe_statevector) {
                    const int t = static_cast<int>(std::lround(std::log2(static_cast<double>(std::max(2LL, size)))));
                    qpe::QpeConfig cfg{t, 0, seed};
                    cfg.validate();
                    const auto u = linalg::random_unitary(opts.n_colors, seed);
                    const auto state = random_unit(opts.n_colors, seed + 1);
                    qpe::QpeResult last;
                    auto [median, spread] = time_calls([&] { last = qpe::qpe_estimate(u, state, cfg); }, opts.repeats,
                                                       opts.min_sample_s);
                    double total = 0;
                    for (double p : last.distribution.probs) total += p;
                    check(std::abs(total - 1.0) < 1e-9, "QPE distribution not normalized");
                    point.size_param = t;
                    point.wall_time_s = median;
                    point.spread = spread;
                    if (opts.count_ops) point.op_count = qpe_ops(t, static_cast<std::uint64_t>(opts.n_colors));
                } else {
                    const RingWorkload w = make_ring_workload(size, opts.n_colors, seed);
                    const long long dim = w.state.n_modes() * w.state.n_colors();
                    point.size_param = dim;
                    if (method == Method::dense_expm && dim > opts.dense_max_dim)
                        throw ResourceError("dense dimension " + std::to_string(dim) + " exceeds guard");
                    const bool validate = dim <= opts.validate_max_dim;
                    std::optional<ring::RingState> last;
                    std::pair<double, double> timing;
                    if (method == Method::dense_expm) {
                        const ring::DenseEvolveOptions dopts{opts.dense_max_dim};
                        timing = time_calls([&] { last = ring::evolve_dense(w.state, w.ham, w.t, dopts); }, opts.repeats,
                                            opts.min_sample_s);
                        if (opts.count_ops) {
                            linalg::OpCount ops;
                            ring::evolve_dense(w.state, w.ham, w.t, dopts, &ops);
                            point.op_count = ops.mac;
                        }
                        if (validate)
                            check(max_diff(*last, ring::evolve_block(w.state, w.ham, w.t)) < 1e-8,
                                  "dense evolution disagrees with block oracle");
                    } else {
                        timing = time_calls([&] { last = ring::evolve_block(w.state, w.ham, w.t); }, opts.repeats,
                                            opts.min_sample_s);
                        if (opts.count_ops) point.op_count = block_ops(w);
                        if (validate && dim <= 256)
                            check(max_diff(*last, ring::evolve_dense(w.state, w.ham, w.t)) < 1e-8,
                                  "block evolution disagrees with dense path");
                    }
                    check(std::abs(last->norm() - 1.0) < 1e-8, "evolution lost normalization");
                    point.wall_time_s = timing.first;
                    point.spread = timing.second;
                }
                out.points.push_back(point);
            } catch (const ResourceError& e) {
                out.skipped.push_back({method, size, e.what()});
            } catch (const PreconditionError& e) {
                out.skipped.push_back({method, size, e.what()});
            }
        }
    }
    return out;
}

std::vector<BenchPoint> select(const std::vector<BenchPoint>& points, Method m) {
    std::vector<BenchPoint> out;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out), [m](const BenchPoint& p) { return p.method == m; });
    return out;
}

ScalingFit fit_scaling(const std::vector<BenchPoint>& points) {
    if (points.size() < 4) throw PreconditionError("fit_scaling: need at least 4 points");
    const Method method = points.front().method;
    for (const auto& p : points) {
        if (p.method != method) throw PreconditionError("fit_scaling: points mix methods");
        if (!(p.wall_time_s > 0) || p.size_param <= 0) throw PreconditionError("fit_scaling: nonpositive time or size");
    }
    const bool qpe = method == Method::qpe_statevector;
    const auto count = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        const double x = qpe ? static_cast<double>(p.size_param) * std::log(2.0) : std::log(static_cast<double>(p.size_param));
        const double y = std::log(p.wall_time_s);
        xs.push_back(x);
        ys.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw PreconditionError("fit_scaling: sizes are all equal");
    ScalingFit fit;
    fit.method = method;
    fit.slope = (count * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / count;
    const double mean_y = sy / count;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.abscissa = qpe ? "2^t" : "size";
    fit.n_points = static_cast<int>(points.size());
    return fit;
}

void append_csv(const std::filesystem::path& path, const std::vector<BenchPoint>& points) {
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::app);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    if (fresh) os << "method,size,median_s,spread,op_count,seed\n";
    os << std::setprecision(9);
    for (const auto& p : points) {
        os << method_name(p.method) << ',' << p.size_param << ',' << p.wall_time_s << ',' << p.spread << ',';
        if (p.op_count) os << *p.op_count;
        os << ',' << p.seed << '\n';
    }
}

nlohmann::json fit_to_json(const ScalingFit& fit) {
    return {{"method", method_name(fit.method)}, {"slope", fit.slope},         {"intercept", fit.intercept},
            {"r_squared", fit.r_squared},        {"abscissa", fit.abscissa},   {"points", fit.n_points}};
}

}  // namespace gaugeqpe::bench
