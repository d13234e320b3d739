#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gaugeqpe/cli.hpp"
#include "gaugeqpe/encodings.hpp"
#include "gaugeqpe/qpe.hpp"

using namespace gaugeqpe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gaugeqpe");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gaugeqpe_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

Outcome a1_ground_energy() {
    const auto dir = scratch("a1");
    io::save_problem(dir / "problem.json", cli::sigma_x_problem(2.0));
    const auto start = Clock::now();
    const int code = run_cli({"ring-sim", "--problem", (dir / "problem.json").string(), "--l", "50", "--N", "512",
                              "--out-dir", dir.string(), "--quiet"});
    const double elapsed = seconds_since(start);
    if (code != 0) return {false, "ring-sim exit code " + std::to_string(code)};
    const auto summary = io::read_json(dir / "summary.json");
    const double phi = summary.at("phi_unwrapped").get<double>();
    const double energy = summary.at("energy").get<double>();
    const double e_r = summary.at("E_R").get<double>();
    const double tol = kTwoPi / 101;
    const bool ok = std::abs(phi + 2.0) <= tol && std::abs(energy + 2.0 * e_r) <= e_r * tol && elapsed < 10.0;
    return {ok, fmt("phi=%.6f energy/E_R=%.6f time=%.3fs", phi, energy / e_r, elapsed)};
}

Outcome a2_two_peaks() {
    const auto dir = scratch("a2");
    io::save_problem(dir / "problem.json", cli::sigma_z_mixture_problem(2.0, 0.8));
    const auto start = Clock::now();
    const int code = run_cli({"ring-sim", "--problem", (dir / "problem.json").string(), "--l", "50", "--N", "512",
                              "--out-dir", dir.string(), "--quiet"});
    const double elapsed = seconds_since(start);
    if (code != 0) return {false, "ring-sim exit code " + std::to_string(code)};
    const auto peaks = io::peaks_from_json(io::read_json(dir / "peaks.json"));
    if (peaks.peaks.size() != 2) return {false, "expected 2 peaks, found " + std::to_string(peaks.peaks.size())};
    const auto& hi = peaks.peaks[0];
    const auto& lo = peaks.peaks[1];
    // Excited (+E0) and ground (-E0) phases are mirror images about 0.
    const double asym = ring::circular_distance(hi.phi, kTwoPi - lo.phi);
    const bool ok = std::abs(hi.weight - 0.8) <= 0.02 && std::abs(lo.weight - 0.2) <= 0.02 &&
                    asym <= 2 * peaks.resolution && elapsed < 10.0;
    return {ok, fmt("weights=%.4f/%.4f asymmetry=%.2e", hi.weight, lo.weight, asym) + fmt(" time=%.3fs", elapsed)};
}

Outcome a3_exact_phase() {
    ComplexMatrix u(1, 1);
    u(0, 0) = std::polar(1.0, kTwoPi * 3 / 8);
    ComplexVector s(1);
    s << 1;
    const auto start = Clock::now();
    const auto r = qpe::qpe_estimate(UnitaryOperator(u), s, {3});
    const double elapsed = seconds_since(start);
    const double p3 = r.distribution.probs.at(3);
    return {p3 >= 1 - 1e-9 && r.k_best == 3 && elapsed < 1.0, fmt("P(k=3)=%.15f time=%.4fs", p3, elapsed)};
}

Outcome a4_tail_bound() {
    const int t = 8;
    const std::uint64_t size = std::uint64_t{1} << t;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    ComplexVector s(1);
    s << 1;
    int violations = 0;
    double worst = 0;
    const auto start = Clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        const double phi = uni(rng);
        ComplexMatrix u(1, 1);
        u(0, 0) = std::polar(1.0, phi);
        const auto r = qpe::qpe_estimate(UnitaryOperator(u), s, {t});
        const auto nearest = static_cast<std::uint64_t>(std::llround(phi / kTwoPi * static_cast<double>(size))) % size;
        for (long long e : {2LL, 4LL, 8LL}) {
            double tail = 0;
            for (std::uint64_t k = 0; k < size; ++k)
                if (qpe::circular_index_distance(k, nearest, t) > static_cast<std::uint64_t>(e)) tail += r.distribution.probs[k];
            const double bound = qpe::success_tail_bound(e);
            worst = std::max(worst, tail / bound);
            if (tail > bound) ++violations;
        }
    }
    const double elapsed = seconds_since(start);
    return {violations == 0 && elapsed < 30.0,
            fmt("violations=%.0f worst tail/bound=%.4f time=%.3fs", violations, worst, elapsed)};
}

Outcome a5_agreement() {
    const auto dir = scratch("a5");
    int failures = 0;
    std::string first_failure;
    const auto start = Clock::now();
    for (int i = 0; i < 25; ++i) {
        const int n = 2 + i % 3;
        const auto path = dir / ("problem_" + std::to_string(i) + ".json");
        io::save_problem(path, cli::random_problem(n, 1000 + static_cast<std::uint64_t>(i)));
        const int code = run_cli({"compare", "--problem", path.string(), "--t", "10", "--l", "200", "--N", "1024",
                                  "--out-dir", (dir / std::to_string(i)).string(), "--quiet"});
        if (code != 0) {
            if (failures++ == 0) first_failure = "problem " + std::to_string(i) + " exit " + std::to_string(code);
        }
    }
    const double elapsed = seconds_since(start);
    return {failures == 0 && elapsed < 300.0,
            fmt("failures=%.0f/25 time=%.2fs", failures, elapsed) + (first_failure.empty() ? "" : " " + first_failure)};
}

Outcome a6_scaling() {
    bench::SuiteOptions opts;
    opts.methods = {bench::Method::dense_expm, bench::Method::block_evolve};
    const auto start = Clock::now();
    const auto res = bench::run_scaling_suite({64, 128, 256, 512}, opts);
    const double elapsed = seconds_since(start);
    if (!res.skipped.empty()) return {false, "skipped point: " + res.skipped.front().reason};
    const auto dense = bench::fit_scaling(bench::select(res.points, bench::Method::dense_expm));
    const auto block = bench::fit_scaling(bench::select(res.points, bench::Method::block_evolve));
    const bool ok = dense.slope >= 1.8 && dense.slope <= 3.5 && block.slope <= dense.slope - 0.5 && elapsed < 600.0;
    return {ok, fmt("dense slope=%.3f block slope=%.3f", dense.slope, block.slope) + fmt(" time=%.1fs", elapsed)};
}

Outcome a7_numerics() {
    int cases = 0;
    double worst_norm = 0, worst_paths = 0, worst_qft = 0, worst_enc = 0;
    const auto start = Clock::now();
    for (std::uint64_t seed = 0; seed < 100; ++seed, ++cases) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 4);
        // Keep the dense dimension (2l+1) n within 202.
        const int ll = std::min(1 + static_cast<int>(seed % 25), static_cast<int>((202 / n - 1) / 2));

        // Ring evolution preserves the norm, and the dense and block paths agree.
        const auto h = HermitianOperator(linalg::random_hermitian(n, seed, 0.3));
        const ring::GaugeField gauge{h, {}};
        const auto ham = ring::build_hamiltonian(gauge, ll);
        ComplexVector color = linalg::random_unitary(n, seed + 7).matrix().col(0);
        const auto s0 = ring::initial_localized_state(ll, color);
        const double t = ring::return_time(gauge.params) * (0.1 + 0.01 * static_cast<double>(seed));
        const auto sb = ring::evolve_block(s0, ham, t);
        const auto sd = ring::evolve_dense(s0, ham, t);
        worst_norm = std::max(worst_norm, std::abs(sb.norm() - 1.0));
        worst_norm = std::max(worst_norm, std::abs(sd.norm() - 1.0));
        worst_paths = std::max(worst_paths, (sb.coeffs() - sd.coeffs()).cwiseAbs().maxCoeff());

        // QFT round trip.
        const int bits = 1 + static_cast<int>(seed % 10);
        std::mt19937_64 rng(seed + 11);
        std::normal_distribution<double> gauss;
        ComplexMatrix amps(Eigen::Index{1} << bits, n);
        for (Eigen::Index i = 0; i < amps.size(); ++i) amps.data()[i] = cplx(gauss(rng), gauss(rng));
        amps /= amps.norm();
        const qpe::QpeRegisters regs(bits, amps);
        const auto back = qpe::qft_forward(qpe::qft_inverse(regs));
        worst_qft = std::max(worst_qft, (back.amplitudes() - amps).cwiseAbs().maxCoeff());

        // Unitary -> gauge -> holonomy round trip.
        const auto u = linalg::random_unitary(n, seed + 13);
        ComplexVector e0 = ComplexVector::Zero(n);
        e0[0] = 1;
        const auto g = enc::encode_unitary_as_gauge({u, e0, std::nullopt}, {});
        worst_enc = std::max(worst_enc, (enc::gauge_holonomy(g.gauge).matrix() - u.matrix()).cwiseAbs().maxCoeff());
    }
    const double elapsed = seconds_since(start);
    const bool ok = cases >= 100 && worst_norm <= 1e-10 && worst_paths <= 1e-8 && worst_qft <= 1e-10 &&
                    worst_enc <= 1e-8 && elapsed < 120.0;
    return {ok, fmt("norm=%.1e dense-block=%.1e qft=%.1e", worst_norm, worst_paths, worst_qft) +
                    fmt(" encode=%.1e time=%.2fs", worst_enc, elapsed)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"A1", a1_ground_energy}, {"A2", a2_two_peaks}, {"A3", a3_exact_phase}, {"A4", a4_tail_bound},
        {"A5", a5_agreement},     {"A6", a6_scaling},   {"A7", a7_numerics},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
