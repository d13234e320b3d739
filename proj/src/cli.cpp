#include "gaugeqpe/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gaugeqpe/encodings.hpp"
#include "gaugeqpe/errors.hpp"
#include "gaugeqpe/qpe.hpp"

namespace gaugeqpe::cli {

namespace fs = std::filesystem;
using io::json;

io::Problem sigma_x_problem(double ratio) {
    ComplexMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    ComplexVector gs(2);
    gs << 1, -1;
    // E_R = 1, E0 = ratio.
    return enc::EnergyProblem{HermitianOperator(ratio * sx), 1.0, gs / std::sqrt(2.0)};
}

io::Problem sigma_z_mixture_problem(double ratio, double excited_weight) {
    ComplexMatrix sz(2, 2);
    sz << 1, 0, 0, -1;
    // |es> = (1, 0) carries +E0, |gs> = (0, 1) carries -E0.
    ComplexVector u(2);
    u << std::sqrt(excited_weight), std::sqrt(1.0 - excited_weight);
    return enc::EnergyProblem{HermitianOperator(ratio * sz), 1.0, u};
}

io::Problem random_problem(int n, std::uint64_t seed) {
    if (n < 1) throw PreconditionError("random_problem: n must be positive");
    const HermitianOperator h(linalg::random_hermitian(n, seed));
    const auto eig = linalg::eig_hermitian(h);
    const double radius = eig.eigenvalues.cwiseAbs().maxCoeff();
    // Keep every eigenphase inside (-2.5, 2.5) so nothing aliases.
    const double e_r = radius > 0 ? radius / 2.5 : 1.0;
    const auto k = static_cast<Eigen::Index>(seed % static_cast<std::uint64_t>(n));
    return enc::EnergyProblem{h, e_r, eig.eigenvectors.col(k)};
}

namespace {

enc::GaugeEncoding encode(const io::Problem& p, const ring::RingPhysicalParams& params) {
    if (const auto* e = std::get_if<enc::EnergyProblem>(&p)) return enc::encode_hamiltonian_as_gauge(*e, params);
    return enc::encode_unitary_as_gauge(std::get<enc::UnitarySpec>(p), params);
}

io::Problem require_problem(const RunConfig& cfg) {
    if (!cfg.problem_path) throw PreconditionError("--problem is required for this subcommand");
    return io::load_problem(*cfg.problem_path);
}

ring::PeakOptions peak_options(const RunConfig& cfg, Eigen::Index n_colors) {
    ring::PeakOptions opts;
    opts.max_peaks = cfg.max_peaks > 0 ? cfg.max_peaks : static_cast<int>(n_colors);
    opts.window = cfg.window;
    return opts;
}

void require_ring_resolution(const RunConfig& cfg) {
    if (cfg.l < 1) throw PreconditionError("--l must be at least 1");
    if (cfg.grid_n < 2 * cfg.l + 1) {
        std::ostringstream os;
        os << "--N " << cfg.grid_n << " cannot resolve 2l+1 = " << 2 * cfg.l + 1 << " modes";
        throw ResolutionError(os.str());
    }
}

std::string fraction_label(double f) {
    std::ostringstream os;
    os << f;
    return os.str();
}

struct RingRun {
    enc::GaugeEncoding encoding;
    ring::RingState start;
    ring::ModeBlockHamiltonian ham;
    double t_return;
};

RingRun prepare_ring(const io::Problem& problem, const RunConfig& cfg) {
    auto encoding = encode(problem, cfg.params);
    auto start = ring::initial_localized_state(cfg.l, io::problem_state(problem));
    auto ham = ring::build_hamiltonian(encoding.gauge, cfg.l);
    const double t_r = ring::return_time(cfg.params);
    return {std::move(encoding), std::move(start), std::move(ham), t_r};
}

ring::PositionDensity snapshot(const RingRun& run, double fraction, int grid_n) {
    return ring::position_density(ring::evolve_block(run.start, run.ham, fraction * run.t_return), grid_n, true);
}

void emit(std::ostream& out, const RunConfig& cfg, const std::string& text) {
    if (!cfg.quiet) out << text;
}

}  // namespace

int cmd_ring_sim(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require_ring_resolution(cfg);
    const io::Problem problem = require_problem(cfg);
    const RingRun run = prepare_ring(problem, cfg);
    if (run.encoding.aliasing_warning) err << "warning: " << *run.encoding.aliasing_warning << '\n';

    for (double f : cfg.time_fractions)
        io::write_density_csv(cfg.output_dir / ("density_t" + fraction_label(f) + ".csv"), snapshot(run, f, cfg.grid_n));

    const ring::RingState final_state = ring::evolve_block(run.start, run.ham, run.t_return);
    const ring::PeakSet peaks = ring::extract_peaks(ring::position_density(final_state, cfg.grid_n),
                                                    peak_options(cfg, run.start.n_colors()));
    io::write_json(cfg.output_dir / "peaks.json", io::peaks_to_json(peaks));

    json summary = {{"return_time", run.t_return}, {"l", cfg.l}, {"N", cfg.grid_n}, {"n_peaks", peaks.peaks.size()}};
    std::ostringstream text;
    text << std::setprecision(6) << std::fixed;
    text << "ring-sim: l=" << cfg.l << " N=" << cfg.grid_n << " t_R=" << run.t_return << '\n';
    if (peaks.peaks.empty()) {
        text << "  no localized peak found\n";
    } else {
        const auto& top = peaks.peaks.front();
        const double unwrapped = enc::unwrap_phase(top.phi);
        summary["phi"] = top.phi;
        summary["phi_unwrapped"] = unwrapped;
        text << "  dominant peak phi=" << top.phi << " (unwrapped " << unwrapped << ") weight=" << top.weight << '\n';
        if (const auto e_r = io::problem_reference_energy(problem)) {
            summary["E_R"] = *e_r;
            summary["energy"] = enc::phase_to_energy(unwrapped, *e_r);
            text << "  energy E = E_R * phi = " << enc::phase_to_energy(unwrapped, *e_r) << '\n';
        }
        for (std::size_t k = 1; k < peaks.peaks.size(); ++k)
            text << "  peak " << k << " phi=" << peaks.peaks[k].phi << " weight=" << peaks.peaks[k].weight << '\n';
    }
    if (run.encoding.aliasing_warning) summary["warning"] = *run.encoding.aliasing_warning;
    io::write_json(cfg.output_dir / "summary.json", summary);
    {
        std::ofstream os(cfg.output_dir / "summary.txt");
        os << text.str();
    }
    emit(out, cfg, text.str());
    return kOk;
}

int cmd_qpe(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const io::Problem problem = require_problem(cfg);
    const qpe::QpeConfig qcfg{cfg.t_bits, cfg.shots, cfg.seed};
    qcfg.validate();
    const auto result = qpe::qpe_estimate(io::problem_unitary(problem), io::problem_state(problem), qcfg);
    io::write_distribution_csv(cfg.output_dir / "distribution.csv", result.distribution);
    io::write_json(cfg.output_dir / "estimate.json", io::estimate_to_json(result, cfg.t_bits));

    std::ostringstream text;
    text << std::setprecision(6) << std::fixed;
    text << "qpe: t=" << cfg.t_bits << " k=" << result.k_best << " phi=" << result.phi
         << " p(k)=" << result.distribution.probs[result.k_best] << '\n';
    if (const auto e_r = io::problem_reference_energy(problem))
        text << "  energy E = E_R * phi = " << enc::phase_to_energy(enc::unwrap_phase(result.phi), *e_r) << '\n';
    emit(out, cfg, text.str());
    return kOk;
}

CompareReport compare_problem(const io::Problem& problem, const RunConfig& cfg) {
    require_ring_resolution(cfg);
    qpe::QpeConfig qcfg{cfg.t_bits, cfg.shots, cfg.seed};
    qcfg.validate();
    if (static_cast<std::uint64_t>(cfg.grid_n) < (std::uint64_t{1} << cfg.t_bits)) {
        std::ostringstream os;
        os << "compare needs N >= 2^t (N=" << cfg.grid_n << ", t=" << cfg.t_bits << ")";
        throw ResolutionError(os.str());
    }
    const ComplexVector& state = io::problem_state(problem);
    const auto encoding = encode(problem, cfg.params);
    const UnitaryOperator u = io::problem_unitary(problem);

    CompareReport r;
    r.ring_peaks = ring::estimate_phase_via_ring(encoding.gauge, state, cfg.l, cfg.grid_n,
                                                 peak_options(cfg, state.size()));
    for (const auto& p : r.ring_peaks.peaks)
        if (p.weight >= cfg.ambiguity_weight) ++r.significant_peaks;
    const auto q = qpe::qpe_estimate(u, state, qcfg);
    const auto direct = enc::direct_eigenphase(u, state);

    r.phi_ring = r.ring_peaks.peaks.empty() ? 0.0 : r.ring_peaks.peaks.front().phi;
    r.phi_qpe = q.phi;
    r.phi_direct = direct.phi;
    r.d_ring_qpe = ring::circular_distance(r.phi_ring, r.phi_qpe);
    r.d_ring_direct = ring::circular_distance(r.phi_ring, r.phi_direct);
    r.d_qpe_direct = ring::circular_distance(r.phi_qpe, r.phi_direct);
    r.bound = kTwoPi / static_cast<double>(std::uint64_t{1} << cfg.t_bits) + kTwoPi / (2.0 * cfg.l + 1.0);

    if (r.significant_peaks != 1) {
        r.exit_code = kAmbiguous;
    } else if (std::max({r.d_ring_qpe, r.d_ring_direct, r.d_qpe_direct}) > r.bound) {
        r.exit_code = kMismatch;
    }
    return r;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const io::Problem problem = cfg.random_n > 0 ? random_problem(cfg.random_n, cfg.seed) : require_problem(cfg);
    const CompareReport r = compare_problem(problem, cfg);

    json report = {{"phases", {{"ring", r.phi_ring}, {"qpe", r.phi_qpe}, {"direct", r.phi_direct}}},
                   {"distances", {{"ring_qpe", r.d_ring_qpe}, {"ring_direct", r.d_ring_direct}, {"qpe_direct", r.d_qpe_direct}}},
                   {"bound", r.bound},
                   {"significant_peaks", r.significant_peaks},
                   {"ring_peaks", io::peaks_to_json(r.ring_peaks)},
                   {"t", cfg.t_bits},
                   {"l", cfg.l},
                   {"N", cfg.grid_n},
                   {"exit_code", r.exit_code}};
    io::write_json(cfg.output_dir / "compare.json", report);

    std::ostringstream text;
    text << std::setprecision(6) << std::fixed;
    text << "compare: ring=" << r.phi_ring << " qpe=" << r.phi_qpe << " direct=" << r.phi_direct << " bound=" << r.bound << '\n';
    emit(out, cfg, text.str());
    if (r.exit_code == kAmbiguous)
        err << "compare: state is not an eigenvector; ring read-out shows " << r.significant_peaks << " significant peaks\n";
    else if (r.exit_code == kMismatch)
        err << "compare: phases disagree (max distance "
            << std::max({r.d_ring_qpe, r.d_ring_direct, r.d_qpe_direct}) << " > " << r.bound << ")\n";
    return r.exit_code;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    bench::SuiteOptions opts;
    opts.methods.clear();
    for (const auto& name : cfg.methods) opts.methods.push_back(bench::method_from_name(name));
    opts.repeats = cfg.repeats;
    opts.seed = cfg.seed;
    opts.count_ops = cfg.count_ops;
    const auto result = bench::run_scaling_suite(cfg.sizes, opts);
    bench::append_csv(cfg.output_dir / "bench.csv", result.points);
    for (const auto& s : result.skipped)
        err << "skipped " << bench::method_name(s.method) << " size " << s.requested_size << ": " << s.reason << '\n';

    json fits = json::array();
    std::ostringstream text;
    text << std::setprecision(4);
    for (const auto m : opts.methods) {
        const auto pts = bench::select(result.points, m);
        for (const auto& p : pts)
            text << bench::method_name(m) << " size=" << p.size_param << " median=" << p.wall_time_s << "s\n";
        if (pts.size() >= 4) {
            const auto fit = bench::fit_scaling(pts);
            fits.push_back(bench::fit_to_json(fit));
            text << "  slope vs " << fit.abscissa << ": " << fit.slope << " (r^2=" << fit.r_squared << ")\n";
        }
    }
    io::write_json(cfg.output_dir / "fits.json", fits);
    emit(out, cfg, text.str());
    return kOk;
}

int cmd_figure(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require_ring_resolution(cfg);
    qpe::QpeConfig{cfg.t_bits}.validate();

    // Ring snapshots of the two-level ground-state problem.
    const io::Problem fig3 = cfg.problem_path ? io::load_problem(*cfg.problem_path) : sigma_x_problem(2.0);
    const RingRun run3 = prepare_ring(fig3, cfg);
    const std::vector<std::pair<double, std::string>> snaps = {{0.0, "t0"}, {0.5, "thalf"}, {1.0, "tR"}};
    std::ofstream track(cfg.output_dir / "fig3_peak_track.csv");
    track << "fraction,phi\n" << std::setprecision(17);
    for (const auto& [f, label] : snaps) {
        const auto d = snapshot(run3, f, cfg.grid_n);
        io::write_density_csv(cfg.output_dir / ("fig3_density_" + label + ".csv"), d);
        ring::PeakOptions one;
        const auto peaks = ring::extract_peaks(d, one);
        track << f << ',' << (peaks.peaks.empty() ? 0.0 : peaks.peaks.front().phi) << '\n';
    }

    // Relocalization at two eigenphases for a non-eigenvector color.
    const RingRun run6 = prepare_ring(sigma_z_mixture_problem(2.0, 0.8), cfg);
    const auto d6 = snapshot(run6, 1.0, cfg.grid_n);
    io::write_density_csv(cfg.output_dir / "fig6_density_tR.csv", d6);
    ring::PeakOptions two;
    two.max_peaks = 2;
    two.window = cfg.window;
    io::write_json(cfg.output_dir / "fig6_peaks.json", io::peaks_to_json(ring::extract_peaks(d6, two)));

    // Register-1 outcome k <-> arc of the ring.
    std::ofstream slices(cfg.output_dir / "fig4_slices.csv");
    slices << "k,bits,phi_start,phi_end\n" << std::setprecision(17);
    const std::uint64_t rows = std::uint64_t{1} << cfg.t_bits;
    for (std::uint64_t k = 0; k < rows; ++k) {
        std::string bits(static_cast<std::size_t>(cfg.t_bits), '0');
        for (int b = 0; b < cfg.t_bits; ++b)
            if (k >> b & 1u) bits[static_cast<std::size_t>(cfg.t_bits - 1 - b)] = '1';
        slices << k << ',' << bits << ',' << kTwoPi * static_cast<double>(k) / static_cast<double>(rows) << ','
               << kTwoPi * static_cast<double>(k + 1) / static_cast<double>(rows) << '\n';
    }
    if (!track || !slices) throw std::runtime_error("figure: failed writing output files");
    emit(out, cfg, "figure data written to " + cfg.output_dir.string() + "\n");
    return kOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.params.validate();
        fs::create_directories(cfg.output_dir);
        switch (cfg.subcommand) {
            case Subcommand::ring_sim: return cmd_ring_sim(cfg, out, err);
            case Subcommand::qpe: return cmd_qpe(cfg, out, err);
            case Subcommand::compare: return cmd_compare(cfg, out, err);
            case Subcommand::bench: return cmd_bench(cfg, out, err);
            case Subcommand::figure: return cmd_figure(cfg, out, err);
        }
    } catch (const io::FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResolutionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenphase estimation by ring simulation and phase estimation"};
    app.footer(
        "Exit codes: 0 ok, 1 usage or invalid parameters, 2 file I/O or malformed input,\n"
        "            3 compare mismatch beyond resolution, 4 ambiguous spectrum (state not an eigenvector).\n"
        "Output directory defaults to $GAUGEQPE_OUT_DIR, then the current directory.");
    app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string problem, out_dir;
    app.add_option("--problem", problem, "Problem JSON (hamiltonian+E_R+state, or unitary+state)");
    app.add_option("--out-dir", out_dir, "Directory for output files");
    app.add_option("--hbar", cfg.params.hbar, "Reduced Planck constant")->capture_default_str();
    app.add_option("--charge", cfg.params.charge_q, "Particle charge q")->capture_default_str();
    app.add_option("--radius", cfg.params.radius_r, "Ring radius r")->capture_default_str();
    app.add_option("--mass", cfg.params.mass_mq, "Particle mass m_q")->capture_default_str();
    app.add_option("--l", cfg.l, "Mode cutoff; modes m in [-l, l]")->capture_default_str();
    app.add_option("--N", cfg.grid_n, "Ring grid points")->capture_default_str();
    app.add_option("--t", cfg.t_bits, "Register-1 qubits")->capture_default_str();
    app.add_option("--shots", cfg.shots, "Measurement shots (0 = exact distribution)")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for sampling and random problems")->capture_default_str();
    app.add_option("--times", cfg.time_fractions, "ring-sim snapshot times as fractions of t_R");
    app.add_option("--max-peaks", cfg.max_peaks, "Peaks to report (0 = one per color)")->capture_default_str();
    app.add_option("--window", cfg.window, "Peak refinement window in bins (odd)")->capture_default_str();
    app.add_option("--ambiguity-weight", cfg.ambiguity_weight, "compare: minimum weight of a significant peak")
        ->capture_default_str();
    app.add_option("--random-n", cfg.random_n, "compare: random n-level problem instead of --problem");
    app.add_option("--sizes", cfg.sizes, "bench: workload sizes (ascending)");
    app.add_option("--methods", cfg.methods, "bench: dense_expm, block_evolve, qpe_statevector");
    app.add_option("--repeats", cfg.repeats, "bench: timed repeats per point")->capture_default_str();
    app.add_flag("--count-ops", cfg.count_ops, "bench: record multiply-accumulate counts");
    app.add_flag("--quiet", cfg.quiet, "Suppress the human-readable summary");

    auto* ring_sim = app.add_subcommand("ring-sim", "Evolve a localized particle for one return time and read the phase");
    auto* qpe_cmd = app.add_subcommand("qpe", "Simulate phase estimation at register level");
    auto* compare = app.add_subcommand("compare", "Cross-check ring, QPE and direct eigendecomposition");
    auto* bench_cmd = app.add_subcommand("bench", "Scaling study of dense vs block evolution and QPE");
    auto* figure = app.add_subcommand("figure", "Emit density snapshots, two-peak data and the slice table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    if (ring_sim->parsed()) cfg.subcommand = Subcommand::ring_sim;
    if (qpe_cmd->parsed()) cfg.subcommand = Subcommand::qpe;
    if (compare->parsed()) cfg.subcommand = Subcommand::compare;
    if (bench_cmd->parsed()) cfg.subcommand = Subcommand::bench;
    if (figure->parsed()) cfg.subcommand = Subcommand::figure;
    if (!problem.empty()) cfg.problem_path = problem;
    if (!out_dir.empty()) {
        cfg.output_dir = out_dir;
    } else if (const char* env = std::getenv("GAUGEQPE_OUT_DIR"); env != nullptr && *env != '\0') {
        cfg.output_dir = env;
    }
    return dispatch(cfg, out, err);
}

}  // namespace gaugeqpe::cli
