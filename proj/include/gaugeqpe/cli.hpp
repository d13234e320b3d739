#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaugeqpe/bench.hpp"
#include "gaugeqpe/io.hpp"
#include "gaugeqpe/ring.hpp"

namespace gaugeqpe::cli {

// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,       // bad flags or parameters violating a precondition
    kIo = 2,          // unreadable/unwritable file or malformed content
    kMismatch = 3,    // compare: phases disagree beyond the resolution bound
    kAmbiguous = 4,   // compare: state is not an eigenvector (several ring peaks)
};

enum class Subcommand { ring_sim, qpe, compare, bench, figure };

struct RunConfig {
    Subcommand subcommand = Subcommand::ring_sim;
    std::optional<std::filesystem::path> problem_path;
    ring::RingPhysicalParams params;
    int l = 50;
    int grid_n = 512;
    int t_bits = 10;
    std::uint64_t shots = 0;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = ".";
    // Snapshot times for ring-sim, as fractions of the return time.
    std::vector<double> time_fractions = {0.0, 0.5, 1.0};
    int max_peaks = 0;  // 0: one per color
    int window = 5;
    double ambiguity_weight = 0.05;
    // compare: draw a random n-level problem instead of reading --problem.
    int random_n = 0;
    // bench
    std::vector<long long> sizes = {64, 128, 256, 512};
    std::vector<std::string> methods = {"dense_expm", "block_evolve", "qpe_statevector"};
    int repeats = 5;
    bool count_ops = false;
    bool quiet = false;
};

// H = E0 sigma_x with E0 / E_R = ratio, probing the ground state (1, -1)/sqrt 2.
io::Problem sigma_x_problem(double ratio = 2.0);
// H = E0 sigma_z with E0 / E_R = ratio, probing sqrt(0.8)|es> + sqrt(0.2)|gs>.
io::Problem sigma_z_mixture_problem(double ratio = 2.0, double excited_weight = 0.8);
// Seeded random Hermitian problem whose state is one of its eigenvectors.
io::Problem random_problem(int n, std::uint64_t seed);

struct CompareReport {
    double phi_ring = 0, phi_qpe = 0, phi_direct = 0;
    double d_ring_qpe = 0, d_ring_direct = 0, d_qpe_direct = 0;
    double bound = 0;
    int significant_peaks = 0;
    ring::PeakSet ring_peaks;
    int exit_code = kOk;
};

CompareReport compare_problem(const io::Problem& problem, const RunConfig& cfg);

int cmd_ring_sim(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_qpe(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_figure(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv (flags > --config file > defaults; GAUGEQPE_OUT_DIR supplies the
// output directory when --out-dir is absent) and runs the subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaugeqpe::cli
