#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace gaugeqpe::bench {

enum class Method { dense_expm, block_evolve, qpe_statevector };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct BenchPoint {
    Method method = Method::dense_expm;
    long long size_param = 0;  // (2l+1) n for ring paths, t for QPE
    double wall_time_s = 0;    // median over repeats
    std::optional<std::uint64_t> op_count;
    int repeats = 0;
    double spread = 0;  // (max - min) / median
    std::uint64_t seed = 0;
};

struct SkippedPoint {
    Method method;
    long long requested_size;
    std::string reason;
};

struct SuiteOptions {
    std::vector<Method> methods = {Method::dense_expm, Method::block_evolve, Method::qpe_statevector};
    int repeats = 5;
    std::uint64_t seed = 1;
    bool count_ops = false;
    int n_colors = 2;
    // Each timed sample loops the workload until it spans at least this long.
    double min_sample_s = 2e-3;
    long long dense_max_dim = 4096;
    // Dense/block cross-checks run only up to this ring dimension.
    long long validate_max_dim = 600;
};

struct SuiteResult {
    std::vector<BenchPoint> points;
    std::vector<SkippedPoint> skipped;
};

// Ring workloads use l = max(1, size / (2 n)), so the measured dimension is
// (2l+1) n, the nearest such value at or above `size`. QPE uses t = round(log2 size).
SuiteResult run_scaling_suite(const std::vector<long long>& sizes, const SuiteOptions& opts);

struct ScalingFit {
    Method method = Method::dense_expm;
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    std::string abscissa;  // "size" or "2^t"
    int n_points = 0;
};

// Least-squares fit of log(time) against log(size), or log(2^t) for QPE.
ScalingFit fit_scaling(const std::vector<BenchPoint>& points);

std::vector<BenchPoint> select(const std::vector<BenchPoint>& points, Method m);

// Appends rows `method,size,median_s,spread,op_count,seed`, writing the
// header when the file is new.
void append_csv(const std::filesystem::path& path, const std::vector<BenchPoint>& points);
nlohmann::json fit_to_json(const ScalingFit& fit);

}  // namespace gaugeqpe::bench
