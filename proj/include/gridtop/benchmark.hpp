#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gridtop/readings.hpp"
#include "gridtop/simulation.hpp"

namespace gridtop {

/// One grid cell: all trials at a single sample-count multiplier.
struct BenchmarkCell {
    double multiplier{};     // N = multiplier * base (n_i for phase specs, n otherwise)
    double mean_nodes{};
    double mean_samples{};
    int trials{};
    double success_rate_pct{};
    double mean_seconds{};        // identification only
    double mean_edge_accuracy{};  // fraction in [0, 1]
};

struct BenchmarkReport {
    std::string environment;
    std::vector<BenchmarkCell> cells;
};

struct BenchmarkOptions {
    std::vector<double> multipliers{1, 2, 3, 4, 5};
    int trials{10};
    std::uint64_t seed{0};
    bool noise_free{false};
    bool parallel{true};  // run trials across workers (capped by GRIDTOP_THREADS)
};

/// Generate-identify-score cycles over the whole grid. Per-trial seeds are
/// derived from options.seed, so results do not depend on the parallelism
/// degree. A failing trial counts as zero success and zero accuracy; the
/// grid never aborts.
BenchmarkReport run_benchmark(const NetworkSpec& spec, const NoiseConfig& noise,
                              const BenchmarkOptions& options);

std::string environment_note();

namespace io {

void write_benchmark_report(const std::filesystem::path& path, const BenchmarkReport& report);
BenchmarkReport read_benchmark_report(const std::filesystem::path& path);
void write_benchmark_summary(const std::filesystem::path& path, const BenchmarkReport& report);

}  // namespace io

}  // namespace gridtop
