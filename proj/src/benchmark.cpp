#include "gridtop/benchmark.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>

#include "gridtop/errors.hpp"
#include "gridtop/identification.hpp"
#include "gridtop/io.hpp"
#include "gridtop/kernels.hpp"

namespace gridtop {

namespace {

struct TrialOutcome {
    bool success{};
    double accuracy{};
    double seconds{};
    double nodes{};
    double samples{};
};

Eigen::Index multiplier_base(const NetworkSpec& spec, const LayeredNetwork& net) {
    // Phase grids scale N with the number of independent (consumer) nodes,
    // topology grids with the total node count.
    if (std::holds_alternative<PhaseSpec>(spec))
        return static_cast<Eigen::Index>(net.layer(1).members.size());
    return net.node_count();
}

TrialOutcome run_trial(const NetworkSpec& spec, const NoiseConfig& noise, double multiplier,
                       std::uint64_t trial_seed, bool noise_free) {
    NoiseConfig cfg = noise;
    cfg.rng_seed = trial_seed;

    TrialOutcome outcome;
    const auto started = std::chrono::steady_clock::now();
    try {
        LayeredNetwork net = gen_network(spec, trial_seed);
        const auto base = multiplier_base(spec, net);
        const auto samples = static_cast<Eigen::Index>(std::llround(multiplier * base));
        outcome.nodes = static_cast<double>(net.node_count());
        outcome.samples = static_cast<double>(samples);

        GroundTruth gt = generate_for_network(std::move(net), spec, samples, cfg, noise_free);

        const auto t0 = std::chrono::steady_clock::now();
        const TopologyResult inferred =
            identify_topology(gt.noisy_readings, gt.network.layers(), cfg);
        outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count();

        const Score s = score(inferred, gt.network);
        outcome.success = s.success;
        outcome.accuracy = s.edge_accuracy;
    } catch (const std::exception&) {
        // A failing trial scores zero; the grid keeps going.
        outcome.success = false;
        outcome.accuracy = 0.0;
        if (outcome.seconds == 0.0)
            outcome.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
    return outcome;
}

}  // namespace

std::string environment_note() {
    std::ostringstream out;
#if defined(__VERSION__)
    out << "compiler " << __VERSION__ << "; ";
#endif
    out << std::thread::hardware_concurrency() << " hardware threads; workers "
        << kernels::max_threads();
#if defined(_OPENMP)
    out << "; OpenMP on";
#else
    out << "; OpenMP off";
#endif
#if defined(GRIDTOP_USE_LAPACKE)
    out << "; LAPACK SVD";
#else
    out << "; Eigen SVD";
#endif
    return out.str();
}

BenchmarkReport run_benchmark(const NetworkSpec& spec, const NoiseConfig& noise,
                              const BenchmarkOptions& options) {
    if (options.trials < 1) throw std::invalid_argument("need at least one trial");
    for (const double m : options.multipliers)
        if (m < 1.0) throw std::invalid_argument("multipliers must be >= 1");

    BenchmarkReport report;
    report.environment = environment_note();

    for (std::size_t mi = 0; mi < options.multipliers.size(); ++mi) {
        const double multiplier = options.multipliers[mi];
        std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(options.trials));

        const int workers = options.parallel ? kernels::max_threads() : 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (int t = 0; t < options.trials; ++t) {
            const std::uint64_t trial_seed = kernels::mix_seed(
                options.seed, (static_cast<std::uint64_t>(mi) << 32) |
                                  static_cast<std::uint64_t>(t));
            outcomes[static_cast<std::size_t>(t)] =
                run_trial(spec, noise, multiplier, trial_seed, options.noise_free);
        }

        BenchmarkCell cell;
        cell.multiplier = multiplier;
        cell.trials = options.trials;
        double successes = 0, accuracy = 0, seconds = 0, nodes = 0, samples = 0;
        for (const auto& o : outcomes) {
            successes += o.success ? 1.0 : 0.0;
            accuracy += o.accuracy;
            seconds += o.seconds;
            nodes += o.nodes;
            samples += o.samples;
        }
        const auto trials = static_cast<double>(options.trials);
        cell.success_rate_pct = 100.0 * successes / trials;
        cell.mean_edge_accuracy = accuracy / trials;
        cell.mean_seconds = seconds / trials;
        cell.mean_nodes = nodes / trials;
        cell.mean_samples = samples / trials;
        report.cells.push_back(cell);
    }
    return report;
}

namespace io {

void write_benchmark_report(const std::filesystem::path& path, const BenchmarkReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << "# gridtop benchmark v1\n";
    out << "# environment=" << report.environment << "\n";
    out << "multiplier\tmean_nodes\tmean_samples\ttrials\tsuccess_rate_pct\tmean_seconds\t"
           "mean_edge_accuracy\n";
    for (const auto& cell : report.cells)
        out << format_double(cell.multiplier) << "\t" << format_double(cell.mean_nodes) << "\t"
            << format_double(cell.mean_samples) << "\t" << cell.trials << "\t"
            << format_double(cell.success_rate_pct) << "\t" << format_double(cell.mean_seconds)
            << "\t" << format_double(cell.mean_edge_accuracy) << "\n";
}

BenchmarkReport read_benchmark_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    const std::string name = path.string();
    BenchmarkReport report;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("# environment=", 0) == 0) {
            report.environment = line.substr(std::string("# environment=").size());
            continue;
        }
        if (line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("multiplier", 0) != 0)
                throw ParseError(name, line_no, "expected benchmark header row");
            header_seen = true;
            continue;
        }
        std::istringstream fields(line);
        std::string f[7];
        for (auto& field : f)
            if (!std::getline(fields, field, '\t'))
                throw ParseError(name, line_no, "expected 7 tab-separated fields");
        BenchmarkCell cell;
        char* end = nullptr;
        cell.multiplier = std::strtod(f[0].c_str(), &end);
        cell.mean_nodes = std::strtod(f[1].c_str(), &end);
        cell.mean_samples = std::strtod(f[2].c_str(), &end);
        cell.trials = static_cast<int>(std::strtol(f[3].c_str(), &end, 10));
        cell.success_rate_pct = std::strtod(f[4].c_str(), &end);
        cell.mean_seconds = std::strtod(f[5].c_str(), &end);
        cell.mean_edge_accuracy = std::strtod(f[6].c_str(), &end);
        report.cells.push_back(cell);
    }
    if (!header_seen) throw ParseError(name, line_no, "missing benchmark header row");
    return report;
}

void write_benchmark_summary(const std::filesystem::path& path, const BenchmarkReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << "gridtop benchmark summary\n";
    out << "environment: " << report.environment << "\n\n";
    out << std::left << std::setw(12) << "multiplier" << std::setw(12) << "nodes" << std::setw(12)
        << "samples" << std::setw(8) << "trials" << std::setw(10) << "success%" << std::setw(14)
        << "mean time(s)" << "edge accuracy\n";
    out << std::fixed;
    for (const auto& cell : report.cells) {
        out << std::setprecision(1) << std::left << std::setw(12) << cell.multiplier
            << std::setw(12) << cell.mean_nodes << std::setw(12) << cell.mean_samples
            << std::setw(8) << cell.trials << std::setw(10) << cell.success_rate_pct
            << std::setprecision(4) << std::setw(14) << cell.mean_seconds << std::setprecision(4)
            << cell.mean_edge_accuracy << "\n";
    }
}

}  // namespace io

}  // namespace gridtop
