#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridtop/identification.hpp"
#include "gridtop/network.hpp"
#include "gridtop/noise_estimation.hpp"
#include "gridtop/readings.hpp"
#include "gridtop/simulation.hpp"

namespace gridtop::io {

// ---- topology files -------------------------------------------------------

/// Raw file content; unlike LayeredNetwork this enforces no invariants, so
/// partial inference output can round-trip.
struct TopologyDocument {
    std::vector<NodeInfo> nodes;
    std::vector<Edge> edges;
};

void write_topology(const std::filesystem::path& path, const TopologyDocument& doc);
void write_topology(const std::filesystem::path& path, const LayeredNetwork& net);
TopologyDocument read_topology_document(const std::filesystem::path& path);
LayeredNetwork read_topology(const std::filesystem::path& path);

// ---- readings files -------------------------------------------------------

enum class Orientation {
    IntervalsAsRows,  // header of meter ids, one file row per time interval
    MetersAsRows,     // transposed layout
    Auto,             // trust the file's own header comment
};

void write_readings(const std::filesystem::path& path, const ReadingsMatrix& readings,
                    Orientation orientation = Orientation::IntervalsAsRows);
ReadingsMatrix read_readings(const std::filesystem::path& path,
                             Orientation orientation = Orientation::Auto,
                             std::optional<double> interval_minutes_override = std::nullopt);

// ---- noise manifests ------------------------------------------------------

/// One schema for both the simulator's injected-noise record and the
/// estimator's NoiseStats dump, so the two can be compared field by field.
struct NoiseManifest {
    std::optional<std::uint64_t> seed;
    std::optional<double> interval_minutes;
    std::optional<double> accuracy_class_pct;
    std::optional<double> loss_low_pct;
    std::optional<double> loss_high_pct;

    struct PairEntry {
        int parent_level{};
        double mu_t{};
        double var_lt{};
    };
    std::vector<PairEntry> pairs;

    struct RowEntry {
        NodeId id{};
        double mu_lambda{};
        double sigma_lambda{};
        double sigma_epsilon{};
        double sigma_delta{};
        double sigma_e{};
    };
    std::vector<RowEntry> rows;
};

NoiseManifest make_manifest(const InjectedNoise& injected, const std::vector<NodeId>& node_order,
                            const NoiseConfig& cfg);
NoiseManifest make_manifest(const NoiseStats& stats, const std::vector<NodeId>& node_order,
                            int parent_level);

void write_noise_manifest(const std::filesystem::path& path, const NoiseManifest& manifest);
NoiseManifest read_noise_manifest(const std::filesystem::path& path);

// ---- reports --------------------------------------------------------------

void write_diagnostics(const std::filesystem::path& path, const TopologyResult& result);
void write_spectrum(const std::filesystem::path& path, const Eigen::VectorXd& singular_values);

/// Serialize a double so that parsing reproduces the exact value.
std::string format_double(double v);

}  // namespace gridtop::io
