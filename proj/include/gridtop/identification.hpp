#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gridtop/network.hpp"
#include "gridtop/readings.hpp"

namespace gridtop {

struct PairDiagnostics {
    Eigen::VectorXd singular_values;
    double singular_gap{};     // s_{n-p} / s_{n-p+1} (1-based), signal over constraint
    double cond_dependent{};   // condition number of C_d
    double min_margin{};       // min over columns: runner-up distance-to-1 minus winner's
    std::vector<Eigen::Index> ambiguous_columns;
    bool sample_warning{};     // ran with N == n exactly
    double seconds{};
};

/// Result of one layer-pair identification. When ok is false the pair
/// failed (error holds why) and only parents/children are meaningful.
struct LayerPairResult {
    int parent_level{};
    std::vector<NodeId> parents;   // ascending id, = dependent variables
    std::vector<NodeId> children;  // ascending id, = independent variables
    Eigen::MatrixXd raw_regression;
    Eigen::MatrixXi rounded_regression;   // exactly one 1 per column
    std::vector<Edge> inferred_edges;
    PairDiagnostics diagnostics;
    bool ok{true};
    std::string error;
};

struct RoundedRegression {
    Eigen::MatrixXi matrix;
    std::vector<Eigen::Index> ambiguous_columns;
    double min_margin{};
};

/// Per column, the entry closest to 1 becomes 1 and the rest 0. Ties go to
/// the lowest row index and are reported in ambiguous_columns.
RoundedRegression round_regression(const Eigen::MatrixXd& r_hat);

/// Full phase-identification pass on one parent/child partition: noise
/// estimation, mean separation, whitening, PCA, regression, rounding.
/// z must contain rows for every listed node. Throws InsufficientSamples
/// when N < |parents| + |children|.
LayerPairResult identify_phase(const ReadingsMatrix& z, const std::vector<NodeId>& parents,
                               const std::vector<NodeId>& children, const NoiseConfig& cfg);

struct TopologyResult {
    std::vector<LayerPairResult> pairs;        // bottom pair first
    std::optional<LayeredNetwork> network;     // engaged when every pair succeeded

    bool complete() const;
    std::vector<Edge> all_edges() const;
};

/// Runs the layer-pair pipeline for every consecutive pair. A failing pair
/// is isolated: its result carries the error and the other pairs still
/// report.
TopologyResult identify_topology(const ReadingsMatrix& z, const std::vector<Layer>& layers,
                                 const NoiseConfig& cfg);

struct Score {
    bool success{};          // exact edge-set match
    double edge_accuracy{};  // fraction of children assigned their true parent
};

Score score(const TopologyResult& inferred, const LayeredNetwork& truth);

}  // namespace gridtop
