#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "gridtop/network.hpp"
#include "gridtop/readings.hpp"

namespace gridtop {

/// Uniform load model with the given mean and maximum: U(2*avg - peak, peak).
struct LoadClass {
    double average{};
    double peak{};
};

/// Three-phase transformer with consumers: 3 parent phase nodes, each with a
/// uniform number of consumer children in [min, max].
struct PhaseSpec {
    int min_consumers_per_phase{75};
    int max_consumers_per_phase{100};
};

struct LayerCount {
    Role role{};
    int count{};
};

/// Multi-layer network description, top layer first. Consumers draw one load
/// class each (equal probability).
struct MultilayerSpec {
    std::vector<LayerCount> layers_top_down;
    std::vector<LoadClass> load_classes;
};

using NetworkSpec = std::variant<PhaseSpec, MultilayerSpec>;

/// Shipped default: 4 feeders, 200 transformer phases, 1800 consumers
/// (2004 nodes), load classes matching the 0-100/0-300/0-500 Wh ranges.
MultilayerSpec rbts_bus2_default();

/// Exact noise realization that went into a generated data set.
struct InjectedNoise {
    Eigen::VectorXd mu_lambda;       // realized mean loss added per node row
    Eigen::VectorXd sigma_lambda;    // realized per-node loss variance (population)
    Eigen::VectorXd sigma_epsilon;   // meter-error variances used
    Eigen::VectorXd sigma_delta;     // sync-error variances used
    Eigen::VectorXd loss_pct;        // percent applied per child node (0 for top layer)

    struct PairLoss {
        int parent_level{};
        double mu_total{};               // mean over time of the pair's total loss
        double var_total{};              // population variance of the same
        Eigen::VectorXd per_column_total;
    };
    std::vector<PairLoss> per_pair;
};

struct GroundTruth {
    LayeredNetwork network;
    ReadingsMatrix true_readings;    // exact conservation at every layer
    ReadingsMatrix noisy_readings;
    InjectedNoise injected;
};

/// Random 3-phase / consumers forest per the simulation protocol.
LayeredNetwork gen_phase_network(int min_consumers_per_phase, int max_consumers_per_phase,
                                 std::uint64_t seed);

/// N i.i.d. draws per consumer from one of the ranges (0,100), (0,300),
/// (0,500), chosen with equal probability.
ReadingsMatrix gen_consumer_loads(const LayeredNetwork& net, Eigen::Index samples,
                                  std::uint64_t seed, double interval_minutes = 15.0);

/// As above with explicit load classes (uniform(2*avg - peak, peak) each).
ReadingsMatrix gen_consumer_loads(const LayeredNetwork& net,
                                  const std::vector<LoadClass>& classes,
                                  Eigen::Index samples, std::uint64_t seed,
                                  double interval_minutes = 15.0);

/// Noise-free full matrix: every parent row is the column-wise sum of its
/// children, layer by layer.
ReadingsMatrix aggregate_up(const LayeredNetwork& net, const ReadingsMatrix& consumer_readings);

/// Relative distance of every non-top node from its parent, drawn uniformly
/// from {1, ..., 10}.
Eigen::VectorXd gen_distances(const LayeredNetwork& net, std::uint64_t seed);

/// Technical losses: per child node, the distance-load products d_i * mean_i
/// are affinely mapped onto [loss_low_pct, loss_high_pct] within that child
/// layer, and the resulting percentage of the child's reading is added to
/// its parent's row, cascading bottom-up. Fills gt.noisy_readings and
/// gt.injected.
GroundTruth inject_losses(GroundTruth gt, const NoiseConfig& cfg,
                          const Eigen::VectorXd& distances);

/// Zero-mean Gaussian per entry, sigma = (alpha/100) * row_mean / 3.
ReadingsMatrix inject_meter_error(const ReadingsMatrix& readings, const NoiseConfig& cfg,
                                  std::uint64_t seed);

/// Zero-mean Gaussian per entry, sigma = row_mean / (60 T).
ReadingsMatrix inject_sync_error(const ReadingsMatrix& readings, const NoiseConfig& cfg,
                                 std::uint64_t seed);

/// Multi-layer ground truth per the test-system protocol (>= 3 layers).
GroundTruth gen_rbts_like(const MultilayerSpec& spec, Eigen::Index samples,
                          const NoiseConfig& cfg, bool noise_free = false);

/// Network only, no readings. Lets callers size N from the drawn network
/// before generating data.
LayeredNetwork gen_network(const NetworkSpec& spec, std::uint64_t seed);

/// Loads, aggregation and noise for an already-drawn network.
GroundTruth generate_for_network(LayeredNetwork net, const NetworkSpec& spec,
                                 Eigen::Index samples, const NoiseConfig& cfg,
                                 bool noise_free = false);

/// Full generation pipeline for either spec kind. noise_free skips meter and
/// sync errors and forces a zero loss range.
GroundTruth generate(const NetworkSpec& spec, Eigen::Index samples, const NoiseConfig& cfg,
                     bool noise_free = false);

}  // namespace gridtop
