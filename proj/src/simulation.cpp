#include "gridtop/simulation.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "gridtop/errors.hpp"
#include "gridtop/kernels.hpp"

namespace gridtop {

namespace {

// Sub-stream tags so each noise source draws from its own stream.
enum : std::uint64_t {
    kNetStream = 0x11,
    kClassStream = 0x22,
    kLoadStream = 0x33,
    kDistanceStream = 0x44,
    kMeterStream = 0x55,
    kSyncStream = 0x66,
};

const std::vector<LoadClass>& default_load_classes() {
    // Uniform ranges (0,100), (0,300), (0,500) expressed as mean/peak pairs.
    static const std::vector<LoadClass> classes{{50.0, 100.0}, {150.0, 300.0}, {250.0, 500.0}};
    return classes;
}

std::string role_prefix(Role role) {
    switch (role) {
        case Role::Substation: return "S";
        case Role::Feeder: return "F";
        case Role::TransformerPhase: return "T";
        case Role::Consumer: return "C";
        case Role::Unknown: return "N";
    }
    return "N";
}

void check_load_classes(const std::vector<LoadClass>& classes) {
    if (classes.empty()) throw InfeasibleLoadSpec("at least one load class is required");
    for (const auto& c : classes) {
        if (c.average > c.peak)
            throw InfeasibleLoadSpec("average load exceeds peak load");
        if (2.0 * c.average - c.peak < 0.0)
            throw InfeasibleLoadSpec(
                "no uniform distribution has mean " + std::to_string(c.average) +
                " and maximum " + std::to_string(c.peak));
    }
}

}  // namespace

MultilayerSpec rbts_bus2_default() {
    MultilayerSpec spec;
    spec.layers_top_down = {{Role::Feeder, 4}, {Role::TransformerPhase, 200},
                            {Role::Consumer, 1800}};
    spec.load_classes = default_load_classes();
    return spec;
}

LayeredNetwork gen_phase_network(int min_consumers_per_phase, int max_consumers_per_phase,
                                 std::uint64_t seed) {
    if (min_consumers_per_phase < 1 || max_consumers_per_phase < min_consumers_per_phase)
        throw std::invalid_argument("consumer range must be non-empty with low >= 1");

    std::mt19937_64 rng(kernels::mix_seed(seed, kNetStream));
    std::uniform_int_distribution<int> count_dist(min_consumers_per_phase,
                                                  max_consumers_per_phase);
    const int counts[3] = {count_dist(rng), count_dist(rng), count_dist(rng)};

    std::vector<NodeInfo> nodes;
    std::vector<Edge> edges;
    for (NodeId p = 0; p < 3; ++p)
        nodes.push_back(NodeInfo{p, "P" + std::to_string(p + 1), Role::TransformerPhase, 2});
    NodeId next = 3;
    for (NodeId p = 0; p < 3; ++p) {
        for (int c = 0; c < counts[p]; ++c) {
            nodes.push_back(NodeInfo{next, "C" + std::to_string(next - 2), Role::Consumer, 1});
            edges.push_back(Edge{p, next});
            ++next;
        }
    }
    return LayeredNetwork(std::move(nodes), std::move(edges));
}

ReadingsMatrix gen_consumer_loads(const LayeredNetwork& net, Eigen::Index samples,
                                  std::uint64_t seed, double interval_minutes) {
    return gen_consumer_loads(net, default_load_classes(), samples, seed, interval_minutes);
}

ReadingsMatrix gen_consumer_loads(const LayeredNetwork& net,
                                  const std::vector<LoadClass>& classes, Eigen::Index samples,
                                  std::uint64_t seed, double interval_minutes) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    check_load_classes(classes);

    const auto& consumers = net.layer(1).members;
    const auto n = static_cast<Eigen::Index>(consumers.size());

    // Each consumer gets one class (equal probability), then N i.i.d. draws
    // from uniform(2*avg - peak, peak).
    std::mt19937_64 class_rng(kernels::mix_seed(seed, kClassStream));
    std::uniform_int_distribution<std::size_t> class_dist(0, classes.size() - 1);
    Eigen::VectorXd lows(n), highs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const LoadClass& cls = classes[class_dist(class_rng)];
        lows(i) = 2.0 * cls.average - cls.peak;
        highs(i) = cls.peak;
    }

    Eigen::MatrixXd values(n, samples);
    kernels::fill_uniform_rows(values, lows, highs, kernels::mix_seed(seed, kLoadStream));
    return ReadingsMatrix(std::move(values), consumers, interval_minutes);
}

ReadingsMatrix aggregate_up(const LayeredNetwork& net, const ReadingsMatrix& consumer_readings) {
    const auto& consumers = net.layer(1).members;
    if (consumer_readings.node_order() != consumers)
        throw MissingChildRow("consumer readings must cover exactly the lowest layer");

    const auto n = static_cast<Eigen::Index>(net.node_count());
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, consumer_readings.samples());
    for (Eigen::Index r = 0; r < consumer_readings.rows(); ++r)
        values.row(consumers[static_cast<std::size_t>(r)]) = consumer_readings.values().row(r);

    // Parent row = column-wise sum of its children, applied layer by layer.
    for (int level = 2; level <= net.top_level(); ++level) {
        std::vector<kernels::RowGroup> groups;
        for (const NodeId parent : net.layer(level).members) {
            kernels::RowGroup g;
            g.target = parent;
            for (const NodeId child : net.children_of(parent)) g.sources.push_back(child);
            groups.push_back(std::move(g));
        }
        kernels::aggregate_rows(values, groups);
    }

    std::vector<NodeId> order(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    return ReadingsMatrix(std::move(values), std::move(order), consumer_readings.interval_minutes());
}

Eigen::VectorXd gen_distances(const LayeredNetwork& net, std::uint64_t seed) {
    std::mt19937_64 rng(kernels::mix_seed(seed, kDistanceStream));
    std::uniform_int_distribution<int> dist(1, 10);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i)
        if (net.node(i).layer < net.top_level()) out(i) = static_cast<double>(dist(rng));
    return out;
}

GroundTruth inject_losses(GroundTruth gt, const NoiseConfig& cfg,
                          const Eigen::VectorXd& distances) {
    const LayeredNetwork& net = gt.network;
    const auto n = static_cast<Eigen::Index>(net.node_count());
    if (distances.size() != n)
        throw std::invalid_argument("one distance per node is required");
    if (cfg.loss_low_pct < 0 || cfg.loss_high_pct < cfg.loss_low_pct)
        throw std::invalid_argument("loss percentage range must satisfy 0 <= low <= high");
    for (NodeId i = 0; i < n; ++i)
        if (net.node(i).layer < net.top_level() && distances(i) <= 0.0)
            throw NonPositiveDistance("distance for node " + std::to_string(i) +
                                      " must be positive");

    const Eigen::VectorXd true_means = kernels::row_means(gt.true_readings.values());

    // Distance-load products, mapped affinely onto [low, high] percent within
    // each child layer.
    Eigen::VectorXd pct = Eigen::VectorXd::Zero(n);
    for (int level = 1; level < net.top_level(); ++level) {
        const auto& members = net.layer(level).members;
        double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
        for (const NodeId i : members) {
            const double product = distances(i) * true_means(i);
            pmin = std::min(pmin, product);
            pmax = std::max(pmax, product);
        }
        for (const NodeId i : members) {
            const double product = distances(i) * true_means(i);
            pct(i) = pmax > pmin ? cfg.loss_low_pct + (product - pmin) / (pmax - pmin) *
                                                          (cfg.loss_high_pct - cfg.loss_low_pct)
                                 : 0.5 * (cfg.loss_low_pct + cfg.loss_high_pct);
        }
    }

    // Measured parent = sum of measured children scaled by their loss
    // factors, cascading bottom-up; consumer rows stay untouched.
    Eigen::MatrixXd measured = gt.true_readings.values();
    for (int level = 2; level <= net.top_level(); ++level) {
        std::vector<kernels::WeightedRowGroup> groups;
        for (const NodeId parent : net.layer(level).members) {
            kernels::WeightedRowGroup g;
            g.target = parent;
            for (const NodeId child : net.children_of(parent)) {
                g.sources.push_back(child);
                g.weights.push_back(1.0 + pct(child) / 100.0);
            }
            groups.push_back(std::move(g));
        }
        kernels::aggregate_rows_weighted(measured, groups);
    }

    InjectedNoise injected;
    injected.loss_pct = pct;
    injected.mu_lambda = Eigen::VectorXd::Zero(n);
    injected.sigma_lambda = Eigen::VectorXd::Zero(n);
    injected.sigma_epsilon = Eigen::VectorXd::Zero(n);
    injected.sigma_delta = Eigen::VectorXd::Zero(n);

    const auto samples = measured.cols();
    for (int level = 2; level <= net.top_level(); ++level) {
        std::vector<Eigen::Index> parent_rows, child_rows;
        for (const NodeId p : net.layer(level).members) parent_rows.push_back(p);
        for (const NodeId c : net.layer(level - 1).members) child_rows.push_back(c);

        // Per-node realized loss series: own measured row minus the sum of
        // the measured child rows.
        for (const NodeId parent : net.layer(level).members) {
            Eigen::VectorXd loss = measured.row(parent).transpose();
            for (const NodeId child : net.children_of(parent))
                loss -= measured.row(child).transpose();
            double mean = 0.0;
            for (Eigen::Index j = 0; j < samples; ++j) mean += loss(j);
            mean /= static_cast<double>(samples);
            double var = 0.0;
            for (Eigen::Index j = 0; j < samples; ++j) {
                const double d = loss(j) - mean;
                var += d * d;
            }
            var /= static_cast<double>(samples);
            injected.mu_lambda(parent) = mean;
            injected.sigma_lambda(parent) = var;
        }

        InjectedNoise::PairLoss pair;
        pair.parent_level = level;
        pair.per_column_total = kernels::group_imbalance(measured, parent_rows, child_rows);
        double mean = 0.0;
        for (Eigen::Index j = 0; j < samples; ++j) mean += pair.per_column_total(j);
        mean /= static_cast<double>(samples);
        double var = 0.0;
        for (Eigen::Index j = 0; j < samples; ++j) {
            const double d = pair.per_column_total(j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(samples);
        pair.mu_total = mean;
        pair.var_total = var;
        injected.per_pair.push_back(std::move(pair));
    }

    gt.noisy_readings = ReadingsMatrix(std::move(measured), gt.true_readings.node_order(),
                                       gt.true_readings.interval_minutes());
    gt.injected = std::move(injected);
    return gt;
}

ReadingsMatrix inject_meter_error(const ReadingsMatrix& readings, const NoiseConfig& cfg,
                                  std::uint64_t seed) {
    if (cfg.accuracy_class_pct < 0)
        throw std::invalid_argument("accuracy class must be non-negative");
    if (cfg.accuracy_class_pct == 0.0) return readings;
    const Eigen::VectorXd means = kernels::row_means(readings.values());
    const Eigen::VectorXd sigmas = (cfg.accuracy_class_pct / 100.0 / 3.0) * means.cwiseAbs();
    Eigen::MatrixXd values = readings.values();
    kernels::add_gaussian_rows(values, sigmas, kernels::mix_seed(seed, kMeterStream));
    return ReadingsMatrix(std::move(values), readings.node_order(), readings.interval_minutes());
}

ReadingsMatrix inject_sync_error(const ReadingsMatrix& readings, const NoiseConfig& cfg,
                                 std::uint64_t seed) {
    if (cfg.interval_minutes < 1)
        throw std::invalid_argument("interval must be at least one minute");
    const Eigen::VectorXd means = kernels::row_means(readings.values());
    const Eigen::VectorXd sigmas = means.cwiseAbs() / (60.0 * cfg.interval_minutes);
    Eigen::MatrixXd values = readings.values();
    kernels::add_gaussian_rows(values, sigmas, kernels::mix_seed(seed, kSyncStream));
    return ReadingsMatrix(std::move(values), readings.node_order(), readings.interval_minutes());
}

namespace {

LayeredNetwork gen_multilayer_network(const MultilayerSpec& spec, std::uint64_t seed) {
    if (spec.layers_top_down.size() < 3)
        throw std::invalid_argument("multilayer spec needs at least three layers");
    for (const auto& lc : spec.layers_top_down)
        if (lc.count < 1) throw std::invalid_argument("every layer needs at least one node");
    for (std::size_t i = 0; i + 1 < spec.layers_top_down.size(); ++i)
        if (spec.layers_top_down[i].count > spec.layers_top_down[i + 1].count)
            throw std::invalid_argument("layer sizes must not shrink towards the consumers");

    const int levels = static_cast<int>(spec.layers_top_down.size());
    std::vector<NodeInfo> nodes;
    std::vector<std::vector<NodeId>> layer_ids(static_cast<std::size_t>(levels));
    NodeId next = 0;
    for (int t = 0; t < levels; ++t) {
        const auto& lc = spec.layers_top_down[static_cast<std::size_t>(t)];
        const int level = levels - t;
        for (int k = 0; k < lc.count; ++k) {
            nodes.push_back(NodeInfo{next, role_prefix(lc.role) + std::to_string(k + 1),
                                     lc.role, level});
            layer_ids[static_cast<std::size_t>(t)].push_back(next);
            ++next;
        }
    }

    // Every parent gets at least one child; the rest are assigned uniformly.
    std::mt19937_64 rng(kernels::mix_seed(seed, kNetStream));
    std::vector<Edge> edges;
    for (int t = 0; t + 1 < levels; ++t) {
        const auto& parents = layer_ids[static_cast<std::size_t>(t)];
        auto children = layer_ids[static_cast<std::size_t>(t + 1)];
        std::shuffle(children.begin(), children.end(), rng);
        std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);
        for (std::size_t c = 0; c < children.size(); ++c) {
            const NodeId parent = c < parents.size() ? parents[c] : parents[pick(rng)];
            edges.push_back(Edge{parent, children[c]});
        }
    }
    return LayeredNetwork(std::move(nodes), std::move(edges));
}

GroundTruth finish_generation(LayeredNetwork net, ReadingsMatrix consumer_loads,
                              const NoiseConfig& cfg, bool noise_free) {
    ReadingsMatrix true_readings = aggregate_up(net, consumer_loads);

    NoiseConfig loss_cfg = cfg;
    if (noise_free) {
        loss_cfg.loss_low_pct = 0.0;
        loss_cfg.loss_high_pct = 0.0;
    }
    GroundTruth gt{std::move(net), true_readings, true_readings, InjectedNoise{}};
    gt = inject_losses(std::move(gt), loss_cfg, gen_distances(gt.network, cfg.rng_seed));

    if (!noise_free) {
        const Eigen::VectorXd pre_meter_means = kernels::row_means(gt.noisy_readings.values());
        ReadingsMatrix with_meter = inject_meter_error(gt.noisy_readings, cfg, cfg.rng_seed);
        const Eigen::VectorXd pre_sync_means = kernels::row_means(with_meter.values());
        gt.noisy_readings = inject_sync_error(with_meter, cfg, cfg.rng_seed);

        const Eigen::VectorXd eps_sigma =
            (cfg.accuracy_class_pct / 100.0 / 3.0) * pre_meter_means.cwiseAbs();
        const Eigen::VectorXd del_sigma = pre_sync_means.cwiseAbs() / (60.0 * cfg.interval_minutes);
        gt.injected.sigma_epsilon = eps_sigma.cwiseProduct(eps_sigma);
        gt.injected.sigma_delta = del_sigma.cwiseProduct(del_sigma);
    }
    return gt;
}

}  // namespace

GroundTruth gen_rbts_like(const MultilayerSpec& spec, Eigen::Index samples,
                          const NoiseConfig& cfg, bool noise_free) {
    return generate_for_network(gen_multilayer_network(spec, cfg.rng_seed), spec, samples, cfg,
                                noise_free);
}

LayeredNetwork gen_network(const NetworkSpec& spec, std::uint64_t seed) {
    if (const auto* phase = std::get_if<PhaseSpec>(&spec))
        return gen_phase_network(phase->min_consumers_per_phase, phase->max_consumers_per_phase,
                                 seed);
    return gen_multilayer_network(std::get<MultilayerSpec>(spec), seed);
}

GroundTruth generate_for_network(LayeredNetwork net, const NetworkSpec& spec,
                                 Eigen::Index samples, const NoiseConfig& cfg, bool noise_free) {
    ReadingsMatrix loads =
        std::holds_alternative<PhaseSpec>(spec)
            ? gen_consumer_loads(net, samples, cfg.rng_seed, cfg.interval_minutes)
            : gen_consumer_loads(net, std::get<MultilayerSpec>(spec).load_classes, samples,
                                 cfg.rng_seed, cfg.interval_minutes);
    return finish_generation(std::move(net), std::move(loads), cfg, noise_free);
}

GroundTruth generate(const NetworkSpec& spec, Eigen::Index samples, const NoiseConfig& cfg,
                     bool noise_free) {
    return generate_for_network(gen_network(spec, cfg.rng_seed), spec, samples, cfg, noise_free);
}

}  // namespace gridtop
