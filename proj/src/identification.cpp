#include "gridtop/identification.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include <Eigen/SVD>

#include "gridtop/errors.hpp"
#include "gridtop/noise_estimation.hpp"
#include "gridtop/pca.hpp"

namespace gridtop {

RoundedRegression round_regression(const Eigen::MatrixXd& r_hat) {
    const Eigen::Index p = r_hat.rows();
    const Eigen::Index q = r_hat.cols();
    RoundedRegression out;
    out.matrix = Eigen::MatrixXi::Zero(p, q);
    out.min_margin = std::numeric_limits<double>::infinity();

    for (Eigen::Index j = 0; j < q; ++j) {
        Eigen::Index winner = 0;
        double best = std::abs(r_hat(0, j) - 1.0);
        double runner_up = std::numeric_limits<double>::infinity();
        bool tie = false;
        for (Eigen::Index i = 1; i < p; ++i) {
            const double d = std::abs(r_hat(i, j) - 1.0);
            if (d < best) {
                runner_up = best;
                best = d;
                winner = i;
                tie = false;
            } else {
                if (d == best) tie = true;
                runner_up = std::min(runner_up, d);
            }
        }
        out.matrix(winner, j) = 1;
        if (tie) out.ambiguous_columns.push_back(j);
        out.min_margin = std::min(out.min_margin, runner_up - best);
    }
    return out;
}

LayerPairResult identify_phase(const ReadingsMatrix& z, const std::vector<NodeId>& parents,
                               const std::vector<NodeId>& children, const NoiseConfig& cfg) {
    if (parents.empty() || children.empty())
        throw EmptyPartition("parent and child node sets must both be non-empty");

    LayerPairResult result;
    result.parents = parents;
    result.children = children;
    std::sort(result.parents.begin(), result.parents.end());
    std::sort(result.children.begin(), result.children.end());

    std::vector<NodeId> ids = result.parents;
    ids.insert(ids.end(), result.children.begin(), result.children.end());
    const ReadingsMatrix z_pair = z.select_rows(ids);

    const auto n = static_cast<Eigen::Index>(ids.size());
    const auto p = static_cast<Eigen::Index>(result.parents.size());
    if (z_pair.samples() < n)
        throw InsufficientSamples("layer pair has " + std::to_string(n) + " meters but only " +
                                  std::to_string(z_pair.samples()) + " samples");
    result.diagnostics.sample_warning = z_pair.samples() == n;

    const auto started = std::chrono::steady_clock::now();

    std::vector<Eigen::Index> parent_rows(static_cast<std::size_t>(p));
    std::iota(parent_rows.begin(), parent_rows.end(), Eigen::Index{0});
    std::vector<Eigen::Index> child_rows(static_cast<std::size_t>(n - p));
    std::iota(child_rows.begin(), child_rows.end(), p);

    const NoiseStats stats = estimate_noise(z_pair, parent_rows, child_rows, cfg);
    const ReadingsMatrix z_tilde = separate_mean(z_pair, stats.mu_lambda);
    const ErrorCovariance cov = combine(stats.sigma_lambda, stats.sigma_epsilon,
                                        stats.sigma_delta);

    const Eigen::MatrixXd z_s = whiten(z_tilde.values(), cov);
    const SubspaceFit subspace = fit(z_s, p);
    const Eigen::MatrixXd c_hat = unwhiten_constraints(subspace.u2_transpose, cov);

    std::vector<Eigen::Index> dependent(parent_rows), independent(child_rows);
    result.raw_regression = regression(c_hat, dependent, independent);

    RoundedRegression rounded = round_regression(result.raw_regression);
    result.rounded_regression = std::move(rounded.matrix);
    result.diagnostics.ambiguous_columns = std::move(rounded.ambiguous_columns);
    result.diagnostics.min_margin = rounded.min_margin;

    for (Eigen::Index j = 0; j < result.rounded_regression.cols(); ++j)
        for (Eigen::Index i = 0; i < p; ++i)
            if (result.rounded_regression(i, j) == 1)
                result.inferred_edges.push_back(
                    Edge{result.parents[static_cast<std::size_t>(i)],
                         result.children[static_cast<std::size_t>(j)]});

    result.diagnostics.singular_values = subspace.singular_values;
    const double signal = subspace.singular_values(n - p - 1);
    const double noise = subspace.singular_values(n - p);
    result.diagnostics.singular_gap =
        noise > 0.0 ? signal / noise : std::numeric_limits<double>::infinity();
    {
        Eigen::MatrixXd c_d(p, p);
        for (Eigen::Index j = 0; j < p; ++j) c_d.col(j) = c_hat.col(j);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(c_d);
        const double s_min = svd.singularValues()(p - 1);
        result.diagnostics.cond_dependent =
            s_min > 0.0 ? svd.singularValues()(0) / s_min
                        : std::numeric_limits<double>::infinity();
    }

    result.diagnostics.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

bool TopologyResult::complete() const {
    return !pairs.empty() &&
           std::all_of(pairs.begin(), pairs.end(), [](const LayerPairResult& r) { return r.ok; });
}

std::vector<Edge> TopologyResult::all_edges() const {
    std::vector<Edge> edges;
    for (const auto& pair : pairs)
        edges.insert(edges.end(), pair.inferred_edges.begin(), pair.inferred_edges.end());
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.child < b.child; });
    return edges;
}

TopologyResult identify_topology(const ReadingsMatrix& z, const std::vector<Layer>& layers,
                                 const NoiseConfig& cfg) {
    if (layers.size() < 2) throw std::invalid_argument("need at least two layers");
    std::vector<Layer> ordered = layers;
    std::sort(ordered.begin(), ordered.end(),
              [](const Layer& a, const Layer& b) { return a.level < b.level; });
    std::size_t covered = 0;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (ordered[i].level != static_cast<int>(i) + 1)
            throw std::invalid_argument("layer levels must be contiguous from 1");
        covered += ordered[i].members.size();
    }
    if (covered != static_cast<std::size_t>(z.rows()))
        throw std::invalid_argument("layers must cover all rows of the readings matrix");

    TopologyResult result;
    for (std::size_t l = 0; l + 1 < ordered.size(); ++l) {
        const auto& children = ordered[l];
        const auto& parents = ordered[l + 1];
        LayerPairResult pair;
        try {
            pair = identify_phase(z, parents.members, children.members, cfg);
        } catch (const Error& e) {
            pair.parents = parents.members;
            pair.children = children.members;
            pair.ok = false;
            pair.error = e.what();
        }
        pair.parent_level = parents.level;
        result.pairs.push_back(std::move(pair));
    }

    if (result.complete()) {
        std::vector<NodeInfo> nodes;
        for (const auto& layer : ordered)
            for (const NodeId id : layer.members)
                nodes.push_back(NodeInfo{id, "n" + std::to_string(id), Role::Unknown,
                                         layer.level});
        result.network.emplace(std::move(nodes), result.all_edges());
    }
    return result;
}

Score score(const TopologyResult& inferred, const LayeredNetwork& truth) {
    // The node sets and layer partition must agree with the ground truth.
    std::set<NodeId> seen;
    auto check_layer = [&](const std::vector<NodeId>& members, int level) {
        for (const NodeId id : members) {
            if (id < 0 || id >= truth.node_count() || truth.node(id).layer != level)
                throw NodeSetMismatch("node " + std::to_string(id) +
                                      " does not match the ground-truth layer partition");
            seen.insert(id);
        }
    };
    for (const auto& pair : inferred.pairs) {
        check_layer(pair.parents, pair.parent_level);
        check_layer(pair.children, pair.parent_level - 1);
    }
    if (static_cast<int>(seen.size()) != truth.node_count())
        throw NodeSetMismatch("inferred result does not cover the ground-truth node set");

    long total_children = 0;
    for (int level = 1; level < truth.top_level(); ++level)
        total_children += static_cast<long>(truth.layer(level).members.size());

    long correct = 0;
    for (const auto& pair : inferred.pairs)
        for (const Edge& e : pair.inferred_edges)
            if (truth.parent_of(e.child) == e.parent) ++correct;

    Score s;
    s.edge_accuracy =
        total_children > 0 ? static_cast<double>(correct) / static_cast<double>(total_children)
                           : 1.0;
    s.success = inferred.complete() && correct == total_children;
    return s;
}

}  // namespace gridtop
