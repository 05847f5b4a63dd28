#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridtop/types.hpp"

namespace gridtop {

/// One voltage level. Level 1 is the lowest voltage (consumers); members are
/// kept sorted by NodeId.
struct Layer {
    int level{};
    std::vector<NodeId> members;
};

struct NodeInfo {
    NodeId id{};
    std::string name;
    Role role{Role::Unknown};
    int layer{};
};

/// Immutable layered directed forest of meters.
///
/// Every edge runs from a parent in layer l+1 to a child in layer l, and a
/// node has at most one parent. Nodes without incident edges are allowed in
/// any layer (they are degenerate one-node trees; reconstruction from an
/// edgeless incidence matrix produces them). Generators always attach every
/// node below the top layer to exactly one parent.
class LayeredNetwork {
public:
    LayeredNetwork(std::vector<NodeInfo> nodes, std::vector<Edge> edges);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int layer_count() const { return static_cast<int>(layers_.size()); }
    int top_level() const { return static_cast<int>(layers_.size()); }

    /// Layers in ascending level order: layers()[0].level == 1.
    const std::vector<Layer>& layers() const { return layers_; }
    const Layer& layer(int level) const;

    /// Edges sorted by child id (each child has at most one parent, so this
    /// is a total order).
    const std::vector<Edge>& edges() const { return edges_; }

    const NodeInfo& node(NodeId id) const;
    const std::vector<NodeInfo>& nodes() const { return nodes_; }

    std::optional<NodeId> parent_of(NodeId id) const;
    /// Children in ascending id order.
    const std::vector<NodeId>& children_of(NodeId id) const;

private:
    std::vector<NodeInfo> nodes_;              // indexed by id
    std::vector<Layer> layers_;                // ascending level
    std::vector<Edge> edges_;                  // sorted by child
    std::vector<NodeId> parent_;               // -1 when none
    std::vector<std::vector<NodeId>> children_;
};

/// True iff the two networks have identical parent->child edge sets.
/// Requires identical node sets and layer partitions.
bool connectivity_equal(const LayeredNetwork& a, const LayeredNetwork& b);

}  // namespace gridtop
