#include "gridtop/network.hpp"

#include <algorithm>
#include <map>

#include "gridtop/errors.hpp"

namespace gridtop {

std::string to_string(Role role) {
    switch (role) {
        case Role::Substation: return "substation";
        case Role::Feeder: return "feeder";
        case Role::TransformerPhase: return "transformer_phase";
        case Role::Consumer: return "consumer";
        case Role::Unknown: return "unknown";
    }
    return "unknown";
}

Role role_from_string(const std::string& text) {
    if (text == "substation") return Role::Substation;
    if (text == "feeder") return Role::Feeder;
    if (text == "transformer_phase") return Role::TransformerPhase;
    if (text == "consumer") return Role::Consumer;
    if (text == "unknown") return Role::Unknown;
    throw Error("unknown role: " + text);
}

LayeredNetwork::LayeredNetwork(std::vector<NodeInfo> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    const auto n = static_cast<NodeId>(nodes_.size());
    if (n == 0) throw Error("network has no nodes");

    std::sort(nodes_.begin(), nodes_.end(),
              [](const NodeInfo& a, const NodeInfo& b) { return a.id < b.id; });
    for (NodeId i = 0; i < n; ++i) {
        if (nodes_[i].id != i)
            throw Error("node ids must be dense and 0-based (missing or duplicate id " +
                        std::to_string(i) + ")");
    }

    std::map<int, std::vector<NodeId>> by_level;
    for (const auto& node : nodes_) {
        if (node.layer < 1) throw Error("layer levels must be >= 1");
        by_level[node.layer].push_back(node.id);
    }
    int expected = 1;
    for (auto& [level, members] : by_level) {
        if (level != expected)
            throw Error("layer levels must be contiguous from 1 (missing level " +
                        std::to_string(expected) + ")");
        std::sort(members.begin(), members.end());
        layers_.push_back(Layer{level, std::move(members)});
        ++expected;
    }

    parent_.assign(n, -1);
    children_.assign(n, {});
    for (const auto& e : edges_) {
        if (e.parent < 0 || e.parent >= n || e.child < 0 || e.child >= n)
            throw Error("edge references unknown node");
        if (e.parent == e.child) throw Error("self-loop edge");
        if (nodes_[e.parent].layer != nodes_[e.child].layer + 1)
            throw Error("edge must connect consecutive layers (parent one level above child)");
        if (parent_[e.child] != -1)
            throw Error("node " + std::to_string(e.child) + " has more than one parent");
        parent_[e.child] = e.parent;
        children_[e.parent].push_back(e.child);
    }
    for (auto& c : children_) std::sort(c.begin(), c.end());
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.child < b.child; });
}

const Layer& LayeredNetwork::layer(int level) const {
    if (level < 1 || level > layer_count())
        throw Error("no layer with level " + std::to_string(level));
    return layers_[static_cast<std::size_t>(level - 1)];
}

const NodeInfo& LayeredNetwork::node(NodeId id) const {
    if (id < 0 || id >= node_count()) throw Error("unknown node id " + std::to_string(id));
    return nodes_[static_cast<std::size_t>(id)];
}

std::optional<NodeId> LayeredNetwork::parent_of(NodeId id) const {
    node(id);
    const NodeId p = parent_[static_cast<std::size_t>(id)];
    if (p < 0) return std::nullopt;
    return p;
}

const std::vector<NodeId>& LayeredNetwork::children_of(NodeId id) const {
    node(id);
    return children_[static_cast<std::size_t>(id)];
}

bool connectivity_equal(const LayeredNetwork& a, const LayeredNetwork& b) {
    if (a.node_count() != b.node_count() || a.layer_count() != b.layer_count())
        throw NodeSetMismatch("networks differ in node count or layer count");
    for (NodeId i = 0; i < a.node_count(); ++i) {
        if (a.node(i).layer != b.node(i).layer)
            throw NodeSetMismatch("node " + std::to_string(i) + " sits in different layers");
    }
    return a.edges() == b.edges();
}

}  // namespace gridtop
