#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace gridtop {

/// Dense 0-based meter index. Row i of a full readings matrix belongs to
/// meter NodeId(i); subset matrices carry an explicit node order instead.
using NodeId = std::int32_t;

enum class Role : std::uint8_t {
    Substation,
    Feeder,
    TransformerPhase,
    Consumer,
    Unknown,
};

std::string to_string(Role role);
Role role_from_string(const std::string& text);

/// Directed edge, always parent (higher layer) -> child (lower layer).
struct Edge {
    NodeId parent{};
    NodeId child{};

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

}  // namespace gridtop
