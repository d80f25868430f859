#pragma once

#include <cstdint>

namespace mamab {

// Options live on the vertices of the spatial graph, so both share one id space.
using Vertex = std::int32_t;
using Option = Vertex;
using AgentId = std::int32_t;

inline constexpr Option kNoOption = -1;

}  // namespace mamab
