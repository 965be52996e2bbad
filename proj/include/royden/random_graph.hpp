#pragma once

#include <cstdint>

#include "royden/graph.hpp"

namespace royden {

/// Connected simple graph on `vertices` vertices with `edges` edges: a
/// uniformly attached random spanning tree plus distinct extra edges.
/// Identical seeds give identical graphs on every platform.
Graph random_connected_graph(std::size_t vertices, std::size_t edges, std::uint64_t seed);

}  // namespace royden
