#pragma once

#include <vector>

#include "hedseg/pixelgraph.hpp"
#include "hedseg/projection.hpp"
#include "hedseg/rng.hpp"

namespace hedseg {

/// Erdos-Renyi style graph; weights uniform in (0,1] when weighted, else 1.
WeightedGraph random_graph(uint32_t nodes, double edge_prob, bool weighted, Rng& rng);

/// Random spanning tree plus extra random edges; always connected.
WeightedGraph random_connected_graph(uint32_t nodes, double extra_edge_prob, bool weighted,
                                     Rng& rng);

/// A random grid partition scored against a random ground truth: k Voronoi
/// cells over a small pixel grid and an elliptical foreground blob, reduced
/// to per-community tallies.
struct RandomPartitionCase {
  std::vector<CommunityTally> tallies;
  int64_t gt_size = 0;
};

RandomPartitionCase random_partition_case(uint32_t k, Rng& rng);

}  // namespace hedseg
