#include "hedseg/randgen.hpp"

#include <algorithm>
#include <vector>

namespace hedseg {

WeightedGraph random_graph(uint32_t nodes, double edge_prob, bool weighted, Rng& rng) {
  std::vector<WeightedGraph::Edge> edges;
  for (uint32_t u = 0; u < nodes; ++u)
    for (uint32_t v = u + 1; v < nodes; ++v)
      if (rng.next_bool(edge_prob))
        edges.push_back({u, v, weighted ? rng.next_open01() : 1.0});
  return WeightedGraph::from_edges(nodes, edges);
}

WeightedGraph random_connected_graph(uint32_t nodes, double extra_edge_prob, bool weighted,
                                     Rng& rng) {
  std::vector<WeightedGraph::Edge> edges;
  std::vector<uint8_t> linked(static_cast<size_t>(nodes) * nodes, 0);
  const auto link = [&](uint32_t u, uint32_t v) {
    linked[static_cast<size_t>(u) * nodes + v] = linked[static_cast<size_t>(v) * nodes + u] = 1;
    edges.push_back({u, v, weighted ? rng.next_open01() : 1.0});
  };
  for (uint32_t v = 1; v < nodes; ++v)
    link(static_cast<uint32_t>(rng.next_below(v)), v);
  for (uint32_t u = 0; u < nodes; ++u)
    for (uint32_t v = u + 1; v < nodes; ++v)
      if (!linked[static_cast<size_t>(u) * nodes + v] && rng.next_bool(extra_edge_prob))
        link(u, v);
  return WeightedGraph::from_edges(nodes, edges);
}

RandomPartitionCase random_partition_case(uint32_t k, Rng& rng) {
  const int n = 16;  // grid side
  struct Seed {
    double x, y;
  };
  std::vector<Seed> seeds(k);
  for (auto& s : seeds) s = {rng.next_u01() * n, rng.next_u01() * n};

  const double cx = n * (0.25 + 0.5 * rng.next_u01());
  const double cy = n * (0.25 + 0.5 * rng.next_u01());
  const double rx = n * (0.15 + 0.25 * rng.next_u01());
  const double ry = n * (0.15 + 0.25 * rng.next_u01());

  RandomPartitionCase out;
  out.tallies.resize(k);
  for (uint32_t i = 0; i < k; ++i) out.tallies[i].label = i;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      uint32_t best = 0;
      double best_d = 1e300;
      for (uint32_t i = 0; i < k; ++i) {
        const double dx = x + 0.5 - seeds[i].x, dy = y + 0.5 - seeds[i].y;
        const double d = dx * dx + dy * dy;
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      const double ex = (x + 0.5 - cx) / rx, ey = (y + 0.5 - cy) / ry;
      const bool fg = ex * ex + ey * ey <= 1.0;
      ++out.tallies[best].size;
      if (fg) {
        ++out.tallies[best].tp;
        ++out.gt_size;
      }
    }
  }
  // Empty Voronoi cells cannot appear in a partition's tally list.
  std::erase_if(out.tallies, [](const CommunityTally& t) { return t.size == 0; });
  return out;
}

}  // namespace hedseg
