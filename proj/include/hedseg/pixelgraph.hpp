#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hedseg/image.hpp"

namespace hedseg {

/// Parameters of the image -> graph construction. sigma_color and sigma_edge
/// are the squared scales that divide the color distance and the boundary
/// term in the affinity; both must be positive.
struct GraphParams {
  double sigma_color = 3.0 * 32.0 * 32.0;
  double sigma_edge = 0.5;
  double eps_discard = 1e-4;
  double canny_low = 50.0;   // gradient-magnitude thresholds on 0..255 input
  double canny_high = 150.0;
  double blur_sigma = 1.4;   // 5x5 Gaussian before the gradient

  void validate() const;
};

/// Sparse undirected weighted graph in compressed adjacency form. Neighbor
/// lists are sorted by node id; adjacency is exactly symmetric; weights are
/// in (0, 1]; no self-loops or duplicate pairs.
class WeightedGraph {
 public:
  struct Edge {
    uint32_t u = 0;
    uint32_t v = 0;
    double w = 0.0;
  };

  WeightedGraph() = default;

  /// Builds the CSR arrays from an undirected edge list (each edge given
  /// once, in either orientation). Validates all class invariants.
  static WeightedGraph from_edges(uint32_t node_count, const std::vector<Edge>& edges);

  uint32_t node_count() const { return node_count_; }
  uint64_t edge_count() const { return edge_count_; }

  uint32_t degree(uint32_t v) const {
    return static_cast<uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  std::span<const uint32_t> neighbors(uint32_t v) const {
    return {neighbor_ids_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::span<const double> weights(uint32_t v) const {
    return {edge_weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

 private:
  uint32_t node_count_ = 0;
  uint64_t edge_count_ = 0;
  std::vector<uint64_t> offsets_;       // size node_count_ + 1
  std::vector<uint32_t> neighbor_ids_;  // size 2 * edge_count_
  std::vector<double> edge_weights_;    // parallel to neighbor_ids_
};

/// Binary Canny response in [0,1]: Gaussian blur, Sobel gradient,
/// non-maximum suppression, hysteresis. Luminance is 0.299R+0.587G+0.114B.
EdgeMap compute_edge_map(const RgbImage& img, const GraphParams& params);

/// 8-neighborhood pixel graph with affinity
///   w_uv = exp(-|I(u)-I(v)|^2 / sigma_color) * exp(-max{B(u),B(v)} / sigma_edge),
/// dropping edges with w <= eps_discard. Nodes are indexed row-major.
WeightedGraph build_graph(const RgbImage& img, const EdgeMap& edges, const GraphParams& params);

/// 2|E| / (|V|(|V|-1)). Requires at least two nodes.
double graph_density(const WeightedGraph& g);

/// Candidate edge count of an HxW grid under the 8-neighborhood, before any
/// discarding: 4HW - 3H - 3W + 2.
uint64_t grid_candidate_edges(int width, int height);

/// Plain-text interchange format: one "u v w" line per edge with u < v,
/// sorted by (u, v), w printed to 9 decimal places.
void save_edge_list(std::ostream& out, const WeightedGraph& g);
void save_edge_list(const std::string& path, const WeightedGraph& g);
WeightedGraph load_edge_list(std::istream& in);
WeightedGraph load_edge_list(const std::string& path);

}  // namespace hedseg
