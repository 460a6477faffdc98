#include "hedseg/pixelgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hedseg {

void GraphParams::validate() const {
  if (!(sigma_color > 0.0)) throw std::invalid_argument("GraphParams: sigma_color must be positive");
  if (!(sigma_edge > 0.0)) throw std::invalid_argument("GraphParams: sigma_edge must be positive");
  if (!(eps_discard >= 0.0 && eps_discard < 1.0))
    throw std::invalid_argument("GraphParams: eps_discard must lie in [0,1)");
  if (!(canny_low >= 0.0 && canny_low < canny_high))
    throw std::invalid_argument("GraphParams: requires 0 <= canny_low < canny_high");
  if (!(blur_sigma > 0.0)) throw std::invalid_argument("GraphParams: blur_sigma must be positive");
}

WeightedGraph WeightedGraph::from_edges(uint32_t node_count, const std::vector<Edge>& edges) {
  WeightedGraph g;
  g.node_count_ = node_count;
  g.edge_count_ = edges.size();
  g.offsets_.assign(static_cast<size_t>(node_count) + 1, 0);

  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count)
      throw std::invalid_argument("WeightedGraph: edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("WeightedGraph: self-loop");
    if (!(e.w > 0.0 && e.w <= 1.0))
      throw std::invalid_argument("WeightedGraph: weight outside (0,1]");
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (uint32_t v = 0; v < node_count; ++v) g.offsets_[v + 1] += g.offsets_[v];

  g.neighbor_ids_.resize(2 * edges.size());
  g.edge_weights_.resize(2 * edges.size());
  std::vector<uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.neighbor_ids_[cursor[e.u]] = e.v;
    g.edge_weights_[cursor[e.u]++] = e.w;
    g.neighbor_ids_[cursor[e.v]] = e.u;
    g.edge_weights_[cursor[e.v]++] = e.w;
  }

  for (uint32_t v = 0; v < node_count; ++v) {
    const size_t lo = g.offsets_[v], hi = g.offsets_[v + 1];
    std::vector<std::pair<uint32_t, double>> row;
    row.reserve(hi - lo);
    for (size_t i = lo; i < hi; ++i) row.emplace_back(g.neighbor_ids_[i], g.edge_weights_[i]);
    std::sort(row.begin(), row.end());
    for (size_t i = 1; i < row.size(); ++i)
      if (row[i].first == row[i - 1].first)
        throw std::invalid_argument("WeightedGraph: duplicate edge");
    for (size_t i = lo; i < hi; ++i) {
      g.neighbor_ids_[i] = row[i - lo].first;
      g.edge_weights_[i] = row[i - lo].second;
    }
  }
  return g;
}

WeightedGraph build_graph(const RgbImage& img, const EdgeMap& edges, const GraphParams& params) {
  params.validate();
  if (img.width() != edges.width() || img.height() != edges.height())
    throw std::invalid_argument("build_graph: image and edge map dimensions differ");

  const int w = img.width(), h = img.height();
  const auto affinity = [&](int x0, int y0, int x1, int y1) {
    const Rgb& a = img.at(x0, y0);
    const Rgb& b = img.at(x1, y1);
    const double dr = static_cast<double>(a.r) - b.r;
    const double dg = static_cast<double>(a.g) - b.g;
    const double db = static_cast<double>(a.b) - b.b;
    const double color_dist = dr * dr + dg * dg + db * db;
    const double boundary = std::max(edges.at(x0, y0), edges.at(x1, y1));
    return std::exp(-color_dist / params.sigma_color) * std::exp(-boundary / params.sigma_edge);
  };

  // Each undirected 8-neighbor pair once, always from the lower node id.
  static constexpr int kOffsets[4][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  std::vector<WeightedGraph::Edge> kept;
  kept.reserve(grid_candidate_edges(w, h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (const auto& d : kOffsets) {
        const int nx = x + d[0], ny = y + d[1];
        if (nx < 0 || nx >= w || ny >= h) continue;
        const double weight = affinity(x, y, nx, ny);
        if (weight > params.eps_discard) {
          kept.push_back({static_cast<uint32_t>(y * w + x),
                          static_cast<uint32_t>(ny * w + nx), weight});
        }
      }
    }
  }
  return WeightedGraph::from_edges(static_cast<uint32_t>(static_cast<int64_t>(w) * h), kept);
}

double graph_density(const WeightedGraph& g) {
  if (g.node_count() < 2) throw std::invalid_argument("graph_density: needs at least 2 nodes");
  const double pairs = static_cast<double>(g.node_count()) * (g.node_count() - 1);
  return 2.0 * static_cast<double>(g.edge_count()) / pairs;
}

uint64_t grid_candidate_edges(int width, int height) {
  const uint64_t w = static_cast<uint64_t>(width), h = static_cast<uint64_t>(height);
  return 4 * w * h - 3 * w - 3 * h + 2;
}

void save_edge_list(std::ostream& out, const WeightedGraph& g) {
  char line[64];
  for (uint32_t u = 0; u < g.node_count(); ++u) {
    const auto nbrs = g.neighbors(u);
    const auto wts = g.weights(u);
    for (size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] > u) {
        std::snprintf(line, sizeof(line), "%u %u %.9f\n", u, nbrs[i], wts[i]);
        out << line;
      }
    }
  }
}

void save_edge_list(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_edge_list: cannot open " + path);
  save_edge_list(out, g);
}

WeightedGraph load_edge_list(std::istream& in) {
  std::vector<WeightedGraph::Edge> edges;
  uint32_t max_node = 0;
  uint64_t u, v;
  double w;
  while (in >> u >> v >> w) {
    edges.push_back({static_cast<uint32_t>(u), static_cast<uint32_t>(v), w});
    max_node = std::max({max_node, static_cast<uint32_t>(u), static_cast<uint32_t>(v)});
  }
  if (edges.empty()) throw std::runtime_error("load_edge_list: no edges");
  return WeightedGraph::from_edges(max_node + 1, edges);
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);
  return load_edge_list(in);
}

}  // namespace hedseg
