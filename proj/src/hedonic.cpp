#include "hedseg/hedonic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hedseg {

namespace {

// Strictness tolerance on "strictly higher utility" comparisons; prevents
// oscillation from floating-point rounding.
constexpr double kStrictTol = 1e-9;

struct MoveScratch {
  std::vector<double> degree_into;  // indexed by community id
  std::vector<uint32_t> touched;

  void ensure_capacity(size_t ids) {
    if (degree_into.size() < ids) degree_into.resize(ids, 0.0);
  }
};

struct MoveDecision {
  uint32_t target = 0;
  double gain = 0.0;
};

// Candidate set: the current community, every community holding a neighbor
// of v, and a fresh singleton. Non-current candidates are scored as if v
// joined them: d(v,C) - gamma * |C|. The current one scores
// d(v,C0\{v}) - gamma * (|C0| - 1). Challenger ties go to the smallest id
// (the fresh singleton has the largest id, so it loses ties to any existing
// community); a challenger must beat the current community by more than
// kStrictTol or the node stays put.
std::optional<MoveDecision> find_best_move(uint32_t v, const Partition& part,
                                           const WeightedGraph& g, const Resolution& res,
                                           MoveScratch& scratch) {
  scratch.ensure_capacity(part.fresh_id() + 1);
  scratch.touched.clear();

  const auto nbrs = g.neighbors(v);
  const auto wts = g.weights(v);
  for (size_t i = 0; i < nbrs.size(); ++i) {
    const uint32_t c = part.community_of(nbrs[i]);
    if (scratch.degree_into[c] == 0.0) scratch.touched.push_back(c);
    scratch.degree_into[c] += wts[i];
  }
  std::sort(scratch.touched.begin(), scratch.touched.end());

  const uint32_t current = part.community_of(v);
  const int64_t current_size = part.community_size(current);
  const double gamma = res.gamma;
  const double current_pot =
      scratch.degree_into[current] - gamma * static_cast<double>(current_size - 1);

  bool have_best = false;
  uint32_t best_id = 0;
  double best_pot = -std::numeric_limits<double>::infinity();
  for (uint32_t c : scratch.touched) {
    if (c == current) continue;
    const double pot = scratch.degree_into[c] - gamma * static_cast<double>(part.community_size(c));
    if (!have_best || pot > best_pot) {
      have_best = true;
      best_id = c;
      best_pot = pot;
    }
  }
  // Deviation to isolation; potential exactly 0. Skipped when v already is a
  // singleton (identical to staying).
  if (current_size > 1 && (!have_best || 0.0 > best_pot)) {
    have_best = true;
    best_id = part.fresh_id();
    best_pot = 0.0;
  }

  for (uint32_t c : scratch.touched) scratch.degree_into[c] = 0.0;

  if (!have_best || !(best_pot > current_pot + kStrictTol)) return std::nullopt;
  return MoveDecision{best_id, best_pot - current_pot};
}

}  // namespace

Resolution Resolution::from_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("Resolution: gamma must lie in [0,1]");
  Resolution r;
  r.gamma = gamma;
  return r;
}

Resolution Resolution::from_rational(uint64_t b, uint64_t kappa) {
  if (kappa == 0) throw std::invalid_argument("Resolution: kappa must be positive");
  if (b > kappa) throw std::invalid_argument("Resolution: b/kappa exceeds 1");
  Resolution r;
  r.gamma = static_cast<double>(b) / static_cast<double>(kappa);
  r.has_rational = true;
  r.b = b;
  r.kappa = kappa;
  return r;
}

Resolution resolution_from_density(const WeightedGraph& g, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("resolution_from_density: c must be positive");
  const double density = graph_density(g);
  const double gamma = density / c;
  if (gamma > 1.0)
    throw std::domain_error("resolution_from_density: density/c exceeds 1");

  if (std::floor(c) == c && c <= 1e15) {
    const unsigned __int128 pairs = static_cast<unsigned __int128>(g.node_count()) *
                                    (g.node_count() - 1);
    const unsigned __int128 kappa = pairs * static_cast<uint64_t>(c);
    if (kappa <= std::numeric_limits<uint64_t>::max())
      return Resolution::from_rational(2 * g.edge_count(), static_cast<uint64_t>(kappa));
  }
  return Resolution::from_gamma(gamma);
}

double potential(const CommunityView& view, const Resolution& res) {
  return (1.0 - res.gamma) * view.degree - res.gamma * view.nonneighbor_mass();
}

Partition Partition::singletons(uint32_t node_count) {
  Partition p;
  p.assignment_.resize(node_count);
  p.sizes_.assign(node_count, 1);
  for (uint32_t v = 0; v < node_count; ++v) p.assignment_[v] = v;
  p.next_fresh_id_ = node_count;
  p.community_count_ = node_count;
  return p;
}

Partition Partition::one_coalition(uint32_t node_count) {
  Partition p;
  p.assignment_.assign(node_count, 0);
  p.sizes_.assign(1, node_count);
  p.next_fresh_id_ = 1;
  p.community_count_ = node_count > 0 ? 1 : 0;
  return p;
}

Partition Partition::from_labels(const std::vector<uint32_t>& labels) {
  Partition p;
  p.assignment_ = labels;
  uint32_t max_id = 0;
  for (uint32_t l : labels) max_id = std::max(max_id, l);
  p.sizes_.assign(labels.empty() ? 0 : static_cast<size_t>(max_id) + 1, 0);
  for (uint32_t l : labels) ++p.sizes_[l];
  p.next_fresh_id_ = static_cast<uint32_t>(p.sizes_.size());
  for (int64_t s : p.sizes_)
    if (s > 0) ++p.community_count_;
  return p;
}

void Partition::move_node(uint32_t v, uint32_t target) {
  const uint32_t from = assignment_[v];
  if (target == from) return;
  if (target == next_fresh_id_) {
    sizes_.push_back(0);
    ++next_fresh_id_;
  } else if (target > next_fresh_id_ || sizes_[target] == 0) {
    throw std::logic_error("Partition::move_node: target community does not exist");
  }
  if (sizes_[target] == 0) ++community_count_;
  ++sizes_[target];
  if (--sizes_[from] == 0) --community_count_;
  assignment_[v] = target;
}

std::vector<uint32_t> Partition::canonical_labels() const {
  constexpr uint32_t kUnseen = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> remap(sizes_.size(), kUnseen);
  std::vector<uint32_t> labels(assignment_.size());
  uint32_t next = 0;
  for (size_t v = 0; v < assignment_.size(); ++v) {
    uint32_t& slot = remap[assignment_[v]];
    if (slot == kUnseen) slot = next++;
    labels[v] = slot;
  }
  return labels;
}

void Partition::validate() const {
  std::vector<int64_t> counts(sizes_.size(), 0);
  for (uint32_t c : assignment_) {
    if (c >= sizes_.size()) throw std::logic_error("Partition: assignment exceeds registry");
    ++counts[c];
  }
  uint32_t live = 0;
  int64_t total = 0;
  for (size_t i = 0; i < sizes_.size(); ++i) {
    if (counts[i] != sizes_[i]) throw std::logic_error("Partition: registry size mismatch");
    if (sizes_[i] > 0) ++live;
    total += sizes_[i];
  }
  if (live != community_count_) throw std::logic_error("Partition: community count mismatch");
  if (total != static_cast<int64_t>(assignment_.size()))
    throw std::logic_error("Partition: sizes do not sum to node count");
}

const char* to_string(InitMode m) {
  return m == InitMode::singleton ? "singleton" : "one";
}

std::optional<uint32_t> best_move(uint32_t v, const Partition& part, const WeightedGraph& g,
                                  const Resolution& res) {
  if (part.node_count() != g.node_count())
    throw std::invalid_argument("best_move: partition inconsistent with graph");
  MoveScratch scratch;
  auto decision = find_best_move(v, part, g, res, scratch);
  if (!decision) return std::nullopt;
  return decision->target;
}

static EquilibriumResult run_impl(const WeightedGraph& g, const Resolution& res,
                                  Partition part, uint32_t max_sweeps,
                                  const MoveObserver& observer) {
  if (g.node_count() == 0) throw std::invalid_argument("run_to_equilibrium: empty graph");
  if (max_sweeps == 0) throw std::invalid_argument("run_to_equilibrium: max_sweeps must be positive");
  if (part.node_count() != g.node_count())
    throw std::invalid_argument("run_to_equilibrium: partition inconsistent with graph");

  EquilibriumResult result;
  MoveScratch scratch;
  for (uint32_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    uint64_t moved = 0;
    for (uint32_t v = 0; v < g.node_count(); ++v) {
      auto decision = find_best_move(v, part, g, res, scratch);
      if (!decision) continue;
      const uint32_t from = part.community_of(v);
      part.move_node(v, decision->target);
      ++moved;
      if (observer) observer(part, v, from, decision->target, decision->gain);
    }
    result.accepted_moves += moved;
    result.sweeps = sweep;
    if (moved == 0) {
      result.converged = true;
      break;
    }
  }
  result.partition = std::move(part);
  return result;
}

EquilibriumResult run_to_equilibrium(const WeightedGraph& g, const Resolution& res,
                                     InitMode init, uint32_t max_sweeps,
                                     const MoveObserver& observer) {
  Partition part = init == InitMode::singleton ? Partition::singletons(g.node_count())
                                               : Partition::one_coalition(g.node_count());
  return run_impl(g, res, std::move(part), max_sweeps, observer);
}

EquilibriumResult run_to_equilibrium(const WeightedGraph& g, const Resolution& res,
                                     Partition initial, uint32_t max_sweeps,
                                     const MoveObserver& observer) {
  return run_impl(g, res, std::move(initial), max_sweeps, observer);
}

std::vector<uint32_t> verify_equilibrium(const Partition& part, const WeightedGraph& g,
                                         const Resolution& res) {
  if (part.node_count() != g.node_count())
    throw std::invalid_argument("verify_equilibrium: partition inconsistent with graph");
  std::vector<uint32_t> violating;
  MoveScratch scratch;
  for (uint32_t v = 0; v < g.node_count(); ++v)
    if (find_best_move(v, part, g, res, scratch)) violating.push_back(v);
  return violating;
}

double cpm_quality(const Partition& part, const WeightedGraph& g, const Resolution& res) {
  if (part.node_count() != g.node_count())
    throw std::invalid_argument("cpm_quality: partition inconsistent with graph");
  double internal = 0.0;
  for (uint32_t u = 0; u < g.node_count(); ++u) {
    const auto nbrs = g.neighbors(u);
    const auto wts = g.weights(u);
    for (size_t i = 0; i < nbrs.size(); ++i)
      if (nbrs[i] > u && part.community_of(nbrs[i]) == part.community_of(u)) internal += wts[i];
  }
  double pair_penalty = 0.0;
  for (uint32_t id = 0; id < part.fresh_id(); ++id) {
    const double s = static_cast<double>(part.community_size(id));
    pair_penalty += s * (s - 1.0) / 2.0;
  }
  return internal - res.gamma * pair_penalty;
}

void save_partition(std::ostream& out, const Partition& part) {
  const std::vector<uint32_t> labels = part.canonical_labels();
  for (size_t v = 0; v < labels.size(); ++v) out << v << ' ' << labels[v] << '\n';
}

void save_partition(const std::string& path, const Partition& part) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_partition: cannot open " + path);
  save_partition(out, part);
}

Partition load_partition(std::istream& in) {
  std::vector<std::pair<uint64_t, uint32_t>> rows;
  uint64_t node;
  uint32_t community;
  while (in >> node >> community) rows.emplace_back(node, community);
  if (rows.empty()) throw std::runtime_error("load_partition: no rows");

  constexpr uint32_t kUnset = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> labels(rows.size(), kUnset);
  for (const auto& [v, c] : rows) {
    if (v >= labels.size()) throw std::runtime_error("load_partition: node ids are not 0..N-1");
    if (c == kUnset) throw std::runtime_error("load_partition: community id out of range");
    labels[v] = c;
  }
  for (uint32_t l : labels)
    if (l == kUnset) throw std::runtime_error("load_partition: missing node assignment");

  // Renumber to first-appearance order; sparse ids in hand-written dumps
  // would otherwise inflate the registry.
  std::unordered_map<uint32_t, uint32_t> remap;
  for (uint32_t& l : labels) {
    const auto [it, inserted] = remap.try_emplace(l, static_cast<uint32_t>(remap.size()));
    l = it->second;
  }
  return Partition::from_labels(labels);
}

Partition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_partition: cannot open " + path);
  return load_partition(in);
}

}  // namespace hedseg
