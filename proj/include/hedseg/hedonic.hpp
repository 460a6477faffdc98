#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hedseg/pixelgraph.hpp"

namespace hedseg {

/// Resolution parameter gamma in [0,1], optionally carrying the exact
/// rational form b/kappa it was derived from.
struct Resolution {
  double gamma = 0.0;
  bool has_rational = false;
  uint64_t b = 0;      // numerator
  uint64_t kappa = 1;  // denominator, positive

  static Resolution from_gamma(double gamma);
  static Resolution from_rational(uint64_t b, uint64_t kappa);
};

/// gamma = density(G) / c. The rational form b = 2|E|, kappa = c * |V|(|V|-1)
/// is attached when c is integral and the product does not overflow.
Resolution resolution_from_density(const WeightedGraph& g, double c);

/// A community C seen from one node v, with v counted as a member:
/// size = |C|, degree = total edge weight from v to the other members,
/// so |C| = 1 + degree + nonneighbors under unit weights.
struct CommunityView {
  double degree = 0.0;
  int64_t size = 1;

  double nonneighbor_mass() const { return static_cast<double>(size - 1) - degree; }
};

/// (1-gamma) * d - gamma * dbar; algebraically d - gamma * (|C|-1).
double potential(const CommunityView& view, const Resolution& res);

/// Node -> community assignment plus a community-size registry. Community ids
/// are allocated monotonically and never reused; K is the number of non-empty
/// communities.
class Partition {
 public:
  Partition() = default;

  static Partition singletons(uint32_t node_count);
  static Partition one_coalition(uint32_t node_count);
  /// Adopts an arbitrary labeling; ids are kept as given.
  static Partition from_labels(const std::vector<uint32_t>& labels);

  uint32_t node_count() const { return static_cast<uint32_t>(assignment_.size()); }
  uint32_t community_of(uint32_t v) const { return assignment_[v]; }
  int64_t community_size(uint32_t community) const {
    return community < sizes_.size() ? sizes_[community] : 0;
  }
  uint32_t community_count() const { return community_count_; }

  /// Id a fresh singleton community would get.
  uint32_t fresh_id() const { return next_fresh_id_; }

  /// Reassigns v, materializing `target` if it equals fresh_id() and dropping
  /// the source community if it empties.
  void move_node(uint32_t v, uint32_t target);

  /// Community ids renumbered 0..K-1 in order of first appearance by node id.
  std::vector<uint32_t> canonical_labels() const;

  const std::vector<uint32_t>& assignment() const { return assignment_; }

  /// Checks registry consistency; throws std::logic_error on violation.
  void validate() const;

 private:
  std::vector<uint32_t> assignment_;
  std::vector<int64_t> sizes_;  // indexed by community id; 0 marks a dead id
  uint32_t next_fresh_id_ = 0;
  uint32_t community_count_ = 0;
};

enum class InitMode { singleton, one_coalition };

const char* to_string(InitMode m);

/// Best strict deviation for v: the candidate set is v's current community,
/// every community holding at least one neighbor of v, and a fresh singleton
/// (returned as part.fresh_id()). Returns nothing when no candidate beats the
/// current community by more than the strictness tolerance; equal-utility
/// ties keep the node in place, ties among challengers go to the smallest id.
std::optional<uint32_t> best_move(uint32_t v, const Partition& part,
                                  const WeightedGraph& g, const Resolution& res);

struct EquilibriumResult {
  Partition partition;
  uint32_t sweeps = 0;
  bool converged = false;
  uint64_t accepted_moves = 0;
};

/// Called after each applied move with the updated partition.
using MoveObserver =
    std::function<void(const Partition& part, uint32_t node, uint32_t from, uint32_t to, double gain)>;

/// Asynchronous best-response sweeps over nodes in ascending id, applying
/// each improving move immediately, until a full sweep makes no move
/// (converged) or max_sweeps is reached.
EquilibriumResult run_to_equilibrium(const WeightedGraph& g, const Resolution& res,
                                     InitMode init, uint32_t max_sweeps = 10000,
                                     const MoveObserver& observer = {});
EquilibriumResult run_to_equilibrium(const WeightedGraph& g, const Resolution& res,
                                     Partition initial, uint32_t max_sweeps = 10000,
                                     const MoveObserver& observer = {});

/// Nodes that still have a strictly improving deviation; empty iff the
/// partition is an equilibrium.
std::vector<uint32_t> verify_equilibrium(const Partition& part, const WeightedGraph& g,
                                         const Resolution& res);

/// Global quality: sum over communities of internal edge weight minus
/// gamma * |C|(|C|-1)/2. Every accepted move raises this by its gain.
double cpm_quality(const Partition& part, const WeightedGraph& g, const Resolution& res);

/// One "node_id community_id" line per node, with communities renumbered
/// 0..K-1 in order of first appearance.
void save_partition(std::ostream& out, const Partition& part);
void save_partition(const std::string& path, const Partition& part);
Partition load_partition(std::istream& in);
Partition load_partition(const std::string& path);

}  // namespace hedseg
