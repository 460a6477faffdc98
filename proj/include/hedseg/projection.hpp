#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hedseg/hedonic.hpp"
#include "hedseg/image.hpp"

namespace hedseg {

struct F1Report {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// F1 from integer counts: 2tp / (2tp + fp + fn), with empty-vs-empty and
/// empty-vs-nonempty both scoring 0.
F1Report f1_from_counts(int64_t tp, int64_t pred_size, int64_t gt_size);

F1Report f1(const BinaryMask& pred, const BinaryMask& gt);

/// Per-community overlap statistics against a ground-truth mask: community
/// pixel count and true positives. Communities of a partition are disjoint,
/// so union scores are exact sums over tallies.
struct CommunityTally {
  uint32_t label = 0;
  int64_t size = 0;
  int64_t tp = 0;
};

/// One pass over the grid; tallies sorted by label.
std::vector<CommunityTally> community_tallies(const Partition& part, const BinaryMask& gt);

struct SingleBest {
  uint32_t label = 0;
  F1Report report;
};

/// Best-scoring single community (smallest label on ties).
SingleBest f1_single(const std::vector<CommunityTally>& tallies, int64_t gt_size);
SingleBest f1_single(const Partition& part, const BinaryMask& gt);

struct UnionSelection {
  std::vector<uint32_t> labels;  // in selection order
  double score = 0.0;
  bool capped = false;  // l_max stopped the scan with candidates left
};

/// Greedy forward union: seed with the best single label, order the rest by
/// decreasing individual F1 (smallest label on ties), scan once and add a
/// label while it strictly improves the union F1. l_max = 0 means unlimited.
UnionSelection f1_union_greedy(const std::vector<CommunityTally>& tallies, int64_t gt_size,
                               size_t l_max = 0);
UnionSelection f1_union_greedy(const Partition& part, const BinaryMask& gt, size_t l_max = 0);

/// Threshold variant: every label whose individual F1 strictly exceeds tau.
/// The selection may be empty (score 0).
UnionSelection f1_union_threshold(const std::vector<CommunityTally>& tallies, int64_t gt_size,
                                  double tau);
UnionSelection f1_union_threshold(const Partition& part, const BinaryMask& gt, double tau);

/// Exact maximizer over all non-empty label subsets. Requires K <= 20;
/// test-only oracle.
UnionSelection union_oracle(const std::vector<CommunityTally>& tallies, int64_t gt_size);
UnionSelection union_oracle(const Partition& part, const BinaryMask& gt);

/// Foreground split evenly across m pure communities plus one background
/// community: single-community F1 is exactly 2/(m+1) while the full union
/// recovers the mask. `foreground` must be divisible by m.
std::pair<Partition, BinaryMask> pathological_instance(uint32_t m, int64_t foreground);

/// One CSV row: labels joined by ';', score to 6 decimals, capped flag.
std::string to_csv_row(const UnionSelection& selection);

/// Mask of all pixels whose community is in `labels`.
BinaryMask union_mask(const Partition& part, const std::vector<uint32_t>& labels,
                      int width, int height);

/// Mask of one community.
BinaryMask label_mask(const Partition& part, uint32_t label, int width, int height);

}  // namespace hedseg
