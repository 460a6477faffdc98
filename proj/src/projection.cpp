#include "hedseg/projection.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hedseg {

namespace {

// F1 of a candidate mask given as (tp, size): 2tp / (size + gt). Comparisons
// cross-multiply so selection never depends on floating-point rounding.
// a > b  <=>  tp_a * den_b > tp_b * den_a.
bool f1_greater(int64_t tp_a, int64_t den_a, int64_t tp_b, int64_t den_b) {
  return tp_a * den_b > tp_b * den_a;
}

double f1_value(int64_t tp, int64_t pred_size, int64_t gt_size) {
  const int64_t den = pred_size + gt_size;
  return den > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(den) : 0.0;
}

void require_same_grid(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height())
    throw std::invalid_argument("f1: mask dimensions do not match");
}

}  // namespace

F1Report f1_from_counts(int64_t tp, int64_t pred_size, int64_t gt_size) {
  if (tp < 0 || pred_size < tp || gt_size < tp)
    throw std::invalid_argument("f1_from_counts: inconsistent counts");
  F1Report rep;
  rep.tp = tp;
  rep.fp = pred_size - tp;
  rep.fn = gt_size - tp;
  if (pred_size > 0) rep.precision = static_cast<double>(tp) / static_cast<double>(pred_size);
  if (gt_size > 0) rep.recall = static_cast<double>(tp) / static_cast<double>(gt_size);
  rep.f1 = f1_value(tp, pred_size, gt_size);
  return rep;
}

F1Report f1(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_grid(pred, gt);
  int64_t tp = 0, pred_size = 0, gt_size = 0;
  const auto& pb = pred.bits();
  const auto& gb = gt.bits();
  for (size_t i = 0; i < pb.size(); ++i) {
    pred_size += pb[i];
    gt_size += gb[i];
    tp += pb[i] & gb[i];
  }
  return f1_from_counts(tp, pred_size, gt_size);
}

std::vector<CommunityTally> community_tallies(const Partition& part, const BinaryMask& gt) {
  if (part.node_count() != gt.size())
    throw std::invalid_argument("community_tallies: partition does not cover the mask grid");
  const auto& assignment = part.assignment();
  std::vector<CommunityTally> by_id(part.fresh_id());
  for (size_t i = 0; i < assignment.size(); ++i) {
    CommunityTally& t = by_id[assignment[i]];
    t.size += 1;
    t.tp += gt.at(i) ? 1 : 0;
  }
  std::vector<CommunityTally> tallies;
  tallies.reserve(part.community_count());
  for (uint32_t id = 0; id < by_id.size(); ++id) {
    if (by_id[id].size > 0) {
      by_id[id].label = id;
      tallies.push_back(by_id[id]);
    }
  }
  return tallies;
}

SingleBest f1_single(const std::vector<CommunityTally>& tallies, int64_t gt_size) {
  if (tallies.empty()) throw std::invalid_argument("f1_single: empty partition");
  const CommunityTally* best = &tallies.front();
  for (const CommunityTally& t : tallies) {
    if (f1_greater(t.tp, t.size + gt_size, best->tp, best->size + gt_size) ||
        (t.tp * (best->size + gt_size) == best->tp * (t.size + gt_size) && t.label < best->label))
      best = &t;
  }
  return {best->label, f1_from_counts(best->tp, best->size, gt_size)};
}

SingleBest f1_single(const Partition& part, const BinaryMask& gt) {
  return f1_single(community_tallies(part, gt), gt.count());
}

UnionSelection f1_union_greedy(const std::vector<CommunityTally>& tallies, int64_t gt_size,
                               size_t l_max) {
  const SingleBest seed = f1_single(tallies, gt_size);

  std::vector<const CommunityTally*> rest;
  rest.reserve(tallies.size());
  const CommunityTally* seed_tally = nullptr;
  for (const CommunityTally& t : tallies) {
    if (t.label == seed.label)
      seed_tally = &t;
    else
      rest.push_back(&t);
  }
  std::sort(rest.begin(), rest.end(), [gt_size](const CommunityTally* a, const CommunityTally* b) {
    if (f1_greater(a->tp, a->size + gt_size, b->tp, b->size + gt_size)) return true;
    if (f1_greater(b->tp, b->size + gt_size, a->tp, a->size + gt_size)) return false;
    return a->label < b->label;
  });

  UnionSelection sel;
  sel.labels.push_back(seed.label);
  int64_t union_tp = seed_tally->tp;
  int64_t union_size = seed_tally->size;

  for (const CommunityTally* t : rest) {
    if (l_max > 0 && sel.labels.size() == l_max) {
      sel.capped = true;
      break;
    }
    // Disjoint communities: the candidate union is a plain sum of tallies.
    const int64_t next_tp = union_tp + t->tp;
    const int64_t next_size = union_size + t->size;
    if (f1_greater(next_tp, next_size + gt_size, union_tp, union_size + gt_size)) {
      sel.labels.push_back(t->label);
      union_tp = next_tp;
      union_size = next_size;
    }
  }

  sel.score = f1_value(union_tp, union_size, gt_size);
  return sel;
}

UnionSelection f1_union_greedy(const Partition& part, const BinaryMask& gt, size_t l_max) {
  UnionSelection sel = f1_union_greedy(community_tallies(part, gt), gt.count(), l_max);
  // Recompute the score from the materialized union mask; the incremental
  // tallies must match it exactly.
  const BinaryMask mask = union_mask(part, sel.labels, gt.width(), gt.height());
  sel.score = f1(mask, gt).f1;
  return sel;
}

UnionSelection f1_union_threshold(const std::vector<CommunityTally>& tallies, int64_t gt_size,
                                  double tau) {
  UnionSelection sel;
  int64_t union_tp = 0;
  int64_t union_size = 0;
  for (const CommunityTally& t : tallies) {
    if (f1_value(t.tp, t.size, gt_size) > tau) {
      sel.labels.push_back(t.label);
      union_tp += t.tp;
      union_size += t.size;
    }
  }
  sel.score = sel.labels.empty() ? 0.0 : f1_value(union_tp, union_size, gt_size);
  return sel;
}

UnionSelection f1_union_threshold(const Partition& part, const BinaryMask& gt, double tau) {
  return f1_union_threshold(community_tallies(part, gt), gt.count(), tau);
}

UnionSelection union_oracle(const std::vector<CommunityTally>& tallies, int64_t gt_size) {
  if (tallies.empty()) throw std::invalid_argument("union_oracle: empty partition");
  if (tallies.size() > 20)
    throw std::invalid_argument("union_oracle: exhaustive search limited to K <= 20");

  const size_t k = tallies.size();
  uint32_t best_mask = 1;
  int64_t best_tp = tallies[0].tp;
  int64_t best_size = tallies[0].size;
  for (uint32_t mask = 2; mask < (1u << k); ++mask) {
    int64_t tp = 0, size = 0;
    for (size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        tp += tallies[i].tp;
        size += tallies[i].size;
      }
    }
    if (f1_greater(tp, size + gt_size, best_tp, best_size + gt_size)) {
      best_mask = mask;
      best_tp = tp;
      best_size = size;
    }
  }

  UnionSelection sel;
  for (size_t i = 0; i < k; ++i)
    if (best_mask & (1u << i)) sel.labels.push_back(tallies[i].label);
  sel.score = f1_value(best_tp, best_size, gt_size);
  return sel;
}

UnionSelection union_oracle(const Partition& part, const BinaryMask& gt) {
  return union_oracle(community_tallies(part, gt), gt.count());
}

std::pair<Partition, BinaryMask> pathological_instance(uint32_t m, int64_t foreground) {
  if (m == 0) throw std::invalid_argument("pathological_instance: m must be positive");
  if (foreground <= 0 || foreground % m != 0)
    throw std::invalid_argument("pathological_instance: foreground must be a positive multiple of m");

  // One row per foreground community, each holding |Y|/m pure foreground
  // pixels, plus one background row.
  const int width = static_cast<int>(foreground / m);
  const int height = static_cast<int>(m) + 1;

  std::vector<uint32_t> labels(static_cast<size_t>(width) * height);
  BinaryMask gt(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      labels[static_cast<size_t>(y) * width + x] = static_cast<uint32_t>(y);
      if (y < static_cast<int>(m)) gt.set(x, y, true);
    }
  }
  return {Partition::from_labels(labels), std::move(gt)};
}

std::string to_csv_row(const UnionSelection& selection) {
  std::string labels;
  for (size_t i = 0; i < selection.labels.size(); ++i) {
    if (i) labels += ';';
    labels += std::to_string(selection.labels[i]);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), ",%.6f,%d", selection.score, selection.capped ? 1 : 0);
  return labels + buf;
}

BinaryMask union_mask(const Partition& part, const std::vector<uint32_t>& labels,
                      int width, int height) {
  if (part.node_count() != static_cast<size_t>(width) * height)
    throw std::invalid_argument("union_mask: partition does not cover the grid");
  std::vector<uint8_t> selected(part.fresh_id(), 0);
  for (uint32_t l : labels)
    if (l < selected.size()) selected[l] = 1;
  BinaryMask mask(width, height);
  const auto& assignment = part.assignment();
  for (size_t i = 0; i < assignment.size(); ++i)
    mask.bits()[i] = selected[assignment[i]];
  return mask;
}

BinaryMask label_mask(const Partition& part, uint32_t label, int width, int height) {
  return union_mask(part, {label}, width, height);
}

}  // namespace hedseg
