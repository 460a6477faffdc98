#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hedseg/hedonic.hpp"
#include "hedseg/pixelgraph.hpp"

namespace hedseg {

struct DatasetEntry {
  std::string image_id;
  std::string image_path;
  std::vector<std::string> gt_paths;  // at most max_gts, sorted
};

struct DatasetIndex {
  std::vector<DatasetEntry> entries;
  std::vector<std::string> warnings;  // entries or masks skipped while indexing
};

/// On-disk layout knobs. Each subdirectory of the dataset root is one image:
/// the source raster is searched with image_dirs/extensions, ground-truth
/// masks come from gt_dir.
struct DatasetPatterns {
  std::vector<std::string> image_dirs = {"src_color", "src_bw", "."};
  std::vector<std::string> image_extensions = {".png", ".jpg", ".jpeg"};
  std::string gt_dir = "human_seg";
  size_t max_gts = 3;
};

/// Deterministic, sorted index; entries without any usable ground truth are
/// skipped with a warning. Throws if the index ends up empty.
DatasetIndex load_dataset(const std::string& root, const DatasetPatterns& patterns = {});

struct EvalRecord {
  std::string image_id;
  int gt_id = -1;
  double gamma = 0.0;
  double c = 0.0;  // 0 when gamma was set directly
  std::string init;
  uint32_t k = 0;
  double f1_single = 0.0;
  double f1_union = 0.0;
  double gap = 0.0;
  std::vector<uint32_t> labels;  // union selection, canonical ids
  uint32_t sweeps = 0;
  bool converged = false;
  double ms = 0.0;
  std::string error;  // non-empty marks a failed image
};

enum class RegimeLabel { cohesive, fragmented_recoverable, intrinsic_failure };

const char* to_string(RegimeLabel label);

struct RegimeThresholds {
  double cohesive_single_min = 0.7;
  double cohesive_gap_max = 0.2;
  double intrinsic_union_max = 0.5;
};

/// cohesive when f1_single >= cohesive_single_min and gap < cohesive_gap_max;
/// intrinsic failure when f1_union < intrinsic_union_max; else fragmented.
RegimeLabel classify_regime(const EvalRecord& record, const RegimeThresholds& thresholds = {});

struct EvalParams {
  GraphParams graph;
  double c = 900.0;
  std::optional<double> gamma_override;
  InitMode init = InitMode::singleton;
  size_t l_max = 0;  // 0 = unlimited
  uint32_t max_sweeps = 10000;
};

/// Full per-image protocol: build the graph, derive gamma, converge, score
/// every ground truth and keep the one maximizing the union F1 (smallest id
/// on ties). Failures come back as error records, not exceptions.
EvalRecord evaluate_image(const DatasetEntry& entry, const EvalParams& params);

struct SweepPlan {
  std::vector<double> c_values;      // used when gamma_values is empty
  std::vector<double> gamma_values;  // direct grid, overrides c_values
  std::vector<InitMode> inits = {InitMode::singleton};
};

/// Default c grid, log-spaced around the operating point c = 900.
std::vector<double> default_c_grid();

/// One record per (grid value, init); the pixel graph is built once and
/// shared across the whole sweep.
std::vector<EvalRecord> sweep_gamma(const DatasetEntry& entry, const EvalParams& params,
                                    const SweepPlan& plan);

/// Evaluates every entry (optionally in parallel) and returns records sorted
/// by (image id, gamma, init), independent of scheduling.
std::vector<EvalRecord> run_dataset(const DatasetIndex& index, const EvalParams& params,
                                    const SweepPlan& plan, int jobs = 1);

struct AggregateSummary {
  size_t records = 0;
  size_t failed = 0;
  double mean_f1_single = 0.0;
  double median_f1_single = 0.0;
  double mean_f1_union = 0.0;
  double median_f1_union = 0.0;
  double mean_gap = 0.0;
  std::map<uint32_t, uint32_t> k_histogram;  // unit-width integer bins
  size_t cohesive = 0;
  size_t fragmented = 0;
  size_t intrinsic = 0;
};

AggregateSummary aggregate(const std::vector<EvalRecord>& records,
                           const RegimeThresholds& thresholds = {});

std::string summary_text(const AggregateSummary& summary);

/// CSV with the fixed header image_id,gt_id,gamma,c,init,K,f1_single,
/// f1_union,gap,labels,sweeps,converged,ms; floats at 6 decimal places,
/// labels joined by ';'.
void write_report_csv(const std::string& path, const std::vector<EvalRecord>& records);

std::string record_csv_row(const EvalRecord& record);

/// Spearman rank correlation with average ranks on ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Figure-style SVG charts (mean F1 vs gamma, F1 histograms, K vs gamma,
/// F1 vs K, K histogram) written under out_dir with stable names.
void emit_diagnostic_svgs(const std::string& out_dir, const std::vector<EvalRecord>& records);

}  // namespace hedseg
