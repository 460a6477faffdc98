// Command-line front end: segment a single image, evaluate it against ground
// truth, sweep the resolution grid over a dataset, run the single-point
// dataset protocol, or execute the embedded selftest suite.
//
// Exit codes: 0 success, 1 input error, 2 non-convergence, 3 selftest failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hedseg/config.hpp"
#include "hedseg/harness.hpp"
#include "hedseg/hedonic.hpp"
#include "hedseg/image_io.hpp"
#include "hedseg/projection.hpp"
#include "hedseg/selftest.hpp"

namespace fs = std::filesystem;
using namespace hedseg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitSelftestFailed = 3;

// Deterministic palette: golden-angle hue walk per canonical label.
Rgb label_color(uint32_t label) {
  if (label == 0) return {40, 40, 40};
  const double hue = std::fmod(static_cast<double>(label) * 137.50776405, 360.0);
  const double s = 0.65, v = 0.95;
  const double c = v * s;
  const double x = c * (1.0 - std::fabs(std::fmod(hue / 60.0, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue / 60.0) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  return {static_cast<uint8_t>(255.0 * (r + m)), static_cast<uint8_t>(255.0 * (g + m)),
          static_cast<uint8_t>(255.0 * (b + m))};
}

struct PipelineOutput {
  Partition partition;  // canonical labels
  double gamma = 0.0;
  uint32_t sweeps = 0;
  bool converged = true;
};

PipelineOutput run_pipeline(const RgbImage& img, const Config& cfg) {
  const EdgeMap edges = compute_edge_map(img, cfg.graph);
  const WeightedGraph graph = build_graph(img, edges, cfg.graph);
  const Resolution res = cfg.gamma ? Resolution::from_gamma(*cfg.gamma)
                                   : resolution_from_density(graph, cfg.c);
  const EquilibriumResult eq = run_to_equilibrium(graph, res, cfg.init, cfg.max_sweeps);
  PipelineOutput out{Partition::from_labels(eq.partition.canonical_labels()), res.gamma,
                     eq.sweeps, eq.converged};
  return out;
}

int cmd_segment(const std::string& image_path, const Config& cfg) {
  const RgbImage img = load_image(image_path);
  const PipelineOutput run = run_pipeline(img, cfg);
  const uint32_t k = run.partition.community_count();

  fs::create_directories(cfg.out_dir);
  const std::string stem = fs::path(image_path).stem().string();
  const fs::path base = fs::path(cfg.out_dir) / stem;

  save_partition(base.string() + "_partition.txt", run.partition);

  const auto& labels = run.partition.assignment();
  if (k <= 65535) {
    std::vector<uint16_t> label_px(labels.begin(), labels.end());
    save_png_gray16(base.string() + "_labels.png", img.width(), img.height(), label_px);
  } else {
    std::cerr << "note: K=" << k << " exceeds the 16-bit label range; "
              << "label PNG skipped, see the text dump\n";
  }

  RgbImage preview(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      preview.at(x, y) = label_color(labels[static_cast<size_t>(y) * img.width() + x]);
  save_png(base.string() + "_preview.png", preview);

  std::cout << "segment " << stem << ": gamma=" << run.gamma << " K=" << k
            << " sweeps=" << run.sweeps << " converged=" << (run.converged ? 1 : 0) << "\n";
  if (!run.converged) {
    std::cerr << "warning: no equilibrium within max_sweeps; outputs are partial\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& image_path, const std::vector<std::string>& gt_paths,
                 const std::string& inject_labels, const Config& cfg) {
  const RgbImage img = load_image(image_path);

  std::vector<BinaryMask> gts;
  for (const std::string& p : gt_paths) {
    BinaryMask mask = load_mask(p);
    if (mask.width() != img.width() || mask.height() != img.height())
      throw std::runtime_error("ground truth dimensions differ from image: " + p);
    gts.push_back(std::move(mask));
  }

  EvalRecord rec;
  rec.image_id = fs::path(image_path).stem().string();
  rec.init = to_string(cfg.init);
  const auto t0 = std::chrono::steady_clock::now();

  Partition part;
  if (!inject_labels.empty()) {
    part = load_partition(inject_labels);
    if (part.node_count() != img.pixel_count())
      throw std::runtime_error("injected labeling does not cover the image grid");
    rec.gamma = cfg.gamma.value_or(0.0);
    rec.converged = true;
  } else {
    const PipelineOutput run = run_pipeline(img, cfg);
    part = std::move(run.partition);
    rec.gamma = run.gamma;
    rec.c = cfg.gamma ? 0.0 : cfg.c;
    rec.sweeps = run.sweeps;
    rec.converged = run.converged;
  }
  rec.k = part.community_count();

  uint32_t best_single_label = 0;
  UnionSelection tau_union;
  for (size_t i = 0; i < gts.size(); ++i) {
    const auto tallies = community_tallies(part, gts[i]);
    const int64_t gt_size = gts[i].count();
    const SingleBest single = f1_single(tallies, gt_size);
    const UnionSelection uni = f1_union_greedy(tallies, gt_size, cfg.l_max);
    if (i == 0 || uni.score > rec.f1_union) {
      rec.gt_id = static_cast<int>(i);
      rec.f1_single = single.report.f1;
      rec.f1_union = uni.score;
      rec.labels = uni.labels;
      best_single_label = single.label;
      tau_union = f1_union_threshold(tallies, gt_size, cfg.tau);
    }
  }
  rec.gap = rec.f1_union - rec.f1_single;
  rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(cfg.out_dir);
  const fs::path base = fs::path(cfg.out_dir) / rec.image_id;
  {
    std::ofstream csv(base.string() + "_record.csv");
    if (!csv) throw std::runtime_error("cannot write record CSV");
    csv << "image_id,gt_id,gamma,c,init,K,f1_single,f1_union,gap,labels,sweeps,converged,ms\n"
        << record_csv_row(rec) << "\n";
  }
  save_png_mask(base.string() + "_best_single.png",
                label_mask(part, best_single_label, img.width(), img.height()));
  save_png_mask(base.string() + "_best_union.png",
                union_mask(part, rec.labels, img.width(), img.height()));

  std::cout << "evaluate " << rec.image_id << ": gt=" << rec.gt_id << " K=" << rec.k
            << " f1_single=" << rec.f1_single << " f1_union=" << rec.f1_union
            << " gap=" << rec.gap << "\n";
  std::cout << "threshold union (tau=" << cfg.tau << "): " << to_csv_row(tau_union) << "\n";
  if (!rec.converged) return kExitNotConverged;
  return kExitOk;
}

int run_dataset_protocol(const Config& cfg, const SweepPlan& plan) {
  if (cfg.dataset_root.empty())
    throw std::runtime_error("dataset_root is required (flag --dataset-root or config key)");
  const DatasetIndex index = load_dataset(cfg.dataset_root);
  for (const std::string& w : index.warnings) std::cerr << "warning: " << w << "\n";

  const std::vector<EvalRecord> records =
      run_dataset(index, cfg.eval_params(), plan, cfg.effective_jobs());

  fs::create_directories(cfg.out_dir);
  write_report_csv((fs::path(cfg.out_dir) / "report.csv").string(), records);
  const AggregateSummary summary = aggregate(records, cfg.regimes);
  {
    std::ofstream out(fs::path(cfg.out_dir) / "summary.txt");
    out << summary_text(summary);
  }
  {
    std::ofstream out(fs::path(cfg.out_dir) / "summary.csv");
    char buf[256];
    out << "records,failed,mean_f1_single,median_f1_single,mean_f1_union,median_f1_union,"
           "mean_gap,cohesive,fragmented_recoverable,intrinsic_failure\n";
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%zu,%zu,%zu\n",
                  summary.records, summary.failed, summary.mean_f1_single,
                  summary.median_f1_single, summary.mean_f1_union, summary.median_f1_union,
                  summary.mean_gap, summary.cohesive, summary.fragmented, summary.intrinsic);
    out << buf;
  }
  emit_diagnostic_svgs(cfg.out_dir, records);

  std::cout << summary_text(summary);
  std::cout << "report: " << (fs::path(cfg.out_dir) / "report.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hedonic coalition-formation image segmentation"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file");

  // Every config key, overridable on the command line.
  std::vector<std::pair<std::string, std::string>> overrides;
  const auto add_key = [&](const std::string& flag, const std::string& key, const char* help) {
    app.add_option_function<std::string>(
           flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); },
           help)
        ->expected(1);
  };
  add_key("--c", "c", "resolution constant: gamma = density/c");
  add_key("--gamma", "gamma", "direct resolution override in [0,1]");
  add_key("--init", "init", "initial partition: singleton, one, or both");
  add_key("--lmax", "lmax", "cap on merged union labels (0 = unlimited)");
  add_key("--tau", "tau", "threshold for the threshold-union variant");
  add_key("--sigma-color", "sigma_color", "squared color-distance scale");
  add_key("--sigma-edge", "sigma_edge", "squared boundary-penalty scale");
  add_key("--eps", "eps", "discard edges with affinity <= eps");
  add_key("--canny-low", "canny_low", "lower hysteresis threshold");
  add_key("--canny-high", "canny_high", "upper hysteresis threshold");
  add_key("--blur-sigma", "blur_sigma", "Gaussian sigma before the gradient");
  add_key("--max-sweeps", "max_sweeps", "sweep limit for the optimizer");
  add_key("--out", "out", "output directory");
  add_key("--jobs", "jobs", "parallel image jobs (0 = all cores)");
  add_key("--dataset-root", "dataset_root", "dataset directory");
  add_key("--c-grid", "c_grid", "comma-separated c sweep grid");
  add_key("--gamma-grid", "gamma_grid", "comma-separated gamma sweep grid");
  add_key("--cohesive-single-min", "cohesive_single_min", "regime threshold");
  add_key("--cohesive-gap-max", "cohesive_gap_max", "regime threshold");
  add_key("--intrinsic-union-max", "intrinsic_union_max", "regime threshold");

  std::string segment_image;
  CLI::App* segment = app.add_subcommand("segment", "segment one image");
  segment->fallthrough();
  segment->add_option("image", segment_image, "input PNG/JPEG")->required();

  std::string eval_image, inject_labels;
  std::vector<std::string> eval_gts;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score one image against ground truth");
  evaluate->fallthrough();
  evaluate->add_option("image", eval_image, "input PNG/JPEG")->required();
  evaluate->add_option("gt", eval_gts, "ground-truth mask PNGs")->required();
  evaluate->add_option("--inject-labels", inject_labels,
                       "score a given partition dump instead of optimizing");

  CLI::App* sweep = app.add_subcommand("sweep", "resolution sweep over a dataset");
  sweep->fallthrough();
  CLI::App* dataset = app.add_subcommand("dataset", "dataset protocol at the configured c");
  dataset->fallthrough();
  CLI::App* selftest = app.add_subcommand("selftest", "run the embedded verification suite");
  selftest->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv("HEDSEG_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& [key, value] : overrides) cfg.set(key, value);
    cfg.validate();

    if (segment->parsed()) return cmd_segment(segment_image, cfg);
    if (evaluate->parsed()) return cmd_evaluate(eval_image, eval_gts, inject_labels, cfg);
    if (sweep->parsed()) return run_dataset_protocol(cfg, cfg.sweep_plan());
    if (dataset->parsed()) {
      SweepPlan plan;
      if (cfg.gamma)
        plan.gamma_values = {*cfg.gamma};
      else
        plan.c_values = {cfg.c};
      plan.inits = cfg.both_inits
                       ? std::vector<InitMode>{InitMode::singleton, InitMode::one_coalition}
                       : std::vector<InitMode>{cfg.init};
      return run_dataset_protocol(cfg, plan);
    }
    if (selftest->parsed())
      return run_selftest(std::cout) ? kExitOk : kExitSelftestFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
