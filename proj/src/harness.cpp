#include "hedseg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hedseg/image_io.hpp"
#include "hedseg/projection.hpp"
#include "hedseg/svgplot.hpp"

namespace fs = std::filesystem;

namespace hedseg {

namespace {

bool has_extension(const fs::path& p, const std::vector<std::string>& extensions) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::find(extensions.begin(), extensions.end(), ext) != extensions.end();
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

struct PreparedImage {
  RgbImage image;
  WeightedGraph graph;
  std::vector<int> gt_ids;
  std::vector<BinaryMask> gts;
};

PreparedImage prepare_image(const DatasetEntry& entry, const GraphParams& params) {
  PreparedImage prep;
  prep.image = load_image(entry.image_path);
  const EdgeMap edges = compute_edge_map(prep.image, params);
  prep.graph = build_graph(prep.image, edges, params);
  for (size_t i = 0; i < entry.gt_paths.size(); ++i) {
    BinaryMask mask = load_mask(entry.gt_paths[i]);
    if (mask.width() != prep.image.width() || mask.height() != prep.image.height()) continue;
    prep.gt_ids.push_back(static_cast<int>(i));
    prep.gts.push_back(std::move(mask));
  }
  if (prep.gts.empty())
    throw std::runtime_error(entry.image_id + ": no usable ground truth");
  return prep;
}

EvalRecord evaluate_prepared(const std::string& image_id, const PreparedImage& prep,
                             const EvalParams& params, double c_value,
                             std::optional<double> gamma_value, InitMode init) {
  EvalRecord rec;
  rec.image_id = image_id;
  rec.init = to_string(init);

  const auto t0 = std::chrono::steady_clock::now();
  const Resolution res = gamma_value ? Resolution::from_gamma(*gamma_value)
                                     : resolution_from_density(prep.graph, c_value);
  rec.gamma = res.gamma;
  rec.c = gamma_value ? 0.0 : c_value;

  EquilibriumResult eq = run_to_equilibrium(prep.graph, res, init, params.max_sweeps);
  rec.k = eq.partition.community_count();
  rec.sweeps = eq.sweeps;
  rec.converged = eq.converged;

  // Canonical ids so the recorded labels match partition dumps and label PNGs.
  const Partition canonical = Partition::from_labels(eq.partition.canonical_labels());

  bool have_best = false;
  for (size_t i = 0; i < prep.gts.size(); ++i) {
    const std::vector<CommunityTally> tallies = community_tallies(canonical, prep.gts[i]);
    const int64_t gt_size = prep.gts[i].count();
    const SingleBest single = f1_single(tallies, gt_size);
    const UnionSelection uni = f1_union_greedy(tallies, gt_size, params.l_max);
    if (!have_best || uni.score > rec.f1_union) {
      have_best = true;
      rec.gt_id = prep.gt_ids[i];
      rec.f1_single = single.report.f1;
      rec.f1_union = uni.score;
      rec.labels = uni.labels;
    }
  }
  rec.gap = rec.f1_union - rec.f1_single;
  rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

EvalRecord error_record(const std::string& image_id, InitMode init, const std::string& message) {
  EvalRecord rec;
  rec.image_id = image_id;
  rec.init = to_string(init);
  rec.error = message;
  return rec;
}

}  // namespace

DatasetIndex load_dataset(const std::string& root, const DatasetPatterns& patterns) {
  if (!fs::is_directory(root))
    throw std::runtime_error("load_dataset: not a directory: " + root);

  DatasetIndex index;
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());

  for (const fs::path& dir : entries) {
    DatasetEntry entry;
    entry.image_id = dir.filename().string();

    for (const std::string& sub : patterns.image_dirs) {
      const fs::path image_dir = sub == "." ? dir : dir / sub;
      for (const fs::path& f : sorted_files(image_dir)) {
        if (has_extension(f, patterns.image_extensions)) {
          entry.image_path = f.string();
          break;
        }
      }
      if (!entry.image_path.empty()) break;
    }
    if (entry.image_path.empty()) {
      index.warnings.push_back(entry.image_id + ": no source image found");
      continue;
    }

    int image_w = 0, image_h = 0;
    try {
      const RgbImage img = load_image(entry.image_path);
      image_w = img.width();
      image_h = img.height();
    } catch (const std::exception& e) {
      index.warnings.push_back(entry.image_id + ": unreadable image: " + e.what());
      continue;
    }

    for (const fs::path& f : sorted_files(dir / patterns.gt_dir)) {
      if (entry.gt_paths.size() >= patterns.max_gts) break;
      if (!has_extension(f, {".png"})) continue;
      try {
        const BinaryMask mask = load_mask(f.string());
        if (mask.width() != image_w || mask.height() != image_h) {
          index.warnings.push_back(entry.image_id + ": mask dimensions differ, dropped " +
                                   f.filename().string());
          continue;
        }
      } catch (const std::exception& e) {
        index.warnings.push_back(entry.image_id + ": unreadable mask " + f.filename().string() +
                                 ": " + e.what());
        continue;
      }
      entry.gt_paths.push_back(f.string());
    }
    if (entry.gt_paths.empty()) {
      index.warnings.push_back(entry.image_id + ": no usable ground truth, skipped");
      continue;
    }
    index.entries.push_back(std::move(entry));
  }

  if (index.entries.empty()) throw std::runtime_error("load_dataset: empty index under " + root);
  return index;
}

const char* to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::cohesive: return "cohesive";
    case RegimeLabel::fragmented_recoverable: return "fragmented_recoverable";
    case RegimeLabel::intrinsic_failure: return "intrinsic_failure";
  }
  return "?";
}

RegimeLabel classify_regime(const EvalRecord& record, const RegimeThresholds& thresholds) {
  if (record.f1_single >= thresholds.cohesive_single_min &&
      record.gap < thresholds.cohesive_gap_max)
    return RegimeLabel::cohesive;
  if (record.f1_union < thresholds.intrinsic_union_max) return RegimeLabel::intrinsic_failure;
  return RegimeLabel::fragmented_recoverable;
}

EvalRecord evaluate_image(const DatasetEntry& entry, const EvalParams& params) {
  try {
    const PreparedImage prep = prepare_image(entry, params.graph);
    return evaluate_prepared(entry.image_id, prep, params, params.c, params.gamma_override,
                             params.init);
  } catch (const std::exception& e) {
    return error_record(entry.image_id, params.init, e.what());
  }
}

std::vector<double> default_c_grid() {
  return {9e4, 3e4, 9e3, 3e3, 900.0, 300.0, 90.0, 30.0, 9.0};
}

std::vector<EvalRecord> sweep_gamma(const DatasetEntry& entry, const EvalParams& params,
                                    const SweepPlan& plan) {
  const bool direct = !plan.gamma_values.empty();
  std::vector<double> grid = direct ? plan.gamma_values : plan.c_values;
  if (grid.empty()) grid = {params.c};
  // Emit records in ascending gamma: c values run descending.
  std::sort(grid.begin(), grid.end());
  if (!direct) std::reverse(grid.begin(), grid.end());

  std::vector<EvalRecord> records;
  std::optional<PreparedImage> prep;
  std::string prepare_error;
  try {
    prep.emplace(prepare_image(entry, params.graph));
  } catch (const std::exception& e) {
    prepare_error = e.what();
  }

  for (double value : grid) {
    for (InitMode init : plan.inits) {
      if (!prep) {
        records.push_back(error_record(entry.image_id, init, prepare_error));
        continue;
      }
      try {
        records.push_back(evaluate_prepared(
            entry.image_id, *prep, params, direct ? 0.0 : value,
            direct ? std::optional<double>(value) : std::nullopt, init));
      } catch (const std::exception& e) {
        records.push_back(error_record(entry.image_id, init, e.what()));
      }
    }
  }
  return records;
}

std::vector<EvalRecord> run_dataset(const DatasetIndex& index, const EvalParams& params,
                                    const SweepPlan& plan, int jobs) {
  const size_t n = index.entries.size();
  std::vector<std::vector<EvalRecord>> per_entry(n);

  if (jobs < 1) jobs = 1;
  const int workers = static_cast<int>(std::min<size_t>(jobs, n));
  std::atomic<size_t> next{0};
  const auto work = [&]() {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
      per_entry[i] = sweep_gamma(index.entries[i], params, plan);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  std::vector<EvalRecord> records;
  for (auto& group : per_entry)
    for (auto& rec : group) records.push_back(std::move(rec));
  std::stable_sort(records.begin(), records.end(), [](const EvalRecord& a, const EvalRecord& b) {
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    if (a.gamma != b.gamma) return a.gamma < b.gamma;
    return a.init < b.init;
  });
  return records;
}

namespace {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

AggregateSummary aggregate(const std::vector<EvalRecord>& records,
                           const RegimeThresholds& thresholds) {
  if (records.empty()) throw std::invalid_argument("aggregate: empty record list");

  AggregateSummary s;
  s.records = records.size();
  std::vector<double> singles, unions;
  double gap_sum = 0.0;
  for (const EvalRecord& r : records) {
    if (!r.error.empty()) {
      ++s.failed;
      continue;
    }
    singles.push_back(r.f1_single);
    unions.push_back(r.f1_union);
    gap_sum += r.gap;
    ++s.k_histogram[r.k];
    switch (classify_regime(r, thresholds)) {
      case RegimeLabel::cohesive: ++s.cohesive; break;
      case RegimeLabel::fragmented_recoverable: ++s.fragmented; break;
      case RegimeLabel::intrinsic_failure: ++s.intrinsic; break;
    }
  }
  if (singles.empty()) throw std::invalid_argument("aggregate: no successful records");

  const double n = static_cast<double>(singles.size());
  s.mean_f1_single = std::accumulate(singles.begin(), singles.end(), 0.0) / n;
  s.mean_f1_union = std::accumulate(unions.begin(), unions.end(), 0.0) / n;
  s.mean_gap = gap_sum / n;
  s.median_f1_single = median_of(singles);
  s.median_f1_union = median_of(unions);
  return s;
}

std::string summary_text(const AggregateSummary& s) {
  std::ostringstream out;
  char buf[160];
  out << "records: " << s.records << " (failed: " << s.failed << ")\n";
  std::snprintf(buf, sizeof(buf), "f1_single: mean %.6f median %.6f\n", s.mean_f1_single,
                s.median_f1_single);
  out << buf;
  std::snprintf(buf, sizeof(buf), "f1_union:  mean %.6f median %.6f\n", s.mean_f1_union,
                s.median_f1_union);
  out << buf;
  std::snprintf(buf, sizeof(buf), "gap:       mean %.6f\n", s.mean_gap);
  out << buf;
  out << "regimes: cohesive " << s.cohesive << ", fragmented_recoverable " << s.fragmented
      << ", intrinsic_failure " << s.intrinsic << "\n";
  out << "K histogram:\n";
  for (const auto& [k, count] : s.k_histogram) out << "  K=" << k << ": " << count << "\n";
  return out.str();
}

std::string record_csv_row(const EvalRecord& r) {
  std::ostringstream labels;
  for (size_t i = 0; i < r.labels.size(); ++i) {
    if (i) labels << ';';
    labels << r.labels[i];
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%s,%u,%.6f,%.6f,%.6f,%s,%u,%d,%.6f",
                r.gamma, r.c, r.init.c_str(), r.k, r.f1_single, r.f1_union, r.gap,
                labels.str().c_str(), r.sweeps, r.converged ? 1 : 0, r.ms);
  std::ostringstream row;
  row << r.image_id << ',' << r.gt_id << ',' << buf;
  return row.str();
}

void write_report_csv(const std::string& path, const std::vector<EvalRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
  out << "image_id,gt_id,gamma,c,init,K,f1_single,f1_union,gap,labels,sweeps,converged,ms\n";
  for (const EvalRecord& r : records) out << record_csv_row(r) << '\n';
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("spearman: need two sequences of equal length >= 2");

  const auto ranks = [](std::span<const double> v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n);
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (size_t t = i; t <= j; ++t) rank[order[t]] = avg;
      i = j + 1;
    }
    return rank;
  };

  const std::vector<double> rx = ranks(xs), ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

void emit_diagnostic_svgs(const std::string& out_dir, const std::vector<EvalRecord>& records) {
  fs::create_directories(out_dir);
  std::vector<const EvalRecord*> ok;
  for (const EvalRecord& r : records)
    if (r.error.empty()) ok.push_back(&r);
  if (ok.empty()) return;

  // Group records by grid point (c when swept over c, else gamma).
  std::map<std::pair<double, double>, std::vector<const EvalRecord*>> groups;
  for (const EvalRecord* r : ok) groups[{r->c, r->c > 0 ? 0.0 : r->gamma}].push_back(r);

  {
    SvgChart chart("Mean F1 by resolution", "gamma", "mean F1");
    chart.set_log_x(true);
    SvgChart::Series single{"f1_single", "#1f77b4", true, true, {}};
    SvgChart::Series uni{"f1_union", "#ff7f0e", true, true, {}};
    std::vector<std::pair<double, std::pair<double, double>>> points;
    for (const auto& [key, group] : groups) {
      double lg = 0, ms = 0, mu = 0;
      for (const EvalRecord* r : group) {
        lg += std::log10(std::max(r->gamma, 1e-300));
        ms += r->f1_single;
        mu += r->f1_union;
      }
      const double n = static_cast<double>(group.size());
      points.push_back({std::pow(10.0, lg / n), {ms / n, mu / n}});
    }
    std::sort(points.begin(), points.end());
    for (const auto& [x, f] : points) {
      single.points.push_back({x, f.first});
      uni.points.push_back({x, f.second});
    }
    chart.add_series(single);
    chart.add_series(uni);
    chart.write((fs::path(out_dir) / "f1_vs_gamma_mean.svg").string());
  }

  {
    SvgChart chart("F1 distributions", "F1", "count");
    constexpr int kBins = 20;
    std::vector<SvgChart::Bar> single(kBins), uni(kBins);
    for (int i = 0; i < kBins; ++i) {
      single[i].x = (i + 0.3) / kBins;
      uni[i].x = (i + 0.7) / kBins;
    }
    for (const EvalRecord* r : ok) {
      const int bs = std::min(kBins - 1, static_cast<int>(r->f1_single * kBins));
      const int bu = std::min(kBins - 1, static_cast<int>(r->f1_union * kBins));
      single[bs].height += 1;
      uni[bu].height += 1;
    }
    SvgChart::Series s1{"f1_single", "#1f77b4", false, true, {}};
    SvgChart::Series s2{"f1_union", "#ff7f0e", false, true, {}};
    for (int i = 0; i < kBins; ++i) {
      s1.points.push_back({single[i].x, single[i].height});
      s2.points.push_back({uni[i].x, uni[i].height});
    }
    std::vector<SvgChart::Bar> bars = single;
    bars.insert(bars.end(), uni.begin(), uni.end());
    chart.add_bars(bars, "#999999", 0.4 / kBins);
    chart.add_series(s1);
    chart.add_series(s2);
    chart.write((fs::path(out_dir) / "f1_hist_single_union.svg").string());
  }

  {
    SvgChart chart("Fragmentation by resolution", "gamma", "K");
    chart.set_log_x(true);
    SvgChart::Series s{"K", "#2ca02c", false, true, {}};
    for (const EvalRecord* r : ok) s.points.push_back({r->gamma, static_cast<double>(r->k)});
    chart.add_series(s);
    chart.write((fs::path(out_dir) / "gamma_vs_K_scatter.svg").string());
  }

  {
    SvgChart chart("F1 by fragmentation", "K", "F1");
    SvgChart::Series s1{"f1_single", "#1f77b4", false, true, {}};
    SvgChart::Series s2{"f1_union", "#ff7f0e", false, true, {}};
    for (const EvalRecord* r : ok) {
      s1.points.push_back({static_cast<double>(r->k), r->f1_single});
      s2.points.push_back({static_cast<double>(r->k), r->f1_union});
    }
    chart.add_series(s1);
    chart.add_series(s2);
    chart.write((fs::path(out_dir) / "K_vs_f1_scatter.svg").string());
  }

  {
    SvgChart chart("Community count distribution", "K", "count");
    std::map<uint32_t, uint32_t> hist;
    for (const EvalRecord* r : ok) ++hist[r->k];
    std::vector<SvgChart::Bar> bars;
    for (const auto& [k, count] : hist)
      bars.push_back({static_cast<double>(k), static_cast<double>(count)});
    chart.add_bars(bars, "#2ca02c", 1.0);
    chart.write((fs::path(out_dir) / "K_hist.svg").string());
  }
}

}  // namespace hedseg
