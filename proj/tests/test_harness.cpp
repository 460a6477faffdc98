#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hedseg/harness.hpp"
#include "hedseg/image_io.hpp"
#include "hedseg/projection.hpp"
#include "support/fixture.hpp"

using namespace hedseg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

testfix::FixtureSpec small_spec(int images) {
  testfix::FixtureSpec spec;
  spec.width = 32;
  spec.height = 32;
  spec.images = images;
  return spec;
}

}  // namespace

TEST_CASE("load_dataset indexes a valid tree deterministically") {
  TempDir tmp("hedseg_ds_basic");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(2));
  const DatasetIndex index = load_dataset(tmp.path.string());
  REQUIRE(index.entries.size() == 2);
  CHECK(index.entries[0].image_id == "img_00");
  CHECK(index.entries[1].image_id == "img_01");
  CHECK(index.entries[0].gt_paths.size() == 3);
  CHECK(index.warnings.empty());
}

TEST_CASE("load_dataset skips entries without ground truth") {
  TempDir tmp("hedseg_ds_nogt");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(2));
  fs::remove_all(tmp.path / "img_01" / "human_seg");
  const DatasetIndex index = load_dataset(tmp.path.string());
  CHECK(index.entries.size() == 1);
  REQUIRE(index.warnings.size() == 1);
  CHECK(index.warnings[0].find("img_01") != std::string::npos);
}

TEST_CASE("load_dataset drops only the mismatched mask") {
  TempDir tmp("hedseg_ds_badmask");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(1));
  // Overwrite one mask with wrong dimensions.
  save_png_mask((tmp.path / "img_00" / "human_seg" / "gt_1.png").string(), BinaryMask(8, 8));
  const DatasetIndex index = load_dataset(tmp.path.string());
  REQUIRE(index.entries.size() == 1);
  CHECK(index.entries[0].gt_paths.size() == 2);
  REQUIRE(index.warnings.size() == 1);
  CHECK(index.warnings[0].find("dimensions differ") != std::string::npos);
}

TEST_CASE("load_dataset throws on an empty index") {
  TempDir tmp("hedseg_ds_empty");
  CHECK_THROWS(load_dataset(tmp.path.string()));
}

TEST_CASE("evaluate_image fills a consistent record") {
  TempDir tmp("hedseg_eval");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(1));
  const DatasetIndex index = load_dataset(tmp.path.string());

  EvalParams params;
  const EvalRecord rec = evaluate_image(index.entries[0], params);
  REQUIRE(rec.error.empty());
  CHECK(rec.image_id == "img_00");
  CHECK(rec.gt_id >= 0);
  CHECK(rec.k >= 1);
  CHECK(rec.converged);
  CHECK(rec.f1_union >= rec.f1_single);
  CHECK(std::fabs(rec.gap - (rec.f1_union - rec.f1_single)) <= 1e-12);
  CHECK(rec.gap >= 0.0);
  CHECK(!rec.labels.empty());
}

TEST_CASE("evaluate_image tie-breaks identical ground truths to the first") {
  TempDir tmp("hedseg_eval_tie");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(1));
  const fs::path seg = tmp.path / "img_00" / "human_seg";
  // Make all three masks identical.
  fs::copy_file(seg / "gt_0.png", seg / "gt_1.png", fs::copy_options::overwrite_existing);
  fs::copy_file(seg / "gt_0.png", seg / "gt_2.png", fs::copy_options::overwrite_existing);
  const DatasetIndex index = load_dataset(tmp.path.string());
  const EvalRecord rec = evaluate_image(index.entries[0], EvalParams{});
  CHECK(rec.gt_id == 0);
}

TEST_CASE("recorded union score is the max over the entry's ground truths") {
  TempDir tmp("hedseg_eval_gtmax");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(1));
  const DatasetIndex index = load_dataset(tmp.path.string());
  const DatasetEntry& entry = index.entries[0];

  EvalParams params;
  const EvalRecord rec = evaluate_image(entry, params);
  REQUIRE(rec.error.empty());

  // Recompute per-GT union scores independently through the library.
  const RgbImage img = load_image(entry.image_path);
  const WeightedGraph g =
      build_graph(img, compute_edge_map(img, params.graph), params.graph);
  const auto eq =
      run_to_equilibrium(g, resolution_from_density(g, params.c), params.init);
  const Partition canonical = Partition::from_labels(eq.partition.canonical_labels());

  double best = -1.0;
  int best_gt = -1;
  for (size_t i = 0; i < entry.gt_paths.size(); ++i) {
    const BinaryMask gt = load_mask(entry.gt_paths[i]);
    const double score = f1_union_greedy(canonical, gt).score;
    if (score > best) {
      best = score;
      best_gt = static_cast<int>(i);
    }
  }
  CHECK(rec.f1_union == best);
  CHECK(rec.gt_id == best_gt);
}

TEST_CASE("evaluate_image reports failures as error records") {
  DatasetEntry missing;
  missing.image_id = "ghost";
  missing.image_path = "/nonexistent/ghost.png";
  missing.gt_paths = {"/nonexistent/gt.png"};
  const EvalRecord rec = evaluate_image(missing, EvalParams{});
  CHECK(!rec.error.empty());
  CHECK(rec.image_id == "ghost");
}

TEST_CASE("extreme points of a direct gamma sweep") {
  TempDir tmp("hedseg_sweep_extreme");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(1));
  const DatasetIndex index = load_dataset(tmp.path.string());

  EvalParams params;
  SweepPlan plan;
  plan.gamma_values = {0.0, 1.0};
  plan.inits = {InitMode::one_coalition, InitMode::singleton};
  const auto records = sweep_gamma(index.entries[0], params, plan);
  REQUIRE(records.size() == 4);
  // gamma 0 with one-coalition keeps the grand coalition.
  CHECK(records[0].init == std::string("one"));
  CHECK(records[0].k == 1);
  // gamma 1 with singleton init keeps |V| singletons.
  CHECK(records[3].init == std::string("singleton"));
  CHECK(records[3].k == 32u * 32u);
}

TEST_CASE("sweep records match independent single evaluations") {
  TempDir tmp("hedseg_sweep_reuse");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(1));
  const DatasetIndex index = load_dataset(tmp.path.string());

  EvalParams params;
  SweepPlan plan;
  plan.c_values = {3000.0, 900.0};
  const auto swept = sweep_gamma(index.entries[0], params, plan);
  REQUIRE(swept.size() == 2);

  for (const EvalRecord& rec : swept) {
    EvalParams single = params;
    single.c = rec.c;
    const EvalRecord fresh = evaluate_image(index.entries[0], single);
    CHECK(fresh.gamma == rec.gamma);
    CHECK(fresh.k == rec.k);
    CHECK(fresh.f1_single == rec.f1_single);
    CHECK(fresh.f1_union == rec.f1_union);
    CHECK(fresh.gt_id == rec.gt_id);
  }
}

TEST_CASE("direct gamma grids record c as not applicable") {
  TempDir tmp("hedseg_sweep_gamma_grid");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(1));
  const DatasetIndex index = load_dataset(tmp.path.string());

  SweepPlan plan;
  plan.gamma_values = {1e-5, 1e-3};
  const auto records = sweep_gamma(index.entries[0], EvalParams{}, plan);
  REQUIRE(records.size() == 2);
  CHECK(records[0].c == 0.0);
  CHECK(records[0].gamma == 1e-5);
  CHECK(records[1].gamma == 1e-3);
  CHECK(records[0].error.empty());
}

TEST_CASE("regime classification thresholds") {
  EvalRecord rec;
  rec.f1_single = 0.9863;
  rec.f1_union = 0.9922;
  rec.gap = rec.f1_union - rec.f1_single;
  CHECK(classify_regime(rec) == RegimeLabel::cohesive);

  rec.f1_single = 0.0370;
  rec.f1_union = 0.2714;
  rec.gap = rec.f1_union - rec.f1_single;
  CHECK(classify_regime(rec) == RegimeLabel::intrinsic_failure);

  rec.f1_single = 0.3;
  rec.f1_union = 0.9;
  rec.gap = 0.6;
  CHECK(classify_regime(rec) == RegimeLabel::fragmented_recoverable);
}

TEST_CASE("aggregate statistics") {
  EvalRecord a;
  a.f1_single = 0.5;
  a.f1_union = 0.7;
  a.gap = 0.2;
  a.k = 3;

  SUBCASE("single record collapses mean and median") {
    const AggregateSummary s = aggregate({a});
    CHECK(s.mean_f1_single == 0.5);
    CHECK(s.median_f1_single == 0.5);
    CHECK(s.mean_f1_union == 0.7);
    CHECK(s.median_f1_union == 0.7);
    CHECK(s.mean_gap == 0.2);
    CHECK(s.k_histogram.at(3) == 1);
  }

  SUBCASE("two records average their gaps") {
    EvalRecord b = a;
    b.gap = 0.4;
    b.k = 5;
    const AggregateSummary s = aggregate({a, b});
    CHECK(s.mean_gap == doctest::Approx(0.3).epsilon(1e-15));
  }

  SUBCASE("error records count as failures") {
    EvalRecord bad;
    bad.error = "boom";
    const AggregateSummary s = aggregate({a, bad});
    CHECK(s.records == 2);
    CHECK(s.failed == 1);
    CHECK(s.mean_f1_single == 0.5);
  }

  SUBCASE("empty input is rejected") {
    CHECK_THROWS(aggregate({}));
  }
}

TEST_CASE("csv row format is stable") {
  EvalRecord rec;
  rec.image_id = "img_03";
  rec.gt_id = 1;
  rec.gamma = 0.000123456;
  rec.c = 900.0;
  rec.init = "singleton";
  rec.k = 7;
  rec.f1_single = 0.5;
  rec.f1_union = 0.625;
  rec.gap = 0.125;
  rec.labels = {0, 4, 6};
  rec.sweeps = 12;
  rec.converged = true;
  rec.ms = 1.5;
  CHECK(record_csv_row(rec) ==
        "img_03,1,0.000123,900.000000,singleton,7,0.500000,0.625000,0.125000,0;4;6,12,1,1.500000");
}

TEST_CASE("write_report_csv emits the pinned header") {
  TempDir tmp("hedseg_csv");
  const std::string path = (tmp.path / "report.csv").string();
  write_report_csv(path, {});
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "image_id,gt_id,gamma,c,init,K,f1_single,f1_union,gap,labels,sweeps,converged,ms");
}

TEST_CASE("spearman rank correlation") {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  const std::vector<double> up = {10, 20, 30, 40, 50};
  const std::vector<double> down = {5, 4, 3, 2, 1};
  CHECK(spearman(xs, up) == doctest::Approx(1.0));
  CHECK(spearman(xs, down) == doctest::Approx(-1.0));
  const std::vector<double> flat = {1, 1, 1, 1, 1};
  CHECK(spearman(xs, flat) == 0.0);
  // Monotone with ties stays strongly positive.
  const std::vector<double> tied = {1, 1, 2, 2, 3};
  CHECK(spearman(xs, tied) > 0.9);
  CHECK_THROWS(spearman(std::vector<double>{1.0}, std::vector<double>{1.0}));
}

TEST_CASE("run_dataset is deterministic across job counts") {
  TempDir tmp("hedseg_jobs");
  testfix::write_fixture_dataset(tmp.path.string(), small_spec(3));
  const DatasetIndex index = load_dataset(tmp.path.string());

  EvalParams params;
  SweepPlan plan;
  plan.c_values = {9000.0, 900.0};
  plan.inits = {InitMode::singleton, InitMode::one_coalition};

  const auto serial = run_dataset(index, params, plan, 1);
  const auto parallel = run_dataset(index, params, plan, 4);
  REQUIRE(serial.size() == parallel.size());
  REQUIRE(serial.size() == 3 * 2 * 2);
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].image_id == parallel[i].image_id);
    CHECK(serial[i].gamma == parallel[i].gamma);
    CHECK(serial[i].init == parallel[i].init);
    CHECK(serial[i].k == parallel[i].k);
    CHECK(serial[i].f1_single == parallel[i].f1_single);
    CHECK(serial[i].f1_union == parallel[i].f1_union);
  }
}

TEST_CASE("diagnostic svgs are written") {
  TempDir tmp("hedseg_svg");
  std::vector<EvalRecord> records;
  for (int i = 0; i < 6; ++i) {
    EvalRecord r;
    r.image_id = "img";
    r.gamma = 1e-6 * (i + 1);
    r.c = 900.0 / (i + 1);
    r.k = static_cast<uint32_t>(1 + i);
    r.f1_single = 0.9 - 0.1 * i;
    r.f1_union = 0.9;
    r.gap = r.f1_union - r.f1_single;
    records.push_back(r);
  }
  emit_diagnostic_svgs(tmp.path.string(), records);
  for (const char* name : {"f1_vs_gamma_mean.svg", "f1_hist_single_union.svg",
                           "gamma_vs_K_scatter.svg", "K_vs_f1_scatter.svg", "K_hist.svg"}) {
    CHECK(fs::exists(tmp.path / name));
    CHECK(fs::file_size(tmp.path / name) > 200);
  }
}
