#include "hedseg/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include "hedseg/hedonic.hpp"
#include "hedseg/projection.hpp"
#include "hedseg/randgen.hpp"

namespace hedseg {

namespace {

struct CheckContext {
  std::ostream& out;
  bool all_ok = true;

  void report(const char* name, bool ok, const std::string& detail = "") {
    out << (ok ? "[pass] " : "[FAIL] ") << name;
    if (!detail.empty()) out << " (" << detail << ")";
    out << "\n";
    all_ok &= ok;
  }
};

bool near(double a, double b, double tol = 1e-12) { return std::fabs(a - b) <= tol; }

void check_toy_example(CheckContext& ctx) {
  // 100 foreground pixels; three communities overlapping it by 30/25/10.
  const std::vector<CommunityTally> tallies = {{1, 40, 30}, {2, 35, 25}, {3, 50, 10}};
  const SingleBest single = f1_single(tallies, 100);
  const UnionSelection uni = f1_union_greedy(tallies, 100);
  bool ok = single.label == 1 && near(single.report.f1, 60.0 / 140.0);
  ok = ok && uni.labels == std::vector<uint32_t>{1, 2} && near(uni.score, 110.0 / 175.0);
  char detail[96];
  std::snprintf(detail, sizeof(detail), "f1_single=%.4f f1_union=%.4f", single.report.f1,
                uni.score);
  ctx.report("toy three-community fixture", ok, detail);
}

void check_pathological(CheckContext& ctx) {
  bool ok = true;
  for (uint32_t m : {1u, 3u, 9u, 99u}) {
    const auto [part, gt] = pathological_instance(m, static_cast<int64_t>(m) * 12);
    const SingleBest single = f1_single(part, gt);
    const UnionSelection uni = f1_union_greedy(part, gt);
    ok = ok && near(single.report.f1, 2.0 / (m + 1.0)) && uni.score == 1.0;
  }
  ctx.report("even-split instances m in {1,3,9,99}", ok);
}

void check_extreme_gamma(CheckContext& ctx) {
  Rng rng(2024);
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const WeightedGraph g = random_connected_graph(24, 0.15, true, rng);
    const auto grand = run_to_equilibrium(g, Resolution::from_gamma(0.0), InitMode::one_coalition);
    const auto split = run_to_equilibrium(g, Resolution::from_gamma(1.0), InitMode::singleton);
    ok = ok && grand.converged && grand.partition.community_count() == 1 && grand.sweeps == 1;
    ok = ok && split.converged && split.partition.community_count() == g.node_count() &&
         split.sweeps == 1;
  }
  ctx.report("extreme resolutions keep grand coalition / singletons", ok);
}

void check_equilibria(CheckContext& ctx) {
  Rng rng(77);
  bool ok = true;
  int runs = 0;
  for (int i = 0; i < 50 && ok; ++i) {
    const WeightedGraph g = random_graph(30, 0.3, true, rng);
    for (double gamma : {0.05, 0.2, 0.5}) {
      for (InitMode init : {InitMode::singleton, InitMode::one_coalition}) {
        const Resolution res = Resolution::from_gamma(gamma);
        double last_quality = 0.0;
        bool increasing = true;
        bool first = true;
        const auto eq = run_to_equilibrium(
            g, res, init, 10000,
            [&](const Partition& part, uint32_t, uint32_t, uint32_t, double) {
              const double q = cpm_quality(part, g, res);
              if (!first && !(q > last_quality)) increasing = false;
              last_quality = q;
              first = false;
            });
        ++runs;
        ok = ok && eq.converged && increasing && verify_equilibrium(eq.partition, g, res).empty();
      }
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%d runs", runs);
  ctx.report("random 30-node equilibria verified", ok, detail);
}

void check_greedy_vs_oracle(CheckContext& ctx) {
  Rng rng(4242);
  int equal = 0;
  bool sound = true;
  const int cases = 200;
  for (int i = 0; i < cases; ++i) {
    const uint32_t k = static_cast<uint32_t>(rng.next_range(2, 12));
    const auto [tallies, gt_size] = random_partition_case(k, rng);
    const SingleBest single = f1_single(tallies, gt_size);
    const UnionSelection greedy = f1_union_greedy(tallies, gt_size);
    const UnionSelection oracle = union_oracle(tallies, gt_size);
    sound = sound && greedy.score <= oracle.score + 1e-15 &&
            greedy.score >= single.report.f1 - 1e-15;
    if (near(greedy.score, oracle.score, 1e-12)) ++equal;
  }
  const bool ok = sound && equal >= cases * 95 / 100;
  char detail[64];
  std::snprintf(detail, sizeof(detail), "oracle-equal on %d/%d", equal, cases);
  ctx.report("greedy union bounded by exhaustive oracle", ok, detail);
}

}  // namespace

bool run_selftest(std::ostream& out) {
  CheckContext ctx{out};
  check_toy_example(ctx);
  check_pathological(ctx);
  check_extreme_gamma(ctx);
  check_equilibria(ctx);
  check_greedy_vs_oracle(ctx);
  out << (ctx.all_ok ? "selftest: all checks passed\n" : "selftest: FAILURES detected\n");
  return ctx.all_ok;
}

}  // namespace hedseg
