#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gprbar/evaluate.hpp"
#include "gprbar/io.hpp"
#include "gprbar/theory.hpp"

using namespace gprbar;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HyperbolaDatabase default_db() {
  return build_database(default_depth_grid(), rebar_catalog(), default_radar_config());
}

}  // namespace

TEST_CASE("record helpers compare catalog positions") {
  RebarRecord r;
  r.true_depth = 0.10;
  r.est_depth = 0.10;
  r.true_designation = 7;

  r.est_designation = 7;
  CHECK(r.depth_correct());
  CHECK(r.size_correct());
  CHECK(r.size_within_one());

  r.est_designation = 8;
  CHECK_FALSE(r.size_correct());
  CHECK(r.size_within_one());

  r.est_designation = 9;
  CHECK_FALSE(r.size_within_one());

  r.true_designation = 11;
  r.est_designation = 14;  // adjacent catalog slots despite the numeric jump
  CHECK(r.size_within_one());
  r.true_designation = 14;
  r.est_designation = 18;
  CHECK(r.size_within_one());

  r.est_depth = 0.12;
  CHECK_FALSE(r.depth_correct());
}

TEST_CASE("effective separation honours the scaling switch") {
  const RadarConfig cfg = default_radar_config();
  PipelineParams params;

  const SeparationParams scaled = scaled_separation(cfg);
  const SeparationParams eff = effective_separation(params, cfg);
  CHECK(eff.erosion_rows == scaled.erosion_rows);
  CHECK(eff.erosion_cols == scaled.erosion_cols);
  CHECK(eff.erase_above_rows == scaled.erase_above_rows);
  CHECK(eff.erase_below_rows == scaled.erase_below_rows);
  CHECK(eff.min_component_px == params.separation.min_component_px);
  CHECK(eff.apex_reject_radius == params.separation.apex_reject_radius);

  params.scale_erosion = false;
  params.separation.erosion_rows = 17;
  const SeparationParams raw = effective_separation(params, cfg);
  CHECK(raw.erosion_rows == 17);
  CHECK(raw.erosion_cols == params.separation.erosion_cols);
}

TEST_CASE("empty suite yields an empty report without accuracies") {
  const EvaluationReport rep = run_suite(CaseSuite{}, HyperbolaDatabase{}, PipelineParams{});
  CHECK(rep.cases == 0);
  CHECK(rep.bars == 0);
  CHECK(rep.detected == 0);
  CHECK_FALSE(rep.depth_accuracy.has_value());
  CHECK_FALSE(rep.size_accuracy.has_value());
  CHECK_FALSE(rep.size_accuracy_pm1.has_value());
  int total = 0;
  for (const auto& row : rep.confusion)
    for (int v : row) total += v;
  CHECK(total == 0);
}

TEST_CASE("suite runs reject bad database pairings") {
  const RadarConfig cfg = default_radar_config();
  CaseSuite one;
  one.cases.push_back(build_case_suite(cfg).cases[0]);

  CHECK_THROWS_AS(run_suite(one, HyperbolaDatabase{}, PipelineParams{}), Error);

  const RadarConfig other =
      make_radar_config(cfg.center_frequency, cfg.relative_permittivity, cfg.dt * 2.0, cfg.dx,
                        cfg.n_samples, cfg.n_traces, cfg.time_zero_row);
  const HyperbolaDatabase wrong = build_database({0.10}, rebar_catalog(), other);
  try {
    run_suite(one, wrong, PipelineParams{});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigMismatch);
  }
}

TEST_CASE("single bar scene flows through the whole pipeline") {
  SceneSpec spec;
  spec.config = default_radar_config();
  spec.placements.push_back({1.5, 0.10, rebar_size_from_designation(7)});
  const SyntheticScene scene = synthesize_bscan(spec);
  const PipelineResult res = run_pipeline(scene.scan, PipelineParams{});
  REQUIRE(res.outlines.outlines.size() == 1);
  const HyperbolaOutline& o = res.outlines.outlines[0];
  CHECK(std::abs(o.apex.col - 300) <= 2);
  CHECK(std::abs(o.apex.row - 124) <= 3);
  CHECK(res.labeled.count == 1);
}

TEST_CASE("two-case suite scores perfectly and reproducibly") {
  const RadarConfig cfg = default_radar_config();
  const HyperbolaDatabase db = default_db();
  const CaseSuite full = build_case_suite(cfg, 0, 0.0, 41);
  CaseSuite mini;
  mini.cases = {full.cases[7], full.cases[20]};
  REQUIRE(mini.cases[0].size.designation != mini.cases[1].size.designation);

  const PipelineParams params;
  const EvaluationReport rep = run_suite(mini, db, params, 1);
  CHECK(rep.cases == 2);
  CHECK(rep.bars == 10);
  CHECK(rep.detected == 10);
  CHECK(rep.failures.empty());
  CHECK(rep.spurious_outlines == 0);
  REQUIRE(rep.depth_accuracy.has_value());
  CHECK(*rep.depth_accuracy == 1.0);
  CHECK(*rep.size_accuracy == 1.0);
  CHECK(*rep.size_accuracy_pm1 == 1.0);
  CHECK(rep.elapsed_seconds > 0.0);

  // Confusion mass sits on the diagonal cells of the two true sizes.
  const int oa = catalog_ordinal(mini.cases[0].size.designation);
  const int ob = catalog_ordinal(mini.cases[1].size.designation);
  CHECK(rep.confusion[oa][oa] == 5);
  CHECK(rep.confusion[ob][ob] == 5);
  int total = 0;
  for (const auto& row : rep.confusion)
    for (int v : row) total += v;
  CHECK(total == 10);

  // Records arrive grouped per case, bars ordered left to right.
  REQUIRE(rep.per_rebar.size() == 10);
  for (int i = 0; i < 10; ++i) {
    const RebarRecord& r = rep.per_rebar[i];
    CHECK(r.case_id == mini.cases[i / 5].case_id);
    CHECK(r.bar_index == i % 5);
    const int expected = static_cast<int>(std::lround(r.true_x0 / cfg.dx));
    CHECK(std::abs(r.apex_col - expected) <= 3);
    if (i % 5 > 0) CHECK(r.true_x0 > rep.per_rebar[i - 1].true_x0);
  }

  // Same seed, same report, regardless of worker count.
  const EvaluationReport again = run_suite(mini, db, params, 1);
  const EvaluationReport threaded = run_suite(mini, db, params, 4);
  write_report("eval_det_a.json", rep);
  write_report("eval_det_b.json", again);
  write_report("eval_det_c.json", threaded);
  const std::string a = slurp("eval_det_a.json");
  CHECK(a == slurp("eval_det_b.json"));
  CHECK(a == slurp("eval_det_c.json"));
  std::remove("eval_det_a.json");
  std::remove("eval_det_b.json");
  std::remove("eval_det_c.json");
}

TEST_CASE("graded depth scene places five bars over a wide band") {
  const RadarConfig cfg = default_radar_config();
  const SceneSpec s = graded_depth_scene(cfg, 9, 0.01);
  CHECK(s.seed == 9);
  CHECK(s.noise_sigma == 0.01);
  CHECK(s.direct_wave_rows == 121);
  REQUIRE(s.placements.size() == 5);
  const double depths[] = {0.06, 0.08, 0.10, 0.12, 0.14};
  for (int k = 0; k < 5; ++k) {
    const RebarPlacement& p = s.placements[k];
    CHECK(p.depth == depths[k]);
    CHECK(p.size.designation == 7);
    CHECK(p.x0 == doctest::Approx((k + 1) * cfg.aperture() / 6.0).epsilon(1e-12));
    if (k > 0) CHECK(p.x0 > s.placements[k - 1].x0);
  }
}
