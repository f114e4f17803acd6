#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gprbar/simulate.hpp"
#include "gprbar/theory.hpp"

using namespace gprbar;

namespace {

// First row at or below start_row whose intensity exceeds thr, or -1.
int first_arrival(const Grid& g, int col, int start_row, double thr) {
  for (int r = start_row; r < g.rows(); ++r)
    if (g.at(r, col) > thr) return r;
  return -1;
}

SceneSpec single_bar_spec(double depth, int designation) {
  SceneSpec spec;
  spec.config = default_radar_config();
  spec.placements.push_back({1.5, depth, rebar_size_from_designation(designation)});
  return spec;
}

}  // namespace

TEST_CASE("per-column earliest arrival matches the analytic curve") {
  const SceneSpec spec = single_bar_spec(0.06, 7);
  const SyntheticScene scene = synthesize_bscan(spec);
  const RadarConfig& cfg = spec.config;
  const double r = spec.placements[0].size.diameter / 2.0;

  // The band occupies rows time_zero_row +/- 20 at the default 41-row width;
  // scan below it.
  const int below_band = cfg.time_zero_row + 21;
  int checked = 0;
  for (int j = 0; j < cfg.n_traces; ++j) {
    const double x = j * cfg.dx;
    if (std::abs(x - 1.5) > 0.4) continue;
    const double t = travel_time(x, 1.5, 0.06, r, cfg.wave_velocity);
    const int expected = cfg.time_zero_row + static_cast<int>(std::lround(t / cfg.dt));
    const int got = first_arrival(scene.scan.intensities, j, below_band, 0.02);
    REQUIRE(got >= 0);
    CHECK(std::abs(got - expected) <= 1);
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("empty scene holds only the direct-wave band") {
  SceneSpec spec;
  spec.config = default_radar_config();
  const SyntheticScene scene = synthesize_bscan(spec);
  const Grid& g = scene.scan.intensities;
  const int tz = spec.config.time_zero_row;

  CHECK(g.at(tz, 0) == doctest::Approx(1.0));
  // Band edge rows are strictly positive; outside rows hold nothing.
  CHECK(g.at(tz - 20, 0) > 0.0);
  CHECK(g.at(tz + 20, 0) > 0.0);
  for (int r = 0; r < g.rows(); ++r) {
    if (r >= tz - 20 && r <= tz + 20) continue;
    for (int c = 0; c < g.cols(); ++c) CHECK(g.at(r, c) < 0.01);
  }
}

TEST_CASE("two bars produce two signatures at their apex columns") {
  SceneSpec spec;
  spec.config = default_radar_config();
  spec.placements.push_back({1.25, 0.10, rebar_size_from_designation(7)});
  spec.placements.push_back({1.75, 0.10, rebar_size_from_designation(7)});
  const SyntheticScene scene = synthesize_bscan(spec);
  const int below_band = spec.config.time_zero_row + 21;

  for (double x0 : {1.25, 1.75}) {
    const int apex_col = static_cast<int>(std::lround(x0 / spec.config.dx));
    int best_col = -1, best_row = scene.scan.intensities.rows();
    for (int j = apex_col - 60; j <= apex_col + 60; ++j) {
      const int row = first_arrival(scene.scan.intensities, j, below_band, 0.02);
      if (row >= 0 && row < best_row) {
        best_row = row;
        best_col = j;
      }
    }
    REQUIRE(best_col >= 0);
    // The apex flattens over a few columns after rounding; the earliest row
    // must appear at the apex column itself.
    CHECK(first_arrival(scene.scan.intensities, apex_col, below_band, 0.02) == best_row);
    CHECK(std::abs(best_col - apex_col) <= 3);
  }
}

TEST_CASE("synthesis is deterministic in the seed") {
  SceneSpec spec = single_bar_spec(0.10, 5);
  spec.noise_sigma = 0.02;
  spec.seed = 5;
  const SyntheticScene a = synthesize_bscan(spec);
  const SyntheticScene b = synthesize_bscan(spec);
  CHECK(a.scan.intensities == b.scan.intensities);

  spec.seed = 6;
  const SyntheticScene c = synthesize_bscan(spec);
  CHECK(!(c.scan.intensities == a.scan.intensities));
}

TEST_CASE("direct-wave band dominates every reflection row") {
  const SyntheticScene scene = synthesize_bscan(single_bar_spec(0.06, 7));
  const Grid& g = scene.scan.intensities;
  const int tz = scene.scan.config.time_zero_row;
  auto row_mean = [&](int r) {
    double s = 0.0;
    for (int c = 0; c < g.cols(); ++c) s += g.at(r, c);
    return s / g.cols();
  };
  const double band = row_mean(tz);
  for (int r = tz + 21; r < g.rows(); ++r) CHECK(row_mean(r) < band);
}

TEST_CASE("placements outside the aperture are rejected") {
  SceneSpec spec;
  spec.config = default_radar_config();
  spec.placements.push_back({-0.1, 0.1, rebar_size_from_designation(7)});
  CHECK_THROWS_AS(synthesize_bscan(spec), Error);
  try {
    synthesize_bscan(spec);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PlacementOutOfBounds);
  }

  spec.placements[0] = {spec.config.aperture() + 0.01, 0.1, rebar_size_from_designation(7)};
  CHECK_THROWS_AS(synthesize_bscan(spec), Error);

  spec.placements[0] = {1.0, 0.0, rebar_size_from_designation(7)};
  CHECK_THROWS_AS(synthesize_bscan(spec), Error);
}

TEST_CASE("case suite matches the published grid") {
  const RadarConfig cfg = default_radar_config();
  const CaseSuite suite = build_case_suite(cfg, 3, 0.01, 41);
  REQUIRE(suite.cases.size() == 45);
  CHECK(suite.total_bars() == 225);

  std::map<double, std::set<int>> sizes_by_depth;
  std::set<std::uint64_t> seeds;
  int expect_id = 1;
  for (const SuiteCase& c : suite.cases) {
    CHECK(c.case_id == expect_id++);
    REQUIRE(c.spec.placements.size() == 5);
    CHECK(c.spec.noise_sigma == doctest::Approx(0.01));
    CHECK(c.spec.direct_wave_rows == 41);
    seeds.insert(c.spec.seed);
    sizes_by_depth[c.depth].insert(c.size.designation);
    for (std::size_t k = 1; k < c.spec.placements.size(); ++k) {
      const double gap = c.spec.placements[k].x0 - c.spec.placements[k - 1].x0;
      CHECK(gap >= 0.4);
      CHECK(c.spec.placements[k].depth == c.depth);
      CHECK(c.spec.placements[k].size.designation == c.size.designation);
      CHECK(c.spec.placements[k].x0 <= cfg.aperture());
    }
  }
  CHECK(seeds.size() == 45);

  REQUIRE(sizes_by_depth.size() == 5);
  CHECK(sizes_by_depth[0.06] == std::set<int>{3, 4, 5, 6, 7, 8});
  CHECK(sizes_by_depth[0.08] == std::set<int>{3, 4, 5, 6, 7, 8, 9, 10, 11});
  CHECK(sizes_by_depth[0.10] == std::set<int>{3, 4, 5, 6, 7, 8, 9, 10, 11});
  CHECK(sizes_by_depth[0.12] == std::set<int>{3, 4, 5, 6, 7, 8, 9, 10, 11, 14});
  CHECK(sizes_by_depth[0.14] == std::set<int>{3, 4, 5, 6, 7, 8, 9, 10, 11, 14, 18});
}
