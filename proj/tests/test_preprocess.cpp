#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gprbar/preprocess.hpp"
#include "gprbar/simulate.hpp"

using namespace gprbar;

namespace {

BScan wrap(Grid g, int time_zero_row = 1) {
  BScan scan;
  scan.config = make_radar_config(1.5e9, 6.0, 10.0e-9 / 512.0, 0.005, g.rows(), g.cols(),
                                  time_zero_row);
  scan.intensities = std::move(g);
  return scan;
}

}  // namespace

TEST_CASE("equalize two-level image by hand CDF") {
  Grid g(2, 4);
  g.at(0, 0) = g.at(0, 1) = g.at(0, 2) = g.at(0, 3) = 0.2;
  g.at(1, 0) = g.at(1, 1) = g.at(1, 2) = g.at(1, 3) = 0.8;
  const Grid out = equalize_grid(g);
  for (int c = 0; c < 4; ++c) {
    CHECK(out.at(0, c) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.at(1, c) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("equalize leaves a constant image unchanged") {
  Grid g(3, 5, 0.42);
  CHECK(equalize_grid(g) == g);
}

TEST_CASE("equalize is a monotone mapping") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  Grid g(16, 16);
  for (double& v : g.data()) v = val(rng);
  const Grid out = equalize_grid(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g.data()[i] <= g.data()[j]) CHECK(out.data()[i] <= out.data()[j]);
  for (double v : out.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("equalize rejects bad input") {
  CHECK_THROWS_AS(equalize_grid(Grid{}), Error);
  Grid g(2, 2, 0.5);
  g.at(0, 0) = 1.5;
  CHECK_THROWS_AS(equalize_grid(g), Error);
}

TEST_CASE("transition row falls between band and first reflection") {
  // Band peaking at row 10, quiet gap from row 20, a reflection at rows 40..47.
  Grid g(64, 8);
  for (int r = 0; r < 64; ++r) {
    double v = 0.02;
    if (r < 20) v = 0.5 + 0.4 * std::exp(-std::pow((r - 10) / 5.0, 2));
    if (r >= 40 && r < 48) v = 0.6;
    for (int c = 0; c < 8; ++c) g.at(r, c) = v;
  }
  const BScan scan = wrap(equalize_grid(g), 10);
  const RegionSplit split = find_transition_row(scan);
  CHECK(split.transition_row > 19);
  CHECK(split.transition_row < 41);
}

TEST_CASE("strictly decreasing means fall back to the window end") {
  Grid g(40, 6);
  for (int r = 0; r < 40; ++r)
    for (int c = 0; c < 6; ++c) g.at(r, c) = 1.0 - r / 64.0;
  const BScan scan = wrap(std::move(g), 0);
  const RegionSplit split = find_transition_row(scan, 0.25);
  CHECK(split.transition_row == 10);  // peak row 0 plus the 25% search window
}

TEST_CASE("no-rebar scene splits right at the band edge") {
  SceneSpec spec;
  spec.config = default_radar_config();
  const SyntheticScene scene = synthesize_bscan(spec);
  const BScan eq = equalize(scene.scan);
  const RegionSplit split = find_transition_row(eq);
  const int band_end = spec.config.time_zero_row + 20;  // 41-row band, 20 below the peak
  CHECK(std::abs(split.transition_row - band_end) <= 3);
}

TEST_CASE("find_transition_row rejects tiny scans") {
  CHECK_THROWS_AS(find_transition_row(wrap(Grid(3, 4, 0.1), 0)), Error);
  try {
    find_transition_row(wrap(Grid(3, 4, 0.1), 0));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScanTooShort);
  }
}

TEST_CASE("direct-wave model from a hand transition row") {
  Grid g(4, 4, 0.0);
  g.at(0, 0) = 0.10; g.at(0, 1) = 0.30; g.at(0, 2) = 0.40; g.at(0, 3) = 0.70;
  g.at(1, 0) = 0.20; g.at(1, 1) = 0.60; g.at(1, 2) = 0.80; g.at(1, 3) = 0.90;
  g.at(2, 0) = 0.20; g.at(2, 1) = 0.50; g.at(2, 2) = 0.50; g.at(2, 3) = 0.90;
  const BScan scan = wrap(std::move(g), 1);
  const DirectWaveModel model = estimate_direct_wave(scan, RegionSplit{2});
  REQUIRE(model.reference_columns == std::vector<int>{1, 2});
  CHECK(model.mode_intensity == doctest::Approx(0.5));
  REQUIRE(model.profile.size() == 2);
  CHECK(model.profile[0] == doctest::Approx((0.30 + 0.40) / 2.0));
  CHECK(model.profile[1] == doctest::Approx((0.60 + 0.80) / 2.0));
}

TEST_CASE("all-distinct transition row picks the lowest bin") {
  Grid g(3, 4, 0.0);
  g.at(1, 0) = 0.9; g.at(1, 1) = 0.1; g.at(1, 2) = 0.5; g.at(1, 3) = 0.7;
  for (int c = 0; c < 4; ++c) g.at(0, c) = 0.3 + 0.1 * c;
  const BScan scan = wrap(std::move(g), 0);
  const DirectWaveModel model = estimate_direct_wave(scan, RegionSplit{1});
  CHECK(model.reference_columns == std::vector<int>{1});
  CHECK(model.mode_intensity == doctest::Approx(0.1));
}

TEST_CASE("column-constant band is modeled exactly") {
  SceneSpec spec;
  spec.config = default_radar_config();
  const BScan eq = equalize(synthesize_bscan(spec).scan);
  const RegionSplit split = find_transition_row(eq);
  const DirectWaveModel model = estimate_direct_wave(eq, split);
  for (int r = 0; r < split.transition_row; ++r)
    CHECK(std::abs(model.profile[r] - eq.intensities.at(r, 0)) < 1e-6);
}

TEST_CASE("bad transition row is rejected") {
  const BScan scan = wrap(Grid(8, 8, 0.3), 1);
  CHECK_THROWS_AS(estimate_direct_wave(scan, RegionSplit{0}), Error);
  CHECK_THROWS_AS(estimate_direct_wave(scan, RegionSplit{8}), Error);
}

TEST_CASE("subtraction clears a no-rebar band completely") {
  SceneSpec spec;
  spec.config = default_radar_config();
  const DirectWaveRemoval st = remove_direct_wave_stages(synthesize_bscan(spec).scan);
  double pre = 0.0, post = 0.0;
  for (int r = 0; r < st.split.transition_row; ++r)
    for (int c = 0; c < st.equalized.intensities.cols(); ++c) {
      pre += st.equalized.intensities.at(r, c) * st.equalized.intensities.at(r, c);
      post += st.subtracted.intensities.at(r, c) * st.subtracted.intensities.at(r, c);
    }
  REQUIRE(pre > 0.0);
  CHECK(post / pre < 0.01);
}

TEST_CASE("subtraction only touches rows above the transition") {
  SceneSpec spec;
  spec.config = default_radar_config();
  spec.placements.push_back({1.5, 0.10, rebar_size_from_designation(7)});
  const DirectWaveRemoval st = remove_direct_wave_stages(synthesize_bscan(spec).scan);
  const Grid& eq = st.equalized.intensities;
  const Grid& sub = st.subtracted.intensities;
  for (int r = 0; r < eq.rows(); ++r) {
    double mean_eq = 0.0, mean_sub = 0.0;
    for (int c = 0; c < eq.cols(); ++c) {
      CHECK(sub.at(r, c) >= 0.0);
      if (r >= st.split.transition_row) CHECK(sub.at(r, c) == eq.at(r, c));
      mean_eq += eq.at(r, c);
      mean_sub += sub.at(r, c);
    }
    CHECK(mean_sub <= mean_eq + 1e-12);
  }
  for (double v : st.cleaned.intensities.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(remove_direct_wave(synthesize_bscan(spec).scan).intensities == st.cleaned.intensities);
}

TEST_CASE("opening removes speckle and preserves blocks") {
  Grid speck(9, 9, 0.0);
  speck.at(4, 4) = 1.0;
  for (double v : open_operation(speck, 3).data()) CHECK(v == 0.0);

  Grid block(11, 11, 0.0);
  for (int r = 3; r <= 7; ++r)
    for (int c = 3; c <= 7; ++c) block.at(r, c) = 1.0;
  CHECK(open_operation(block, 3) == block);
}

TEST_CASE("opening is anti-extensive and idempotent") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Grid g(24, 31);
    for (double& v : g.data()) v = val(rng);
    for (int se : {3, 5}) {
      const Grid opened = open_operation(g, se);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(opened.data()[i] <= g.data()[i]);
      CHECK(open_operation(opened, se) == opened);
    }
  }
}

TEST_CASE("opening rejects bad structuring elements") {
  Grid g(5, 5, 0.5);
  for (int se : {1, 2, 4}) {
    CHECK_THROWS_AS(open_operation(g, se), Error);
    try {
      open_operation(g, se);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvalidStructuringElement);
    }
  }
}
