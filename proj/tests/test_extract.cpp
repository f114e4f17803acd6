#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <deque>
#include <random>

#include "gprbar/evaluate.hpp"
#include "gprbar/extract.hpp"
#include "gprbar/preprocess.hpp"
#include "gprbar/simulate.hpp"
#include "gprbar/theory.hpp"

using namespace gprbar;

namespace {

bool subset(const BinaryMask& a, const BinaryMask& b) {
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c)
      if (a.at(r, c) && !b.at(r, c)) return false;
  return true;
}

int component_count(const BinaryMask& m) {
  std::vector<char> seen(std::size_t(m.rows) * m.cols, 0);
  auto idx = [&](int r, int c) { return std::size_t(r) * m.cols + c; };
  int count = 0;
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      if (!m.at(r, c) || seen[idx(r, c)]) continue;
      ++count;
      std::deque<std::pair<int, int>> q{{r, c}};
      seen[idx(r, c)] = 1;
      while (!q.empty()) {
        auto [cr, cc] = q.front();
        q.pop_front();
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = cr + dr, nc = cc + dc;
            if (nr < 0 || nr >= m.rows || nc < 0 || nc >= m.cols) continue;
            if (!m.at(nr, nc) || seen[idx(nr, nc)]) continue;
            seen[idx(nr, nc)] = 1;
            q.push_back({nr, nc});
          }
      }
    }
  return count;
}

struct MaskedScene {
  BScan scan;
  RegionSplit split;
  BinaryMask filled;
};

MaskedScene scene_to_mask(const std::vector<RebarPlacement>& bars) {
  SceneSpec spec;
  spec.config = default_radar_config();
  spec.placements = bars;
  MaskedScene out;
  out.scan = synthesize_bscan(spec).scan;
  const DirectWaveRemoval st = remove_direct_wave_stages(out.scan);
  out.split = st.split;
  const BinaryMask bin = binarize_background(st.cleaned.intensities, st.split, 1.5);
  out.filled = fill_gaps(bin);
  return out;
}

int top_label(const LabeledHyperbolas& lab, int col) {
  for (int r = 0; r < lab.rows; ++r)
    if (lab.at(r, col)) return lab.at(r, col);
  return 0;
}

}  // namespace

TEST_CASE("binarize threshold arithmetic") {
  // Region rows 2..3: max 1.0, mean 0.2, so the cut sits at 0.7333...
  Grid g(4, 10, 0.0);
  for (int c = 0; c < 10; ++c) {
    g.at(0, c) = 0.9;
    g.at(1, c) = 0.9;
    g.at(2, c) = 0.1;
    g.at(3, c) = 0.1;
  }
  g.at(2, 0) = 1.0;
  g.at(2, 1) = 0.8;
  g.at(2, 2) = 0.7;
  g.at(3, 8) = 0.0;
  g.at(3, 9) = 0.0;
  g.at(2, 9) = 0.0;
  g.at(3, 0) = 0.2;  // keeps the region sum at 4.0 over 20 cells
  const BinaryMask mask = binarize_background(g, RegionSplit{2}, 1.5);
  CHECK(mask.at(2, 0) == 1);
  CHECK(mask.at(2, 1) == 1);
  CHECK(mask.at(2, 2) == 0);
  CHECK(mask.count() == 2);
  for (int c = 0; c < 10; ++c) {
    CHECK(mask.at(0, c) == 0);
    CHECK(mask.at(1, c) == 0);
  }
}

TEST_CASE("binarize of a constant region is empty") {
  Grid g(6, 6, 0.4);
  CHECK(binarize_background(g, RegionSplit{1}, 1.5).count() == 0);
}

TEST_CASE("binarize rejects b <= 1") {
  Grid g(4, 4, 0.3);
  for (double b : {1.0, 0.5, -2.0}) {
    CHECK_THROWS_AS(binarize_background(g, RegionSplit{1}, b), Error);
  }
  try {
    binarize_background(g, RegionSplit{1}, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidThresholdFactor);
  }
}

TEST_CASE("binarize kept set grows with b") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  Grid g(20, 25);
  for (double& v : g.data()) v = val(rng);
  const RegionSplit split{3};
  const BinaryMask tight = binarize_background(g, split, 1.0001);
  const BinaryMask mid = binarize_background(g, split, 1.5);
  const BinaryMask loose = binarize_background(g, split, 8.0);
  CHECK(subset(tight, mid));
  CHECK(subset(mid, loose));
  CHECK(tight.count() >= 1);
  CHECK(tight.count() <= 3);
  CHECK(loose.count() > mid.count());
}

TEST_CASE("gap fill product rule arithmetic") {
  // Opposite 2x2 quadrants each half full: 0.5 * 0.5 = 0.25 > 0.1 fills the center.
  BinaryMask m(21, 21);
  m.at(8, 8) = m.at(9, 9) = 1;    // upper-left quadrant of (10, 10)
  m.at(11, 11) = m.at(12, 12) = 1;  // lower-right quadrant
  const BinaryMask out = fill_gaps(m, FillParams{5, 0.1, 10});
  CHECK(out.at(10, 10) == 1);
}

TEST_CASE("collinear thick segments across a gap become one component") {
  // Two 10-pixel diagonal strokes (5 columns, 2 rows thick) with a 3-column gap.
  BinaryMask m(40, 40);
  for (int c = 0; c <= 4; ++c) {
    m.at(12 + c, 12 + c) = 1;
    m.at(13 + c, 12 + c) = 1;
  }
  for (int c = 8; c <= 12; ++c) {
    m.at(12 + c, 12 + c) = 1;
    m.at(13 + c, 12 + c) = 1;
  }
  REQUIRE(component_count(m) == 2);
  const BinaryMask out = fill_gaps(m, FillParams{5, 0.1, 10});
  CHECK(subset(m, out));
  CHECK(component_count(out) == 1);
}

TEST_CASE("isolated segment is left unchanged") {
  BinaryMask m(30, 30);
  for (int k = 0; k <= 9; ++k) m.at(10 + k, 10 + k) = 1;
  CHECK(fill_gaps(m, FillParams{5, 0.1, 10}) == m);
}

TEST_CASE("gap fill is extensive and reaches a fixpoint") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    BinaryMask m(32, 32);
    for (int r = 0; r < 32; ++r)
      for (int c = 0; c < 32; ++c)
        if (coin(rng) < 0.08) m.at(r, c) = 1;
    const BinaryMask once = fill_gaps(m, FillParams{5, 0.2, 25});
    CHECK(subset(m, once));
    CHECK(fill_gaps(once, FillParams{5, 0.2, 25}) == once);
  }
}

TEST_CASE("fill rejects an even kernel") {
  CHECK_THROWS_AS(fill_gaps(BinaryMask(8, 8), FillParams{4, 0.2, 5}), Error);
}

TEST_CASE("crossed strokes yield one intersection at the crossing") {
  BinaryMask m(101, 101);
  for (int c = 20; c <= 80; ++c) {
    for (int t = 0; t < 2; ++t) {
      m.at(c + t, c) = 1;            // slope +1 through (50, 50)
      m.at(100 - c + t, c) = 1;      // slope -1 through (50, 50)
    }
  }
  const auto hits = detect_intersections(m);
  REQUIRE(hits.size() == 1);
  CHECK(std::abs(hits[0].row - 50) <= 2);
  CHECK(std::abs(hits[0].col - 50) <= 2);
  CHECK(hits[0].left_slope < 0.0);
  CHECK(hits[0].right_slope > 0.0);
  CHECK(std::abs(hits[0].left_slope + hits[0].right_slope) <= 0.5);
}

TEST_CASE("a single hyperbola has no intersections") {
  const MaskedScene ms = scene_to_mask({{1.5, 0.10, rebar_size_from_designation(7)}});
  CHECK(detect_intersections(ms.filled).empty());
}

TEST_CASE("overlapping wings cross once where the curves predict") {
  const MaskedScene ms = scene_to_mask({{1.35, 0.10, rebar_size_from_designation(7)},
                                        {1.65, 0.10, rebar_size_from_designation(7)}});
  const auto hits = detect_intersections(ms.filled);
  REQUIRE(hits.size() == 1);

  const RadarConfig cfg = default_radar_config();
  const double r = rebar_size_from_designation(7).diameter / 2.0;
  const double t = travel_time(1.5, 1.35, 0.10, r, cfg.wave_velocity);
  const double predicted_row = cfg.time_zero_row + t / cfg.dt;
  CHECK(std::abs(hits[0].col - 300) <= 10);
  CHECK(hits[0].row >= predicted_row - 4);
  CHECK(hits[0].row <= predicted_row + 20);  // the fit tracks stroke centers, not tops
}

TEST_CASE("separation without crossings keeps the single hyperbola") {
  const MaskedScene ms = scene_to_mask({{1.5, 0.10, rebar_size_from_designation(7)}});
  const LabeledHyperbolas lab =
      separate_hyperbolas(ms.filled, {}, scaled_separation(ms.scan.config));
  CHECK(lab.count == 1);
  bool identical = true;
  for (int r = 0; r < lab.rows && identical; ++r)
    for (int c = 0; c < lab.cols; ++c)
      if ((lab.at(r, c) != 0) != (ms.filled.at(r, c) != 0)) {
        identical = false;
        break;
      }
  CHECK(identical);
}

TEST_CASE("two overlapping hyperbolas separate into two labels") {
  const MaskedScene ms = scene_to_mask({{1.35, 0.10, rebar_size_from_designation(7)},
                                        {1.65, 0.10, rebar_size_from_designation(7)}});
  const auto hits = detect_intersections(ms.filled);
  const LabeledHyperbolas lab =
      separate_hyperbolas(ms.filled, hits, scaled_separation(ms.scan.config));
  CHECK(lab.count == 2);
  const int la = top_label(lab, 270);
  const int lb = top_label(lab, 330);
  CHECK(la > 0);
  CHECK(lb > 0);
  CHECK(la != lb);
}

TEST_CASE("graded five-bar scene separates into five labels") {
  const SceneSpec spec = graded_depth_scene(default_radar_config());
  const BScan scan = synthesize_bscan(spec).scan;
  const PipelineResult pipe = run_pipeline(scan, PipelineParams{});
  CHECK(pipe.labeled.count == 5);
  CHECK(pipe.outlines.outlines.size() == 5);
}

TEST_CASE("outline takes the topmost pixel per column") {
  LabeledHyperbolas lab;
  lab.rows = 60;
  lab.cols = 30;
  lab.labels.assign(std::size_t(60) * 30, 0);
  lab.count = 1;
  for (int c = 2; c <= 22; ++c) lab.at(30 + std::abs(c - 12), c) = 1;
  for (int r = 31; r <= 35; ++r) lab.at(r, 12) = 1;  // deeper pixels under the apex

  const OutlineSet set = extract_outlines(lab, 15, 5);
  REQUIRE(set.outlines.size() == 1);
  const HyperbolaOutline& o = set.outlines[0];
  CHECK(o.points.size() == 21);
  CHECK(o.apex.row == 30);
  CHECK(o.apex.col == 12);
  for (const OutlinePoint& p : o.points) {
    if (p.col == 12) CHECK(p.row == 30);
    CHECK(p.row >= o.apex.row);
  }
  for (std::size_t i = 1; i < o.points.size(); ++i)
    CHECK(o.points[i].col > o.points[i - 1].col);
}

TEST_CASE("flat apex run resolves to its median column") {
  LabeledHyperbolas lab;
  lab.rows = 40;
  lab.cols = 40;
  lab.labels.assign(std::size_t(40) * 40, 0);
  lab.count = 1;
  for (int c = 2; c <= 30; ++c) {
    const int row = std::max(20, 20 + std::abs(c - 16) - 6);  // rows 20 flat for cols 10..22
    lab.at(row, c) = 1;
  }
  const OutlineSet set = extract_outlines(lab, 15, 5);
  REQUIRE(set.outlines.size() == 1);
  CHECK(set.outlines[0].apex.row == 20);
  CHECK(set.outlines[0].apex.col == 16);
}

TEST_CASE("short labels are dropped with a warning") {
  LabeledHyperbolas lab;
  lab.rows = 20;
  lab.cols = 40;
  lab.labels.assign(std::size_t(20) * 40, 0);
  lab.count = 2;
  for (int c = 2; c <= 30; ++c) lab.at(10 + std::abs(c - 16) / 4, c) = 1;
  for (int c = 33; c <= 37; ++c) lab.at(15, c) = 2;  // five columns only

  const OutlineSet set = extract_outlines(lab, 15, 5);
  CHECK(set.outlines.size() == 1);
  CHECK(set.outlines[0].label == 1);
  REQUIRE(set.warnings.size() == 1);
  CHECK(set.warnings[0].find("label 2") != std::string::npos);
}

TEST_CASE("a monotone wing remnant with a boundary apex is dropped") {
  LabeledHyperbolas lab;
  lab.rows = 60;
  lab.cols = 40;
  lab.labels.assign(std::size_t(60) * 40, 0);
  lab.count = 1;
  for (int c = 5; c <= 30; ++c) lab.at(10 + (c - 5), c) = 1;  // rises to the left edge

  const OutlineSet set = extract_outlines(lab, 15, 5);
  CHECK(set.outlines.empty());
  REQUIRE(set.warnings.size() == 1);
  CHECK(set.warnings[0].find("flank") != std::string::npos);
}

TEST_CASE("noise-free outline follows the analytic curve") {
  const MaskedScene ms = scene_to_mask({{1.5, 0.10, rebar_size_from_designation(7)}});
  const LabeledHyperbolas lab =
      separate_hyperbolas(ms.filled, {}, scaled_separation(ms.scan.config));
  const OutlineSet set = extract_outlines(lab);
  REQUIRE(set.outlines.size() == 1);
  const HyperbolaOutline& o = set.outlines[0];
  CHECK(std::abs(o.apex.col - 300) <= 2);

  const RadarConfig cfg = ms.scan.config;
  const double r = rebar_size_from_designation(7).diameter / 2.0;
  int close = 0;
  for (const OutlinePoint& p : o.points) {
    const double t = travel_time(p.col * cfg.dx, 1.5, 0.10, r, cfg.wave_velocity);
    const double expected = cfg.time_zero_row + t / cfg.dt;
    if (std::abs(p.row - expected) <= 1.0) ++close;
  }
  CHECK(close >= static_cast<int>(0.9 * o.points.size()));
}
