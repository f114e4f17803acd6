#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gprbar/core.hpp"
#include "gprbar/preprocess.hpp"

namespace gprbar {

struct BinaryMask {
  int rows = 0, cols = 0;
  std::vector<std::uint8_t> v;

  BinaryMask() = default;
  BinaryMask(int r, int c) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, 0) {}
  std::uint8_t& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
  int count() const;
  bool operator==(const BinaryMask& o) const { return rows == o.rows && cols == o.cols && v == o.v; }
};

// Keeps pixels of the rebar-reflection region brighter than
//   (I_max - I_mean) / b + I_mean
// computed over that region; rows above the transition stay background.
BinaryMask binarize_background(const Grid& image, const RegionSplit& split, double b);

struct FillParams {
  int kernel_size = 5;
  // A real gap between segments has mass in both opposing 2x2 quadrants, at
  // least 2 x 2 pixels (score >= 0.25). The staircase edge of an intact thick
  // stroke peaks at 3/4 x 1/4 (0.1875): a default above that bridges gaps
  // without shaving one row off every diagonal curve top.
  double threshold = 0.2;
  int max_iters = 10;
};

// Fills background pixels whose opposite kernel quadrants are both occupied:
// a pixel turns on when mean(upper-left) * mean(lower-right) or
// mean(upper-right) * mean(lower-left) exceeds the threshold. Runs to fixpoint.
BinaryMask fill_gaps(const BinaryMask& mask, const FillParams& params = {});

struct IntersectionPoint {
  int row = 0, col = 0;
  double left_slope = 0.0;   // negative branch, rows per column
  double right_slope = 0.0;  // positive branch
};

struct RansacParams {
  int window = 31;
  int stride = 8;
  int iterations = 64;
  int min_inliers = 8;
  double inlier_dist = 1.5;
  // Lines flatter than this never count: a shallow secant through the arch of
  // a thick apex can collect inliers on both limbs and fake a crossing.
  double min_slope = 1.0;
  double slope_tolerance = 0.5;   // bound on |s1 + s2|
  double merge_radius = 10.0;
  // A real crossing sits in a valley of the per-column topmost profile: wings
  // descend into it from both sides. An apex dome is a peak of that profile,
  // yet its thick solid arch supports the same crossed-line fit. Each detection
  // must see the profile at least flank_margin rows higher (smaller row) at
  // flank_cols columns to each side, or it is discarded as an apex.
  int flank_cols = 20;
  double flank_margin = 5.0;
  std::uint64_t seed = 0;
};

// Finds points where two near-opposite-slope line supports cross inside a sliding
// window; both lines must extend through the crossing, so lone apexes do not fire.
std::vector<IntersectionPoint> detect_intersections(const BinaryMask& mask,
                                                    const RansacParams& params = {});

struct SeparationParams {
  int erosion_rows = 30;        // cleared square height at each crossing
  int erosion_cols = 30;        // cleared square width
  // Extra rows cleared below and above the square. Reflection strokes are
  // nearly as tall as the square itself, so a square cut alone leaves them
  // connected around its lower corners; the downward extension reaches below
  // any stroke crossing it. The fitted crossing also sits mid-stroke, about
  // half a thickness below where the two strokes' tops touch; the upward
  // extension covers that contact.
  int erase_below_rows = 60;
  int erase_above_rows = 20;
  double join_radius = 40.0;    // max endpoint distance when re-joining pieces
  double bridge_tolerance = 10.0;
  // Peak-shaped joins this close to a crossing are the two lower stubs of an X
  // formed by different wings, never an apex, and are rejected.
  double apex_reject_radius = 45.0;
  int min_component_px = 20;
};

// 30x30 at the default sampling (5 mm traces, 10 ns / 512 samples), scaled to this config.
SeparationParams scaled_separation(const RadarConfig& config);

struct LabeledHyperbolas {
  int rows = 0, cols = 0;
  std::vector<std::int32_t> labels;  // 0 = background, 1..count
  int count = 0;
  std::int32_t& at(int r, int c) { return labels[static_cast<std::size_t>(r) * cols + c]; }
  std::int32_t at(int r, int c) const { return labels[static_cast<std::size_t>(r) * cols + c]; }
};

// Clears a square at each crossing, labels 8-connected components, re-joins pieces
// of the same hyperbola (nearest compatible endpoints), and redraws straight
// bridges across the cleared squares.
LabeledHyperbolas separate_hyperbolas(const BinaryMask& mask,
                                      const std::vector<IntersectionPoint>& crossings,
                                      const SeparationParams& params = {});

struct OutlinePoint {
  int row = 0, col = 0;
};

struct HyperbolaOutline {
  int label = 0;
  std::vector<OutlinePoint> points;  // topmost pixel per column, sorted by column
  OutlinePoint apex;                 // minimum-row point, median column on ties
};

struct OutlineSet {
  std::vector<HyperbolaOutline> outlines;
  std::vector<std::string> warnings;  // one entry per dropped label
};

// Outlines with fewer than min_apex_flank columns on either side of the apex
// are dropped: a hyperbola crest is interior, a severed wing's peak is not.
OutlineSet extract_outlines(const LabeledHyperbolas& labeled, int min_outline_points = 15,
                            int min_apex_flank = 5);

}  // namespace gprbar
