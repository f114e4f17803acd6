#pragma once

#include <vector>

#include "gprbar/core.hpp"

namespace gprbar {

// Two-way travel time from a surface antenna at x to a cylinder of radius r whose
// top is at cover depth d below the antenna track at lateral position x0:
//   t = (2/v) * (sqrt((x - x0)^2 + (d + r)^2) - r)
// At x == x0 this reduces to 2d/v independent of r.
double travel_time(double x, double x0, double d, double r, double v);

// One theoretical reflection curve, apex-centred and sampled at every column offset.
struct DatabaseEntry {
  double depth = 0.0;
  RebarSize size;
  std::vector<double> curve;  // fractional arrival row per column offset
  int apex_index = 0;         // index of offset 0 within curve

  int half_span() const { return apex_index; }
  double row_at_offset(int off) const { return curve[apex_index + off]; }
};

struct HyperbolaDatabase {
  std::vector<DatabaseEntry> entries;
  double velocity = 0.0;
  double dt = 0.0;
  double dx = 0.0;
  int time_zero_row = 0;
  int n_samples = 0;
  int n_traces = 0;
};

// Curves for every (depth, size) pair over a window of +-aperture/2 around the apex.
HyperbolaDatabase build_database(const std::vector<double>& depths,
                                 const std::vector<RebarSize>& sizes,
                                 const RadarConfig& config);

// The five cover depths evaluated by the matcher: 6, 8, 10, 12, 14 cm.
std::vector<double> default_depth_grid();

}  // namespace gprbar
