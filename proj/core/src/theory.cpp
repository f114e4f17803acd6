#include "gprbar/theory.hpp"

#include <cmath>

namespace gprbar {

double travel_time(double x, double x0, double d, double r, double v) {
  if (!std::isfinite(x) || !std::isfinite(x0)) fail(Errc::InvalidGeometry, "non-finite position");
  if (!(d > 0.0)) fail(Errc::InvalidGeometry, "depth must be > 0");
  if (!(r >= 0.0)) fail(Errc::InvalidGeometry, "radius must be >= 0");
  if (!(v > 0.0)) fail(Errc::InvalidGeometry, "velocity must be > 0");
  const double off = x - x0;
  if (off == 0.0) return 2.0 * d / v;  // apex time does not depend on r
  return (2.0 / v) * (std::hypot(off, d + r) - r);
}

HyperbolaDatabase build_database(const std::vector<double>& depths,
                                 const std::vector<RebarSize>& sizes,
                                 const RadarConfig& config) {
  config.validate();
  if (depths.empty() || sizes.empty()) fail(Errc::EmptyInput, "empty depth or size list");

  HyperbolaDatabase db;
  db.velocity = config.wave_velocity;
  db.dt = config.dt;
  db.dx = config.dx;
  db.time_zero_row = config.time_zero_row;
  db.n_samples = config.n_samples;
  db.n_traces = config.n_traces;

  const int half = config.n_traces / 2;
  db.entries.reserve(depths.size() * sizes.size());
  for (double d : depths) {
    for (const RebarSize& s : sizes) {
      for (const DatabaseEntry& e : db.entries)
        if (e.depth == d && e.size == s)
          fail(Errc::DuplicateEntry,
               "duplicate (depth, size) = (" + std::to_string(d) + ", " + rebar_size_name(s) + ")");
      DatabaseEntry e;
      e.depth = d;
      e.size = s;
      e.apex_index = half;
      e.curve.resize(2 * half + 1);
      const double r = s.diameter / 2.0;
      for (int off = -half; off <= half; ++off) {
        double t = travel_time(off * config.dx, 0.0, d, r, config.wave_velocity);
        e.curve[half + off] = config.time_zero_row + t / config.dt;
      }
      db.entries.push_back(std::move(e));
    }
  }
  return db;
}

std::vector<double> default_depth_grid() { return {0.06, 0.08, 0.10, 0.12, 0.14}; }

}  // namespace gprbar
