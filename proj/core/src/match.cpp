#include "gprbar/match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace gprbar {

namespace {

double point_segment_distance(double pr, double pc, double r0, double c0, double r1, double c1) {
  const double dr = r1 - r0, dc = c1 - c0;
  const double len2 = dr * dr + dc * dc;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((pr - r0) * dr + (pc - c0) * dc) / len2, 0.0, 1.0);
  return std::hypot(pr - (r0 + t * dr), pc - (c0 + t * dc));
}

// Min distance from one point to the shifted curve polyline. Vertices sit one
// column apart, so a segment whose horizontal gap already exceeds the best
// distance found cannot improve it; the scan walks outward from the point's
// column and stops there.
double point_curve_distance(double pr, double pc, const std::vector<double>& curve, double shift) {
  const int n = static_cast<int>(curve.size());
  auto col = [&](int j) { return j + shift; };
  const int j0 = std::clamp(static_cast<int>(std::lround(pc - shift)), 0, n - 1);

  double best = std::numeric_limits<double>::infinity();
  auto try_segment = [&](int j) {
    if (j < 0 || j + 1 >= n) return;
    best = std::min(best, point_segment_distance(pr, pc, curve[j], col(j), curve[j + 1], col(j + 1)));
  };
  if (n == 1) return std::hypot(pr - curve[0], pc - col(0));

  try_segment(j0);
  try_segment(j0 - 1);
  for (int step = 1;; ++step) {
    const int left = j0 - 1 - step, right = j0 + step;
    const bool left_in = left >= 0, right_in = right + 1 < n;
    if (!left_in && !right_in) break;
    const double gap_left = pc - col(left + 1);
    const double gap_right = col(right) - pc;
    bool advanced = false;
    if (left_in && gap_left <= best) {
      try_segment(left);
      advanced = true;
    }
    if (right_in && gap_right <= best) {
      try_segment(right);
      advanced = true;
    }
    if (!advanced) break;
  }
  return best;
}

}  // namespace

double outline_curve_distance(const HyperbolaOutline& outline, const DatabaseEntry& entry,
                              double apex_col, DistanceMode mode) {
  if (outline.points.empty()) fail(Errc::InsufficientOutline, "outline has no points");
  if (entry.curve.empty()) fail(Errc::EmptyInput, "database entry has an empty curve");
  const double shift = apex_col - entry.apex_index;
  const int n = static_cast<int>(entry.curve.size());

  double sum = 0.0;
  for (const OutlinePoint& p : outline.points) {
    if (mode == DistanceMode::Vertical) {
      // Sample the curve at the fractional index under this column.
      const double u = std::clamp(p.col - shift, 0.0, static_cast<double>(n - 1));
      const int j = std::min(static_cast<int>(u), n - 2 >= 0 ? n - 2 : 0);
      const double frac = u - j;
      const double row = n == 1 ? entry.curve[0]
                                : entry.curve[j] + frac * (entry.curve[j + 1] - entry.curve[j]);
      sum += std::abs(p.row - row);
    } else {
      sum += point_curve_distance(p.row, p.col, entry.curve, shift);
    }
  }
  return sum / static_cast<double>(outline.points.size());
}

MatchResult estimate_rebar(const HyperbolaOutline& outline, const HyperbolaDatabase& db,
                           const MatchParams& params) {
  if (db.entries.empty()) fail(Errc::EmptyInput, "hyperbola database is empty");
  if (static_cast<int>(outline.points.size()) < params.min_points)
    fail(Errc::InsufficientOutline, "outline has " + std::to_string(outline.points.size()) +
                                        " columns, matching needs " + std::to_string(params.min_points));

  auto key = [&](int i, double d) {
    return std::make_tuple(d, db.entries[i].depth, db.entries[i].size.diameter);
  };
  int best = -1, second = -1;
  double best_d = 0.0, second_d = 0.0;
  for (int i = 0; i < static_cast<int>(db.entries.size()); ++i) {
    // The outline apex column is rounded to a pixel while the true bar can sit
    // between columns, so the lateral placement is optimized continuously: a
    // quarter-column scan of the window brackets the optimum, then a fixed-round
    // ternary search pins it down. Both stages are deterministic.
    const auto score = [&](double u) {
      return outline_curve_distance(outline, db.entries[i], u, params.mode);
    };
    double d = std::numeric_limits<double>::infinity();
    double at = outline.apex.col;
    for (double u = outline.apex.col - params.apex_search;
         u <= outline.apex.col + params.apex_search + 1e-9; u += 0.25) {
      const double s = score(u);
      if (s < d) {
        d = s;
        at = u;
      }
    }
    double lo = at - 0.25, hi = at + 0.25;
    for (int it = 0; it < 24; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      const double s1 = score(m1), s2 = score(m2);
      d = std::min({d, s1, s2});
      if (s1 < s2)
        hi = m2;
      else
        lo = m1;
    }
    if (best < 0 || key(i, d) < key(best, best_d)) {
      second = best;
      second_d = best_d;
      best = i;
      best_d = d;
    } else if (second < 0 || key(i, d) < key(second, second_d)) {
      second = i;
      second_d = d;
    }
  }

  MatchResult res;
  res.best = db.entries[best];
  res.distance = best_d;
  res.runner_up = second >= 0 ? db.entries[second] : db.entries[best];
  res.runner_up_distance = second >= 0 ? second_d : best_d;
  return res;
}

}  // namespace gprbar
