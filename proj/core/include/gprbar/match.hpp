#pragma once

#include "gprbar/extract.hpp"
#include "gprbar/theory.hpp"

namespace gprbar {

// Euclidean: mean point-to-polyline distance in (row, col) units.
// Vertical: mean |row difference| at each outline column.
enum class DistanceMode { Euclidean, Vertical };

struct MatchParams {
  DistanceMode mode = DistanceMode::Euclidean;
  int min_points = 15;  // outline columns required before matching is attempted
  // Half-width in columns of the lateral placement window around the outline
  // apex. The pixel apex carries rounding jitter and the true bar can sit
  // between columns, so each entry is scored at its best continuous placement
  // inside this window (quarter-column scan plus ternary refinement).
  int apex_search = 3;
};

struct MatchResult {
  DatabaseEntry best;
  double distance = 0.0;
  DatabaseEntry runner_up;  // second-closest entry; equals best when the database has one entry
  double runner_up_distance = 0.0;
};

// Mean distance from the outline points to the entry curve shifted laterally so
// the curve apex sits at apex_col (fractional columns allowed; vertical mode
// samples the curve by linear interpolation). Rows are compared absolutely: the
// curve already encodes depth as row position.
double outline_curve_distance(const HyperbolaOutline& outline, const DatabaseEntry& entry,
                              double apex_col, DistanceMode mode = DistanceMode::Euclidean);

// Exhaustive nearest-curve search: every entry is scored at its best lateral
// placement within apex_search columns of the outline apex and the minimum
// wins; ties prefer smaller depth, then smaller diameter.
MatchResult estimate_rebar(const HyperbolaOutline& outline, const HyperbolaDatabase& db,
                           const MatchParams& params = {});

}  // namespace gprbar
