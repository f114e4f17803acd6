#pragma once

#include <array>
#include <cstdlib>
#include <optional>
#include <string>

#include "gprbar/match.hpp"
#include "gprbar/preprocess.hpp"
#include "gprbar/simulate.hpp"

namespace gprbar {

// Every tunable of the scan-to-estimates pipeline, with the documented defaults.
struct PipelineParams {
  double threshold_factor = 1.5;  // b in the background threshold (max-mean)/b + mean
  int open_size = 3;
  double window_frac = 0.25;
  FillParams fill;
  RansacParams ransac;
  SeparationParams separation;
  bool scale_erosion = true;  // derive the erosion window from dt and dx
  int min_outline_points = 15;
  int min_apex_flank = 5;
  int pair_tolerance_cols = 50;  // truth-to-outline pairing window
  MatchParams match;
};

struct PipelineResult {
  DirectWaveRemoval stages;
  BinaryMask binarized;
  BinaryMask filled;
  std::vector<IntersectionPoint> crossings;
  LabeledHyperbolas labeled;
  OutlineSet outlines;
};

// Direct-wave removal, binarization, gap filling, separation, outline extraction.
PipelineResult run_pipeline(const BScan& scan, const PipelineParams& params);

// The erosion window scaled to the scan's sampling steps when requested.
SeparationParams effective_separation(const PipelineParams& params, const RadarConfig& config);

struct RebarRecord {
  int case_id = 0;
  int bar_index = 0;  // position within the case, bars ordered by x0
  double true_x0 = 0.0;
  double true_depth = 0.0;
  int true_designation = 0;
  double est_depth = 0.0;
  int est_designation = 0;
  int apex_row = 0, apex_col = 0;  // measured outline apex
  double distance = 0.0;           // mean curve distance of the winning entry

  bool depth_correct() const { return est_depth == true_depth; }
  bool size_correct() const { return est_designation == true_designation; }
  bool size_within_one() const {
    return std::abs(catalog_ordinal(est_designation) - catalog_ordinal(true_designation)) <= 1;
  }
};

struct FailureRecord {
  int case_id = 0;
  int bar_index = 0;
  double true_x0 = 0.0;
  double true_depth = 0.0;
  int true_designation = 0;
  std::string reason;
};

// Accuracies are fractions of all truth bars (an undetected bar counts as
// incorrect) and are absent when the suite is empty. The confusion matrix
// counts detected bars by (true, estimated) catalog position.
struct EvaluationReport {
  int cases = 0;
  int bars = 0;
  int detected = 0;
  std::optional<double> depth_accuracy;
  std::optional<double> size_accuracy;
  std::optional<double> size_accuracy_pm1;
  std::array<std::array<int, 11>, 11> confusion{};
  std::vector<RebarRecord> per_rebar;
  std::vector<FailureRecord> failures;
  int spurious_outlines = 0;
  double elapsed_seconds = 0.0;
};

// Runs every case end-to-end and scores estimates against the truth. Each truth
// bar yields exactly one RebarRecord or one FailureRecord. Outlines pair with
// bars greedily by apex-column distance, one-to-one. jobs > 1 spreads cases
// across threads; the report is identical either way.
EvaluationReport run_suite(const CaseSuite& suite, const HyperbolaDatabase& db,
                           const PipelineParams& params, int jobs = 1);

// Five same-size bars with depths graded 6 to 14 cm and a widened direct-wave
// band that overlaps the shallowest hyperbola apex.
SceneSpec graded_depth_scene(const RadarConfig& config, std::uint64_t seed = 0,
                             double noise_sigma = 0.0);

}  // namespace gprbar
