#pragma once

#include <cstdint>
#include <vector>

#include "gprbar/core.hpp"

namespace gprbar {

// Forward-model inputs for one synthetic B-scan.
struct SceneSpec {
  RadarConfig config;
  std::vector<RebarPlacement> placements;
  double noise_sigma = 0.0;   // Gaussian sd in [0, 1] intensity units
  std::uint64_t seed = 0;
  int direct_wave_rows = 41;  // rows occupied by the direct-wave band
};

struct SyntheticScene {
  BScan scan;
  std::vector<RebarPlacement> truth;
};

// Deposits the causal Ricker-wavelet envelope at each reflection arrival with
// amplitude 1 / (two-way path length), adds a dominant horizontal direct-wave
// band peaking at time_zero_row, adds seeded Gaussian noise, and normalizes
// to [0, 1]. The leading edge of every reflection sits at the arrival row.
SyntheticScene synthesize_bscan(const SceneSpec& spec);

struct SuiteCase {
  int case_id = 0;
  double depth = 0.0;
  RebarSize size;
  SceneSpec spec;  // five identical bars, evenly spaced
};

struct CaseSuite {
  std::vector<SuiteCase> cases;
  int total_bars() const;
};

// The 45-case evaluation grid: per depth, every catalog size whose hyperbola fits:
// 0.06 m -> #3..#8, 0.08/0.10 m -> #3..#11, 0.12 m -> +#14, 0.14 m -> +#18.
CaseSuite build_case_suite(const RadarConfig& config, std::uint64_t base_seed = 0,
                           double noise_sigma = 0.0, int direct_wave_rows = 41);

}  // namespace gprbar
