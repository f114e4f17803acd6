#pragma once

#include <vector>

#include "gprbar/core.hpp"

namespace gprbar {

// Split of the time axis at the transition between direct wave and rebar reflections.
struct RegionSplit {
  int transition_row = 0;  // first row of the rebar-reflection region
};

// Column-constant model of the direct wave, built from reference columns.
struct DirectWaveModel {
  std::vector<double> profile;        // per-row intensity, rows 0..transition_row-1
  std::vector<int> reference_columns; // columns whose transition-row intensity is the mode
  int mode_bin = 0;                   // 256-bin index of the most frequent intensity
  double mode_intensity = 0.0;        // mean intensity within the mode bin
};

// 256-bin global histogram equalization via the cumulative distribution.
// A single occupied bin (constant image) is returned unchanged.
Grid equalize_grid(const Grid& g);
BScan equalize(const BScan& scan);

// Finds the first low-energy row after the direct-wave peak of the row-mean envelope.
// The search window spans (peak_row, peak_row + window] with window = frac * n_samples.
RegionSplit find_transition_row(const BScan& scan, double window_frac = 0.25);

DirectWaveModel estimate_direct_wave(const BScan& scan, const RegionSplit& split);

// Grayscale opening with an odd square structuring element; borders replicate edges.
Grid open_operation(const Grid& image, int se_size);

struct DirectWaveRemoval {
  BScan equalized;      // input after the first equalization
  RegionSplit split;
  DirectWaveModel model;
  BScan subtracted;     // profile removed above the transition row, clamped at 0
  BScan cleaned;        // re-equalized and opened
};

DirectWaveRemoval remove_direct_wave_stages(const BScan& scan, int open_size = 3,
                                            double window_frac = 0.25);
BScan remove_direct_wave(const BScan& scan, int open_size = 3);

}  // namespace gprbar
