#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gprbar/errors.hpp"
#include "gprbar/grid.hpp"

namespace gprbar {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

// Propagation velocity in a dielectric of relative permittivity eps_r.
double velocity_from_permittivity(double eps_r);

// Acquisition and material parameters for one B-scan grid.
struct RadarConfig {
  double center_frequency = 1.5e9;     // Hz
  double relative_permittivity = 6.0;
  double wave_velocity = 0.0;          // m/s, must equal c/sqrt(eps_r)
  double dt = 10.0e-9 / 512.0;         // s per time sample
  double dx = 0.005;                   // m per trace
  int n_samples = 512;
  int n_traces = 600;
  int time_zero_row = 40;              // row of the direct-wave peak

  double aperture() const { return (n_traces - 1) * dx; }
  void validate() const;
};

// Builds a validated config with wave_velocity derived from eps_r.
RadarConfig make_radar_config(double center_frequency, double eps_r, double dt, double dx,
                              int n_samples, int n_traces, int time_zero_row);

// 10 ns window over 512 samples, 5 mm trace spacing, 3 m aperture, 1.5 GHz in eps_r = 6.
RadarConfig default_radar_config();

struct BScan {
  Grid intensities;   // values in [0, 1]
  RadarConfig config;
  void validate() const;
};

// US customary rebar designation with its nominal diameter.
struct RebarSize {
  int designation = 7;         // one of 3..11, 14, 18
  double diameter = 0.022225;  // m

  bool operator==(const RebarSize& o) const { return designation == o.designation; }
};

// The eleven designations in increasing diameter order.
const std::vector<RebarSize>& rebar_catalog();
RebarSize rebar_size_from_designation(int designation);
int catalog_ordinal(int designation);  // index into rebar_catalog()
std::string rebar_size_name(const RebarSize& size);  // "#7"
RebarSize parse_rebar_size(const std::string& text);

struct RebarPlacement {
  double x0 = 0.0;     // m, lateral position of the bar axis
  double depth = 0.1;  // m, cover depth to the top of the bar
  RebarSize size;
};

// Affine min-max map onto [0, 1]; a constant grid maps to all zeros.
Grid normalize(const Grid& raw);

// splitmix64-style stable seed derivation for independent substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace gprbar
