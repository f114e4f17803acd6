#include "gprbar/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gprbar {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidPermittivity: return "InvalidPermittivity";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidSample: return "InvalidSample";
    case Errc::ScanTooShort: return "ScanTooShort";
    case Errc::NoReferenceColumns: return "NoReferenceColumns";
    case Errc::InvalidStructuringElement: return "InvalidStructuringElement";
    case Errc::InvalidThresholdFactor: return "InvalidThresholdFactor";
    case Errc::PlacementOutOfBounds: return "PlacementOutOfBounds";
    case Errc::InvalidGeometry: return "InvalidGeometry";
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::InsufficientOutline: return "InsufficientOutline";
    case Errc::ConfigMismatch: return "ConfigMismatch";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

double velocity_from_permittivity(double eps_r) {
  if (!std::isfinite(eps_r) || eps_r < 1.0)
    fail(Errc::InvalidPermittivity, "relative permittivity must be finite and >= 1");
  return kSpeedOfLight / std::sqrt(eps_r);
}

void RadarConfig::validate() const {
  if (!(center_frequency > 0.0)) fail(Errc::ConfigError, "center_frequency must be > 0");
  double v = velocity_from_permittivity(relative_permittivity);
  if (std::abs(wave_velocity - v) > 1e-9 * v)
    fail(Errc::ConfigError, "wave_velocity does not match c/sqrt(eps_r)");
  if (!(dt > 0.0)) fail(Errc::ConfigError, "dt must be > 0");
  if (!(dx > 0.0)) fail(Errc::ConfigError, "dx must be > 0");
  if (n_samples < 2) fail(Errc::ConfigError, "n_samples must be >= 2");
  if (n_traces < 2) fail(Errc::ConfigError, "n_traces must be >= 2");
  if (time_zero_row < 0 || time_zero_row >= n_samples)
    fail(Errc::ConfigError, "time_zero_row outside [0, n_samples)");
}

RadarConfig make_radar_config(double center_frequency, double eps_r, double dt, double dx,
                              int n_samples, int n_traces, int time_zero_row) {
  RadarConfig cfg;
  cfg.center_frequency = center_frequency;
  cfg.relative_permittivity = eps_r;
  cfg.wave_velocity = velocity_from_permittivity(eps_r);
  cfg.dt = dt;
  cfg.dx = dx;
  cfg.n_samples = n_samples;
  cfg.n_traces = n_traces;
  cfg.time_zero_row = time_zero_row;
  cfg.validate();
  return cfg;
}

RadarConfig default_radar_config() {
  return make_radar_config(1.5e9, 6.0, 10.0e-9 / 512.0, 0.005, 512, 600, 40);
}

void BScan::validate() const {
  config.validate();
  if (intensities.rows() != config.n_samples || intensities.cols() != config.n_traces)
    fail(Errc::ConfigMismatch, "grid dimensions do not match config");
  for (double v : intensities.data())
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      fail(Errc::InvalidSample, "intensity outside [0, 1]");
}

const std::vector<RebarSize>& rebar_catalog() {
  // Nominal diameters: #3..#8 are n/8 inch, the rest follow the standard bar tables.
  static const std::vector<RebarSize> catalog = {
      {3, 0.009525}, {4, 0.0127},   {5, 0.015875}, {6, 0.01905},
      {7, 0.022225}, {8, 0.0254},   {9, 0.02865},  {10, 0.03226},
      {11, 0.03581}, {14, 0.043},   {18, 0.05733},
  };
  return catalog;
}

RebarSize rebar_size_from_designation(int designation) {
  for (const auto& s : rebar_catalog())
    if (s.designation == designation) return s;
  fail(Errc::ConfigError, "unknown rebar designation #" + std::to_string(designation));
}

int catalog_ordinal(int designation) {
  const auto& cat = rebar_catalog();
  for (int i = 0; i < static_cast<int>(cat.size()); ++i)
    if (cat[i].designation == designation) return i;
  fail(Errc::ConfigError, "unknown rebar designation #" + std::to_string(designation));
}

std::string rebar_size_name(const RebarSize& size) {
  return "#" + std::to_string(size.designation);
}

RebarSize parse_rebar_size(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t[0] == '#') t = t.substr(1);
  try {
    size_t pos = 0;
    int d = std::stoi(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return rebar_size_from_designation(d);
  } catch (const std::logic_error&) {
    fail(Errc::ConfigError, "cannot parse rebar size '" + text + "'");
  }
}

Grid normalize(const Grid& raw) {
  if (raw.empty()) fail(Errc::EmptyInput, "cannot normalize an empty grid");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : raw.data()) {
    if (!std::isfinite(v)) fail(Errc::InvalidSample, "non-finite sample");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Grid out(raw.rows(), raw.cols());
  if (hi == lo) return out;  // constant input maps to all zeros
  if (lo == 0.0 && hi == 1.0) return raw;
  const double scale = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < raw.size(); ++i) out.data()[i] = (raw.data()[i] - lo) * scale;
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace gprbar
