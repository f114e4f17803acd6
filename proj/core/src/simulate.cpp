#include "gprbar/simulate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gprbar/theory.hpp"

namespace gprbar {

namespace {

// Gaussian amplitude envelope of the Ricker wavelet in xi = pi * f * t.
// Deposits record the envelope instead of the oscillating waveform so each
// reflection is one monotone-decaying stroke whose leading edge sits exactly
// at the arrival row; that edge is what the outline stages measure.
double wavelet_envelope(double xi) { return std::exp(-xi * xi); }

// Truncate deposits where the envelope falls below this fraction of its peak.
constexpr double kEnvelopeFloor = 1.0 / 1024.0;

}  // namespace

SyntheticScene synthesize_bscan(const SceneSpec& spec) {
  const RadarConfig& cfg = spec.config;
  cfg.validate();
  if (spec.direct_wave_rows < 1) fail(Errc::ConfigError, "direct_wave_rows must be >= 1");
  if (!(spec.noise_sigma >= 0.0)) fail(Errc::ConfigError, "noise_sigma must be >= 0");
  for (const RebarPlacement& p : spec.placements) {
    if (!(p.depth > 0.0)) fail(Errc::InvalidGeometry, "placement depth must be > 0");
    if (p.x0 < 0.0 || p.x0 > cfg.aperture())
      fail(Errc::PlacementOutOfBounds, "bar at x0 = " + std::to_string(p.x0) +
                                           " outside aperture [0, " + std::to_string(cfg.aperture()) + "]");
  }

  Grid raw(cfg.n_samples, cfg.n_traces, 0.0);
  const double f = cfg.center_frequency;
  const double v = cfg.wave_velocity;
  // Envelope support in rows: exp(-xi^2) >= floor.
  const double xi_cut = std::sqrt(-std::log(kEnvelopeFloor));
  const int tail_rows = static_cast<int>(std::floor(xi_cut / (std::numbers::pi * f * cfg.dt)));

  // Rebar reflections: causal envelope starting at the arrival row, amplitude
  // scaled by the reciprocal of the two-way path length v * t.
  double strongest = 0.0;
  for (const RebarPlacement& p : spec.placements) {
    const double r = p.size.diameter / 2.0;
    for (int j = 0; j < cfg.n_traces; ++j) {
      const double t = travel_time(j * cfg.dx, p.x0, p.depth, r, v);
      const int row0 = cfg.time_zero_row + static_cast<int>(std::lround(t / cfg.dt));
      if (row0 >= cfg.n_samples) continue;
      const double amp = 1.0 / (v * t);
      strongest = std::max(strongest, amp);
      for (int k = 0; k <= tail_rows; ++k) {
        const int row = row0 + k;
        if (row < 0 || row >= cfg.n_samples) break;
        const double xi = std::numbers::pi * f * (k * cfg.dt);
        raw.at(row, j) += amp * wavelet_envelope(xi);
      }
    }
  }

  // Direct-wave band: the same envelope shape stretched over direct_wave_rows
  // rows, column-constant, peak at time_zero_row, twice the strongest response.
  const double band_amp = (strongest > 0.0) ? 2.0 * strongest : 1.0;
  const int rows_above = (spec.direct_wave_rows - 1) / 2;
  const int rows_below = spec.direct_wave_rows - 1 - rows_above;
  for (int d = -rows_above; d <= rows_below; ++d) {
    const int row = cfg.time_zero_row + d;
    if (row < 0 || row >= cfg.n_samples) continue;
    const int span = d < 0 ? rows_above : rows_below;
    // Edge rows stay strictly positive so the band occupies exactly direct_wave_rows rows.
    const double u = static_cast<double>(std::abs(d)) / (span + 1);
    const double val = band_amp * wavelet_envelope(u * xi_cut);
    for (int j = 0; j < cfg.n_traces; ++j) raw.at(row, j) += val;
  }

  Grid scaled = normalize(raw);
  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, spec.noise_sigma);
    // Intensity floors at zero, so negative excursions clip instead of shifting
    // the whole image onto a pedestal the later rank mapping would amplify.
    for (double& x : scaled.data()) x = std::max(0.0, x + gauss(rng));
    scaled = normalize(scaled);
  }

  SyntheticScene out;
  out.scan.intensities = std::move(scaled);
  out.scan.config = cfg;
  out.truth = spec.placements;
  return out;
}

int CaseSuite::total_bars() const {
  int n = 0;
  for (const SuiteCase& c : cases) n += static_cast<int>(c.spec.placements.size());
  return n;
}

CaseSuite build_case_suite(const RadarConfig& config, std::uint64_t base_seed,
                           double noise_sigma, int direct_wave_rows) {
  config.validate();
  struct Group {
    double depth;
    int max_designation;
  };
  static const Group groups[] = {
      {0.06, 8}, {0.08, 11}, {0.10, 11}, {0.12, 14}, {0.14, 18},
  };

  const int n_bars = 5;
  const double span = config.aperture();
  const double spacing = span / (n_bars + 1);

  CaseSuite suite;
  int case_id = 1;
  for (const Group& g : groups) {
    for (const RebarSize& s : rebar_catalog()) {
      if (s.designation > g.max_designation) break;
      SuiteCase c;
      c.case_id = case_id;
      c.depth = g.depth;
      c.size = s;
      c.spec.config = config;
      c.spec.noise_sigma = noise_sigma;
      c.spec.direct_wave_rows = direct_wave_rows;
      c.spec.seed = mix_seed(base_seed, static_cast<std::uint64_t>(case_id));
      for (int k = 1; k <= n_bars; ++k)
        c.spec.placements.push_back({k * spacing, g.depth, s});
      suite.cases.push_back(std::move(c));
      ++case_id;
    }
  }
  return suite;
}

}  // namespace gprbar
