#include "gprbar/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace gprbar {

namespace {

constexpr int kBins = 256;

int bin_of(double v) {
  int b = static_cast<int>(v * kBins);
  return std::clamp(b, 0, kBins - 1);
}

std::vector<double> row_means(const Grid& g) {
  std::vector<double> means(g.rows(), 0.0);
  for (int r = 0; r < g.rows(); ++r) {
    double s = 0.0;
    for (int c = 0; c < g.cols(); ++c) s += g.at(r, c);
    means[r] = s / g.cols();
  }
  return means;
}

// Square min/max filter with replicated borders, separable by axis.
template <typename Cmp>
Grid extremum_filter(const Grid& in, int half, Cmp better) {
  Grid tmp(in.rows(), in.cols());
  for (int r = 0; r < in.rows(); ++r) {
    for (int c = 0; c < in.cols(); ++c) {
      double best = in.at(r, std::clamp(c - half, 0, in.cols() - 1));
      for (int k = -half + 1; k <= half; ++k) {
        double v = in.at(r, std::clamp(c + k, 0, in.cols() - 1));
        if (better(v, best)) best = v;
      }
      tmp.at(r, c) = best;
    }
  }
  Grid out(in.rows(), in.cols());
  for (int c = 0; c < in.cols(); ++c) {
    for (int r = 0; r < in.rows(); ++r) {
      double best = tmp.at(std::clamp(r - half, 0, in.rows() - 1), c);
      for (int k = -half + 1; k <= half; ++k) {
        double v = tmp.at(std::clamp(r + k, 0, in.rows() - 1), c);
        if (better(v, best)) best = v;
      }
      out.at(r, c) = best;
    }
  }
  return out;
}

}  // namespace

Grid equalize_grid(const Grid& g) {
  if (g.empty()) fail(Errc::EmptyInput, "cannot equalize an empty grid");
  std::array<std::size_t, kBins> hist{};
  for (double v : g.data()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) fail(Errc::InvalidSample, "intensity outside [0, 1]");
    ++hist[bin_of(v)];
  }
  int occupied = 0;
  for (auto h : hist) occupied += h != 0;
  if (occupied <= 1) return g;  // constant image stays unchanged

  std::array<double, kBins> map{};
  std::size_t cum = 0;
  for (int b = 0; b < kBins; ++b) {
    cum += hist[b];
    map[b] = static_cast<double>(cum) / static_cast<double>(g.size());
  }
  Grid out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.size(); ++i) out.data()[i] = map[bin_of(g.data()[i])];
  return out;
}

BScan equalize(const BScan& scan) {
  BScan out;
  out.intensities = equalize_grid(scan.intensities);
  out.config = scan.config;
  return out;
}

RegionSplit find_transition_row(const BScan& scan, double window_frac) {
  const Grid& g = scan.intensities;
  if (g.rows() < 4) fail(Errc::ScanTooShort, "need at least 4 time samples");
  if (!(window_frac > 0.0)) fail(Errc::ConfigError, "window_frac must be > 0");

  const auto means = row_means(g);
  int peak = 0;
  for (int r = 1; r < g.rows(); ++r)
    if (means[r] > means[peak]) peak = r;

  const int window = std::max(1, static_cast<int>(std::lround(window_frac * g.rows())));
  const int last = std::min(peak + window, g.rows() - 1);
  int t_tp = std::min(peak + 1, g.rows() - 1);
  for (int r = t_tp + 1; r <= last; ++r)
    if (means[r] < means[t_tp]) t_tp = r;  // first minimum wins ties
  return RegionSplit{t_tp};
}

DirectWaveModel estimate_direct_wave(const BScan& scan, const RegionSplit& split) {
  const Grid& g = scan.intensities;
  const int t_tp = split.transition_row;
  if (t_tp <= 0 || t_tp >= g.rows()) fail(Errc::ConfigError, "transition row outside (0, n_samples)");

  std::array<std::size_t, kBins> hist{};
  for (int c = 0; c < g.cols(); ++c) ++hist[bin_of(g.at(t_tp, c))];
  int mode = 0;
  for (int b = 1; b < kBins; ++b)
    if (hist[b] > hist[mode]) mode = b;  // ties resolve to the lowest bin

  DirectWaveModel model;
  model.mode_bin = mode;
  double mode_sum = 0.0;
  for (int c = 0; c < g.cols(); ++c) {
    if (bin_of(g.at(t_tp, c)) == mode) {
      model.reference_columns.push_back(c);
      mode_sum += g.at(t_tp, c);
    }
  }
  if (model.reference_columns.empty()) fail(Errc::NoReferenceColumns, "no columns in the mode bin");
  model.mode_intensity = mode_sum / model.reference_columns.size();

  model.profile.resize(t_tp);
  for (int r = 0; r < t_tp; ++r) {
    double s = 0.0;
    for (int c : model.reference_columns) s += g.at(r, c);
    model.profile[r] = s / model.reference_columns.size();
  }
  return model;
}

Grid open_operation(const Grid& image, int se_size) {
  if (se_size < 3 || se_size % 2 == 0)
    fail(Errc::InvalidStructuringElement, "structuring element must be odd and >= 3");
  if (image.empty()) fail(Errc::EmptyInput, "cannot open an empty grid");
  const int half = se_size / 2;
  Grid eroded = extremum_filter(image, half, [](double a, double b) { return a < b; });
  return extremum_filter(eroded, half, [](double a, double b) { return a > b; });
}

DirectWaveRemoval remove_direct_wave_stages(const BScan& scan, int open_size, double window_frac) {
  DirectWaveRemoval st;
  st.equalized = equalize(scan);
  st.split = find_transition_row(st.equalized, window_frac);
  st.model = estimate_direct_wave(st.equalized, st.split);

  st.subtracted = st.equalized;
  Grid& sub = st.subtracted.intensities;
  for (int r = 0; r < st.split.transition_row; ++r)
    for (int c = 0; c < sub.cols(); ++c)
      sub.at(r, c) = std::max(0.0, sub.at(r, c) - st.model.profile[r]);

  st.cleaned = st.subtracted;
  st.cleaned.intensities = open_operation(equalize_grid(sub), open_size);
  return st;
}

BScan remove_direct_wave(const BScan& scan, int open_size) {
  return remove_direct_wave_stages(scan, open_size).cleaned;
}

}  // namespace gprbar
