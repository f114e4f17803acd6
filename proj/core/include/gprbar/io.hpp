#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gprbar/evaluate.hpp"

namespace gprbar {

// A scan on disk is a JSON metadata file plus a sibling .csv intensity grid
// with the same stem. Ground truth, when known, rides along in the metadata.
// Scan and database floats use shortest-round-trip formatting, so a write/read
// cycle is value-identical; outline, estimate, and report files round floats
// to 9 significant digits.
void write_bscan(const std::string& json_path, const BScan& scan,
                 const std::vector<RebarPlacement>* truth = nullptr);
BScan read_bscan(const std::string& json_path, std::vector<RebarPlacement>* truth = nullptr);

void write_database(const std::string& path, const HyperbolaDatabase& db);
HyperbolaDatabase read_database(const std::string& path);

void write_outlines(const std::string& path, const OutlineSet& set);
OutlineSet read_outlines(const std::string& path);

struct OutlineEstimate {
  int label = 0;
  int apex_row = 0, apex_col = 0;
  MatchResult match;
};
void write_estimates(const std::string& path, const std::vector<OutlineEstimate>& estimates);
std::vector<OutlineEstimate> read_estimates(const std::string& path);

// The report file omits wall-clock fields so fixed-seed runs are byte-identical.
void write_report(const std::string& path, const EvaluationReport& report);
EvaluationReport read_report(const std::string& path);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

// 8-bit binary PGM (P5) and PPM (P6).
void write_pgm(const std::string& path, const Grid& image);       // [0,1] -> 0..255
void write_pgm(const std::string& path, const BinaryMask& mask);  // {0,1} -> {0,255}
void write_ppm(const std::string& path, int rows, int cols, const std::vector<Rgb>& pixels);
void write_ppm_labels(const std::string& path, const LabeledHyperbolas& labeled);
Grid read_pgm(const std::string& path);  // back to [0,1]
void read_ppm(const std::string& path, int& rows, int& cols, std::vector<Rgb>& pixels);

// Fixed palette for label overlays; label 0 is black.
Rgb label_color(int label);

// Every tunable of the tool in one flat document. Unknown keys are rejected.
struct RunConfig {
  RadarConfig radar;
  PipelineParams pipeline;
  std::vector<double> depths;  // database depth grid
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  int direct_wave_rows = 41;
  int jobs = 1;
};

RunConfig default_run_config();
RunConfig load_run_config(const std::string& path);
void write_run_config(const std::string& path, const RunConfig& config);

const char* distance_mode_name(DistanceMode mode);
DistanceMode parse_distance_mode(const std::string& name);

}  // namespace gprbar
