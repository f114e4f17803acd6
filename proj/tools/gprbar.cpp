// Command-line front end: synthesize scans, build curve databases, run the
// extraction pipeline, match outlines, evaluate the full suite, render images.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gprbar/evaluate.hpp"
#include "gprbar/io.hpp"

namespace {

using namespace gprbar;

std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out;
}

// "6,8,10,12,14cm": a unit suffix on any token sets the unit for bare tokens.
std::vector<double> parse_depth_list(const std::string& text) {
  struct Tok {
    double value;
    std::string unit;
  };
  std::vector<Tok> toks;
  std::string unit_seen;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string tok = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (tok.empty()) continue;
    std::size_t unit_at = tok.size();
    while (unit_at > 0 && !std::isdigit(static_cast<unsigned char>(tok[unit_at - 1])) &&
           tok[unit_at - 1] != '.')
      --unit_at;
    Tok t;
    t.unit = tok.substr(unit_at);
    try {
      std::size_t used = 0;
      t.value = std::stod(tok.substr(0, unit_at), &used);
      if (used != unit_at || unit_at == 0) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      fail(Errc::ConfigError, "cannot parse depth '" + tok + "'");
    }
    if (!t.unit.empty()) unit_seen = t.unit;
    toks.push_back(t);
  }
  if (toks.empty()) fail(Errc::ConfigError, "empty depth list");
  std::vector<double> out;
  for (const Tok& t : toks) {
    const std::string unit = t.unit.empty() ? (unit_seen.empty() ? "m" : unit_seen) : t.unit;
    double factor = 0.0;
    if (unit == "m") factor = 1.0;
    else if (unit == "cm") factor = 0.01;
    else if (unit == "mm") factor = 0.001;
    else fail(Errc::ConfigError, "unknown depth unit '" + unit + "' (m, cm, or mm)");
    out.push_back(t.value * factor);
  }
  return out;
}

RebarPlacement parse_bar(const std::string& text, const RadarConfig&) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    parts.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  if (parts.size() != 3)
    fail(Errc::ConfigError, "--bar wants x0_m,depth_m,designation, got '" + text + "'");
  RebarPlacement p;
  try {
    p.x0 = std::stod(parts[0]);
    p.depth = std::stod(parts[1]);
  } catch (const std::logic_error&) {
    fail(Errc::ConfigError, "cannot parse bar '" + text + "'");
  }
  p.size = parse_rebar_size(parts[2]);
  return p;
}

Grid model_as_grid(const DirectWaveRemoval& stages, int rows, int cols) {
  Grid g(rows, cols);
  for (int r = 0; r < stages.split.transition_row && r < rows; ++r)
    for (int c = 0; c < cols; ++c) g.at(r, c) = stages.model.profile[r];
  return g;
}

std::vector<Rgb> grid_to_rgb(const Grid& g) {
  std::vector<Rgb> px(g.size());
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) {
      const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(g.at(r, c), 0.0, 1.0) * 255.0));
      px[static_cast<std::size_t>(r) * g.cols() + c] = {v, v, v};
    }
  return px;
}

void draw_outline_overlay(std::vector<Rgb>& px, int rows, int cols, const OutlineSet& outlines) {
  for (const HyperbolaOutline& o : outlines.outlines)
    for (const OutlinePoint& p : o.points)
      if (p.row >= 0 && p.row < rows && p.col >= 0 && p.col < cols)
        px[static_cast<std::size_t>(p.row) * cols + p.col] = {255, 0, 0};
}

void draw_curve_overlay(std::vector<Rgb>& px, int rows, int cols, const HyperbolaDatabase& db,
                        const std::vector<OutlineEstimate>& estimates) {
  for (const OutlineEstimate& est : estimates) {
    const DatabaseEntry* entry = nullptr;
    for (const DatabaseEntry& e : db.entries)
      if (e.size.designation == est.match.best.size.designation &&
          std::abs(e.depth - est.match.best.depth) < 1e-9)
        entry = &e;
    if (!entry) fail(Errc::ConfigMismatch, "estimate does not correspond to any database entry");
    const int shift = est.apex_col - entry->apex_index;
    for (int j = 0; j < static_cast<int>(entry->curve.size()); ++j) {
      const int c = j + shift;
      const int r = static_cast<int>(std::lround(entry->curve[j]));
      if (r >= 0 && r < rows && c >= 0 && c < cols)
        px[static_cast<std::size_t>(r) * cols + c] = {0, 255, 0};
    }
  }
}

int run(int argc, char** argv) {
  // The config file loads first so that explicit flags can override its values.
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
  }
  if (config_path.empty())
    if (const char* env = std::getenv("GPRBAR_CONFIG")) config_path = env;
  RunConfig cfg = config_path.empty() ? default_run_config() : load_run_config(config_path);

  CLI::App app{"Rebar cover depth and bar size estimation from GPR B-scans"};
  app.require_subcommand(1);
  std::string config_flag = config_path;
  app.add_option("--config", config_flag, "JSON run configuration (or env GPRBAR_CONFIG)")
      ->capture_default_str();

  double noise = cfg.noise_sigma;
  std::uint64_t seed = cfg.seed;
  int dwr = cfg.direct_wave_rows;
  int jobs = cfg.jobs;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Synthesize a B-scan (metadata JSON + CSV grid)");
  std::string sim_out;
  std::vector<std::string> bar_specs;
  bool sim_empty = false;
  sim->add_option("--out", sim_out, "Output scan path (.json; grid lands next to it as .csv)")
      ->required();
  sim->add_option("--bar", bar_specs, "Bar as x0_m,depth_m,designation (repeatable)");
  sim->add_flag("--empty", sim_empty, "No rebar, direct wave only");
  sim->add_option("--seed", seed, "Noise seed")->capture_default_str();
  sim->add_option("--noise", noise, "Gaussian noise sigma in [0,1] units")->capture_default_str();
  sim->add_option("--direct-wave-rows", dwr, "Rows occupied by the direct-wave band")
      ->capture_default_str();
  sim->callback([&] {
    SceneSpec spec;
    if (!bar_specs.empty()) {
      spec.config = cfg.radar;
      for (const std::string& b : bar_specs) spec.placements.push_back(parse_bar(b, cfg.radar));
    } else if (sim_empty) {
      spec.config = cfg.radar;
    } else {
      spec = graded_depth_scene(cfg.radar);  // five graded-depth demo bars
      if (!sim->count("--direct-wave-rows")) dwr = spec.direct_wave_rows;
    }
    spec.seed = seed;
    spec.noise_sigma = noise;
    spec.direct_wave_rows = dwr;
    const SyntheticScene scene = synthesize_bscan(spec);
    write_bscan(sim_out, scene.scan, &scene.truth);
  });

  // db build
  auto* db_cmd = app.add_subcommand("db", "Reflection-curve database commands");
  db_cmd->require_subcommand(1);
  auto* db_build = db_cmd->add_subcommand("build", "Compute curves for every depth and catalog size");
  std::string db_out, depth_list;
  db_build->add_option("--out", db_out, "Output database path (.json)")->required();
  db_build->add_option("--depths", depth_list, "Depth grid, e.g. 6,8,10,12,14cm");
  db_build->callback([&] {
    const std::vector<double> depths = depth_list.empty() ? cfg.depths : parse_depth_list(depth_list);
    write_database(db_out, build_database(depths, rebar_catalog(), cfg.radar));
  });

  // process
  auto* proc = app.add_subcommand("process", "Extract hyperbola outlines from a scan");
  std::string proc_in, proc_out, dump_dir;
  proc->add_option("scan", proc_in, "Input scan metadata (.json)")->required();
  proc->add_option("--out", proc_out, "Output outlines path (.json)")->required();
  proc->add_option("--dump-stages", dump_dir, "Directory for per-stage images");
  proc->add_option("--seed", seed, "Crossing-detector seed")->capture_default_str();
  proc->callback([&] {
    const BScan scan = read_bscan(proc_in);
    PipelineParams pp = cfg.pipeline;
    pp.ransac.seed = seed;
    const PipelineResult res = run_pipeline(scan, pp);
    write_outlines(proc_out, res.outlines);
    if (!dump_dir.empty()) {
      std::filesystem::create_directories(dump_dir);
      const int rows = scan.config.n_samples, cols = scan.config.n_traces;
      write_pgm(dump_dir + "/01_raw.pgm", scan.intensities);
      write_pgm(dump_dir + "/02_direct_wave_model.pgm", model_as_grid(res.stages, rows, cols));
      write_pgm(dump_dir + "/03_subtracted.pgm", res.stages.subtracted.intensities);
      write_pgm(dump_dir + "/04_binarized.pgm", res.binarized);
      write_pgm(dump_dir + "/05_filled.pgm", res.filled);
      write_ppm_labels(dump_dir + "/06_labeled.ppm", res.labeled);
      std::vector<Rgb> px = grid_to_rgb(scan.intensities);
      draw_outline_overlay(px, rows, cols, res.outlines);
      write_ppm(dump_dir + "/07_outlines.ppm", rows, cols, px);
    }
  });

  // match
  auto* mat = app.add_subcommand("match", "Match outlines against a curve database");
  std::string mat_in, mat_db, mat_out, mode_name;
  mat->add_option("outlines", mat_in, "Input outlines (.json)")->required();
  mat->add_option("--db", mat_db, "Curve database (.json)")->required();
  mat->add_option("--out", mat_out, "Output estimates path (.json)")->required();
  mat->add_option("--mode", mode_name, "Distance mode: euclidean or vertical");
  mat->callback([&] {
    const OutlineSet outlines = read_outlines(mat_in);
    const HyperbolaDatabase db = read_database(mat_db);
    MatchParams mp = cfg.pipeline.match;
    if (!mode_name.empty()) mp.mode = parse_distance_mode(mode_name);
    std::vector<OutlineEstimate> out;
    for (const HyperbolaOutline& o : outlines.outlines) {
      OutlineEstimate e;
      e.label = o.label;
      e.apex_row = o.apex.row;
      e.apex_col = o.apex.col;
      e.match = estimate_rebar(o, db, mp);
      out.push_back(std::move(e));
    }
    write_estimates(mat_out, out);
  });

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Run the full graded case suite and score it");
  std::string eval_out;
  eval->add_option("--out", eval_out, "Output report path (.json)")->required();
  eval->add_option("--seed", seed, "Base seed for the suite")->capture_default_str();
  eval->add_option("--noise", noise, "Gaussian noise sigma")->capture_default_str();
  eval->add_option("--jobs", jobs, "Worker threads for cases")->capture_default_str();
  eval->add_option("--direct-wave-rows", dwr, "Rows occupied by the direct-wave band")
      ->capture_default_str();
  eval->callback([&] {
    const CaseSuite suite = build_case_suite(cfg.radar, seed, noise, dwr);
    const HyperbolaDatabase db = build_database(cfg.depths, rebar_catalog(), cfg.radar);
    PipelineParams pp = cfg.pipeline;
    pp.ransac.seed = seed;
    const EvaluationReport rep = run_suite(suite, db, pp, jobs);
    write_report(eval_out, rep);
    std::printf("cases=%d bars=%d detected=%d depth_accuracy=%s size_accuracy=%s "
                "size_accuracy_pm1=%s failures=%zu elapsed_s=%.1f\n",
                rep.cases, rep.bars, rep.detected,
                rep.depth_accuracy ? std::to_string(*rep.depth_accuracy).c_str() : "n/a",
                rep.size_accuracy ? std::to_string(*rep.size_accuracy).c_str() : "n/a",
                rep.size_accuracy_pm1 ? std::to_string(*rep.size_accuracy_pm1).c_str() : "n/a",
                rep.failures.size(), rep.elapsed_seconds);
  });

  // render
  auto* ren = app.add_subcommand("render", "Render a scan with optional outline and curve overlays");
  std::string ren_in, ren_out, ren_outlines, ren_db, ren_est;
  ren->add_option("scan", ren_in, "Input scan metadata (.json)")->required();
  ren->add_option("--out", ren_out, "Output image path (.ppm)")->required();
  ren->add_option("--outlines", ren_outlines, "Outlines to draw in red");
  ren->add_option("--db", ren_db, "Curve database for matched-curve overlay");
  ren->add_option("--estimates", ren_est, "Estimates to draw in green (needs --db)");
  ren->callback([&] {
    const BScan scan = read_bscan(ren_in);
    const int rows = scan.config.n_samples, cols = scan.config.n_traces;
    std::vector<Rgb> px = grid_to_rgb(scan.intensities);
    if (!ren_outlines.empty()) draw_outline_overlay(px, rows, cols, read_outlines(ren_outlines));
    if (!ren_est.empty()) {
      if (ren_db.empty()) fail(Errc::ConfigError, "--estimates needs --db for the curve shapes");
      draw_curve_overlay(px, rows, cols, read_database(ren_db), read_estimates(ren_est));
    }
    write_ppm(ren_out, rows, cols, px);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the usage error
    return rc == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gprbar::Error& e) {
    std::fprintf(stderr, "{\"error\": \"%s\", \"message\": \"%s\"}\n", gprbar::errc_name(e.code()),
                 json_escape(e.what()).c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\": \"internal\", \"message\": \"%s\"}\n",
                 json_escape(e.what()).c_str());
    return 1;
  }
}
