#include "gprbar/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gprbar {

namespace {

using nlohmann::json;

// Shortest string that parses back to the exact same double.
std::string fmt_exact(double v) {
  if (!std::isfinite(v)) fail(Errc::IoError, "cannot serialize a non-finite number");
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// 9 significant digits, for human-facing result files.
std::string fmt_g9(double v) {
  if (!std::isfinite(v)) fail(Errc::IoError, "cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(Errc::IoError, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in && !in.eof()) fail(Errc::IoError, "read from '" + path + "' failed");
  return ss.str();
}

json parse_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail(Errc::IoError, "cannot parse '" + path + "': " + e.what());
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

std::string sibling_csv(const std::string& json_path) {
  const std::size_t slash = json_path.find_last_of('/');
  const std::size_t dot = json_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return json_path + ".csv";
  return json_path.substr(0, dot) + ".csv";
}

double jget_num(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number())
    fail(Errc::IoError, "'" + path + "': missing numeric field '" + key + "'");
  return j[key].get<double>();
}

int jget_int(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(Errc::IoError, "'" + path + "': missing integer field '" + key + "'");
  return j[key].get<int>();
}

std::string jget_str(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_string())
    fail(Errc::IoError, "'" + path + "': missing string field '" + key + "'");
  return j[key].get<std::string>();
}

RadarConfig radar_from_json(const json& j, const std::string& path) {
  return make_radar_config(jget_num(j, "center_freq_ghz", path) * 1e9, jget_num(j, "eps_r", path),
                           jget_num(j, "dt_ns", path) * 1e-9, jget_num(j, "dx_m", path),
                           jget_int(j, "n_samples", path), jget_int(j, "n_traces", path),
                           jget_int(j, "time_zero_row", path));
}

void append_radar(std::string& s, const RadarConfig& cfg, const char* indent) {
  s += indent;
  s += "\"n_samples\": " + std::to_string(cfg.n_samples) + ",\n";
  s += indent;
  s += "\"n_traces\": " + std::to_string(cfg.n_traces) + ",\n";
  s += indent;
  s += "\"dt_ns\": " + fmt_exact(cfg.dt * 1e9) + ",\n";
  s += indent;
  s += "\"dx_m\": " + fmt_exact(cfg.dx) + ",\n";
  s += indent;
  s += "\"time_zero_row\": " + std::to_string(cfg.time_zero_row) + ",\n";
  s += indent;
  s += "\"eps_r\": " + fmt_exact(cfg.relative_permittivity) + ",\n";
  s += indent;
  s += "\"center_freq_ghz\": " + fmt_exact(cfg.center_frequency / 1e9);
}

}  // namespace

void write_bscan(const std::string& json_path, const BScan& scan,
                 const std::vector<RebarPlacement>* truth) {
  scan.validate();
  std::string meta = "{\n";
  append_radar(meta, scan.config, "  ");
  if (truth) {
    meta += ",\n  \"truth\": [\n";
    for (std::size_t i = 0; i < truth->size(); ++i) {
      const RebarPlacement& p = (*truth)[i];
      meta += "    {\"x0_m\": " + fmt_exact(p.x0) + ", \"depth_m\": " + fmt_exact(p.depth) +
              ", \"designation\": " + std::to_string(p.size.designation) + "}";
      meta += i + 1 < truth->size() ? ",\n" : "\n";
    }
    meta += "  ]";
  }
  meta += "\n}\n";
  write_text(json_path, meta);

  const Grid& g = scan.intensities;
  std::string csv;
  csv.reserve(static_cast<std::size_t>(g.rows()) * g.cols() * 12);
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (c) csv += ',';
      csv += fmt_exact(g.at(r, c));
    }
    csv += '\n';
  }
  write_text(sibling_csv(json_path), csv);
}

BScan read_bscan(const std::string& json_path, std::vector<RebarPlacement>* truth) {
  const json meta = parse_json(json_path);
  BScan scan;
  scan.config = radar_from_json(meta, json_path);
  if (truth) {
    truth->clear();
    if (meta.contains("truth")) {
      for (const json& t : meta["truth"]) {
        RebarPlacement p;
        p.x0 = jget_num(t, "x0_m", json_path);
        p.depth = jget_num(t, "depth_m", json_path);
        p.size = rebar_size_from_designation(jget_int(t, "designation", json_path));
        truth->push_back(p);
      }
    }
  }

  const std::string csv_path = sibling_csv(json_path);
  const std::string csv = read_text(csv_path);
  Grid g(scan.config.n_samples, scan.config.n_traces);
  const char* p = csv.data();
  const char* end = p + csv.size();
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      while (p < end && (*p == ',' || *p == '\n' || *p == '\r' || *p == ' ')) ++p;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc())
        fail(Errc::IoError, "'" + csv_path + "': bad value at row " + std::to_string(r) +
                                ", column " + std::to_string(c));
      p = res.ptr;
      g.at(r, c) = v;
    }
  }
  while (p < end && (*p == '\n' || *p == '\r' || *p == ' ')) ++p;
  if (p != end) fail(Errc::IoError, "'" + csv_path + "': trailing data after the grid");
  scan.intensities = std::move(g);
  scan.validate();
  return scan;
}

void write_database(const std::string& path, const HyperbolaDatabase& db) {
  std::string s = "{\n";
  s += "  \"velocity_mps\": " + fmt_exact(db.velocity) + ",\n";
  s += "  \"dt_ns\": " + fmt_exact(db.dt * 1e9) + ",\n";
  s += "  \"dx_m\": " + fmt_exact(db.dx) + ",\n";
  s += "  \"time_zero_row\": " + std::to_string(db.time_zero_row) + ",\n";
  s += "  \"n_samples\": " + std::to_string(db.n_samples) + ",\n";
  s += "  \"n_traces\": " + std::to_string(db.n_traces) + ",\n";
  s += "  \"entries\": [\n";
  for (std::size_t i = 0; i < db.entries.size(); ++i) {
    const DatabaseEntry& e = db.entries[i];
    s += "    {\"depth_m\": " + fmt_exact(e.depth) +
         ", \"designation\": " + std::to_string(e.size.designation) +
         ", \"diameter_m\": " + fmt_exact(e.size.diameter) +
         ", \"apex_index\": " + std::to_string(e.apex_index) + ", \"curve\": [";
    for (std::size_t k = 0; k < e.curve.size(); ++k) {
      if (k) s += ',';
      s += fmt_exact(e.curve[k]);
    }
    s += "]}";
    s += i + 1 < db.entries.size() ? ",\n" : "\n";
  }
  s += "  ]\n}\n";
  write_text(path, s);
}

HyperbolaDatabase read_database(const std::string& path) {
  const json j = parse_json(path);
  HyperbolaDatabase db;
  db.velocity = jget_num(j, "velocity_mps", path);
  db.dt = jget_num(j, "dt_ns", path) * 1e-9;
  db.dx = jget_num(j, "dx_m", path);
  db.time_zero_row = jget_int(j, "time_zero_row", path);
  db.n_samples = jget_int(j, "n_samples", path);
  db.n_traces = jget_int(j, "n_traces", path);
  if (!j.contains("entries") || !j["entries"].is_array())
    fail(Errc::IoError, "'" + path + "': missing 'entries' array");
  for (const json& je : j["entries"]) {
    DatabaseEntry e;
    e.depth = jget_num(je, "depth_m", path);
    e.size.designation = jget_int(je, "designation", path);
    e.size.diameter = jget_num(je, "diameter_m", path);
    e.apex_index = jget_int(je, "apex_index", path);
    if (!je.contains("curve") || !je["curve"].is_array())
      fail(Errc::IoError, "'" + path + "': entry without a 'curve' array");
    for (const json& v : je["curve"]) e.curve.push_back(v.get<double>());
    if (e.apex_index < 0 || e.apex_index >= static_cast<int>(e.curve.size()))
      fail(Errc::IoError, "'" + path + "': apex_index outside the curve");
    db.entries.push_back(std::move(e));
  }
  return db;
}

void write_outlines(const std::string& path, const OutlineSet& set) {
  std::string s = "{\n  \"warnings\": [";
  for (std::size_t i = 0; i < set.warnings.size(); ++i) {
    if (i) s += ", ";
    s += quote(set.warnings[i]);
  }
  s += "],\n  \"outlines\": [\n";
  for (std::size_t i = 0; i < set.outlines.size(); ++i) {
    const HyperbolaOutline& o = set.outlines[i];
    s += "    {\"label\": " + std::to_string(o.label) +
         ", \"apex_row\": " + std::to_string(o.apex.row) +
         ", \"apex_col\": " + std::to_string(o.apex.col) + ", \"points\": [";
    for (std::size_t k = 0; k < o.points.size(); ++k) {
      if (k) s += ',';
      s += '[' + std::to_string(o.points[k].row) + ',' + std::to_string(o.points[k].col) + ']';
    }
    s += "]}";
    s += i + 1 < set.outlines.size() ? ",\n" : "\n";
  }
  s += "  ]\n}\n";
  write_text(path, s);
}

OutlineSet read_outlines(const std::string& path) {
  const json j = parse_json(path);
  OutlineSet set;
  if (j.contains("warnings"))
    for (const json& w : j["warnings"]) set.warnings.push_back(w.get<std::string>());
  if (!j.contains("outlines") || !j["outlines"].is_array())
    fail(Errc::IoError, "'" + path + "': missing 'outlines' array");
  for (const json& jo : j["outlines"]) {
    HyperbolaOutline o;
    o.label = jget_int(jo, "label", path);
    o.apex.row = jget_int(jo, "apex_row", path);
    o.apex.col = jget_int(jo, "apex_col", path);
    for (const json& p : jo["points"]) {
      if (!p.is_array() || p.size() != 2)
        fail(Errc::IoError, "'" + path + "': outline point must be [row, col]");
      o.points.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    set.outlines.push_back(std::move(o));
  }
  return set;
}

void write_estimates(const std::string& path, const std::vector<OutlineEstimate>& estimates) {
  std::string s = "{\n  \"estimates\": [\n";
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const OutlineEstimate& e = estimates[i];
    s += "    {\"label\": " + std::to_string(e.label) +
         ", \"apex_row\": " + std::to_string(e.apex_row) +
         ", \"apex_col\": " + std::to_string(e.apex_col) +
         ", \"depth_m\": " + fmt_g9(e.match.best.depth) +
         ", \"designation\": " + std::to_string(e.match.best.size.designation) +
         ", \"diameter_m\": " + fmt_g9(e.match.best.size.diameter) +
         ", \"distance\": " + fmt_g9(e.match.distance) +
         ", \"runner_up_depth_m\": " + fmt_g9(e.match.runner_up.depth) +
         ", \"runner_up_designation\": " + std::to_string(e.match.runner_up.size.designation) +
         ", \"runner_up_distance\": " + fmt_g9(e.match.runner_up_distance) + "}";
    s += i + 1 < estimates.size() ? ",\n" : "\n";
  }
  s += "  ]\n}\n";
  write_text(path, s);
}

std::vector<OutlineEstimate> read_estimates(const std::string& path) {
  const json j = parse_json(path);
  std::vector<OutlineEstimate> out;
  if (!j.contains("estimates") || !j["estimates"].is_array())
    fail(Errc::IoError, "'" + path + "': missing 'estimates' array");
  for (const json& je : j["estimates"]) {
    OutlineEstimate e;
    e.label = jget_int(je, "label", path);
    e.apex_row = jget_int(je, "apex_row", path);
    e.apex_col = jget_int(je, "apex_col", path);
    e.match.best.depth = jget_num(je, "depth_m", path);
    e.match.best.size.designation = jget_int(je, "designation", path);
    e.match.best.size.diameter = jget_num(je, "diameter_m", path);
    e.match.distance = jget_num(je, "distance", path);
    e.match.runner_up.depth = jget_num(je, "runner_up_depth_m", path);
    e.match.runner_up.size = rebar_size_from_designation(jget_int(je, "runner_up_designation", path));
    e.match.runner_up_distance = jget_num(je, "runner_up_distance", path);
    out.push_back(std::move(e));
  }
  return out;
}

void write_report(const std::string& path, const EvaluationReport& rep) {
  std::string s = "{\n";
  s += "  \"cases\": " + std::to_string(rep.cases) + ",\n";
  s += "  \"bars\": " + std::to_string(rep.bars) + ",\n";
  s += "  \"detected\": " + std::to_string(rep.detected) + ",\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt_g9(*v) : std::string("null"); };
  s += "  \"depth_accuracy\": " + opt(rep.depth_accuracy) + ",\n";
  s += "  \"size_accuracy\": " + opt(rep.size_accuracy) + ",\n";
  s += "  \"size_accuracy_pm1\": " + opt(rep.size_accuracy_pm1) + ",\n";
  s += "  \"spurious_outlines\": " + std::to_string(rep.spurious_outlines) + ",\n";
  s += "  \"confusion\": [\n";
  for (std::size_t r = 0; r < rep.confusion.size(); ++r) {
    s += "    [";
    for (std::size_t c = 0; c < rep.confusion[r].size(); ++c) {
      if (c) s += ',';
      s += std::to_string(rep.confusion[r][c]);
    }
    s += ']';
    s += r + 1 < rep.confusion.size() ? ",\n" : "\n";
  }
  s += "  ],\n  \"per_rebar\": [\n";
  for (std::size_t i = 0; i < rep.per_rebar.size(); ++i) {
    const RebarRecord& r = rep.per_rebar[i];
    s += "    {\"case_id\": " + std::to_string(r.case_id) +
         ", \"bar_index\": " + std::to_string(r.bar_index) +
         ", \"true_x0_m\": " + fmt_g9(r.true_x0) + ", \"true_depth_m\": " + fmt_g9(r.true_depth) +
         ", \"true_designation\": " + std::to_string(r.true_designation) +
         ", \"est_depth_m\": " + fmt_g9(r.est_depth) +
         ", \"est_designation\": " + std::to_string(r.est_designation) +
         ", \"apex_row\": " + std::to_string(r.apex_row) +
         ", \"apex_col\": " + std::to_string(r.apex_col) +
         ", \"distance\": " + fmt_g9(r.distance) + "}";
    s += i + 1 < rep.per_rebar.size() ? ",\n" : "\n";
  }
  s += "  ],\n  \"failures\": [\n";
  for (std::size_t i = 0; i < rep.failures.size(); ++i) {
    const FailureRecord& f = rep.failures[i];
    s += "    {\"case_id\": " + std::to_string(f.case_id) +
         ", \"bar_index\": " + std::to_string(f.bar_index) +
         ", \"true_x0_m\": " + fmt_g9(f.true_x0) + ", \"true_depth_m\": " + fmt_g9(f.true_depth) +
         ", \"true_designation\": " + std::to_string(f.true_designation) +
         ", \"reason\": " + quote(f.reason) + "}";
    s += i + 1 < rep.failures.size() ? ",\n" : "\n";
  }
  s += "  ]\n}\n";
  write_text(path, s);
}

EvaluationReport read_report(const std::string& path) {
  const json j = parse_json(path);
  EvaluationReport rep;
  rep.cases = jget_int(j, "cases", path);
  rep.bars = jget_int(j, "bars", path);
  rep.detected = jget_int(j, "detected", path);
  auto opt = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  rep.depth_accuracy = opt("depth_accuracy");
  rep.size_accuracy = opt("size_accuracy");
  rep.size_accuracy_pm1 = opt("size_accuracy_pm1");
  rep.spurious_outlines = jget_int(j, "spurious_outlines", path);
  if (j.contains("confusion")) {
    const json& conf = j["confusion"];
    for (std::size_t r = 0; r < rep.confusion.size() && r < conf.size(); ++r)
      for (std::size_t c = 0; c < rep.confusion[r].size() && c < conf[r].size(); ++c)
        rep.confusion[r][c] = conf[r][c].get<int>();
  }
  for (const json& jr : j.value("per_rebar", json::array())) {
    RebarRecord r;
    r.case_id = jget_int(jr, "case_id", path);
    r.bar_index = jget_int(jr, "bar_index", path);
    r.true_x0 = jget_num(jr, "true_x0_m", path);
    r.true_depth = jget_num(jr, "true_depth_m", path);
    r.true_designation = jget_int(jr, "true_designation", path);
    r.est_depth = jget_num(jr, "est_depth_m", path);
    r.est_designation = jget_int(jr, "est_designation", path);
    r.apex_row = jget_int(jr, "apex_row", path);
    r.apex_col = jget_int(jr, "apex_col", path);
    r.distance = jget_num(jr, "distance", path);
    rep.per_rebar.push_back(r);
  }
  for (const json& jf : j.value("failures", json::array())) {
    FailureRecord f;
    f.case_id = jget_int(jf, "case_id", path);
    f.bar_index = jget_int(jf, "bar_index", path);
    f.true_x0 = jget_num(jf, "true_x0_m", path);
    f.true_depth = jget_num(jf, "true_depth_m", path);
    f.true_designation = jget_int(jf, "true_designation", path);
    f.reason = jget_str(jf, "reason", path);
    rep.failures.push_back(std::move(f));
  }
  return rep;
}

void write_pgm(const std::string& path, const Grid& image) {
  std::string s = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  s.reserve(s.size() + image.size());
  for (int r = 0; r < image.rows(); ++r)
    for (int c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image.at(r, c), 0.0, 1.0);
      s += static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
  write_text(path, s);
}

void write_pgm(const std::string& path, const BinaryMask& mask) {
  std::string s = "P5\n" + std::to_string(mask.cols) + " " + std::to_string(mask.rows) + "\n255\n";
  s.reserve(s.size() + mask.v.size());
  for (std::uint8_t v : mask.v) s += static_cast<char>(v ? 255 : 0);
  write_text(path, s);
}

void write_ppm(const std::string& path, int rows, int cols, const std::vector<Rgb>& pixels) {
  if (static_cast<std::size_t>(rows) * cols != pixels.size())
    fail(Errc::ConfigMismatch, "pixel buffer does not match the stated image size");
  std::string s = "P6\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  s.reserve(s.size() + pixels.size() * 3);
  for (const Rgb& px : pixels) {
    s += static_cast<char>(px.r);
    s += static_cast<char>(px.g);
    s += static_cast<char>(px.b);
  }
  write_text(path, s);
}

Rgb label_color(int label) {
  static const Rgb palette[] = {
      {230, 60, 60},  {60, 150, 230}, {70, 200, 110}, {240, 180, 50}, {170, 90, 230},
      {80, 210, 210}, {240, 120, 40}, {150, 210, 70}, {230, 90, 170}, {120, 120, 240},
      {200, 170, 110}, {90, 170, 120},
  };
  if (label <= 0) return {0, 0, 0};
  return palette[(label - 1) % (sizeof(palette) / sizeof(palette[0]))];
}

void write_ppm_labels(const std::string& path, const LabeledHyperbolas& labeled) {
  std::vector<Rgb> px(static_cast<std::size_t>(labeled.rows) * labeled.cols);
  for (int r = 0; r < labeled.rows; ++r)
    for (int c = 0; c < labeled.cols; ++c)
      px[static_cast<std::size_t>(r) * labeled.cols + c] = label_color(labeled.at(r, c));
  write_ppm(path, labeled.rows, labeled.cols, px);
}

namespace {

const char* skip_pnm_token(const char* p, const char* end, std::string& token) {
  while (p < end && (*p == ' ' || *p == '\n' || *p == '\r' || *p == '\t')) ++p;
  token.clear();
  while (p < end && *p != ' ' && *p != '\n' && *p != '\r' && *p != '\t') token += *p++;
  return p;
}

const char* read_pnm_header(const std::string& data, const std::string& path, const char* magic,
                            int& rows, int& cols) {
  const char* p = data.data();
  const char* end = p + data.size();
  std::string tok;
  p = skip_pnm_token(p, end, tok);
  if (tok != magic) fail(Errc::IoError, "'" + path + "': not a " + magic + " file");
  p = skip_pnm_token(p, end, tok);
  cols = std::atoi(tok.c_str());
  p = skip_pnm_token(p, end, tok);
  rows = std::atoi(tok.c_str());
  p = skip_pnm_token(p, end, tok);
  if (tok != "255") fail(Errc::IoError, "'" + path + "': expected maxval 255");
  if (rows <= 0 || cols <= 0) fail(Errc::IoError, "'" + path + "': bad image size");
  return p + 1;  // single whitespace byte after maxval
}

}  // namespace

Grid read_pgm(const std::string& path) {
  const std::string data = read_text(path);
  int rows = 0, cols = 0;
  const char* p = read_pnm_header(data, path, "P5", rows, cols);
  if (p + static_cast<std::size_t>(rows) * cols > data.data() + data.size())
    fail(Errc::IoError, "'" + path + "': truncated pixel data");
  Grid g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      g.at(r, c) = static_cast<unsigned char>(*p++) / 255.0;
  return g;
}

void read_ppm(const std::string& path, int& rows, int& cols, std::vector<Rgb>& pixels) {
  const std::string data = read_text(path);
  const char* p = read_pnm_header(data, path, "P6", rows, cols);
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (p + n * 3 > data.data() + data.size())
    fail(Errc::IoError, "'" + path + "': truncated pixel data");
  pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pixels[i].r = static_cast<unsigned char>(*p++);
    pixels[i].g = static_cast<unsigned char>(*p++);
    pixels[i].b = static_cast<unsigned char>(*p++);
  }
}

const char* distance_mode_name(DistanceMode mode) {
  return mode == DistanceMode::Vertical ? "vertical" : "euclidean";
}

DistanceMode parse_distance_mode(const std::string& name) {
  if (name == "euclidean") return DistanceMode::Euclidean;
  if (name == "vertical") return DistanceMode::Vertical;
  fail(Errc::ConfigError, "unknown distance mode '" + name + "' (euclidean or vertical)");
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.radar = default_radar_config();
  cfg.depths = default_depth_grid();
  return cfg;
}

void write_run_config(const std::string& path, const RunConfig& cfg) {
  const PipelineParams& pp = cfg.pipeline;
  std::string s = "{\n";
  append_radar(s, cfg.radar, "  ");
  s += ",\n";
  s += "  \"threshold_factor\": " + fmt_exact(pp.threshold_factor) + ",\n";
  s += "  \"open_size\": " + std::to_string(pp.open_size) + ",\n";
  s += "  \"window_frac\": " + fmt_exact(pp.window_frac) + ",\n";
  s += "  \"fill_kernel_size\": " + std::to_string(pp.fill.kernel_size) + ",\n";
  s += "  \"fill_threshold\": " + fmt_exact(pp.fill.threshold) + ",\n";
  s += "  \"fill_max_iters\": " + std::to_string(pp.fill.max_iters) + ",\n";
  s += "  \"ransac_window\": " + std::to_string(pp.ransac.window) + ",\n";
  s += "  \"ransac_stride\": " + std::to_string(pp.ransac.stride) + ",\n";
  s += "  \"ransac_iterations\": " + std::to_string(pp.ransac.iterations) + ",\n";
  s += "  \"ransac_min_inliers\": " + std::to_string(pp.ransac.min_inliers) + ",\n";
  s += "  \"ransac_inlier_dist\": " + fmt_exact(pp.ransac.inlier_dist) + ",\n";
  s += "  \"ransac_min_slope\": " + fmt_exact(pp.ransac.min_slope) + ",\n";
  s += "  \"ransac_slope_tolerance\": " + fmt_exact(pp.ransac.slope_tolerance) + ",\n";
  s += "  \"ransac_merge_radius\": " + fmt_exact(pp.ransac.merge_radius) + ",\n";
  s += "  \"ransac_flank_cols\": " + std::to_string(pp.ransac.flank_cols) + ",\n";
  s += "  \"ransac_flank_margin\": " + fmt_exact(pp.ransac.flank_margin) + ",\n";
  s += "  \"erosion_rows\": " + std::to_string(pp.separation.erosion_rows) + ",\n";
  s += "  \"erosion_cols\": " + std::to_string(pp.separation.erosion_cols) + ",\n";
  s += "  \"erase_below_rows\": " + std::to_string(pp.separation.erase_below_rows) + ",\n";
  s += "  \"erase_above_rows\": " + std::to_string(pp.separation.erase_above_rows) + ",\n";
  s += "  \"scale_erosion\": " + std::string(pp.scale_erosion ? "true" : "false") + ",\n";
  s += "  \"join_radius\": " + fmt_exact(pp.separation.join_radius) + ",\n";
  s += "  \"bridge_tolerance\": " + fmt_exact(pp.separation.bridge_tolerance) + ",\n";
  s += "  \"apex_reject_radius\": " + fmt_exact(pp.separation.apex_reject_radius) + ",\n";
  s += "  \"min_component_px\": " + std::to_string(pp.separation.min_component_px) + ",\n";
  s += "  \"min_outline_points\": " + std::to_string(pp.min_outline_points) + ",\n";
  s += "  \"min_apex_flank\": " + std::to_string(pp.min_apex_flank) + ",\n";
  s += "  \"pair_tolerance_cols\": " + std::to_string(pp.pair_tolerance_cols) + ",\n";
  s += "  \"distance_mode\": " + quote(distance_mode_name(pp.match.mode)) + ",\n";
  s += "  \"match_min_points\": " + std::to_string(pp.match.min_points) + ",\n";
  s += "  \"depths_m\": [";
  for (std::size_t i = 0; i < cfg.depths.size(); ++i) {
    if (i) s += ',';
    s += fmt_exact(cfg.depths[i]);
  }
  s += "],\n";
  s += "  \"noise_sigma\": " + fmt_exact(cfg.noise_sigma) + ",\n";
  s += "  \"seed\": " + std::to_string(cfg.seed) + ",\n";
  s += "  \"direct_wave_rows\": " + std::to_string(cfg.direct_wave_rows) + ",\n";
  s += "  \"jobs\": " + std::to_string(cfg.jobs) + "\n";
  s += "}\n";
  write_text(path, s);
}

RunConfig load_run_config(const std::string& path) {
  const json j = parse_json(path);
  if (!j.is_object()) fail(Errc::ConfigError, "'" + path + "': config must be a JSON object");
  RunConfig cfg = default_run_config();

  static const char* known[] = {
      "n_samples", "n_traces", "dt_ns", "dx_m", "time_zero_row", "eps_r", "center_freq_ghz",
      "threshold_factor", "open_size", "window_frac", "fill_kernel_size", "fill_threshold",
      "fill_max_iters", "ransac_window", "ransac_stride", "ransac_iterations", "ransac_min_inliers",
      "ransac_inlier_dist", "ransac_min_slope", "ransac_slope_tolerance", "ransac_merge_radius",
      "ransac_flank_cols", "ransac_flank_margin",
      "erosion_rows", "erosion_cols", "erase_below_rows", "erase_above_rows", "scale_erosion", "join_radius",
      "bridge_tolerance", "apex_reject_radius",
      "min_component_px", "min_outline_points", "min_apex_flank", "pair_tolerance_cols",
      "distance_mode",
      "match_min_points", "depths_m", "noise_sigma", "seed", "direct_wave_rows", "jobs"};
  for (const auto& item : j.items()) {
    bool found = false;
    for (const char* k : known) found = found || item.key() == k;
    if (!found) fail(Errc::ConfigError, "'" + path + "': unknown config key '" + item.key() + "'");
  }

  RadarConfig base = cfg.radar;
  auto num = [&](const char* key, double fallback) {
    return j.contains(key) ? jget_num(j, key, path) : fallback;
  };
  auto iget = [&](const char* key, int fallback) {
    return j.contains(key) ? jget_int(j, key, path) : fallback;
  };
  cfg.radar = make_radar_config(num("center_freq_ghz", base.center_frequency / 1e9) * 1e9,
                                num("eps_r", base.relative_permittivity),
                                num("dt_ns", base.dt * 1e9) * 1e-9, num("dx_m", base.dx),
                                iget("n_samples", base.n_samples), iget("n_traces", base.n_traces),
                                iget("time_zero_row", base.time_zero_row));

  PipelineParams& pp = cfg.pipeline;
  pp.threshold_factor = num("threshold_factor", pp.threshold_factor);
  pp.open_size = iget("open_size", pp.open_size);
  pp.window_frac = num("window_frac", pp.window_frac);
  pp.fill.kernel_size = iget("fill_kernel_size", pp.fill.kernel_size);
  pp.fill.threshold = num("fill_threshold", pp.fill.threshold);
  pp.fill.max_iters = iget("fill_max_iters", pp.fill.max_iters);
  pp.ransac.window = iget("ransac_window", pp.ransac.window);
  pp.ransac.stride = iget("ransac_stride", pp.ransac.stride);
  pp.ransac.iterations = iget("ransac_iterations", pp.ransac.iterations);
  pp.ransac.min_inliers = iget("ransac_min_inliers", pp.ransac.min_inliers);
  pp.ransac.inlier_dist = num("ransac_inlier_dist", pp.ransac.inlier_dist);
  pp.ransac.min_slope = num("ransac_min_slope", pp.ransac.min_slope);
  pp.ransac.slope_tolerance = num("ransac_slope_tolerance", pp.ransac.slope_tolerance);
  pp.ransac.merge_radius = num("ransac_merge_radius", pp.ransac.merge_radius);
  pp.ransac.flank_cols = iget("ransac_flank_cols", pp.ransac.flank_cols);
  pp.ransac.flank_margin = num("ransac_flank_margin", pp.ransac.flank_margin);
  pp.separation.erosion_rows = iget("erosion_rows", pp.separation.erosion_rows);
  pp.separation.erosion_cols = iget("erosion_cols", pp.separation.erosion_cols);
  pp.separation.erase_below_rows = iget("erase_below_rows", pp.separation.erase_below_rows);
  pp.separation.erase_above_rows = iget("erase_above_rows", pp.separation.erase_above_rows);
  if (j.contains("scale_erosion")) {
    if (!j["scale_erosion"].is_boolean())
      fail(Errc::ConfigError, "'" + path + "': scale_erosion must be true or false");
    pp.scale_erosion = j["scale_erosion"].get<bool>();
  }
  pp.separation.join_radius = num("join_radius", pp.separation.join_radius);
  pp.separation.bridge_tolerance = num("bridge_tolerance", pp.separation.bridge_tolerance);
  pp.separation.apex_reject_radius = num("apex_reject_radius", pp.separation.apex_reject_radius);
  pp.separation.min_component_px = iget("min_component_px", pp.separation.min_component_px);
  pp.min_outline_points = iget("min_outline_points", pp.min_outline_points);
  pp.min_apex_flank = iget("min_apex_flank", pp.min_apex_flank);
  pp.pair_tolerance_cols = iget("pair_tolerance_cols", pp.pair_tolerance_cols);
  if (j.contains("distance_mode")) pp.match.mode = parse_distance_mode(jget_str(j, "distance_mode", path));
  pp.match.min_points = iget("match_min_points", pp.match.min_points);

  if (j.contains("depths_m")) {
    if (!j["depths_m"].is_array() || j["depths_m"].empty())
      fail(Errc::ConfigError, "'" + path + "': depths_m must be a non-empty array");
    cfg.depths.clear();
    for (const json& v : j["depths_m"]) cfg.depths.push_back(v.get<double>());
  }
  cfg.noise_sigma = num("noise_sigma", cfg.noise_sigma);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0)
      fail(Errc::ConfigError, "'" + path + "': seed must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.direct_wave_rows = iget("direct_wave_rows", cfg.direct_wave_rows);
  cfg.jobs = iget("jobs", cfg.jobs);
  return cfg;
}

}  // namespace gprbar
