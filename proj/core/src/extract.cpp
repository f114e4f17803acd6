#include "gprbar/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace gprbar {

namespace {

struct Integral {
  int rows, cols;
  std::vector<std::int64_t> s;  // (rows+1) x (cols+1)

  explicit Integral(const BinaryMask& m) : rows(m.rows), cols(m.cols), s(std::size_t(rows + 1) * (cols + 1), 0) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        s[idx(r + 1, c + 1)] = m.at(r, c) + s[idx(r, c + 1)] + s[idx(r + 1, c)] - s[idx(r, c)];
  }
  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * (cols + 1) + c; }

  // Sum over rows [r0, r1] x cols [c0, c1], clipped to the grid.
  std::int64_t sum(int r0, int c0, int r1, int c1) const {
    r0 = std::max(r0, 0); c0 = std::max(c0, 0);
    r1 = std::min(r1, rows - 1); c1 = std::min(c1, cols - 1);
    if (r0 > r1 || c0 > c1) return 0;
    return s[idx(r1 + 1, c1 + 1)] - s[idx(r0, c1 + 1)] - s[idx(r1 + 1, c0)] + s[idx(r0, c0)];
  }
};

}  // namespace

int BinaryMask::count() const {
  int n = 0;
  for (auto x : v) n += x != 0;
  return n;
}

BinaryMask binarize_background(const Grid& g, const RegionSplit& split, double b) {
  if (!std::isfinite(b) || b <= 1.0)
    fail(Errc::InvalidThresholdFactor, "threshold factor must be > 1");
  const int t_tp = split.transition_row;
  if (t_tp < 0 || t_tp >= g.rows()) fail(Errc::ConfigError, "transition row outside grid");

  double mx = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t n = 0;
  for (int r = t_tp; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) {
      const double v = g.at(r, c);
      mx = std::max(mx, v);
      sum += v;
      ++n;
    }
  const double mean = sum / static_cast<double>(n);
  const double thr = (mx - mean) / b + mean;

  BinaryMask mask(g.rows(), g.cols());
  for (int r = t_tp; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      if (g.at(r, c) > thr) mask.at(r, c) = 1;
  return mask;
}

BinaryMask fill_gaps(const BinaryMask& mask, const FillParams& params) {
  if (params.kernel_size < 3 || params.kernel_size % 2 == 0)
    fail(Errc::InvalidStructuringElement, "fill kernel must be odd and >= 3");
  const int h = params.kernel_size / 2;
  const double area = static_cast<double>(h) * h;

  BinaryMask cur = mask;
  for (int iter = 0; iter < params.max_iters; ++iter) {
    Integral integral(cur);
    std::vector<std::pair<int, int>> fills;
    for (int r = 0; r < cur.rows; ++r) {
      for (int c = 0; c < cur.cols; ++c) {
        if (cur.at(r, c)) continue;
        if (integral.sum(r - h, c - h, r + h, c + h) == 0) continue;
        const double ul = integral.sum(r - h, c - h, r - 1, c - 1) / area;
        const double lr = integral.sum(r + 1, c + 1, r + h, c + h) / area;
        const double ur = integral.sum(r - h, c + 1, r - 1, c + h) / area;
        const double ll = integral.sum(r + 1, c - h, r + h, c - 1) / area;
        if (ul * lr > params.threshold || ur * ll > params.threshold) fills.emplace_back(r, c);
      }
    }
    if (fills.empty()) break;
    for (auto [r, c] : fills) cur.at(r, c) = 1;
  }
  return cur;
}

namespace {

struct Line {
  double a = 0.0, s = 0.0;  // row = a + s * col
  std::vector<int> inliers; // indices into the window's point list
};

struct Pt {
  int r, c;
};

bool ransac_line(const std::vector<Pt>& pts, const std::vector<char>& excluded,
                 const RansacParams& p, std::mt19937_64& rng, Line& out) {
  std::vector<int> avail;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    if (!excluded[i]) avail.push_back(i);
  if (static_cast<int>(avail.size()) < p.min_inliers) return false;

  std::uniform_int_distribution<int> pick(0, static_cast<int>(avail.size()) - 1);
  int best_count = 0;
  double best_a = 0.0, best_s = 0.0;
  for (int it = 0; it < p.iterations; ++it) {
    const Pt& p1 = pts[avail[pick(rng)]];
    const Pt& p2 = pts[avail[pick(rng)]];
    if (p1.c == p2.c) continue;
    const double s = double(p2.r - p1.r) / double(p2.c - p1.c);
    const double a = p1.r - s * p1.c;
    const double norm = std::sqrt(1.0 + s * s);
    int count = 0;
    for (int i : avail) {
      const double d = std::abs(pts[i].r - (a + s * pts[i].c)) / norm;
      if (d <= p.inlier_dist) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best_a = a;
      best_s = s;
    }
  }
  if (best_count < p.min_inliers) return false;

  // One least-squares refinement over the inliers of the best proposal.
  const double norm = std::sqrt(1.0 + best_s * best_s);
  double sc = 0, sr = 0, scc = 0, scr = 0;
  int n = 0;
  for (int i : avail) {
    const double d = std::abs(pts[i].r - (best_a + best_s * pts[i].c)) / norm;
    if (d > p.inlier_dist) continue;
    sc += pts[i].c;
    sr += pts[i].r;
    scc += double(pts[i].c) * pts[i].c;
    scr += double(pts[i].c) * pts[i].r;
    ++n;
  }
  const double den = n * scc - sc * sc;
  if (n >= 2 && std::abs(den) > 1e-9) {
    out.s = (n * scr - sc * sr) / den;
    out.a = (sr - out.s * sc) / n;
  } else {
    out.s = best_s;
    out.a = best_a;
  }
  const double rnorm = std::sqrt(1.0 + out.s * out.s);
  out.inliers.clear();
  for (int i : avail) {
    const double d = std::abs(pts[i].r - (out.a + out.s * pts[i].c)) / rnorm;
    if (d <= p.inlier_dist) out.inliers.push_back(i);
  }
  return static_cast<int>(out.inliers.size()) >= p.min_inliers;
}

// Support must flank the crossing along the line's own direction. A limb whose
// inliers all sit on one side (a fitted edge of a single wing) spans rows both
// above and below the crossing, so axis-aligned checks pass it; the projected
// offset does not.
bool straddles(const std::vector<Pt>& pts, const Line& line, double cx, double cy) {
  const double norm = std::sqrt(1.0 + line.s * line.s);
  int before = 0, after = 0;
  for (int i : line.inliers) {
    const double off = ((pts[i].c - cx) + line.s * (pts[i].r - cy)) / norm;
    if (off < -2.0) ++before;
    if (off > 2.0) ++after;
  }
  return before >= 3 && after >= 3;
}

}  // namespace

std::vector<IntersectionPoint> detect_intersections(const BinaryMask& mask,
                                                    const RansacParams& params) {
  struct Candidate {
    double r, c, s_neg, s_pos;
  };
  std::vector<Candidate> cands;

  const int w = params.window;
  for (int wr = 0; wr + w <= mask.rows || wr == 0; wr += params.stride) {
    for (int wc = 0; wc + w <= mask.cols || wc == 0; wc += params.stride) {
      const int r1 = std::min(wr + w, mask.rows);
      const int c1 = std::min(wc + w, mask.cols);
      std::vector<Pt> pts;
      for (int r = wr; r < r1; ++r)
        for (int c = wc; c < c1; ++c)
          if (mask.at(r, c)) pts.push_back({r, c});
      if (static_cast<int>(pts.size()) < 2 * params.min_inliers) continue;

      std::mt19937_64 rng(mix_seed(params.seed, (std::uint64_t(wr) << 20) ^ std::uint64_t(wc)));
      std::vector<char> excluded(pts.size(), 0);
      Line l1, l2;
      if (!ransac_line(pts, excluded, params, rng, l1)) continue;
      for (int i : l1.inliers) excluded[i] = 1;
      if (!ransac_line(pts, excluded, params, rng, l2)) continue;

      const double s1 = l1.s, s2 = l2.s;
      if (s1 * s2 >= 0.0) continue;
      if (std::abs(s1) < params.min_slope || std::abs(s2) < params.min_slope) continue;
      if (std::abs(s1 + s2) > params.slope_tolerance) continue;
      const double cx = (l2.a - l1.a) / (s1 - s2);
      const double cy = l1.a + s1 * cx;
      if (cx < wc || cx >= c1 || cy < wr || cy >= r1) continue;
      if (!straddles(pts, l1, cx, cy) || !straddles(pts, l2, cx, cy)) continue;
      cands.push_back({cy, cx, std::min(s1, s2), std::max(s1, s2)});
    }
    if (w >= mask.rows && wr == 0) break;
  }

  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return std::tie(a.r, a.c) < std::tie(b.r, b.c); });

  struct Cluster {
    double r = 0, c = 0, sn = 0, sp = 0;
    int n = 0;
  };
  std::vector<Cluster> clusters;
  for (const Candidate& cand : cands) {
    bool merged = false;
    for (Cluster& cl : clusters) {
      const double dr = cand.r - cl.r / cl.n;
      const double dc = cand.c - cl.c / cl.n;
      if (std::hypot(dr, dc) <= params.merge_radius) {
        cl.r += cand.r;
        cl.c += cand.c;
        cl.sn += cand.s_neg;
        cl.sp += cand.s_pos;
        ++cl.n;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({cand.r, cand.c, cand.s_neg, cand.s_pos, 1});
  }

  // Topmost set row per column, for the valley test below.
  std::vector<int> top(mask.cols, mask.rows);
  for (int c = 0; c < mask.cols; ++c)
    for (int r = 0; r < mask.rows; ++r)
      if (mask.at(r, c)) {
        top[c] = r;
        break;
      }
  auto top_near = [&](int c) {
    int t = mask.rows;
    for (int cc = std::max(0, c - 2); cc <= std::min(mask.cols - 1, c + 2); ++cc)
      t = std::min(t, top[cc]);
    return t;
  };

  std::vector<IntersectionPoint> out;
  for (const Cluster& cl : clusters) {
    IntersectionPoint ip;
    ip.row = static_cast<int>(std::lround(cl.r / cl.n));
    ip.col = static_cast<int>(std::lround(cl.c / cl.n));
    ip.left_slope = cl.sn / cl.n;
    ip.right_slope = cl.sp / cl.n;
    // Wings must come down into the crossing from both sides. An apex dome
    // passes the line fits (its arch is solid), but its flanks lie deeper, not
    // higher, so it fails here.
    const int here = top_near(ip.col);
    const int left = top_near(ip.col - params.flank_cols);
    const int right = top_near(ip.col + params.flank_cols);
    if (left > here - params.flank_margin || right > here - params.flank_margin) continue;
    out.push_back(ip);
  }
  std::sort(out.begin(), out.end(), [](const IntersectionPoint& a, const IntersectionPoint& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  return out;
}

SeparationParams scaled_separation(const RadarConfig& config) {
  SeparationParams p;
  const double dt_ref = 10.0e-9 / 512.0;
  const double dx_ref = 0.005;
  p.erosion_cols = std::max(1, static_cast<int>(std::lround(30.0 * dx_ref / config.dx)));
  p.erosion_rows = std::max(1, static_cast<int>(std::lround(30.0 * dt_ref / config.dt)));
  p.erase_below_rows = std::max(1, static_cast<int>(std::lround(60.0 * dt_ref / config.dt)));
  p.erase_above_rows = std::max(1, static_cast<int>(std::lround(20.0 * dt_ref / config.dt)));
  return p;
}

namespace {

struct Component {
  int id = 0;
  int min_col = 0, max_col = 0, min_row = 0, max_row = 0;
  long px = 0;
  std::vector<int> top;  // topmost row per column, min_col..max_col, -1 where absent
  int apex_row = 0, apex_col = 0;

  int top_at(int c) const { return top[c - min_col]; }
};

// Least-squares slope of the outline profile over up-to-8 columns at one end.
// Returns false when the component spans too few columns for a stable fit.
bool end_slope(const Component& comp, bool left_end, double& slope) {
  std::vector<std::pair<int, int>> pts;  // (col, row)
  const int span = comp.max_col - comp.min_col + 1;
  if (left_end) {
    for (int c = comp.min_col; c < comp.min_col + std::min(8, span); ++c)
      if (comp.top_at(c) >= 0) pts.emplace_back(c, comp.top_at(c));
  } else {
    for (int c = std::max(comp.min_col, comp.max_col - 7); c <= comp.max_col; ++c)
      if (comp.top_at(c) >= 0) pts.emplace_back(c, comp.top_at(c));
  }
  if (pts.size() < 3) return false;
  double sc = 0, sr = 0, scc = 0, scr = 0;
  for (auto [c, r] : pts) {
    sc += c;
    sr += r;
    scc += double(c) * c;
    scr += double(c) * r;
  }
  const double n = static_cast<double>(pts.size());
  const double den = n * scc - sc * sc;
  if (std::abs(den) < 1e-9) return false;
  slope = (n * scr - sc * sr) / den;
  return true;
}

struct Endpoint {
  int row, col;
  bool left;  // which end of the component it is
};

Endpoint endpoint_of(const Component& comp, bool left) {
  if (left) return {comp.top_at(comp.min_col), comp.min_col, true};
  return {comp.top_at(comp.max_col), comp.max_col, false};
}

struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

void draw_segment(LabeledHyperbolas& lab, int r0, int c0, int r1, int c1, int label) {
  const int dr = std::abs(r1 - r0), dc = std::abs(c1 - c0);
  const int steps = std::max(dr, dc);
  for (int i = 0; i <= steps; ++i) {
    const double t = steps ? static_cast<double>(i) / steps : 0.0;
    const int r = static_cast<int>(std::lround(r0 + t * (r1 - r0)));
    const int c = static_cast<int>(std::lround(c0 + t * (c1 - c0)));
    if (r >= 0 && r < lab.rows && c >= 0 && c < lab.cols) lab.at(r, c) = label;
  }
}

}  // namespace

LabeledHyperbolas separate_hyperbolas(const BinaryMask& mask,
                                      const std::vector<IntersectionPoint>& crossings,
                                      const SeparationParams& params) {
  BinaryMask cut = mask;
  const int hr = params.erosion_rows / 2;
  const int hc = params.erosion_cols / 2;
  for (const IntersectionPoint& ip : crossings) {
    // A square cut alone cannot sever strokes about as thick as the square is
    // tall: they slip around its lower corners and reconnect underneath, and
    // the reconnected remnant surfaces as a peak-shaped phantom outline. The
    // cut therefore continues downward far enough to pass below any stroke
    // entering the square, and upward past the strokes' top contact, which
    // lies about half a thickness above the mid-stroke crossing fit.
    const int bottom = ip.row - hr + params.erosion_rows - 1 + params.erase_below_rows;
    for (int r = std::max(0, ip.row - hr - params.erase_above_rows); r <= std::min(cut.rows - 1, bottom); ++r)
      for (int c = std::max(0, ip.col - hc); c <= std::min(cut.cols - 1, ip.col - hc + params.erosion_cols - 1); ++c)
        cut.at(r, c) = 0;
  }

  // Two-pass 8-connected labeling with union-find.
  std::vector<int> provisional(static_cast<std::size_t>(cut.rows) * cut.cols, 0);
  DSU dsu(1);
  int next = 1;
  auto prov = [&](int r, int c) -> int& { return provisional[static_cast<std::size_t>(r) * cut.cols + c]; };
  for (int r = 0; r < cut.rows; ++r) {
    for (int c = 0; c < cut.cols; ++c) {
      if (!cut.at(r, c)) continue;
      int best = 0;
      for (auto [dr, dc] : {std::pair{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}}) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || cc < 0 || cc >= cut.cols) continue;
        const int lbl = prov(rr, cc);
        if (!lbl) continue;
        if (!best) {
          best = lbl;
        } else if (dsu.find(lbl) != dsu.find(best)) {
          dsu.unite(lbl, best);
          best = std::min(dsu.find(lbl), dsu.find(best));
        }
      }
      if (!best) {
        dsu.parent.push_back(next);
        best = next++;
      }
      prov(r, c) = best;
    }
  }

  // Gather components above the size floor.
  std::vector<int> root_to_comp(next, -1);
  std::vector<Component> comps;
  {
    std::vector<long> px(next, 0);
    std::vector<int> cmin(next, INT32_MAX), cmax(next, -1), rmin(next, INT32_MAX), rmax(next, -1);
    for (int r = 0; r < cut.rows; ++r)
      for (int c = 0; c < cut.cols; ++c)
        if (prov(r, c)) {
          const int root = dsu.find(prov(r, c));
          ++px[root];
          cmin[root] = std::min(cmin[root], c);
          cmax[root] = std::max(cmax[root], c);
          rmin[root] = std::min(rmin[root], r);
          rmax[root] = std::max(rmax[root], r);
        }
    for (int root = 1; root < next; ++root) {
      if (px[root] < params.min_component_px) continue;
      Component comp;
      comp.id = static_cast<int>(comps.size());
      comp.px = px[root];
      comp.min_col = cmin[root];
      comp.max_col = cmax[root];
      comp.min_row = rmin[root];
      comp.max_row = rmax[root];
      comp.top.assign(comp.max_col - comp.min_col + 1, -1);
      root_to_comp[root] = comp.id;
      comps.push_back(std::move(comp));
    }
    for (int r = 0; r < cut.rows; ++r)
      for (int c = 0; c < cut.cols; ++c)
        if (prov(r, c)) {
          const int id = root_to_comp[dsu.find(prov(r, c))];
          if (id < 0) continue;
          int& t = comps[id].top[c - comps[id].min_col];
          if (t < 0 || r < t) t = r;
        }
    for (Component& comp : comps) {
      comp.apex_row = INT32_MAX;
      for (int c = comp.min_col; c <= comp.max_col; ++c) {
        const int t = comp.top_at(c);
        if (t >= 0 && t < comp.apex_row) {
          comp.apex_row = t;
          comp.apex_col = c;
        }
      }
    }
  }

  // Candidate joins: nearest endpoints within join_radius, evaluated in distance order.
  struct Join {
    double dist;
    long bbox;
    int a, b;
    Endpoint ea, eb;
  };
  std::vector<Join> joins;
  for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(comps.size()); ++j) {
      double best = std::numeric_limits<double>::infinity();
      Endpoint bea{}, beb{};
      for (bool la : {true, false}) {
        for (bool lb : {true, false}) {
          const Endpoint ea = endpoint_of(comps[i], la);
          const Endpoint eb = endpoint_of(comps[j], lb);
          const double d = std::hypot(ea.row - eb.row, ea.col - eb.col);
          if (d < best) {
            best = d;
            bea = ea;
            beb = eb;
          }
        }
      }
      if (best > params.join_radius) continue;
      const long w = std::max(comps[i].max_col, comps[j].max_col) - std::min(comps[i].min_col, comps[j].min_col) + 1;
      const long h = std::max(comps[i].max_row, comps[j].max_row) - std::min(comps[i].min_row, comps[j].min_row) + 1;
      joins.push_back({best, w * h, i, j, bea, beb});
    }
  }
  std::sort(joins.begin(), joins.end(), [](const Join& x, const Join& y) {
    return std::tie(x.dist, x.bbox, x.a, x.b) < std::tie(y.dist, y.bbox, y.a, y.b);
  });

  DSU groups(static_cast<int>(comps.size()));
  std::vector<Join> bridges;
  for (const Join& jn : joins) {
    if (groups.find(jn.a) == groups.find(jn.b)) continue;

    Endpoint ea = jn.ea, eb = jn.eb;
    const Component* ca = &comps[jn.a];
    const Component* cb = &comps[jn.b];
    if (eb.col < ea.col || (eb.col == ea.col && eb.row < ea.row)) {
      std::swap(ea, eb);
      std::swap(ca, cb);
    }
    double sa = 0.0, sb = 0.0;
    const bool ha = end_slope(*ca, ea.left, sa);
    const bool hb = end_slope(*cb, eb.left, sb);
    const int dc = eb.col - ea.col;

    bool ok;
    if (!ha || !hb) {
      ok = true;  // too short for a slope fit: accept on distance alone
    } else if (dc < 3) {
      // Vertically stacked pieces of one steep wing continue with the same sign.
      ok = (sa > 0) == (sb > 0) && std::abs(sa) >= 1.5 && std::abs(sb) >= 1.5;
    } else {
      // Both ends extrapolated to the gap midpoint must meet; this accepts wing
      // continuations and apex bridges but rejects valley joins of two wings.
      const double pa = ea.row + sa * (dc / 2.0);
      const double pb = eb.row - sb * (dc / 2.0);
      ok = std::abs(pa - pb) <= params.bridge_tolerance && !(sa > 0.1 && sb < -0.1);
      if (ok && sa < -0.1 && sb > 0.1) {
        // A peak-shaped join next to a crossing is the pair of stubs below an X
        // of two different wings, not a cut apex: keep them separated.
        const double mr = (ea.row + eb.row) / 2.0;
        const double mc = (ea.col + eb.col) / 2.0;
        for (const IntersectionPoint& ip : crossings) {
          if (std::hypot(ip.row - mr, ip.col - mc) <= params.apex_reject_radius) {
            ok = false;
            break;
          }
        }
      }
    }
    if (!ok) continue;
    if (groups.unite(jn.a, jn.b)) bridges.push_back(jn);
  }

  // Final labels ordered by apex column of each merged group.
  struct GroupInfo {
    int root;
    int apex_row = INT32_MAX, apex_col = INT32_MAX;
  };
  std::vector<GroupInfo> ginfo;
  std::vector<int> root_index(comps.size(), -1);
  for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
    const int root = groups.find(i);
    if (root_index[root] < 0) {
      root_index[root] = static_cast<int>(ginfo.size());
      ginfo.push_back({root});
    }
    GroupInfo& gi = ginfo[root_index[root]];
    if (comps[i].apex_row < gi.apex_row ||
        (comps[i].apex_row == gi.apex_row && comps[i].apex_col < gi.apex_col)) {
      gi.apex_row = comps[i].apex_row;
      gi.apex_col = comps[i].apex_col;
    }
  }
  std::sort(ginfo.begin(), ginfo.end(), [](const GroupInfo& x, const GroupInfo& y) {
    return std::tie(x.apex_col, x.apex_row, x.root) < std::tie(y.apex_col, y.apex_row, y.root);
  });

  LabeledHyperbolas lab;
  lab.rows = cut.rows;
  lab.cols = cut.cols;
  lab.labels.assign(static_cast<std::size_t>(cut.rows) * cut.cols, 0);
  lab.count = static_cast<int>(ginfo.size());
  std::vector<int> final_label(comps.size(), 0);
  for (int g = 0; g < static_cast<int>(ginfo.size()); ++g) {
    for (int i = 0; i < static_cast<int>(comps.size()); ++i)
      if (groups.find(i) == ginfo[g].root) final_label[i] = g + 1;
  }
  for (int r = 0; r < cut.rows; ++r)
    for (int c = 0; c < cut.cols; ++c)
      if (prov(r, c)) {
        const int id = root_to_comp[dsu.find(prov(r, c))];
        if (id >= 0) lab.at(r, c) = final_label[id];
      }
  for (const Join& jn : bridges)
    draw_segment(lab, jn.ea.row, jn.ea.col, jn.eb.row, jn.eb.col, final_label[jn.a]);
  return lab;
}

OutlineSet extract_outlines(const LabeledHyperbolas& labeled, int min_outline_points,
                            int min_apex_flank) {
  OutlineSet out;
  for (int lbl = 1; lbl <= labeled.count; ++lbl) {
    HyperbolaOutline o;
    o.label = lbl;
    for (int c = 0; c < labeled.cols; ++c) {
      for (int r = 0; r < labeled.rows; ++r) {
        if (labeled.at(r, c) == lbl) {
          o.points.push_back({r, c});
          break;
        }
      }
    }
    if (static_cast<int>(o.points.size()) < min_outline_points) {
      out.warnings.push_back("label " + std::to_string(lbl) + " dropped: outline has " +
                             std::to_string(o.points.size()) + " columns, need " +
                             std::to_string(min_outline_points));
      continue;
    }
    // Rounded rows flatten the apex into a run of equal-row columns; the run's
    // median column recovers the true apex, where a leftmost rule would sit a
    // few columns off and shear every later curve comparison.
    int min_row = o.points.front().row;
    for (const OutlinePoint& p : o.points) min_row = std::min(min_row, p.row);
    std::vector<const OutlinePoint*> tops;
    for (const OutlinePoint& p : o.points)
      if (p.row == min_row) tops.push_back(&p);
    o.apex = *tops[(tops.size() - 1) / 2];
    // A severed wing remnant rises monotonically to one end, so its highest
    // point sits at the outline boundary; a usable apex has columns both sides.
    if (o.apex.col - o.points.front().col < min_apex_flank ||
        o.points.back().col - o.apex.col < min_apex_flank) {
      out.warnings.push_back("label " + std::to_string(lbl) +
                             " dropped: apex column lacks flank support");
      continue;
    }
    out.outlines.push_back(std::move(o));
  }
  return out;
}

}  // namespace gprbar
