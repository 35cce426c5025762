#include "minudesc/minutiae.hpp"

#include <algorithm>
#include <cmath>

namespace minudesc {

void MinutiaeParams::validate() const {
  if (block < 4) throw Error(Errc::invalid_parameter, "minutiae: block must be >= 4");
  if (binarize_window < 3 || binarize_window % 2 == 0)
    throw Error(Errc::invalid_parameter, "minutiae: binarize_window must be odd and >= 3");
  if (merge_distance <= 0 || border_exclusion < 0 || min_spur_length < 0)
    throw Error(Errc::invalid_parameter, "minutiae: invalid distances");
}

double OrientationField::at_pixel(int x, int y) const {
  int i = std::clamp(x / block, 0, bx - 1);
  int j = std::clamp(y / block, 0, by - 1);
  return block_angle(i, j);
}

OrientationField orientation_field(const GrayImage& img, int block, double coherence_threshold,
                                   double energy_threshold) {
  const int w = img.width, h = img.height;
  if (block < 4 || w / block < 2 || h / block < 2)
    throw Error(Errc::invalid_parameter,
                "orientation_field: need at least 2 blocks per side");
  OrientationField field;
  field.block = block;
  field.bx = w / block;
  field.by = h / block;
  const int bx = field.bx, by = field.by;
  field.angle.assign(static_cast<size_t>(bx) * by, 0.0);
  field.coherence.assign(static_cast<size_t>(bx) * by, 0.0);
  field.foreground.assign(static_cast<size_t>(bx) * by, 0);

  // Gradient covariance accumulated per block; trailing pixels fold into
  // the last block of the row/column.
  std::vector<double> gxx(field.angle.size(), 0.0), gyy(field.angle.size(), 0.0),
      gxy(field.angle.size(), 0.0);
  std::vector<int> count(field.angle.size(), 0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < by; ++j) {
    const int y0 = j * block;
    const int y1 = (j == by - 1) ? h : (j + 1) * block;
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        const int i = std::min(x / block, bx - 1);
        const double gx = 0.5 * (double(img.at(mirror_index(x + 1, w), y)) -
                                 double(img.at(mirror_index(x - 1, w), y)));
        const double gy = 0.5 * (double(img.at(x, mirror_index(y + 1, h))) -
                                 double(img.at(x, mirror_index(y - 1, h))));
        const size_t b = static_cast<size_t>(j) * bx + i;
        gxx[b] += gx * gx;
        gyy[b] += gy * gy;
        gxy[b] += gx * gy;
        count[b] += 1;
      }
    }
  }

  std::vector<double> raw_angle(field.angle.size(), 0.0);
  for (size_t b = 0; b < field.angle.size(); ++b) {
    const double energy = (gxx[b] + gyy[b]) / std::max(1, count[b]);
    const double num = 2.0 * gxy[b];
    const double den = gxx[b] - gyy[b];
    const double mag = std::hypot(num, den);
    const double coh = mag / std::max(gxx[b] + gyy[b], 1e-12);
    // Gradient-variance axis + pi/2 = ridge flow.
    double theta = 0.5 * std::atan2(num, den) + kPi / 2.0;
    theta = std::fmod(theta, kPi);
    if (theta < 0) theta += kPi;
    raw_angle[b] = theta;
    field.coherence[b] = coh;
    field.foreground[b] = (energy >= energy_threshold && coh >= coherence_threshold) ? 1 : 0;
  }

  // 3x3 vector smoothing in the doubled-angle domain, coherence weighted.
  for (int j = 0; j < by; ++j) {
    for (int i = 0; i < bx; ++i) {
      double sx = 0.0, sy = 0.0;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= bx || jj < 0 || jj >= by) continue;
          const size_t b = static_cast<size_t>(jj) * bx + ii;
          if (!field.foreground[b]) continue;
          sx += field.coherence[b] * std::cos(2.0 * raw_angle[b]);
          sy += field.coherence[b] * std::sin(2.0 * raw_angle[b]);
        }
      }
      const size_t b = static_cast<size_t>(j) * bx + i;
      if (sx == 0.0 && sy == 0.0) {
        field.angle[b] = raw_angle[b];
      } else {
        double theta = 0.5 * std::atan2(sy, sx);
        if (theta < 0) theta += kPi;
        field.angle[b] = theta;
      }
    }
  }
  return field;
}

SegmentationMask mask_from_field(const OrientationField& field, int width, int height) {
  SegmentationMask mask(width, height);
  for (int y = 0; y < height; ++y) {
    const int j = std::min(y / field.block, field.by - 1);
    for (int x = 0; x < width; ++x) {
      const int i = std::min(x / field.block, field.bx - 1);
      mask.set(x, y, field.block_fg(i, j));
    }
  }
  return mask;
}

namespace {

inline bool sk_at(const Skeleton& s, int x, int y) {
  return x >= 0 && x < s.width && y >= 0 && y < s.height && s.at(x, y);
}

// Neighbors in Zhang-Suen order P2..P9 = N, NE, E, SE, S, SW, W, NW.
constexpr int kNx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

int neighbor_count(const Skeleton& s, int x, int y) {
  int b = 0;
  for (int n = 0; n < 8; ++n) b += sk_at(s, x + kNx[n], y + kNy[n]) ? 1 : 0;
  return b;
}

int transitions(const Skeleton& s, int x, int y) {
  int a = 0;
  for (int n = 0; n < 8; ++n) {
    const bool cur = sk_at(s, x + kNx[n], y + kNy[n]);
    const bool nxt = sk_at(s, x + kNx[(n + 1) % 8], y + kNy[(n + 1) % 8]);
    if (!cur && nxt) ++a;
  }
  return a;
}

void zhang_suen(Skeleton& s) {
  const int w = s.width, h = s.height;
  std::vector<std::pair<int, int>> to_delete;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int sub = 0; sub < 2; ++sub) {
      to_delete.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!s.at(x, y)) continue;
          const int b = neighbor_count(s, x, y);
          if (b < 2 || b > 6) continue;
          if (transitions(s, x, y) != 1) continue;
          const bool p2 = sk_at(s, x, y - 1), p4 = sk_at(s, x + 1, y), p6 = sk_at(s, x, y + 1),
                     p8 = sk_at(s, x - 1, y);
          if (sub == 0) {
            if ((p2 && p4 && p6) || (p4 && p6 && p8)) continue;
          } else {
            if ((p2 && p4 && p8) || (p2 && p6 && p8)) continue;
          }
          to_delete.emplace_back(x, y);
        }
      }
      if (!to_delete.empty()) changed = true;
      for (auto [x, y] : to_delete) s.set(x, y, false);
    }
  }
}

// Removes one connectivity-safe pixel from every fully-set 2x2 block left
// by thinning, so no interior 2x2 block of ridge pixels remains.
void break_2x2_blocks(Skeleton& s) {
  const int w = s.width, h = s.height;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y + 1 < h; ++y) {
      for (int x = 0; x + 1 < w; ++x) {
        if (!(s.at(x, y) && s.at(x + 1, y) && s.at(x, y + 1) && s.at(x + 1, y + 1))) continue;
        const std::pair<int, int> corners[4] = {{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}};
        int pick = -1;
        for (int c = 0; c < 4 && pick < 0; ++c) {
          auto [cx, cy] = corners[c];
          if (transitions(s, cx, cy) == 1 && neighbor_count(s, cx, cy) >= 2) pick = c;
        }
        if (pick < 0) pick = 0;
        s.set(corners[pick].first, corners[pick].second, false);
        changed = true;
      }
    }
  }
}

Skeleton binarize(const RealRaster& raster, const SegmentationMask& mask, int window) {
  const int w = raster.width, h = raster.height;
  const int r = window / 2;
  const double n = double(window) * window;
  // Sliding local mean (two-pass box sums, mirror borders).
  RealRaster rowsum(w, h), mean(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += raster.at(mirror_index(x + i, w), y);
      rowsum.at(x, y) = acc;
    }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += rowsum.at(x, mirror_index(y + i, h));
      mean.at(x, y) = acc / n;
    }
  Skeleton s(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      s.set(x, y, mask.at(x, y) && raster.at(x, y) < mean.at(x, y));
  return s;
}

size_t mask_count(const SegmentationMask& mask) {
  size_t c = 0;
  for (auto v : mask.fg) c += v ? 1 : 0;
  return c;
}

void remove_small_components(Skeleton& s, int min_size) {
  const int w = s.width, h = s.height;
  std::vector<std::uint8_t> seen(static_cast<size_t>(w) * h, 0);
  std::vector<std::pair<int, int>> stack, comp;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!s.at(x, y) || seen[static_cast<size_t>(y) * w + x]) continue;
      stack.assign(1, {x, y});
      comp.clear();
      seen[static_cast<size_t>(y) * w + x] = 1;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        comp.emplace_back(cx, cy);
        for (int n = 0; n < 8; ++n) {
          const int nx = cx + kNx[n], ny = cy + kNy[n];
          if (sk_at(s, nx, ny) && !seen[static_cast<size_t>(ny) * w + nx]) {
            seen[static_cast<size_t>(ny) * w + nx] = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
      if (static_cast<int>(comp.size()) < min_size)
        for (auto [cx, cy] : comp) s.set(cx, cy, false);
    }
  }
}

int crossing_number_at(const Skeleton& s, int x, int y);

// Cyclic ring order used for run grouping (consecutive entries are adjacent).
constexpr int kRingX[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
constexpr int kRingY[8] = {-1, -1, -1, 0, 1, 1, 1, 0};

using PixelList = std::vector<std::pair<int, int>>;

bool contains(const PixelList& list, int x, int y) {
  for (auto [px, py] : list)
    if (px == x && py == y) return true;
  return false;
}

// Maximal cyclic runs of skeleton pixels around (x, y), excluding `blocked`.
// One run = one continuation; several runs = a junction. Thick diagonal
// corners appear as a single two-pixel run and are stepped through whole.
std::vector<PixelList> fresh_runs(const Skeleton& s, int x, int y, const PixelList& blocked) {
  bool on[8];
  for (int i = 0; i < 8; ++i) {
    const int qx = x + kRingX[i], qy = y + kRingY[i];
    on[i] = sk_at(s, qx, qy) && !contains(blocked, qx, qy);
  }
  std::vector<PixelList> runs;
  bool used[8] = {};
  for (int i = 0; i < 8; ++i) {
    if (!on[i] || used[i]) continue;
    std::vector<int> run{i};
    used[i] = true;
    for (int j = (i + 1) % 8; on[j] && !used[j]; j = (j + 1) % 8) {
      run.push_back(j);
      used[j] = true;
    }
    for (int j = (i + 7) % 8; on[j] && !used[j]; j = (j + 7) % 8) {
      run.push_back(j);
      used[j] = true;
    }
    PixelList pixels;
    for (int r : run) pixels.emplace_back(x + kRingX[r], y + kRingY[r]);
    runs.push_back(std::move(pixels));
  }
  return runs;
}

enum class WalkStop { dead_end, junction, length };

// Follows the line away from `origin` starting on the ring run `seed`,
// stepping through whole runs so staircase corners do not stall the walk.
// `visited` accumulates the walked pixels in order; `end` is the last pixel.
WalkStop walk_line(const Skeleton& s, std::pair<int, int> origin, const PixelList& seed,
                   PixelList& visited, int max_steps, std::pair<int, int>* end = nullptr) {
  std::pair<int, int> cur = origin;
  PixelList pending = seed;
  int steps = 0;
  WalkStop stop = WalkStop::length;
  while (steps < max_steps) {
    // advance onto the farthest pixel of the pending run
    std::pair<int, int> next = pending.front();
    double best = -1.0;
    for (auto [qx, qy] : pending) {
      const double d = std::hypot(double(qx - cur.first), double(qy - cur.second));
      if (d > best) {
        best = d;
        next = {qx, qy};
      }
    }
    for (auto& p : pending)
      if (!contains(visited, p.first, p.second)) visited.push_back(p);
    steps += static_cast<int>(pending.size());
    cur = next;
    const auto runs = fresh_runs(s, cur.first, cur.second, visited);
    if (runs.empty()) {
      stop = WalkStop::dead_end;
      break;
    }
    if (runs.size() >= 2) {
      stop = WalkStop::junction;
      break;
    }
    pending = runs[0];
  }
  if (end) *end = cur;
  return stop;
}

// Erases endpoint branches that reach a junction within max_len steps.
void prune_spurs(Skeleton& s, int max_len) {
  if (max_len <= 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::pair<int, int>> endpoints;
    for (int y = 0; y < s.height; ++y)
      for (int x = 0; x < s.width; ++x)
        if (s.at(x, y) && crossing_number_at(s, x, y) == 1) endpoints.emplace_back(x, y);
    bool any = false;
    for (auto [ex, ey] : endpoints) {
      if (!s.at(ex, ey) || crossing_number_at(s, ex, ey) != 1) continue;
      const auto seeds = fresh_runs(s, ex, ey, {{ex, ey}});
      if (seeds.size() != 1) continue;
      PixelList path{{ex, ey}};
      const WalkStop stop = walk_line(s, {ex, ey}, seeds[0], path, max_len);
      if (stop != WalkStop::junction) continue;
      // evaluate before erasing so the junction pixel stays put
      std::vector<char> erase(path.size(), 0);
      for (size_t i = 0; i < path.size(); ++i)
        erase[i] = crossing_number_at(s, path[i].first, path[i].second) <= 2;
      for (size_t i = 0; i < path.size(); ++i)
        if (erase[i]) s.set(path[i].first, path[i].second, false);
      any = true;
    }
    if (!any) break;
  }
}

}  // namespace

Skeleton binarize_thin(const RealRaster& raster, const SegmentationMask& mask,
                       int binarize_window) {
  if (mask.width != raster.width || mask.height != raster.height)
    throw Error(Errc::dimension_mismatch, "binarize_thin: mask/image size mismatch");
  const size_t fg = mask_count(mask);
  if (fg * 100 < static_cast<size_t>(raster.width) * raster.height)
    throw Error(Errc::empty_foreground, "binarize_thin: mask has under 1% foreground");
  Skeleton s = binarize(raster, mask, binarize_window);
  zhang_suen(s);
  break_2x2_blocks(s);
  return s;
}

Skeleton binarize_thin(const GrayImage& img, const SegmentationMask& mask, int binarize_window) {
  return binarize_thin(to_real(img), mask, binarize_window);
}

int crossing_number(const std::array<std::uint8_t, 9>& p) {
  // row-major 3x3, center = p[4]; cyclic neighbor order N, NE, E, SE, S, SW, W, NW
  static constexpr int order[8] = {1, 2, 5, 8, 7, 6, 3, 0};
  int sum = 0;
  for (int i = 0; i < 8; ++i) {
    const int a = p[order[i]] ? 1 : 0;
    const int b = p[order[(i + 1) % 8]] ? 1 : 0;
    sum += std::abs(a - b);
  }
  return sum / 2;
}

namespace {

int crossing_number_at(const Skeleton& s, int x, int y) {
  std::array<std::uint8_t, 9> p{};
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      p[static_cast<size_t>(dy + 1) * 3 + (dx + 1)] = sk_at(s, x + dx, y + dy) ? 1 : 0;
  return crossing_number(p);
}

struct Candidate {
  Minutia m;
  bool alive = true;
};

}  // namespace

std::vector<Minutia> extract_minutiae(const GrayImage& img, const MinutiaeParams& params,
                                      const EnhanceParams& enhance_params) {
  params.validate();
  if (img.width < 64 || img.height < 64)
    throw Error(Errc::invalid_parameter, "extract_minutiae: image must be at least 64x64");

  const OrientationField field = orientation_field(img, params.block, params.coherence_threshold,
                                                   params.energy_threshold);
  const SegmentationMask mask = mask_from_field(field, img.width, img.height);
  if (mask_count(mask) * 100 < static_cast<size_t>(img.width) * img.height)
    return {};  // featureless image

  const RealRaster enhanced = enhance(img, enhance_params);
  Skeleton skel = binarize_thin(enhanced, mask, params.binarize_window);
  remove_small_components(skel, static_cast<int>(std::lround(params.min_spur_length)));
  prune_spurs(skel, static_cast<int>(std::lround(params.min_spur_length)));

  const int term_trace = params.term_trace, bif_trace = params.bif_trace;
  std::vector<Candidate> cands;
  for (int y = 1; y + 1 < skel.height; ++y) {
    for (int x = 1; x + 1 < skel.width; ++x) {
      if (!skel.at(x, y)) continue;
      const int cn = crossing_number_at(skel, x, y);
      if (cn != 1 && cn != 3) continue;
      const auto comps = fresh_runs(skel, x, y, {{x, y}});

      double walk_dir;
      MinutiaKind kind;
      if (cn == 1) {
        if (comps.size() != 1) continue;
        kind = MinutiaKind::termination;
        PixelList path{{x, y}};
        std::pair<int, int> end;
        walk_line(skel, {x, y}, comps[0], path, term_trace, &end);
        if (std::hypot(double(end.first - x), double(end.second - y)) < 2.5) continue;
        walk_dir = std::atan2(double(end.second - y), double(end.first - x));
      } else {
        if (comps.size() != 3) continue;
        kind = MinutiaKind::bifurcation;
        PixelList root{{x, y}};
        for (auto& c : comps)
          for (auto& p : c) root.push_back(p);
        std::array<std::pair<int, int>, 3> ends;
        bool usable = true;
        for (int c = 0; c < 3; ++c) {
          PixelList path = root;
          walk_line(skel, {x, y}, comps[c], path, bif_trace, &ends[c]);
          if (std::hypot(double(ends[c].first - x), double(ends[c].second - y)) < 2.5)
            usable = false;
        }
        if (!usable) continue;
        // The bifurcating pair is the one with the closest traced endpoints;
        // direction is the circular mean of those two branch directions.
        int bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) {
            const double d = std::hypot(double(ends[i].first - ends[j].first),
                                        double(ends[i].second - ends[j].second));
            if (d < best) {
              best = d;
              bi = i;
              bj = j;
            }
          }
        const double d1 = std::atan2(double(ends[bi].second - y), double(ends[bi].first - x));
        const double d2 = std::atan2(double(ends[bj].second - y), double(ends[bj].first - x));
        walk_dir = std::atan2(std::sin(d1) + std::sin(d2), std::cos(d1) + std::cos(d2));
      }

      // Direction: block orientation line, hemisphere chosen by the walk.
      const double line = field.at_pixel(x, y);
      const double cand0 = line, cand1 = wrap_angle(line + kPi);
      double theta = angle_distance(cand0, walk_dir) <= angle_distance(cand1, walk_dir) ? cand0
                                                                                        : cand1;
      // Fall back to the raw walk direction when the field disagrees badly
      // (strongly curved neighborhoods).
      if (angle_distance(theta, walk_dir) > 0.6) theta = wrap_angle(walk_dir);

      cands.push_back({Minutia{double(x), double(y), wrap_angle(theta), kind}, true});
    }
  }

  // Border exclusion: a minutia must keep border_exclusion px of foreground
  // around it (image edge counts as boundary).
  const int br = static_cast<int>(std::ceil(params.border_exclusion));
  for (Candidate& c : cands) {
    const int cx = static_cast<int>(c.m.x), cy = static_cast<int>(c.m.y);
    for (int dy = -br; dy <= br && c.alive; ++dy) {
      for (int dx = -br; dx <= br; ++dx) {
        if (double(dx) * dx + double(dy) * dy > params.border_exclusion * params.border_exclusion)
          continue;
        const int qx = cx + dx, qy = cy + dy;
        if (qx < 0 || qx >= mask.width || qy < 0 || qy >= mask.height || !mask.at(qx, qy)) {
          c.alive = false;
          break;
        }
      }
    }
  }

  // Merge filter: same-kind pairs closer than merge_distance keep the first
  // (scan order), opposite-kind pairs are dropped as artifacts.
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.m.y != b.m.y) return a.m.y < b.m.y;
    return a.m.x < b.m.x;
  });
  for (size_t i = 0; i < cands.size(); ++i) {
    if (!cands[i].alive) continue;
    for (size_t j = i + 1; j < cands.size(); ++j) {
      if (!cands[j].alive) continue;
      const double d = std::hypot(cands[i].m.x - cands[j].m.x, cands[i].m.y - cands[j].m.y);
      if (d >= params.merge_distance) continue;
      if (cands[i].m.kind == cands[j].m.kind) {
        cands[j].alive = false;
      } else {
        cands[i].alive = false;
        cands[j].alive = false;
        break;
      }
    }
  }

  std::vector<Minutia> out;
  for (const Candidate& c : cands)
    if (c.alive) out.push_back(c.m);
  return out;
}

MinutiaeParams scale_for_dpi(const MinutiaeParams& p, int dpi) {
  MinutiaeParams out = p;
  const double s = double(dpi) / 500.0;
  out.block = std::max(4, static_cast<int>(std::lround(p.block * s)));
  int win = static_cast<int>(std::lround(p.binarize_window * s));
  if (win % 2 == 0) ++win;
  out.binarize_window = std::max(3, win);
  out.min_spur_length = p.min_spur_length * s;
  out.merge_distance = p.merge_distance * s;
  out.border_exclusion = p.border_exclusion * s;
  out.term_trace = std::max(4, static_cast<int>(std::lround(p.term_trace * s)));
  out.bif_trace = std::max(5, static_cast<int>(std::lround(p.bif_trace * s)));
  return out;
}

}  // namespace minudesc
