#include "sf/observation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "sf/errors.hpp"
#include "sf/reward.hpp"

namespace sf {
namespace {

struct Canvas {
  Frame& frame;

  void put(int row, int col, std::uint8_t value) {
    if (row < 0 || row >= kFrameSize || col < 0 || col >= kFrameSize) return;
    frame.pixels[static_cast<std::size_t>(row) * kFrameSize + col] = value;
  }

  // Bresenham between pixel centers.
  void line(int r0, int c0, int r1, int c1, std::uint8_t value) {
    const int dc = std::abs(c1 - c0);
    const int dr = -std::abs(r1 - r0);
    const int sc = c0 < c1 ? 1 : -1;
    const int sr = r0 < r1 ? 1 : -1;
    int err = dc + dr;
    for (;;) {
      put(r0, c0, value);
      if (r0 == r1 && c0 == c1) break;
      const int e2 = 2 * err;
      if (e2 >= dr) {
        err += dr;
        c0 += sc;
      }
      if (e2 <= dc) {
        err += dc;
        r0 += sr;
      }
    }
  }

  // Fills pixels whose centers lie inside (or on) the triangle given in
  // pixel coordinates (x = column, y = row).
  void triangle(Vec2 a, Vec2 b, Vec2 c, std::uint8_t value) {
    auto edge = [](Vec2 p, Vec2 q, Vec2 s) {
      return (q.x - p.x) * (s.y - p.y) - (q.y - p.y) * (s.x - p.x);
    };
    const double area = edge(a, b, c);
    if (area == 0.0) return;
    const int c_lo = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
    const int c_hi = std::min(kFrameSize - 1, static_cast<int>(std::floor(std::max({a.x, b.x, c.x}))));
    const int r_lo = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
    const int r_hi = std::min(kFrameSize - 1, static_cast<int>(std::floor(std::max({a.y, b.y, c.y}))));
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int col = c_lo; col <= c_hi; ++col) {
        const Vec2 p{col + 0.5, r + 0.5};
        const double w0 = edge(b, c, p) * area;
        const double w1 = edge(c, a, p) * area;
        const double w2 = edge(a, b, p) * area;
        if (w0 >= 0 && w1 >= 0 && w2 >= 0) put(r, col, value);
      }
    }
  }

  void disc(Vec2 center, double radius, std::uint8_t value) {
    const int c_lo = static_cast<int>(std::floor(center.x - radius));
    const int c_hi = static_cast<int>(std::floor(center.x + radius));
    const int r_lo = static_cast<int>(std::floor(center.y - radius));
    const int r_hi = static_cast<int>(std::floor(center.y + radius));
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int col = c_lo; col <= c_hi; ++col) {
        const double dx = col + 0.5 - center.x;
        const double dy = r + 0.5 - center.y;
        if (dx * dx + dy * dy <= radius * radius) put(r, col, value);
      }
    }
  }
};

int to_pixel(double v) { return static_cast<int>(std::floor(v)); }

// Seven-segment glyphs, 3 columns x 5 rows. Bits: a b c d e f g.
//   a: top, b: upper right, c: lower right, d: bottom, e: lower left,
//   f: upper left, g: middle.
constexpr std::array<std::uint8_t, 10> kDigitSegments = {
    0b1111110, 0b0110000, 0b1101101, 0b1111001, 0b0110011,
    0b1011011, 0b1011111, 0b1110000, 0b1111111, 0b1111011};
constexpr std::uint8_t kMinusSegments = 0b0000001;

void draw_glyph(Canvas& canvas, int top, int left, std::uint8_t segs) {
  auto on = [&](int bit) { return (segs >> (6 - bit)) & 1; };
  const std::uint8_t v = level::kBright;
  if (on(0)) canvas.line(top, left, top, left + 2, v);
  if (on(1)) canvas.line(top, left + 2, top + 2, left + 2, v);
  if (on(2)) canvas.line(top + 2, left + 2, top + 4, left + 2, v);
  if (on(3)) canvas.line(top + 4, left, top + 4, left + 2, v);
  if (on(4)) canvas.line(top + 2, left, top + 4, left, v);
  if (on(5)) canvas.line(top, left, top + 2, left, v);
  if (on(6)) canvas.line(top + 2, left, top + 2, left + 2, v);
}

void draw_score(Canvas& canvas, std::int64_t score) {
  const std::string text = std::to_string(score);
  int left = 2;
  for (char ch : text) {
    const std::uint8_t segs =
        ch == '-' ? kMinusSegments : kDigitSegments[static_cast<std::size_t>(ch - '0')];
    draw_glyph(canvas, layout::kScoreRowTop + 1, left, segs);
    left += 4;
    if (left + 3 > kFrameSize) break;
  }
}

void draw_hexagon(Canvas& canvas, const Hexagon& hex, double scale) {
  for (int i = 0; i < 6; ++i) {
    const Vec2 a = hex.vertex(i) * scale;
    const Vec2 b = hex.vertex(i + 1) * scale;
    canvas.line(to_pixel(a.y), to_pixel(a.x), to_pixel(b.y), to_pixel(b.x),
                level::kWall);
  }
}

}  // namespace

Frame render_frame(const GameState& state) {
  Frame frame;
  Canvas canvas{frame};
  const SimConfig& cfg = state.config;
  const double s = kFrameSize / cfg.world_size;
  const Vec2 center = state.fortress_position();

  draw_score(canvas, ScoreState{0, state.tallies.fortress_deaths,
                                state.tallies.ship_deaths,
                                state.tallies.missiles_fired}
                         .recomputed());

  draw_hexagon(canvas, Hexagon{center, cfg.outer_hex_radius}, s);
  draw_hexagon(canvas, Hexagon{center, cfg.inner_hex_radius}, s);

  const int filled = static_cast<int>(
      std::min<std::int64_t>(state.vuln.v, cfg.vulnerability_threshold) *
      layout::kBarCols / cfg.vulnerability_threshold);
  for (int r = 0; r < layout::kBarRows; ++r) {
    for (int c = 0; c < filled; ++c) {
      canvas.put(layout::kBarRowTop + r, layout::kBarColLeft + c, level::kBright);
    }
  }

  if (state.fortress.alive) {
    canvas.disc(center * s, cfg.fortress_radius * s, level::kFortressBody);
    const Vec2 dir = unit_from_degrees(state.fortress.heading_deg);
    const Vec2 perp{-dir.y, dir.x};
    const Vec2 tip = center + dir * (cfg.fortress_radius + 10.0);
    canvas.triangle(tip * s, (center + perp * 6.0) * s, (center - perp * 6.0) * s,
                    level::kBright);
  }

  for (const Projectile& p : state.projectiles) {
    const Vec2 q = p.position * s;
    canvas.put(to_pixel(q.y), to_pixel(q.x),
               p.kind == ProjectileKind::Missile ? level::kBright : level::kShell);
  }

  if (state.ship.alive) {
    const ShipState& ship = state.ship;
    const Vec2 dir = unit_from_degrees(ship.heading_deg);
    const Vec2 perp{-dir.y, dir.x};
    const Vec2 nose = ship.position + dir * 12.0;
    const Vec2 left = ship.position - dir * 6.0 + perp * 6.0;
    const Vec2 right = ship.position - dir * 6.0 - perp * 6.0;
    canvas.triangle(nose * s, left * s, right * s, level::kBright);
    const Vec2 q = ship.position * s;
    canvas.put(to_pixel(q.y), to_pixel(q.x), level::kBright);
  }
  return frame;
}

void ObsStack::reset(const Frame& first) { frames_.fill(first); }

void ObsStack::push(const Frame& frame) {
  std::shift_left(frames_.begin(), frames_.end(), 1);
  frames_.back() = frame;
}

void ObsStack::write(std::span<float> out) const {
  if (out.size() != kStackDepth * kFramePixels) {
    throw DomainError("ObsStack::write needs 4*84*84 floats");
  }
  std::size_t k = 0;
  for (const Frame& f : frames_) {
    for (std::uint8_t px : f.pixels) out[k++] = px / 255.0f;
  }
}

void write_features(const GameState& state, bool include_clock,
                    std::span<float> out) {
  const std::size_t n = kFeatureSize + (include_clock ? 1 : 0);
  if (out.size() != n) throw DomainError("feature buffer has the wrong length");
  const SimConfig& cfg = state.config;
  const Vec2 center = state.fortress_position();
  auto clip = [](double v) {
    return static_cast<float>(std::clamp(v, -1.0, 1.0));
  };

  const ShipState& ship = state.ship;
  const Vec2 rel = (ship.position - center) * (1.0 / cfg.outer_hex_radius);
  out[0] = clip(rel.x);
  out[1] = clip(rel.y);
  out[2] = clip(ship.velocity.x / cfg.max_speed);
  out[3] = clip(ship.velocity.y / cfg.max_speed);
  const double sh = deg_to_rad(ship.heading_deg);
  out[4] = clip(std::sin(sh));
  out[5] = clip(std::cos(sh));
  const double fh = deg_to_rad(state.fortress.heading_deg);
  out[6] = clip(std::sin(fh));
  out[7] = clip(std::cos(fh));
  out[8] = clip(static_cast<double>(state.vuln.v) / cfg.vulnerability_threshold);

  auto nearest = [&](ProjectileKind kind, std::size_t slot) {
    double best = std::numeric_limits<double>::infinity();
    Vec2 best_rel;
    for (const Projectile& p : state.projectiles) {
      if (p.kind != kind) continue;
      const Vec2 d = p.position - ship.position;
      const double dist = length(d);
      if (dist < best) {
        best = dist;
        best_rel = d;
      }
    }
    if (std::isinf(best)) {
      out[slot] = kAbsent;
      out[slot + 1] = kAbsent;
      return;
    }
    const double norm = 1.0 / (2.0 * cfg.outer_hex_radius);
    out[slot] = clip(best_rel.x * norm);
    out[slot + 1] = clip(best_rel.y * norm);
  };
  nearest(ProjectileKind::Shell, 9);
  nearest(ProjectileKind::Missile, 11);

  if (include_clock) {
    double clock = 1.0;
    if (state.vuln.last_hit_frame) {
      const double ms = state.timing().to_ms(state.frame - *state.vuln.last_hit_frame);
      clock = std::min(1.0, ms / cfg.critical_interval_ms);
    }
    out[13] = clip(clock);
  }
}

std::vector<float> feature_obs(const GameState& state, bool include_clock) {
  std::vector<float> out(kFeatureSize + (include_clock ? 1 : 0));
  write_features(state, include_clock, out);
  return out;
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << "P5\n" << kFrameSize << ' ' << kFrameSize << "\n255\n";
  os.write(reinterpret_cast<const char*>(frame.pixels.data()),
           static_cast<std::streamsize>(frame.pixels.size()));
}

}  // namespace sf
