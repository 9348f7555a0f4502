#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sf/sim.hpp"

namespace sf {

inline constexpr int kFrameSize = 84;
inline constexpr int kStackDepth = 4;
inline constexpr std::size_t kFramePixels = kFrameSize * kFrameSize;
inline constexpr std::size_t kFeatureSize = 13;

// Grayscale levels used by the rasterizer. Intensity = level / 255.
namespace level {
inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kWall = 128;
inline constexpr std::uint8_t kFortressBody = 160;
inline constexpr std::uint8_t kShell = 200;
inline constexpr std::uint8_t kBright = 255;  // ship, missiles, wedge, text, bar
}  // namespace level

// Screen layout, in pixel rows/columns.
namespace layout {
inline constexpr int kScoreRowTop = 0;  // 8-row strip for the score digits
inline constexpr int kScoreRows = 8;
inline constexpr int kBarRowTop = 79;
inline constexpr int kBarRows = 3;
inline constexpr int kBarColLeft = 10;
inline constexpr int kBarCols = 64;
}  // namespace layout

// 84x84 grayscale image, row-major, quantized to 8-bit levels so that
// storage is lossless.
struct Frame {
  std::array<std::uint8_t, kFramePixels> pixels{};

  std::uint8_t level_at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * kFrameSize + col];
  }
  float at(int row, int col) const { return level_at(row, col) / 255.0f; }
  bool operator==(const Frame&) const = default;
};

// Deterministic integer-grid rasterization: hexagons, fortress body and
// heading wedge, ship triangle, projectiles, score digits and the
// vulnerability bar. Never draws the shot clock.
Frame render_frame(const GameState& state);

// The four most recent frames, oldest first.
class ObsStack {
 public:
  // Fills every slot with `first`.
  void reset(const Frame& first);
  void push(const Frame& frame);

  const Frame& operator[](std::size_t i) const { return frames_[i]; }

  // Writes 4 x 84 x 84 intensities in [0, 1].
  void write(std::span<float> out) const;

  bool operator==(const ObsStack&) const = default;

 private:
  std::array<Frame, kStackDepth> frames_{};
};

// Sentinel used for absent nearest-projectile slots.
inline constexpr float kAbsent = -1.0f;

// Low-dimensional observation, every component in [-1, 1]:
//   [0,1]   ship position relative to the fortress / outer_hex_radius
//   [2,3]   ship velocity / max_speed
//   [4,5]   sin, cos of ship heading
//   [6,7]   sin, cos of fortress heading
//   [8]     v / threshold
//   [9,10]  nearest shell relative to ship / (2 * outer_hex_radius)
//   [11,12] nearest own missile relative to ship / (2 * outer_hex_radius)
//   [13]    only with include_clock: time since the last fortress hit /
//           critical interval, capped at 1 (1 before any hit)
std::vector<float> feature_obs(const GameState& state, bool include_clock);
void write_features(const GameState& state, bool include_clock,
                    std::span<float> out);

// Binary PGM (P5).
void write_pgm(const std::filesystem::path& path, const Frame& frame);

}  // namespace sf
