#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sf/agents.hpp"
#include "sf/observation.hpp"

using namespace sf;

namespace {

std::uint64_t frame_hash(const Frame& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t p : f.pixels) {
    h ^= p;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool bar_all(const Frame& f, std::uint8_t level) {
  for (int r = 0; r < layout::kBarRows; ++r) {
    for (int c = 0; c < layout::kBarCols; ++c) {
      if (f.level_at(layout::kBarRowTop + r, layout::kBarColLeft + c) != level) return false;
    }
  }
  return true;
}

Frame solid(std::uint8_t level) {
  Frame f;
  f.pixels.fill(level);
  return f;
}

}  // namespace

TEST_SUITE("observation") {

TEST_CASE("vulnerability bar tracks v / threshold") {
  GameState s = new_game(SimConfig{}, 1);
  s.vuln.v = 0;
  CHECK(bar_all(render_frame(s), level::kBackground));
  s.vuln.v = 10;
  CHECK(bar_all(render_frame(s), level::kBright));
  s.vuln.v = 5;
  const Frame half = render_frame(s);
  CHECK(half.level_at(layout::kBarRowTop, layout::kBarColLeft + 31) == level::kBright);
  CHECK(half.level_at(layout::kBarRowTop, layout::kBarColLeft + 32) == level::kBackground);
}

TEST_CASE("heading change only touches pixels near the ship") {
  GameState a = new_game(SimConfig{}, 2);
  test::park_ship(a);
  GameState b = a;
  b.ship.heading_deg = wrap_degrees(a.ship.heading_deg + 120.0);
  const Frame fa = render_frame(a), fb = render_frame(b);
  const double sx = a.ship.position.x * kFrameSize / a.config.world_size;
  const double sy = a.ship.position.y * kFrameSize / a.config.world_size;
  int changed = 0;
  for (int r = 0; r < kFrameSize; ++r) {
    for (int c = 0; c < kFrameSize; ++c) {
      if (fa.level_at(r, c) == fb.level_at(r, c)) continue;
      ++changed;
      CHECK(std::hypot(c + 0.5 - sx, r + 0.5 - sy) < 4.0);
    }
  }
  CHECK(changed > 0);
}

TEST_CASE("rendering is pure and hides the shot clock") {
  GameState s = new_game(SimConfig{}, 3);
  CHECK(render_frame(s) == render_frame(s));
  GameState t = s;
  t.vuln.last_hit_frame = 0;
  t.frame = 100;
  CHECK(render_frame(s) == render_frame(t));
}

TEST_CASE("golden image of a fresh game") {
  const Frame f = render_frame(new_game(SimConfig{}, 1));
  CHECK(frame_hash(f) == 4569947566262807323ULL);
  const Frame g = render_frame(new_game(test::autoturn_config(), 2024));
  CHECK(frame_hash(g) == 15024379297318211961ULL);
}

TEST_CASE("score digits are drawn in the top strip") {
  GameState s = new_game(SimConfig{}, 4);
  const Frame zero = render_frame(s);
  s.tallies.fortress_deaths = 12;
  const Frame twelve_hundred = render_frame(s);
  bool differs = false;
  for (int r = 0; r < layout::kScoreRows; ++r) {
    for (int c = 0; c < kFrameSize; ++c) {
      if (zero.level_at(r, c) != twelve_hundred.level_at(r, c)) differs = true;
    }
  }
  CHECK(differs);
}

TEST_CASE("frame stack is a FIFO of four") {
  ObsStack st;
  st.reset(solid(0));
  for (int i = 0; i < 4; ++i) CHECK(st[i] == solid(0));
  for (int i = 1; i <= 4; ++i) st.push(solid(static_cast<std::uint8_t>(i)));
  for (int i = 0; i < 4; ++i) CHECK(st[i] == solid(static_cast<std::uint8_t>(i + 1)));
  st.push(solid(5));
  CHECK(st[0] == solid(2));
  CHECK(st[3] == solid(5));
  std::vector<float> out(kStackDepth * kFramePixels);
  st.write(out);
  CHECK(out.front() == doctest::Approx(2.0f / 255.0f));
  CHECK(out.back() == doctest::Approx(5.0f / 255.0f));
}

TEST_CASE("feature vector: sentinels, v and clock") {
  GameState s = new_game(SimConfig{}, 5);
  auto f = feature_obs(s, false);
  REQUIRE(f.size() == 13);
  for (int i = 9; i < 13; ++i) CHECK(f[i] == kAbsent);
  s.vuln.v = 5;
  CHECK(feature_obs(s, false)[8] == doctest::Approx(0.5f));

  SimConfig c;
  c.fps = 40;  // 25 ms frames make 125 ms exact
  GameState t = new_game(c, 6);
  t.frame = 100;
  t.vuln.last_hit_frame = 95;
  const auto g = feature_obs(t, true);
  REQUIRE(g.size() == 14);
  CHECK(g[13] == doctest::Approx(0.5f));
  t.vuln.last_hit_frame.reset();
  CHECK(feature_obs(t, true)[13] == 1.0f);
}

TEST_CASE("feature components stay in [-1, 1] along play") {
  for (GameVersion version : {GameVersion::Autoturn, GameVersion::Youturn}) {
    SimConfig c;
    c.game_version = version;
    GameState s = new_game(c, 8);
    SplitMix64 rng(8);
    OraclePolicy policy;
    for (int i = 0; i < 3000; ++i) {
      const Action a = i % 2 ? random_act(rng, version) : oracle_act(s, policy);
      step_sim(s, a);
      for (float x : feature_obs(s, true)) {
        REQUIRE(x >= -1.0f);
        REQUIRE(x <= 1.0f);
      }
    }
  }
}

TEST_CASE("pixel values are k / 255") {
  GameState s = new_game(SimConfig{}, 9);
  const Frame f = render_frame(s);
  for (std::size_t i = 0; i < f.pixels.size(); ++i) {
    const float v = f.pixels[i] / 255.0f;
    REQUIRE(std::lround(v * 255.0f) == f.pixels[i]);
  }
}

}  // TEST_SUITE
