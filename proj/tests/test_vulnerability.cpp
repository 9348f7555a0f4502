#include <doctest.h>

#include <optional>

#include "sf/vulnerability.hpp"

using namespace sf;

namespace {

enum class Gap { First, Fast, Slow };

struct Expected {
  int v;
  EventKind kind;
  int value;
};

// Rule table written from the game description, in milliseconds:
// Building + slow/first -> +1; Building + fast -> reset to zero;
// Vulnerable + fast -> destroyed; Vulnerable + slow/first -> no change.
Expected oracle(int v, Gap gap, int threshold) {
  const bool vulnerable = v >= threshold;
  const bool fast = gap == Gap::Fast;
  if (!vulnerable && !fast) return {v + 1, EventKind::FortressHit, 1};
  if (!vulnerable && fast) {
    if (v == 0) return {0, EventKind::FortressHit, 0};
    return {0, EventKind::VulnerabilityReset, v};
  }
  if (fast) return {v, EventKind::FortressDestroyed, 0};
  return {v, EventKind::FortressHit, 0};
}

VulnerabilityUpdate apply(int v, std::optional<std::int64_t> last, std::int64_t now) {
  VulnerabilityTracker t;
  t.v = v;
  t.last_hit_frame = last;
  return update_vulnerability(t, now, ShotTiming{30, 250.0}, 10);
}

}  // namespace

TEST_SUITE("core-sim") {

TEST_CASE("vulnerability table: all 33 cells match the rule oracle") {
  const std::int64_t now = 1000;
  int cells = 0;
  for (int v = 0; v <= 10; ++v) {
    for (Gap gap : {Gap::First, Gap::Fast, Gap::Slow}) {
      std::optional<std::int64_t> last;
      if (gap == Gap::Fast) last = now - 6;   // 200 ms
      if (gap == Gap::Slow) last = now - 9;   // 300 ms
      const auto got = apply(v, last, now);
      const Expected want = oracle(v, gap, 10);
      CAPTURE(v);
      CAPTURE(static_cast<int>(gap));
      CHECK(got.tracker.v == want.v);
      CHECK(got.event.kind == want.kind);
      CHECK(got.event.value == want.value);
      CHECK(got.tracker.last_hit_frame == now);
      ++cells;
    }
  }
  CHECK(cells == 33);
}

TEST_CASE("vulnerability examples") {
  // v=3, 300 ms -> v=4, hit(+1)
  auto r = apply(3, 0, 9);
  CHECK(r.tracker.v == 4);
  CHECK(r.event == SimEvent::fortress_hit(1));
  // v=3, 200 ms -> reset from 3
  r = apply(3, 0, 6);
  CHECK(r.tracker.v == 0);
  CHECK(r.event == SimEvent::vulnerability_reset(3));
  // v=10, 200 ms -> destroyed
  r = apply(10, 0, 6);
  CHECK(r.event == SimEvent::fortress_destroyed());
  // v=10, 400 ms -> unchanged, hit(0)
  r = apply(10, 0, 12);
  CHECK(r.tracker.v == 10);
  CHECK(r.event == SimEvent::fortress_hit(0));
}

TEST_CASE("frame quantization at 30 FPS") {
  const ShotTiming t250{30, 250.0};
  CHECK(t250.is_fast(7));   // 233.3 ms
  CHECK(!t250.is_fast(8));  // 266.7 ms
  const ShotTiming t125{30, 125.0};
  CHECK(t125.is_fast(3));   // 100 ms
  CHECK(!t125.is_fast(4));  // 133.3 ms
  const ShotTiming t400{30, 400.0};
  CHECK(t400.is_fast(11));
  CHECK(!t400.is_fast(12));  // exactly 400 ms counts as slow
  CHECK(t250.to_ms(3) == doctest::Approx(100.0));
}

TEST_CASE("phase is a pure function of v and v never exceeds the threshold") {
  VulnerabilityTracker t;
  std::int64_t f = 0;
  for (int i = 0; i < 30; ++i) {
    f += 9;
    t = update_vulnerability(t, f, ShotTiming{}, 10).tracker;
    CHECK(t.v <= 10);
    CHECK((t.phase(10) == VulnPhase::Vulnerable) == (t.v >= 10));
  }
  CHECK(t.v == 10);
}

TEST_CASE("several hits in one frame count as fast") {
  auto r = apply(5, 100, 100);
  CHECK(r.event == SimEvent::vulnerability_reset(5));
}

}  // TEST_SUITE
