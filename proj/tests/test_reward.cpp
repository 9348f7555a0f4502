#include <doctest.h>

#include "helpers.hpp"
#include "sf/env.hpp"
#include "sf/errors.hpp"
#include "sf/reward.hpp"

using namespace sf;

namespace {

double reward(RewardKind kind, EventList events) {
  return reward_from_events(events, make_scheme(kind));
}

}  // namespace

TEST_SUITE("reward-scoring") {

TEST_CASE("scheme constants") {
  const RewardScheme sparse = make_scheme(RewardKind::Sparse);
  CHECK(sparse.destruction == 1.0);
  CHECK(sparse.ship_death == -1.0);
  CHECK(sparse.missile == -0.05);
  CHECK(make_scheme(RewardKind::Dense).hit == 1.0);
  CHECK(make_scheme(RewardKind::Aeci).destruction_bonus == 2.0);
  CHECK_THROWS_AS(parse_reward_kind("shaped"), ConfigError);
  CHECK(parse_reward_kind("aeci") == RewardKind::Aeci);
}

TEST_CASE("reward_from_events examples") {
  CHECK(reward(RewardKind::Sparse, {SimEvent::missile_fired()}) == doctest::Approx(-0.05));
  CHECK(reward(RewardKind::Dense, {SimEvent::missile_fired(), SimEvent::fortress_hit(1)}) ==
        doctest::Approx(0.95));
  CHECK(reward(RewardKind::Dense, {SimEvent::vulnerability_reset(7)}) == doctest::Approx(-1.0));
  CHECK(reward(RewardKind::Aeci, {SimEvent::vulnerability_reset(7)}) == doctest::Approx(-7.0));
  CHECK(reward(RewardKind::Aeci, {SimEvent::fortress_destroyed()}) == doctest::Approx(3.0));
  for (RewardKind k : {RewardKind::Sparse, RewardKind::Dense, RewardKind::Aeci}) {
    CHECK(reward(k, {}) == 0.0);
    CHECK(reward(k, {SimEvent::ship_destroyed()}) == doctest::Approx(-1.0));
    CHECK(reward(k, {SimEvent::shell_fired()}) == 0.0);
  }
  CHECK(reward(RewardKind::Aeci, {SimEvent::fortress_hit(1)}) == doctest::Approx(1.0));
  CHECK(reward(RewardKind::Aeci, {SimEvent::fortress_hit(0)}) == 0.0);
  CHECK(reward(RewardKind::Dense, {SimEvent::fortress_hit(0)}) == doctest::Approx(1.0));
  CHECK(reward(RewardKind::Sparse, {SimEvent::fortress_hit(1)}) == 0.0);
}

TEST_CASE("display score examples") {
  ScoreState s;
  s.fortress_deaths = 30;
  s.ship_deaths = 2;
  s.missiles_fired = 350;
  CHECK(s.recomputed() == 2100);
  s = {};
  s.fortress_deaths = 40;
  s.missiles_fired = 480;
  CHECK(s.recomputed() == 3040);
  CHECK(display_score_update(ScoreState{}, {}).display_score == 0);

  ScoreState run;
  run = display_score_update(run, std::vector{SimEvent::missile_fired(), SimEvent::fortress_destroyed()});
  run = display_score_update(run, std::vector{SimEvent::ship_destroyed()});
  CHECK(run.display_score == -2);
  CHECK(run.display_score == run.recomputed());
  CHECK(run.missiles_fired == 1);
}

TEST_CASE("sparse and dense agree on streams without fortress hits") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    EventList ev;
    const int n = static_cast<int>(rng.below(5));
    for (int i = 0; i < n; ++i) {
      switch (rng.below(3)) {
        case 0: ev.push_back(SimEvent::missile_fired()); break;
        case 1: ev.push_back(SimEvent::ship_destroyed()); break;
        default: ev.push_back(SimEvent::shell_fired()); break;
      }
    }
    CHECK(reward(RewardKind::Sparse, ev) == reward(RewardKind::Dense, ev));
  }
}

TEST_CASE("episode totals match an event-counting oracle") {
  for (RewardKind kind : {RewardKind::Sparse, RewardKind::Dense, RewardKind::Aeci}) {
    EnvConfig cfg;
    cfg.sim = test::autoturn_config();
    cfg.reward = kind;
    cfg.obs = ObsMode::Feature;
    Env env(cfg);
    env.reset(31);
    double total = 0.0;
    int missiles = 0, deaths = 0, destroys = 0, hits = 0, gained = 0, resets = 0, lost = 0;
    SplitMix64 rng(3);
    std::int64_t score_sum = 0, prev_score = 0;
    bool done = false;
    while (!done) {
      // Fire-heavy stream so hits, resets and destructions all occur.
      const int a = rng.below(4) == 0 ? 0 : 1;
      StepResult r = env.step(a);
      total += r.reward;
      score_sum += r.info.display_score - prev_score;
      prev_score = r.info.display_score;
      for (const SimEvent& e : r.info.events) {
        switch (e.kind) {
          case EventKind::MissileFired: ++missiles; break;
          case EventKind::ShipDestroyed: ++deaths; break;
          case EventKind::FortressDestroyed: ++destroys; break;
          case EventKind::FortressHit: ++hits; gained += e.value; break;
          case EventKind::VulnerabilityReset: ++resets; lost += e.value; break;
          default: break;
        }
      }
      done = r.done;
    }
    double expect = -0.05 * missiles - deaths + destroys;
    if (kind == RewardKind::Dense) expect += hits - resets;
    if (kind == RewardKind::Aeci) expect += gained - lost + 2.0 * destroys;
    CAPTURE(to_string(kind));
    CHECK(total == doctest::Approx(expect).epsilon(1e-9));
    CHECK(score_sum == env.info().display_score);
    CHECK(env.score().display_score == env.score().recomputed());
  }
}

}  // TEST_SUITE
