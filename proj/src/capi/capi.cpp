#include "sf/capi.h"

#include <exception>
#include <string>

#include "sf/env.hpp"
#include "sf/errors.hpp"

struct sf_env {
  sf::Env env;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
int guarded(F&& f) {
  try {
    f();
    return SF_OK;
  } catch (const sf::ConfigError& e) {
    g_last_error = e.what();
    return SF_ERR_CONFIG;
  } catch (const sf::DomainError& e) {
    g_last_error = e.what();
    return SF_ERR_DOMAIN;
  } catch (const sf::LifecycleError& e) {
    g_last_error = e.what();
    return SF_ERR_LIFECYCLE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SF_ERR_OTHER;
  }
}

std::span<float> out_span(const sf_env* env, float* obs, size_t len) {
  if (!obs) throw sf::DomainError("observation buffer is NULL");
  if (len != env->env.observation_size()) {
    throw sf::DomainError("observation buffer holds " + std::to_string(len) + " floats, need " +
                          std::to_string(env->env.observation_size()));
  }
  return {obs, len};
}

void fill_info(const sf::StepInfo& i, sf_step_info* out) {
  if (!out) return;
  out->display_score = i.display_score;
  out->v = i.v;
  out->fortress_deaths = i.fortress_deaths;
  out->ship_deaths = i.ship_deaths;
  out->missiles_fired = i.missiles_fired;
  out->frame = i.frame;
  out->seed = i.seed;
}

}  // namespace

extern "C" {

sf_env* sf_env_create(const char* game, const char* reward, const char* obs, int include_clock) {
  sf_env* out = nullptr;
  guarded([&] {
    if (!game || !reward || !obs) throw sf::ConfigError("NULL argument to sf_env_create");
    sf::EnvConfig c;
    c.sim.game_version = sf::parse_game_version(game);
    c.reward = sf::parse_reward_kind(reward);
    c.obs = sf::parse_obs_mode(obs);
    c.include_clock = include_clock != 0;
    out = new sf_env{sf::Env(c)};
  });
  return out;
}

void sf_env_destroy(sf_env* env) { delete env; }

int sf_env_set_critical_interval(sf_env* env, double ms) {
  return guarded([&] { env->env.set_critical_interval(ms); });
}

int sf_env_reset(sf_env* env, uint64_t seed, int has_seed, float* obs_out, size_t obs_len) {
  return guarded([&] {
    std::optional<std::uint64_t> s;
    if (has_seed) s = seed;
    env->env.reset_into(s, out_span(env, obs_out, obs_len));
  });
}

int sf_env_step(sf_env* env, int action, float* obs_out, size_t obs_len, double* reward,
                int* done, sf_step_info* info) {
  return guarded([&] {
    const sf::StepOutcome o = env->env.step_into(action, out_span(env, obs_out, obs_len));
    if (reward) *reward = o.reward;
    if (done) *done = o.done ? 1 : 0;
    fill_info(o.info, info);
  });
}

size_t sf_env_obs_size(const sf_env* env) { return env->env.observation_size(); }

int sf_env_obs_shape(const sf_env* env, size_t* dims, int max_dims) {
  const auto shape = env->env.observation_shape();
  for (int i = 0; i < max_dims && i < static_cast<int>(shape.size()); ++i) dims[i] = shape[i];
  return static_cast<int>(shape.size());
}

int sf_env_num_actions(const sf_env* env) { return env->env.num_actions(); }

const char* sf_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
