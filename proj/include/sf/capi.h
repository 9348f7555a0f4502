#ifndef SF_CAPI_H
#define SF_CAPI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by the functions below. */
enum {
  SF_OK = 0,
  SF_ERR_CONFIG = -1,
  SF_ERR_DOMAIN = -2,
  SF_ERR_LIFECYCLE = -3,
  SF_ERR_OTHER = -4
};

typedef struct sf_env sf_env;

typedef struct sf_step_info {
  int64_t display_score;
  int32_t v;
  int32_t fortress_deaths;
  int32_t ship_deaths;
  int32_t missiles_fired;
  int64_t frame;
  uint64_t seed;
} sf_step_info;

/* game: "autoturn" | "youturn"; reward: "sparse" | "dense" | "aeci";
   obs: "pixel" | "feature". Returns NULL on error (see sf_last_error). */
sf_env* sf_env_create(const char* game, const char* reward, const char* obs,
                      int include_clock);
void sf_env_destroy(sf_env* env);

/* Only between episodes. */
int sf_env_set_critical_interval(sf_env* env, double ms);

/* has_seed == 0 draws a fresh seed. obs_out must hold sf_env_obs_size floats. */
int sf_env_reset(sf_env* env, uint64_t seed, int has_seed, float* obs_out, size_t obs_len);
int sf_env_step(sf_env* env, int action, float* obs_out, size_t obs_len, double* reward,
                int* done, sf_step_info* info);

size_t sf_env_obs_size(const sf_env* env);
/* Writes up to max_dims dimensions; returns the rank. */
int sf_env_obs_shape(const sf_env* env, size_t* dims, int max_dims);
int sf_env_num_actions(const sf_env* env);

/* Message of the most recent failure on the calling thread. */
const char* sf_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
