#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sf::rl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// values carries one bootstrap entry past the last reward. dones[t] != 0
// means the episode ended with step t, cutting both the bootstrap and the
// advantage recursion. Throws DomainError on length mismatch.
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> dones, double gamma, double lambda);

// Strided variant for time-major [T, N] buffers: fills adv/ret for all N
// columns, with bootstrap[N] as the value after the last step.
void compute_gae_batch(std::span<const double> rewards, std::span<const double> values,
                       std::span<const double> bootstrap, std::span<const std::uint8_t> dones,
                       int steps, int n, double gamma, double lambda,
                       std::span<double> advantages, std::span<double> returns);

}  // namespace sf::rl
