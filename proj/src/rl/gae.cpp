#include "sf/rl/gae.hpp"

#include "sf/errors.hpp"

namespace sf::rl {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const std::uint8_t> dones, double gamma, double lambda) {
  const std::size_t T = rewards.size();
  if (values.size() != T + 1) {
    throw DomainError("compute_gae: values must have rewards.size() + 1 entries");
  }
  if (dones.size() != T) throw DomainError("compute_gae: dones must align with rewards");
  GaeResult out;
  out.advantages.resize(T);
  out.returns.resize(T);
  double next = 0.0;
  for (std::size_t t = T; t-- > 0;) {
    const double live = dones[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * values[t + 1] * live - values[t];
    next = delta + gamma * lambda * live * next;
    out.advantages[t] = next;
    out.returns[t] = next + values[t];
  }
  return out;
}

void compute_gae_batch(std::span<const double> rewards, std::span<const double> values,
                       std::span<const double> bootstrap, std::span<const std::uint8_t> dones,
                       int steps, int n, double gamma, double lambda,
                       std::span<double> advantages, std::span<double> returns) {
  const std::size_t total = static_cast<std::size_t>(steps) * n;
  if (rewards.size() != total || values.size() != total || dones.size() != total ||
      bootstrap.size() != static_cast<std::size_t>(n) || advantages.size() != total ||
      returns.size() != total) {
    throw DomainError("compute_gae_batch: buffer sizes do not match [steps, n]");
  }
  for (int i = 0; i < n; ++i) {
    double next = 0.0;
    double next_value = bootstrap[i];
    for (int t = steps; t-- > 0;) {
      const std::size_t k = static_cast<std::size_t>(t) * n + i;
      const double live = dones[k] ? 0.0 : 1.0;
      const double delta = rewards[k] + gamma * next_value * live - values[k];
      next = delta + gamma * lambda * live * next;
      advantages[k] = next;
      returns[k] = next + values[k];
      next_value = values[k];
    }
  }
}

}  // namespace sf::rl
