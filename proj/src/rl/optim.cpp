#include "sf/rl/optim.hpp"

#include <cmath>

namespace sf::rl {

double global_grad_norm(std::span<nn::Param* const> params) {
  double sq = 0.0;
  for (const nn::Param* p : params) {
    for (double g : p->grad) sq += g * g;
  }
  return std::sqrt(sq);
}

double clip_grad_norm(std::span<nn::Param* const> params, double max_norm) {
  const double norm = global_grad_norm(params);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / (norm + 1e-12);
    for (nn::Param* p : params) {
      for (double& g : p->grad) g *= scale;
    }
  }
  return norm;
}

Adam::Adam(std::vector<nn::Param*> params, double lr, double beta1, double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const nn::Param* p : params_) {
    m_.emplace_back(p->size(), 0.0);
    v_.emplace_back(p->size(), 0.0);
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    nn::Param& p = *params_[k];
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = p.grad[i];
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
      p.value[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps_);
    }
  }
}

}  // namespace sf::rl
