#pragma once

#include <span>
#include <vector>

#include "sf/nn/layers.hpp"

namespace sf::rl {

double global_grad_norm(std::span<nn::Param* const> params);

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_grad_norm(std::span<nn::Param* const> params, double max_norm);

class Adam {
 public:
  explicit Adam(std::vector<nn::Param*> params, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-5);

  void step();
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }
  long steps() const { return t_; }

 private:
  std::vector<nn::Param*> params_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace sf::rl
