#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sf/nn/kernels.hpp"
#include "sf/rng.hpp"

namespace sf::nn {

// A named trainable array with its gradient accumulator.
struct Param {
  std::string name;
  std::vector<int> shape;
  std::vector<double> value;
  std::vector<double> grad;

  Param(std::string n, std::vector<int> s);
  std::size_t size() const { return value.size(); }
};

// Per-sample layer. forward() caches whatever backward() needs, so calls
// must alternate forward -> backward on the same batch.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::size_t in_size() const = 0;
  virtual std::size_t out_size() const = 0;
  virtual void forward(std::span<const double> x, int batch, std::span<double> y) = 0;
  // dx may be empty for the first layer.
  virtual void backward(std::span<const double> dy, int batch, std::span<double> dx) = 0;
  virtual std::vector<Param*> params() { return {}; }
};

class Linear final : public Layer {
 public:
  Linear(const std::string& name, int in, int out);
  std::size_t in_size() const override { return in_; }
  std::size_t out_size() const override { return out_; }
  void forward(std::span<const double> x, int batch, std::span<double> y) override;
  void backward(std::span<const double> dy, int batch, std::span<double> dx) override;
  std::vector<Param*> params() override { return {&weight_, &bias_}; }

  // Scaled normal init (std = gain / sqrt(in)), zero bias.
  void init(SplitMix64& rng, double gain);

 private:
  int in_, out_;
  Param weight_, bias_;
  std::vector<double> input_;
};

class Conv2d final : public Layer {
 public:
  Conv2d(const std::string& name, const ConvShape& shape);
  std::size_t in_size() const override { return shape_.in_size(); }
  std::size_t out_size() const override { return shape_.out_size(); }
  void forward(std::span<const double> x, int batch, std::span<double> y) override;
  void backward(std::span<const double> dy, int batch, std::span<double> dx) override;
  std::vector<Param*> params() override { return {&weight_, &bias_}; }
  void init(SplitMix64& rng, double gain);

 private:
  ConvShape shape_;
  Param weight_, bias_;
  std::vector<double> input_;
};

enum class Activation { Relu, Tanh };

class Elementwise final : public Layer {
 public:
  Elementwise(Activation kind, std::size_t size) : kind_(kind), size_(size) {}
  std::size_t in_size() const override { return size_; }
  std::size_t out_size() const override { return size_; }
  void forward(std::span<const double> x, int batch, std::span<double> y) override;
  void backward(std::span<const double> dy, int batch, std::span<double> dx) override;

 private:
  Activation kind_;
  std::size_t size_;
  std::vector<double> output_;
};

// Gated recurrent unit with gate order (reset, update, new):
//   r = sigmoid(W_ir x + b_ir + W_hr h + b_hr)
//   z = sigmoid(W_iz x + b_iz + W_hz h + b_hz)
//   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
//   h' = (1 - z) * n + z * h
// Sequences are time-major [T, N, *]. reset_before[t * N + i] != 0 zeroes
// the state entering step t for sequence i; gradients do not cross it.
class Gru {
 public:
  Gru(const std::string& name, int in, int hidden);

  int in_size() const { return in_; }
  int hidden_size() const { return hidden_; }

  // y receives h_t for every step; h_final the state after step T-1.
  void forward(std::span<const double> x, int steps, int n,
               std::span<const double> h0, std::span<const std::uint8_t> reset_before,
               std::span<double> y, std::span<double> h_final);
  // Backpropagates dy through time. dx may be empty.
  void backward(std::span<const double> dy, std::span<double> dx);

  std::vector<Param*> params() { return {&w_ih_, &b_ih_, &w_hh_, &b_hh_}; }
  void init(SplitMix64& rng);

 private:
  int in_, hidden_;
  Param w_ih_, b_ih_, w_hh_, b_hh_;
  // Cache of the last forward call.
  int steps_ = 0, n_ = 0;
  std::vector<double> x_, h_prev_, r_, z_, nn_, ghn_;
  std::vector<std::uint8_t> reset_;
};

}  // namespace sf::nn
