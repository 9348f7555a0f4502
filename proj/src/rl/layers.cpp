#include "sf/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sf::nn {

Param::Param(std::string n, std::vector<int> s) : name(std::move(n)), shape(std::move(s)) {
  const std::size_t count = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                            [](std::size_t a, int b) { return a * b; });
  value.assign(count, 0.0);
  grad.assign(count, 0.0);
}

Linear::Linear(const std::string& name, int in, int out)
    : in_(in), out_(out), weight_(name + ".weight", {out, in}), bias_(name + ".bias", {out}) {}

void Linear::init(SplitMix64& rng, double gain) {
  const double stddev = gain / std::sqrt(static_cast<double>(in_));
  for (double& w : weight_.value) w = rng.normal() * stddev;
  std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
}

void Linear::forward(std::span<const double> x, int batch, std::span<double> y) {
  input_.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(batch) * in_);
  linear_forward(input_, weight_.value, bias_.value, y, batch, in_, out_);
}

void Linear::backward(std::span<const double> dy, int batch, std::span<double> dx) {
  linear_backward(input_, weight_.value, dy, dx, weight_.grad, bias_.grad, batch, in_, out_);
}

Conv2d::Conv2d(const std::string& name, const ConvShape& shape)
    : shape_(shape),
      weight_(name + ".weight",
              {shape.out_channels, shape.in_channels, shape.kernel, shape.kernel}),
      bias_(name + ".bias", {shape.out_channels}) {}

void Conv2d::init(SplitMix64& rng, double gain) {
  const double fan_in = static_cast<double>(shape_.in_channels) * shape_.kernel * shape_.kernel;
  const double stddev = gain / std::sqrt(fan_in);
  for (double& w : weight_.value) w = rng.normal() * stddev;
  std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
}

void Conv2d::forward(std::span<const double> x, int batch, std::span<double> y) {
  input_.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(batch * shape_.in_size()));
  conv2d_forward(input_, weight_.value, bias_.value, y, batch, shape_);
}

void Conv2d::backward(std::span<const double> dy, int batch, std::span<double> dx) {
  conv2d_backward(input_, weight_.value, dy, dx, weight_.grad, bias_.grad, batch, shape_);
}

void Elementwise::forward(std::span<const double> x, int batch, std::span<double> y) {
  const std::size_t n = size_ * batch;
  output_.resize(n);
  if (kind_ == Activation::Relu) {
    for (std::size_t i = 0; i < n; ++i) output_[i] = x[i] > 0.0 ? x[i] : 0.0;
  } else {
    for (std::size_t i = 0; i < n; ++i) output_[i] = std::tanh(x[i]);
  }
  std::copy(output_.begin(), output_.end(), y.begin());
}

void Elementwise::backward(std::span<const double> dy, int batch, std::span<double> dx) {
  const std::size_t n = size_ * batch;
  if (kind_ == Activation::Relu) {
    for (std::size_t i = 0; i < n; ++i) dx[i] = output_[i] > 0.0 ? dy[i] : 0.0;
  } else {
    for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * (1.0 - output_[i] * output_[i]);
  }
}

// ------------------------------------------------------------------- GRU

namespace {
inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
}  // namespace

Gru::Gru(const std::string& name, int in, int hidden)
    : in_(in),
      hidden_(hidden),
      w_ih_(name + ".weight_ih", {3 * hidden, in}),
      b_ih_(name + ".bias_ih", {3 * hidden}),
      w_hh_(name + ".weight_hh", {3 * hidden, hidden}),
      b_hh_(name + ".bias_hh", {3 * hidden}) {}

void Gru::init(SplitMix64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_));
  for (Param* p : params()) {
    for (double& v : p->value) v = rng.uniform(-bound, bound);
  }
}

void Gru::forward(std::span<const double> x, int steps, int n,
                  std::span<const double> h0, std::span<const std::uint8_t> reset_before,
                  std::span<double> y, std::span<double> h_final) {
  const int H = hidden_;
  const std::size_t rows = static_cast<std::size_t>(steps) * n;
  steps_ = steps;
  n_ = n;
  x_.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(rows * in_));
  reset_.assign(rows, 0);
  if (!reset_before.empty()) std::copy_n(reset_before.begin(), rows, reset_.begin());
  h_prev_.resize(rows * H);
  r_.resize(rows * H);
  z_.resize(rows * H);
  nn_.resize(rows * H);
  ghn_.resize(rows * H);

  std::vector<double> gi(rows * 3 * H);
  linear_forward(x_, w_ih_.value, b_ih_.value, gi, static_cast<int>(rows), in_, 3 * H);

  std::vector<double> h(h0.begin(), h0.begin() + static_cast<std::ptrdiff_t>(n) * H);
  std::vector<double> gh(static_cast<std::size_t>(n) * 3 * H);
  for (int t = 0; t < steps; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * n;
    for (int i = 0; i < n; ++i) {
      if (reset_[base + i]) std::fill_n(h.begin() + static_cast<std::ptrdiff_t>(i) * H, H, 0.0);
    }
    std::copy(h.begin(), h.end(), h_prev_.begin() + static_cast<std::ptrdiff_t>(base * H));
    linear_forward(h, w_hh_.value, b_hh_.value, gh, n, H, 3 * H);
    for (int i = 0; i < n; ++i) {
      const double* gir = gi.data() + (base + i) * 3 * H;
      const double* ghr = gh.data() + static_cast<std::size_t>(i) * 3 * H;
      const std::size_t o = (base + i) * H;
      for (int k = 0; k < H; ++k) {
        const double r = sigmoid(gir[k] + ghr[k]);
        const double z = sigmoid(gir[H + k] + ghr[H + k]);
        const double hn = ghr[2 * H + k];
        const double nv = std::tanh(gir[2 * H + k] + r * hn);
        const double hp = h[static_cast<std::size_t>(i) * H + k];
        const double hv = (1.0 - z) * nv + z * hp;
        r_[o + k] = r;
        z_[o + k] = z;
        nn_[o + k] = nv;
        ghn_[o + k] = hn;
        h[static_cast<std::size_t>(i) * H + k] = hv;
        y[o + k] = hv;
      }
    }
  }
  if (!h_final.empty()) std::copy(h.begin(), h.end(), h_final.begin());
}

void Gru::backward(std::span<const double> dy, std::span<double> dx) {
  const int H = hidden_;
  const int n = n_;
  const std::size_t rows = static_cast<std::size_t>(steps_) * n;
  std::vector<double> dgi(rows * 3 * H);
  std::vector<double> dgh(static_cast<std::size_t>(n) * 3 * H);
  std::vector<double> dh_carry(static_cast<std::size_t>(n) * H, 0.0);
  std::vector<double> dh_prev(static_cast<std::size_t>(n) * H);

  for (int t = steps_ - 1; t >= 0; --t) {
    const std::size_t base = static_cast<std::size_t>(t) * n;
    for (int i = 0; i < n; ++i) {
      const std::size_t o = (base + i) * H;
      double* dgir = dgi.data() + (base + i) * 3 * H;
      double* dghr = dgh.data() + static_cast<std::size_t>(i) * 3 * H;
      for (int k = 0; k < H; ++k) {
        const double dh = dy[o + k] + dh_carry[static_cast<std::size_t>(i) * H + k];
        const double r = r_[o + k], z = z_[o + k], nv = nn_[o + k];
        const double hp = h_prev_[o + k];
        const double dn = dh * (1.0 - z);
        const double dz = dh * (hp - nv);
        dh_prev[static_cast<std::size_t>(i) * H + k] = dh * z;
        const double dn_pre = dn * (1.0 - nv * nv);
        const double dr_pre = dn_pre * ghn_[o + k] * r * (1.0 - r);
        const double dz_pre = dz * z * (1.0 - z);
        dgir[k] = dr_pre;
        dgir[H + k] = dz_pre;
        dgir[2 * H + k] = dn_pre;
        dghr[k] = dr_pre;
        dghr[H + k] = dz_pre;
        dghr[2 * H + k] = dn_pre * r;
      }
    }
    std::span<const double> hp(h_prev_.data() + base * H, static_cast<std::size_t>(n) * H);
    std::vector<double> dh_from_gates(static_cast<std::size_t>(n) * H);
    linear_backward(hp, w_hh_.value, dgh, dh_from_gates, w_hh_.grad, b_hh_.grad, n, H, 3 * H);
    for (int i = 0; i < n; ++i) {
      const bool cut = reset_[base + i] != 0;
      for (int k = 0; k < H; ++k) {
        const std::size_t j = static_cast<std::size_t>(i) * H + k;
        dh_carry[j] = cut ? 0.0 : dh_prev[j] + dh_from_gates[j];
      }
    }
  }
  linear_backward(x_, w_ih_.value, dgi, dx, w_ih_.grad, b_ih_.grad, static_cast<int>(rows), in_,
                  3 * H);
}

}  // namespace sf::nn
