#pragma once

#include <cstddef>
#include <span>

// Dense and convolution kernels used by the policy networks. Every kernel
// has an OpenMP version in sf::nn and a straightforward serial version in
// sf::nn::serial that tests and the benchmark compare against.
//
// Layouts: x [batch, in], w [out, in] for dense layers;
// x [batch, C, H, W], w [OC, C, K, K], y [batch, OC, OH, OW] for convolution.
// Backward kernels overwrite dx (skipped when empty) and accumulate into dw
// and db.
namespace sf::nn {

struct ConvShape {
  int in_channels = 0;
  int in_h = 0;
  int in_w = 0;
  int out_channels = 0;
  int kernel = 0;
  int stride = 1;

  int out_h() const { return (in_h - kernel) / stride + 1; }
  int out_w() const { return (in_w - kernel) / stride + 1; }
  std::size_t in_size() const {
    return static_cast<std::size_t>(in_channels) * in_h * in_w;
  }
  std::size_t out_size() const {
    return static_cast<std::size_t>(out_channels) * out_h() * out_w();
  }
  std::size_t weight_size() const {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel;
  }
};

void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    int in, int out);
void linear_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     int in, int out);
void conv2d_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    const ConvShape& shape);
void conv2d_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     const ConvShape& shape);

namespace serial {

void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    int in, int out);
void linear_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     int in, int out);
void conv2d_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    const ConvShape& shape);
void conv2d_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     const ConvShape& shape);

}  // namespace serial
}  // namespace sf::nn
