#include "sf/nn/kernels.hpp"

#include <algorithm>
#include <vector>

#include <omp.h>

namespace sf::nn {
namespace {

inline double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Unfolds one sample into columns [C*K*K, OH*OW].
void im2col(const double* x, const ConvShape& s, double* col) {
  const int oh = s.out_h(), ow = s.out_w(), k = s.kernel;
  std::size_t row = 0;
  for (int c = 0; c < s.in_channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        double* dst = col + row * oh * ow;
        for (int oy = 0; oy < oh; ++oy) {
          const double* src = x + (static_cast<std::size_t>(c) * s.in_h +
                                   oy * s.stride + ky) * s.in_w + kx;
          for (int ox = 0; ox < ow; ++ox) dst[oy * ow + ox] = src[ox * s.stride];
        }
      }
    }
  }
}

void col2im_add(const double* col, const ConvShape& s, double* dx) {
  const int oh = s.out_h(), ow = s.out_w(), k = s.kernel;
  std::size_t row = 0;
  for (int c = 0; c < s.in_channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        const double* src = col + row * oh * ow;
        for (int oy = 0; oy < oh; ++oy) {
          double* dst = dx + (static_cast<std::size_t>(c) * s.in_h +
                              oy * s.stride + ky) * s.in_w + kx;
          for (int ox = 0; ox < ow; ++ox) dst[ox * s.stride] += src[oy * ow + ox];
        }
      }
    }
  }
}

void conv_sample_forward(const double* x, const double* w, const double* b,
                         double* y, const ConvShape& s, std::vector<double>& col) {
  const int p = s.out_h() * s.out_w();
  const int kk = s.in_channels * s.kernel * s.kernel;
  col.resize(static_cast<std::size_t>(kk) * p);
  im2col(x, s, col.data());
  for (int oc = 0; oc < s.out_channels; ++oc) {
    double* yo = y + static_cast<std::size_t>(oc) * p;
    std::fill(yo, yo + p, b[oc]);
    const double* wo = w + static_cast<std::size_t>(oc) * kk;
    for (int j = 0; j < kk; ++j) {
      const double wj = wo[j];
      const double* cj = col.data() + static_cast<std::size_t>(j) * p;
      for (int q = 0; q < p; ++q) yo[q] += wj * cj[q];
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- serial

namespace serial {

void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    int in, int out) {
  for (int n = 0; n < batch; ++n) {
    const double* xn = x.data() + static_cast<std::size_t>(n) * in;
    for (int o = 0; o < out; ++o) {
      y[static_cast<std::size_t>(n) * out + o] =
          b[o] + dot(xn, w.data() + static_cast<std::size_t>(o) * in, in);
    }
  }
}

void linear_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     int in, int out) {
  for (int n = 0; n < batch; ++n) {
    const double* xn = x.data() + static_cast<std::size_t>(n) * in;
    const double* dyn = dy.data() + static_cast<std::size_t>(n) * out;
    for (int o = 0; o < out; ++o) {
      db[o] += dyn[o];
      double* dwo = dw.data() + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) dwo[i] += dyn[o] * xn[i];
    }
    if (!dx.empty()) {
      double* dxn = dx.data() + static_cast<std::size_t>(n) * in;
      std::fill(dxn, dxn + in, 0.0);
      for (int o = 0; o < out; ++o) {
        const double* wo = w.data() + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) dxn[i] += dyn[o] * wo[i];
      }
    }
  }
}

void conv2d_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    const ConvShape& s) {
  const int oh = s.out_h(), ow = s.out_w(), k = s.kernel;
  for (int n = 0; n < batch; ++n) {
    const double* xn = x.data() + n * s.in_size();
    double* yn = y.data() + n * s.out_size();
    for (int oc = 0; oc < s.out_channels; ++oc) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          double acc = b[oc];
          for (int c = 0; c < s.in_channels; ++c) {
            for (int ky = 0; ky < k; ++ky) {
              for (int kx = 0; kx < k; ++kx) {
                const double xv =
                    xn[(static_cast<std::size_t>(c) * s.in_h + oy * s.stride + ky) *
                           s.in_w + ox * s.stride + kx];
                const double wv =
                    w[((static_cast<std::size_t>(oc) * s.in_channels + c) * k + ky) * k + kx];
                acc += xv * wv;
              }
            }
          }
          yn[(static_cast<std::size_t>(oc) * oh + oy) * ow + ox] = acc;
        }
      }
    }
  }
}

void conv2d_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     const ConvShape& s) {
  const int oh = s.out_h(), ow = s.out_w(), k = s.kernel;
  if (!dx.empty()) std::fill(dx.begin(), dx.begin() + batch * s.in_size(), 0.0);
  for (int n = 0; n < batch; ++n) {
    const double* xn = x.data() + n * s.in_size();
    const double* dyn = dy.data() + n * s.out_size();
    double* dxn = dx.empty() ? nullptr : dx.data() + n * s.in_size();
    for (int oc = 0; oc < s.out_channels; ++oc) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          const double g = dyn[(static_cast<std::size_t>(oc) * oh + oy) * ow + ox];
          db[oc] += g;
          for (int c = 0; c < s.in_channels; ++c) {
            for (int ky = 0; ky < k; ++ky) {
              for (int kx = 0; kx < k; ++kx) {
                const std::size_t xi =
                    (static_cast<std::size_t>(c) * s.in_h + oy * s.stride + ky) * s.in_w +
                    ox * s.stride + kx;
                const std::size_t wi =
                    ((static_cast<std::size_t>(oc) * s.in_channels + c) * k + ky) * k + kx;
                dw[wi] += g * xn[xi];
                if (dxn) dxn[xi] += g * w[wi];
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace serial

// -------------------------------------------------------------- parallel

void linear_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    int in, int out) {
#pragma omp parallel for schedule(static) if (batch * out > 4096)
  for (int n = 0; n < batch; ++n) {
    const double* xn = x.data() + static_cast<std::size_t>(n) * in;
    double* yn = y.data() + static_cast<std::size_t>(n) * out;
    for (int o = 0; o < out; ++o) {
      yn[o] = b[o] + dot(xn, w.data() + static_cast<std::size_t>(o) * in, in);
    }
  }
}

void linear_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     int in, int out) {
  // Each thread owns a block of output rows of dw / db.
#pragma omp parallel for schedule(static) if (batch * out > 4096)
  for (int o = 0; o < out; ++o) {
    double* dwo = dw.data() + static_cast<std::size_t>(o) * in;
    double dbo = 0.0;
    for (int n = 0; n < batch; ++n) {
      const double g = dy[static_cast<std::size_t>(n) * out + o];
      if (g == 0.0) continue;
      dbo += g;
      const double* xn = x.data() + static_cast<std::size_t>(n) * in;
      for (int i = 0; i < in; ++i) dwo[i] += g * xn[i];
    }
    db[o] += dbo;
  }
  if (dx.empty()) return;
#pragma omp parallel for schedule(static) if (batch * out > 4096)
  for (int n = 0; n < batch; ++n) {
    double* dxn = dx.data() + static_cast<std::size_t>(n) * in;
    std::fill(dxn, dxn + in, 0.0);
    const double* dyn = dy.data() + static_cast<std::size_t>(n) * out;
    for (int o = 0; o < out; ++o) {
      const double g = dyn[o];
      if (g == 0.0) continue;
      const double* wo = w.data() + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) dxn[i] += g * wo[i];
    }
  }
}

void conv2d_forward(std::span<const double> x, std::span<const double> w,
                    std::span<const double> b, std::span<double> y, int batch,
                    const ConvShape& s) {
#pragma omp parallel
  {
    std::vector<double> col;
#pragma omp for schedule(static)
    for (int n = 0; n < batch; ++n) {
      conv_sample_forward(x.data() + n * s.in_size(), w.data(), b.data(),
                          y.data() + n * s.out_size(), s, col);
    }
  }
}

void conv2d_backward(std::span<const double> x, std::span<const double> w,
                     std::span<const double> dy, std::span<double> dx,
                     std::span<double> dw, std::span<double> db, int batch,
                     const ConvShape& s) {
  const int p = s.out_h() * s.out_w();
  const int kk = s.in_channels * s.kernel * s.kernel;
  const std::size_t wsize = s.weight_size();
  // Per-thread partial sums, reduced in thread order so results only depend
  // on the thread count.
  const int threads = omp_get_max_threads();
  std::vector<std::vector<double>> dw_parts(threads);
  std::vector<std::vector<double>> db_parts(threads);
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    std::vector<double> col(static_cast<std::size_t>(kk) * p);
    std::vector<double> dcol(static_cast<std::size_t>(kk) * p);
    std::vector<double>& dw_local = dw_parts[t];
    std::vector<double>& db_local = db_parts[t];
    dw_local.assign(wsize, 0.0);
    db_local.assign(s.out_channels, 0.0);
#pragma omp for schedule(static)
    for (int n = 0; n < batch; ++n) {
      const double* dyn = dy.data() + n * s.out_size();
      im2col(x.data() + n * s.in_size(), s, col.data());
      for (int oc = 0; oc < s.out_channels; ++oc) {
        const double* g = dyn + static_cast<std::size_t>(oc) * p;
        double* dwo = dw_local.data() + static_cast<std::size_t>(oc) * kk;
        double acc = 0.0;
        for (int q = 0; q < p; ++q) acc += g[q];
        db_local[oc] += acc;
        for (int j = 0; j < kk; ++j) {
          dwo[j] += dot(g, col.data() + static_cast<std::size_t>(j) * p, p);
        }
      }
      if (!dx.empty()) {
        std::fill(dcol.begin(), dcol.end(), 0.0);
        for (int oc = 0; oc < s.out_channels; ++oc) {
          const double* g = dyn + static_cast<std::size_t>(oc) * p;
          const double* wo = w.data() + static_cast<std::size_t>(oc) * kk;
          for (int j = 0; j < kk; ++j) {
            const double wj = wo[j];
            double* dc = dcol.data() + static_cast<std::size_t>(j) * p;
            for (int q = 0; q < p; ++q) dc[q] += wj * g[q];
          }
        }
        double* dxn = dx.data() + n * s.in_size();
        std::fill(dxn, dxn + s.in_size(), 0.0);
        col2im_add(dcol.data(), s, dxn);
      }
    }
  }
  for (int t = 0; t < threads; ++t) {
    if (dw_parts[t].empty()) continue;
    for (std::size_t i = 0; i < wsize; ++i) dw[i] += dw_parts[t][i];
    for (int oc = 0; oc < s.out_channels; ++oc) db[oc] += db_parts[t][oc];
  }
}

}  // namespace sf::nn
