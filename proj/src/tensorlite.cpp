#include "nasgraph/tensorlite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nasgraph/error.hpp"
#include "nasgraph/rng.hpp"

namespace nasgraph::tensorlite {

void ConvParams::validate() const {
  if (out_channels < 1 || in_channels < 1 || kernel_h < 1 || kernel_w < 1 ||
      stride < 1 || padding < 0) {
    fail(ErrorKind::ShapeMismatch, "invalid conv parameters");
  }
  const std::size_t expect = static_cast<std::size_t>(out_channels) *
                             in_channels * kernel_h * kernel_w;
  if (weights.size() != expect) {
    fail(ErrorKind::ShapeMismatch,
         "conv weight count " + std::to_string(weights.size()) +
             ", expected " + std::to_string(expect));
  }
  if (bias.size() != static_cast<std::size_t>(out_channels)) {
    fail(ErrorKind::ShapeMismatch, "conv bias length != out_channels");
  }
}

namespace {

bool channel_all_zero(const Tensor3& x, int c) {
  const double* p = x.channel(c);
  const std::size_t n = static_cast<std::size_t>(x.height) * x.width;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] != 0.0) return false;
  }
  return true;
}

}  // namespace

Tensor3 conv2d(const Tensor3& x, const ConvParams& p) {
  p.validate();
  if (x.channels != p.in_channels) {
    fail(ErrorKind::ShapeMismatch,
         "conv input has " + std::to_string(x.channels) +
             " channels, kernel expects " + std::to_string(p.in_channels));
  }
  const int oh = (x.height + 2 * p.padding - p.kernel_h) / p.stride + 1;
  const int ow = (x.width + 2 * p.padding - p.kernel_w) / p.stride + 1;
  if (x.height + 2 * p.padding < p.kernel_h ||
      x.width + 2 * p.padding < p.kernel_w || oh < 1 || ow < 1) {
    fail(ErrorKind::ShapeMismatch, "conv output would be empty");
  }

  std::vector<char> skip(p.in_channels);
  for (int ci = 0; ci < p.in_channels; ++ci) {
    skip[ci] = channel_all_zero(x, ci) ? 1 : 0;
  }

  Tensor3 y(p.out_channels, oh, ow);
  for (int co = 0; co < p.out_channels; ++co) {
    for (int oy = 0; oy < oh; ++oy) {
      double* yrow = y.channel(co) + static_cast<std::size_t>(oy) * ow;
      for (int kh = 0; kh < p.kernel_h; ++kh) {
        const int iy = oy * p.stride - p.padding + kh;
        if (iy < 0 || iy >= x.height) continue;
        for (int kw = 0; kw < p.kernel_w; ++kw) {
          // valid ox range for this tap: 0 <= ox*stride - padding + kw < W
          int ox_lo = 0;
          if (p.padding - kw > 0) {
            ox_lo = (p.padding - kw + p.stride - 1) / p.stride;
          }
          const int hi_num = x.width - 1 + p.padding - kw;
          if (hi_num < 0) continue;
          int ox_hi = hi_num / p.stride;  // inclusive
          if (ox_hi > ow - 1) ox_hi = ow - 1;
          if (ox_lo > ox_hi) continue;
          for (int ci = 0; ci < p.in_channels; ++ci) {
            if (skip[ci]) continue;
            const double wv = p.weight(co, ci, kh, kw);
            const double* xrow =
                x.channel(ci) + static_cast<std::size_t>(iy) * x.width;
            const int base = -p.padding + kw;
            for (int ox = ox_lo; ox <= ox_hi; ++ox) {
              yrow[ox] += wv * xrow[ox * p.stride + base];
            }
          }
        }
      }
      const double b = p.bias[co];
      for (int ox = 0; ox < ow; ++ox) yrow[ox] += b;
    }
  }
  return y;
}

Tensor3 relu(const Tensor3& x) {
  Tensor3 y = x;
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor3 avg_pool(const Tensor3& x, int kernel, int stride, int padding) {
  if (kernel < 1 || stride < 1 || padding < 0) {
    fail(ErrorKind::ShapeMismatch, "invalid pool parameters");
  }
  const int oh = (x.height + 2 * padding - kernel) / stride + 1;
  const int ow = (x.width + 2 * padding - kernel) / stride + 1;
  if (x.height + 2 * padding < kernel || x.width + 2 * padding < kernel ||
      oh < 1 || ow < 1) {
    fail(ErrorKind::ShapeMismatch, "pool output would be empty");
  }
  Tensor3 y(x.channels, oh, ow);
  for (int c = 0; c < x.channels; ++c) {
    for (int oy = 0; oy < oh; ++oy) {
      const int y_lo = std::max(0, oy * stride - padding);
      const int y_hi = std::min(x.height, oy * stride - padding + kernel);
      for (int ox = 0; ox < ow; ++ox) {
        const int x_lo = std::max(0, ox * stride - padding);
        const int x_hi = std::min(x.width, ox * stride - padding + kernel);
        double sum = 0.0;
        int count = 0;
        for (int iy = y_lo; iy < y_hi; ++iy) {
          for (int ix = x_lo; ix < x_hi; ++ix) {
            sum += x.at(c, iy, ix);
            ++count;
          }
        }
        y.at(c, oy, ox) = count > 0 ? sum / count : 0.0;
      }
    }
  }
  return y;
}

Tensor3 global_avg_pool(const Tensor3& x) {
  Tensor3 y(x.channels, 1, 1);
  const std::size_t n = static_cast<std::size_t>(x.height) * x.width;
  for (int c = 0; c < x.channels; ++c) {
    const double* p = x.channel(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += p[i];
    y.at(c, 0, 0) = sum / static_cast<double>(n);
  }
  return y;
}

Tensor3 elementwise_sum(std::span<const Tensor3> xs) {
  if (xs.empty()) fail(ErrorKind::ShapeMismatch, "sum of zero tensors");
  Tensor3 y = xs[0];
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!xs[k].same_shape(y)) {
      fail(ErrorKind::ShapeMismatch, "sum over mismatched tensor shapes");
    }
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += xs[k].data[i];
  }
  return y;
}

Tensor3 channel_concat(std::span<const Tensor3> xs) {
  if (xs.empty()) fail(ErrorKind::ShapeMismatch, "concat of zero tensors");
  int total = 0;
  for (const Tensor3& t : xs) {
    if (t.height != xs[0].height || t.width != xs[0].width) {
      fail(ErrorKind::ShapeMismatch, "concat over mismatched spatial dims");
    }
    total += t.channels;
  }
  Tensor3 y(total, xs[0].height, xs[0].width);
  double* out = y.data.data();
  for (const Tensor3& t : xs) {
    out = std::copy(t.data.begin(), t.data.end(), out);
  }
  return y;
}

std::vector<double> gaussian_init(std::size_t count, std::uint64_t seed,
                                  double std_dev) {
  std::vector<double> out(count);
  rng::NormalSampler normal(rng::splitmix64(seed));
  for (double& v : out) v = std_dev * normal.next();
  return out;
}

}  // namespace nasgraph::tensorlite
