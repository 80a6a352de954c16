#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nasgraph::tensorlite {

/// Dense (channel, row, col) tensor of doubles, row-major within a channel.
struct Tensor3 {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(int c, int h, int w)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, 0.0) {}

  double& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double* channel(int c) {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
  const double* channel(int c) const {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor3& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }

  bool operator==(const Tensor3&) const = default;
};

struct ConvParams {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  int stride = 1;
  int padding = 0;
  std::vector<double> weights;  // [out][in][kh][kw], row-major
  std::vector<double> bias;     // [out]

  double weight(int co, int ci, int kh, int kw) const {
    return weights[((static_cast<std::size_t>(co) * in_channels + ci) *
                        kernel_h + kh) * kernel_w + kw];
  }
  void validate() const;  // throws ShapeMismatch on inconsistent sizes
};

/// Cross-correlation with bias. Accumulates per output element in (kh, kw, ci)
/// order, bias added last; input channels that are identically zero are
/// skipped, which is bit-exact (adding a +/-0 term never changes a sum that
/// starts at +0).
Tensor3 conv2d(const Tensor3& x, const ConvParams& p);

/// Elementwise max(0, x). Exact zeros in, exact zeros out.
Tensor3 relu(const Tensor3& x);

/// Mean over each window counting only in-bounds elements
/// (count_include_pad = false).
Tensor3 avg_pool(const Tensor3& x, int kernel, int stride, int padding);

/// Mean over the full spatial extent per channel; output is C x 1 x 1.
Tensor3 global_avg_pool(const Tensor3& x);

Tensor3 elementwise_sum(std::span<const Tensor3> xs);

Tensor3 channel_concat(std::span<const Tensor3> xs);

/// i.i.d. N(0, std^2) draws from mt19937_64 + Marsaglia polar transform
/// (see rng.hpp). Same (count, seed, std) always yields the same array.
std::vector<double> gaussian_init(std::size_t count, std::uint64_t seed,
                                  double std_dev);

}  // namespace nasgraph::tensorlite
