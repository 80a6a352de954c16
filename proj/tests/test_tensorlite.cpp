#include "nasgraph/tensorlite.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "nasgraph/error.hpp"
#include "oracles.hpp"

using namespace nasgraph;
using tensorlite::ConvParams;
using tensorlite::Tensor3;

namespace {

Tensor3 filled(int c, int h, int w, double value) {
  Tensor3 t(c, h, w);
  for (double& v : t.data) v = value;
  return t;
}

Tensor3 random_tensor(int c, int h, int w, std::mt19937_64& gen,
                      double zero_channel_prob = 0.0) {
  Tensor3 t(c, h, w);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (double& v : t.data) v = dist(gen);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int ch = 0; ch < c; ++ch) {
    if (u01(gen) < zero_channel_prob) {
      double* p = t.channel(ch);
      for (int i = 0; i < h * w; ++i) p[i] = 0.0;
    }
  }
  return t;
}

ConvParams random_conv(int in_ch, int out_ch, int kernel, int stride, int pad,
                       std::mt19937_64& gen) {
  ConvParams p;
  p.in_channels = in_ch;
  p.out_channels = out_ch;
  p.kernel_h = kernel;
  p.kernel_w = kernel;
  p.stride = stride;
  p.padding = pad;
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  p.weights.resize(static_cast<std::size_t>(out_ch) * in_ch * kernel * kernel);
  for (double& w : p.weights) w = dist(gen);
  p.bias.resize(out_ch);
  for (double& b : p.bias) b = dist(gen);
  return p;
}

}  // namespace

TEST_CASE("conv2d 1x1 kernel scales a constant input") {
  ConvParams p;
  p.out_channels = p.in_channels = 1;
  p.kernel_h = p.kernel_w = 1;
  p.weights = {2.0};
  p.bias = {0.0};
  const Tensor3 y = tensorlite::conv2d(filled(1, 2, 2, 1.0), p);
  CHECK(y.channels == 1);
  CHECK(y.height == 2);
  CHECK(y.width == 2);
  for (double v : y.data) CHECK(v == 2.0);
}

TEST_CASE("conv2d 3x3 all-ones with padding gives 4/6/9 pattern") {
  ConvParams p;
  p.out_channels = p.in_channels = 1;
  p.kernel_h = p.kernel_w = 3;
  p.padding = 1;
  p.weights.assign(9, 1.0);
  p.bias = {0.0};
  const Tensor3 x = filled(1, 3, 3, 1.0);
  const Tensor3 y = tensorlite::conv2d(x, p);
  CHECK(y.at(0, 1, 1) == 9.0);
  CHECK(y.at(0, 0, 1) == 6.0);
  CHECK(y.at(0, 1, 0) == 6.0);
  CHECK(y.at(0, 1, 2) == 6.0);
  CHECK(y.at(0, 2, 1) == 6.0);
  CHECK(y.at(0, 0, 0) == 4.0);
  CHECK(y.at(0, 0, 2) == 4.0);
  CHECK(y.at(0, 2, 0) == 4.0);
  CHECK(y.at(0, 2, 2) == 4.0);
  // same pattern through the reference path
  CHECK(oracles::conv_reference(x, p) == y);
}

TEST_CASE("conv2d rejects channel mismatch") {
  ConvParams p;
  p.out_channels = 1;
  p.in_channels = 2;
  p.kernel_h = p.kernel_w = 1;
  p.weights = {1.0, 1.0};
  p.bias = {0.0};
  CHECK_THROWS_AS(tensorlite::conv2d(filled(1, 2, 2, 1.0), p), Error);
  try {
    tensorlite::conv2d(filled(1, 2, 2, 1.0), p);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ShapeMismatch);
  }
}

TEST_CASE("conv2d bit-identical to the quadruple-loop reference") {
  std::mt19937_64 gen(41);
  for (int iter = 0; iter < 250; ++iter) {
    const int in_ch = 1 + static_cast<int>(gen() % 4);
    const int out_ch = 1 + static_cast<int>(gen() % 4);
    const int kernel = 1 + static_cast<int>(gen() % 3);
    const int stride = 1 + static_cast<int>(gen() % 2);
    const int pad = static_cast<int>(gen() % 3);
    const int h = kernel + static_cast<int>(gen() % 6);
    const int w = kernel + static_cast<int>(gen() % 6);
    const Tensor3 x = random_tensor(in_ch, h, w, gen, 0.3);
    const ConvParams p = random_conv(in_ch, out_ch, kernel, stride, pad, gen);
    const Tensor3 got = tensorlite::conv2d(x, p);
    const Tensor3 want = oracles::conv_reference(x, p);
    REQUIRE(got.same_shape(want));
    for (std::size_t i = 0; i < got.data.size(); ++i) {
      REQUIRE(got.data[i] == want.data[i]);
    }
  }
}

TEST_CASE("conv2d is linear in the input when bias is zero") {
  std::mt19937_64 gen(7);
  for (int iter = 0; iter < 50; ++iter) {
    const Tensor3 x = random_tensor(3, 6, 6, gen);
    ConvParams p = random_conv(3, 2, 3, 1, 1, gen);
    p.bias.assign(p.out_channels, 0.0);
    const double a = 3.5;
    Tensor3 ax = x;
    for (double& v : ax.data) v *= a;
    const Tensor3 y1 = tensorlite::conv2d(ax, p);
    Tensor3 y2 = tensorlite::conv2d(x, p);
    for (double& v : y2.data) v *= a;
    for (std::size_t i = 0; i < y1.data.size(); ++i) {
      CHECK(y1.data[i] == doctest::Approx(y2.data[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("relu definition and saturation") {
  Tensor3 x(1, 1, 3);
  x.data = {-1.0, 0.0, 2.0};
  CHECK(tensorlite::relu(x).data == std::vector<double>{0.0, 0.0, 2.0});

  const Tensor3 neg = filled(2, 3, 3, -4.5);
  for (double v : tensorlite::relu(neg).data) CHECK(v == 0.0);

  const Tensor3 zero(2, 2, 2);
  CHECK(tensorlite::relu(zero).data == zero.data);
}

TEST_CASE("relu is idempotent") {
  std::mt19937_64 gen(11);
  const Tensor3 x = random_tensor(4, 5, 5, gen);
  const Tensor3 once = tensorlite::relu(x);
  CHECK(tensorlite::relu(once) == once);
}

TEST_CASE("avg_pool examples") {
  CHECK(tensorlite::avg_pool(filled(1, 2, 2, 1.0), 2, 2, 0).data ==
        std::vector<double>{1.0});

  Tensor3 ramp(1, 3, 3);
  for (int i = 0; i < 9; ++i) ramp.data[i] = i + 1;
  CHECK(tensorlite::avg_pool(ramp, 3, 1, 0).data == std::vector<double>{5.0});

  const Tensor3 zero(2, 4, 4);
  for (double v : tensorlite::avg_pool(zero, 2, 2, 0).data) CHECK(v == 0.0);
}

TEST_CASE("avg_pool of a constant tensor is that constant") {
  std::mt19937_64 gen(13);
  for (int iter = 0; iter < 30; ++iter) {
    const double value = static_cast<double>(gen() % 100) / 7.0 - 5.0;
    const int h = 2 + static_cast<int>(gen() % 6);
    const int kernel = 1 + static_cast<int>(gen() % 3);
    const int pad = static_cast<int>(gen() % 2);
    const Tensor3 y =
        tensorlite::avg_pool(filled(2, h, h, value), kernel, 1, pad);
    for (double v : y.data) CHECK(v == doctest::Approx(value).epsilon(1e-12));
  }
}

TEST_CASE("avg_pool keeps non-negative inputs non-negative") {
  std::mt19937_64 gen(17);
  Tensor3 x = random_tensor(3, 5, 5, gen);
  for (double& v : x.data) v = std::abs(v);
  const Tensor3 y = tensorlite::avg_pool(x, 3, 2, 1);
  for (double v : y.data) CHECK(v >= 0.0);
}

TEST_CASE("avg_pool rejects empty outputs") {
  CHECK_THROWS_AS(tensorlite::avg_pool(filled(1, 1, 1, 1.0), 2, 2, 0), Error);
}

TEST_CASE("elementwise_sum") {
  const Tensor3 ones = filled(2, 2, 2, 1.0);
  const Tensor3 pair[] = {ones, ones};
  for (double v : tensorlite::elementwise_sum(pair).data) CHECK(v == 2.0);

  const Tensor3 single[] = {ones};
  CHECK(tensorlite::elementwise_sum(single) == ones);

  const Tensor3 bad[] = {ones, filled(3, 2, 2, 1.0)};
  CHECK_THROWS_AS(tensorlite::elementwise_sum(bad), Error);
}

TEST_CASE("channel_concat") {
  std::mt19937_64 gen(19);
  const Tensor3 a = random_tensor(2, 2, 2, gen);
  const Tensor3 b = random_tensor(2, 2, 2, gen);
  const Tensor3 both[] = {a, b};
  const Tensor3 y = tensorlite::channel_concat(both);
  CHECK(y.channels == 4);
  CHECK(y.height == 2);
  CHECK(y.width == 2);
  for (int i = 0; i < 4; ++i) {
    CHECK(y.channel(0)[i] == a.channel(0)[i]);  // first channel bit-exact
    CHECK(y.channel(2)[i] == b.channel(0)[i]);
  }

  const Tensor3 bad[] = {a, filled(2, 3, 2, 1.0)};
  CHECK_THROWS_AS(tensorlite::channel_concat(bad), Error);
}

TEST_CASE("gaussian_init determinism and moments") {
  const auto a = tensorlite::gaussian_init(1000, 42, 1.0);
  const auto b = tensorlite::gaussian_init(1000, 42, 1.0);
  CHECK(a == b);
  CHECK(a != tensorlite::gaussian_init(1000, 43, 1.0));

  for (double v : tensorlite::gaussian_init(64, 5, 0.0)) CHECK(v == 0.0);

  const auto big = tensorlite::gaussian_init(100000, 7, 1.0);
  double mean = 0.0;
  for (double v : big) mean += v;
  mean /= big.size();
  double var = 0.0;
  for (double v : big) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / big.size());
  CHECK(std::abs(mean) < 0.02);
  CHECK(sd > 0.98);
  CHECK(sd < 1.02);
}
