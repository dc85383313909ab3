#include <doctest.h>

#include <cmath>
#include <functional>

#include "gfl/loss.hpp"
#include "test_util.hpp"

using namespace gfl;

namespace {

// Central finite differences of a scalar-valued function of the image.
Image finite_difference_gradient(const Image& point,
                                 const std::function<double(const Image&)>& f,
                                 double step = 1e-6) {
  Image grad(point.height, point.width, point.channels);
  Image probe = point;
  for (std::size_t i = 0; i < point.data.size(); ++i) {
    probe.data[i] = point.data[i] + step;
    const double above = f(probe);
    probe.data[i] = point.data[i] - step;
    const double below = f(probe);
    probe.data[i] = point.data[i];
    grad.data[i] = (above - below) / (2.0 * step);
  }
  return grad;
}

double max_relative_error(const Image& got, const Image& expected) {
  double worst = 0.0;
  for (std::size_t i = 0; i < got.data.size(); ++i) {
    const double denom = std::max({std::fabs(got.data[i]),
                                   std::fabs(expected.data[i]), 1e-10});
    worst = std::max(worst, std::fabs(got.data[i] - expected.data[i]) / denom);
  }
  return worst;
}

} // namespace

TEST_SUITE_BEGIN("loss");

TEST_CASE("penalty function basics") {
  CHECK(charbonnier_penalty(0.0, 1e-3) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(charbonnier_penalty(3e-3, 1e-3) ==
        doctest::Approx(std::sqrt(1e-5)).epsilon(1e-15));
  Xoshiro256pp rng(7);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform() * 4.0 - 2.0;
    CHECK(charbonnier_penalty(x, 1e-3) == charbonnier_penalty(-x, 1e-3));
    CHECK(charbonnier_penalty(x, 1e-3) >= 1e-3);
  }
}

TEST_CASE("charbonnier loss values") {
  const Image a = test::random_image(16, 16, 1, 60);
  CHECK(charbonnier_loss(a, a, 1e-3) == doctest::Approx(1e-3).epsilon(1e-13));

  const Image c1 = test::constant_image(16, 16, 1, 0.5);
  const Image c2 = test::constant_image(16, 16, 1, 0.6);
  CHECK(charbonnier_loss(c1, c2, 1e-3) ==
        doctest::Approx(std::sqrt(0.01 + 1e-6)).epsilon(1e-13));

  // mean normalization keeps the value resolution-independent
  const Image big1 = test::constant_image(64, 64, 1, 0.5);
  const Image big2 = test::constant_image(64, 64, 1, 0.6);
  CHECK(charbonnier_loss(c1, c2, 1e-3) ==
        doctest::Approx(charbonnier_loss(big1, big2, 1e-3)).epsilon(1e-14));
}

TEST_CASE("squared charbonnier component") {
  const Image a = test::random_image(16, 16, 1, 61);
  const Image b = test::random_image(16, 16, 1, 62);
  CHECK(ch_component(a, a, 1e-3) == doctest::Approx(1e-6).epsilon(1e-15));
  const Image c1 = test::constant_image(16, 16, 1, 0.2);
  const Image c2 = test::constant_image(16, 16, 1, 0.3);
  CHECK(ch_component(c1, c2, 1e-3) ==
        doctest::Approx(0.01 + 1e-6).epsilon(1e-13));
  const double loss = charbonnier_loss(a, b, 1e-3);
  CHECK(ch_component(a, b, 1e-3) ==
        doctest::Approx(loss * loss).epsilon(1e-15));
}

TEST_CASE("detail component") {
  const Image a = test::random_image(16, 16, 1, 63);
  CHECK(pi_component(a, a) == 0.0);
  CHECK(pi_component(test::constant_image(16, 16, 1, 0.2),
                     test::constant_image(16, 16, 1, 0.9)) < 1e-12);
  const Image noisy = add_gaussian_noise(a, 0.1, 0.0, 5);
  CHECK(pi_component(a, noisy) > 0.0);
}

TEST_CASE("high-frequency component") {
  const Image a = test::random_image(16, 16, 1, 64);
  const Image b = test::random_image(16, 16, 1, 65);
  FrequencyMask none = highpass_mask(16, 16, 0.0);
  none.pass.assign(none.pass.size(), 0);
  CHECK(theta_component(a, b, none) == 0.0);

  // a constant offset lives entirely in the DC bin
  Image shifted = a;
  for (double& v : shifted.data) v += 0.25;
  CHECK(theta_component(a, shifted, highpass_mask(16, 16, 0.0)) < 1e-12);

  CHECK(theta_component(a, a, highpass_mask(16, 16, 2.0)) == 0.0);
}

TEST_CASE("composite loss at its floor") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Image img = test::random_image(16, 16, seed % 2 ? 3 : 1, 100 + seed);
    const GflParams params{1e-3, highpass_mask(16, 16, 4.0)};
    const LossBreakdown lb = gfl::gfl(img, img, params);
    CHECK(std::fabs(lb.total - 1e-3) < 1e-12);
    CHECK(lb.pi_c == 0.0);
    CHECK(lb.theta_c == 0.0);
  }
}

TEST_CASE("zero mask reduces the composite to sqrt(ch + pi)") {
  const Image a = test::random_image(16, 16, 1, 66);
  const Image b = test::random_image(16, 16, 1, 67);
  GflParams params{1e-3, highpass_mask(16, 16, 0.0)};
  params.mask.pass.assign(params.mask.pass.size(), 0);
  const LossBreakdown lb = gfl::gfl(a, b, params);
  CHECK(lb.theta_c == 0.0);
  CHECK(lb.total == doctest::Approx(std::sqrt(lb.ch_c + lb.pi_c)).epsilon(1e-15));
}

TEST_CASE("composite dominates the charbonnier baseline and is symmetric") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Image a = test::random_image(16, 16, 1, 200 + seed);
    const Image b = test::random_image(16, 16, 1, 300 + seed);
    const GflParams params{1e-3, highpass_mask(16, 16, 3.0)};
    const LossBreakdown ab = gfl::gfl(a, b, params);
    const LossBreakdown ba = gfl::gfl(b, a, params);
    CHECK(ab.total >= charbonnier_loss(a, b, 1e-3) - 1e-15);
    CHECK(ab.total == doctest::Approx(ba.total).epsilon(1e-14));
    // breakdown consistency
    CHECK(ab.total * ab.total ==
          doctest::Approx(ab.ch_c + ab.pi_c + ab.theta_c).epsilon(1e-12));
  }
}

TEST_CASE("wider pass-bands never decrease the high-frequency component") {
  const Image a = test::random_image(16, 16, 1, 68);
  const Image b = test::random_image(16, 16, 1, 69);
  double prev = -1.0;
  for (double omega : {8.0, 6.0, 4.0, 2.0, 0.0}) {
    const double theta = theta_component(a, b, highpass_mask(16, 16, omega));
    CHECK(theta >= prev);
    prev = theta;
  }
}

TEST_CASE("analytic gradient is zero at the minimum") {
  const Image img = test::random_image(16, 16, 1, 70);
  const GflParams params{1e-3, highpass_mask(16, 16, 4.0)};
  const Image grad = gfl_gradient(img, img, params);
  CHECK(test::max_abs(grad) == 0.0);
}

TEST_CASE("analytic gradient matches finite differences") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Image a = test::random_image(16, 16, 1, 400 + seed);
    const Image b = test::random_image(16, 16, 1, 500 + seed);
    const GflParams params{1e-3, highpass_mask(16, 16, 4.0)};
    const Image analytic = gfl_gradient(a, b, params);
    const Image numeric = finite_difference_gradient(
        a, [&](const Image& probe) { return gfl::gfl(probe, b, params).total; });
    CHECK(max_relative_error(analytic, numeric) < 1e-5);
  }
}

TEST_CASE("baseline gradients match finite differences") {
  const Image a = test::random_image(16, 16, 1, 71);
  const Image b = test::random_image(16, 16, 1, 72);
  CHECK(max_relative_error(
            mse_gradient(a, b),
            finite_difference_gradient(
                a, [&](const Image& p) { return mse_loss(p, b); })) < 1e-5);
  CHECK(max_relative_error(
            charbonnier_gradient(a, b, 1e-3),
            finite_difference_gradient(
                a, [&](const Image& p) { return charbonnier_loss(p, b, 1e-3); })) < 1e-5);
  CHECK(max_relative_error(
            edge_gradient(a, b),
            finite_difference_gradient(
                a, [&](const Image& p) { return edge_loss(p, b); })) < 1e-5);
}

TEST_CASE("charbonnier gradient closed form") {
  const Image a = test::random_image(16, 16, 1, 73);
  const Image b = test::random_image(16, 16, 1, 74);
  const Image grad = charbonnier_gradient(a, b, 1e-3);
  const double loss = charbonnier_loss(a, b, 1e-3);
  const double count = static_cast<double>(a.data.size());
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double expected = (a.data[i] - b.data[i]) / (count * loss);
    CHECK(grad.data[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("baseline losses") {
  const Image a = test::random_image(16, 16, 1, 75);
  CHECK(mse_loss(a, a) == 0.0);
  CHECK(edge_loss(a, a) == 0.0);
  CHECK(mse_loss(test::constant_image(16, 16, 1, 0.2),
                 test::constant_image(16, 16, 1, 0.3)) ==
        doctest::Approx(0.01).epsilon(1e-13));
  CHECK(edge_loss(test::constant_image(16, 16, 1, 0.1),
                  test::constant_image(16, 16, 1, 0.9)) < 1e-9);
}

TEST_CASE("shape and mask mismatches are rejected") {
  const Image a = test::random_image(16, 16, 1, 76);
  const Image b = test::random_image(16, 32, 1, 77);
  CHECK_THROWS_AS(mse_loss(a, b), Error);
  const GflParams bad_mask{1e-3, highpass_mask(32, 32, 2.0)};
  CHECK_THROWS_AS(gfl::gfl(a, a, bad_mask), Error);
}

TEST_SUITE_END();
