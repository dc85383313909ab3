#include <doctest.h>

#include <cmath>

#include "gfl/metrics.hpp"
#include "test_util.hpp"

using namespace gfl;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("psnr values") {
  const Image a = test::constant_image(16, 16, 1, 0.5);
  const Image b = test::constant_image(16, 16, 1, 0.6);
  CHECK(psnr(a, b) == doctest::Approx(20.0).epsilon(1e-12)); // mse 0.01
  CHECK(psnr(a, a) == 120.0);
}

TEST_CASE("psnr decreases as mse increases") {
  const Image base = test::constant_image(16, 16, 1, 0.5);
  double prev = 1e9;
  for (double offset : {0.01, 0.05, 0.1, 0.2, 0.4}) {
    const Image other = test::constant_image(16, 16, 1, 0.5 + offset);
    const double value = psnr(base, other);
    CHECK(value < prev);
    prev = value;
  }
}

TEST_CASE("ssim of an image with itself is one") {
  const Image img = test::random_image(24, 20, 3, 80);
  CHECK(std::fabs(ssim(img, img) - 1.0) < 1e-12);
}

TEST_CASE("ssim of two constants reduces to the luminance term") {
  const Image a = test::constant_image(16, 16, 1, 0.4);
  const Image b = test::constant_image(16, 16, 1, 0.6);
  const double c1 = 0.01 * 0.01;
  const double expected = (2.0 * 0.4 * 0.6 + c1) / (0.4 * 0.4 + 0.6 * 0.6 + c1);
  CHECK(ssim(a, b) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("ssim is symmetric") {
  const Image a = test::random_image(16, 16, 1, 81);
  const Image b = test::random_image(16, 16, 1, 82);
  CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
}

TEST_CASE("ssim rejects tiny and mismatched inputs") {
  try {
    ssim(test::random_image(8, 8, 1, 83), test::random_image(8, 8, 1, 84));
    FAIL("expected ImageTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ImageTooSmall);
  }
  CHECK_THROWS_AS(
      ssim(test::random_image(16, 16, 1, 85), test::random_image(16, 32, 1, 86)),
      Error);
}

TEST_SUITE_END();
