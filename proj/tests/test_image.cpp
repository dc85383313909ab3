#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gfl/image.hpp"
#include "gfl/image_io.hpp"
#include "test_util.hpp"

using namespace gfl;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gfl_image_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_SUITE_BEGIN("image");

TEST_CASE("pgm load maps bytes to [0,1]") {
  const auto path = temp_file("tiny.pgm");
  std::string bytes = "P5\n2 2\n255\n";
  bytes.push_back('\x00');
  bytes.push_back('\xff');
  bytes.push_back('\x80');
  bytes.push_back('\x40');
  write_bytes(path, bytes);
  const Image img = load_image(path.string());
  CHECK(img.height == 2);
  CHECK(img.width == 2);
  CHECK(img.channels == 1);
  CHECK(img.data[0] == 0.0);
  CHECK(img.data[1] == 1.0);
  CHECK(img.data[2] == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
  CHECK(img.data[3] == doctest::Approx(64.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("white png round-trips to all ones") {
  const auto path = temp_file("white.png");
  save_image(test::constant_image(8, 8, 1, 1.0), path.string());
  const Image img = load_image(path.string());
  for (double v : img.data) CHECK(v == 1.0);
}

TEST_CASE("rgb png round-trip stays within half a quantization step") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Image img = test::random_image(16, 12, seed % 2 ? 3 : 1, seed);
    const auto path = temp_file("roundtrip.png");
    save_image(img, path.string());
    const Image back = load_image(path.string());
    REQUIRE(back.same_shape(img));
    CHECK(test::max_abs_diff(img, back) <= 1.0 / 510.0 + 1e-12);
  }
}

TEST_CASE("save quantizes with round-half-up and clamps") {
  CHECK(quantize_sample(0.5) == 128); // round(127.5) rounds up
  CHECK(quantize_sample(1.2) == 255);
  CHECK(quantize_sample(-0.3) == 0);
  const auto path = temp_file("gray128.png");
  save_image(test::constant_image(8, 8, 1, 0.5), path.string());
  const Image back = load_image(path.string());
  for (double v : back.data) CHECK(v == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("save/load is idempotent after the first quantization") {
  const auto path_a = temp_file("idem_a.png");
  const auto path_b = temp_file("idem_b.png");
  save_image(test::random_image(16, 16, 3, 7), path_a.string());
  const Image first = load_image(path_a.string());
  save_image(first, path_b.string());
  const Image second = load_image(path_b.string());
  CHECK(test::max_abs_diff(first, second) == 0.0);
}

TEST_CASE("load rejects missing and malformed files") {
  CHECK_THROWS_WITH_AS(load_image("/nonexistent/no.png"), doctest::Contains("FileNotFound"), Error);
  const auto path = temp_file("garbage.bin");
  write_bytes(path, "not an image at all");
  try {
    load_image(path.string());
    FAIL("expected UnsupportedFormat");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFormat);
  }
}

TEST_CASE("png loader rejects 16-bit, palette and alpha") {
  // Hand-build headers that differ from ours only in depth/color type.
  const Image img = test::constant_image(8, 8, 1, 0.5);
  const auto path = temp_file("base.png");
  save_image(img, path.string());
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  auto patched = [&](std::size_t offset, char value) {
    std::string copy = bytes;
    copy[offset] = value;
    // Only the IHDR payload is patched; the stale CRC must be detected.
    const auto p = temp_file("patched.png");
    write_bytes(p, copy);
    return p;
  };
  // IHDR payload starts at byte 16; bit depth is at 24, color type at 25.
  try {
    load_image(patched(24, 16).string());
    FAIL("expected an error");
  } catch (const Error& e) {
    const bool ok = e.code() == ErrorCode::UnsupportedFormat ||
                    e.code() == ErrorCode::CorruptData;
    CHECK(ok);
  }
}

TEST_CASE("corrupt png CRC is detected") {
  const auto path = temp_file("crc.png");
  save_image(test::constant_image(8, 8, 1, 0.25), path.string());
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  bytes[bytes.size() / 2] ^= 0x5A; // flip a bit mid-IDAT
  const auto bad = temp_file("crc_bad.png");
  write_bytes(bad, bytes);
  try {
    load_image(bad.string());
    FAIL("expected CorruptData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CorruptData);
  }
}

TEST_CASE("grayscale conversion") {
  Image rgb(8, 8, 3);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      rgb.at(0, y, x) = 1.0;
      rgb.at(1, y, x) = 0.0;
      rgb.at(2, y, x) = 0.0;
    }
  const Image gray = to_grayscale(rgb);
  CHECK(gray.channels == 1);
  CHECK(gray.data[0] == doctest::Approx(0.299).epsilon(1e-15));

  const Image white = to_grayscale(test::constant_image(8, 8, 3, 1.0));
  CHECK(white.data[0] == doctest::Approx(1.0).epsilon(1e-15));

  const Image g = test::random_image(8, 8, 1, 3);
  CHECK(test::max_abs_diff(to_grayscale(g), g) == 0.0);
}

TEST_CASE("bicubic reduction preserves constants and shapes") {
  const Image img = test::constant_image(8, 8, 1, 0.37);
  const Image small = downscale_bicubic(img, 4);
  CHECK(small.height == 2);
  CHECK(small.width == 2);
  for (double v : small.data) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("bicubic reduction reproduces linear ramps away from borders") {
  const int n = 16;
  Image ramp(n, n, 1);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      ramp.at(0, y, x) = 0.02 * y + 0.03 * x + 0.1;
  const Image half = downscale_bicubic(ramp, 2);
  for (int y = 1; y < half.height - 1; ++y) {
    for (int x = 1; x < half.width - 1; ++x) {
      const double expected = 0.02 * (2 * y + 0.5) + 0.03 * (2 * x + 0.5) + 0.1;
      CHECK(half.at(0, y, x) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("bicubic reduction rejects non-divisible dims") {
  try {
    downscale_bicubic(test::constant_image(10, 8, 1, 0.5), 4);
    FAIL("expected DimensionNotDivisible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionNotDivisible);
  }
}

TEST_CASE("noise: sigma zero degenerates to a shifted clamp") {
  const Image img = test::random_image(8, 8, 1, 11);
  const Image out = add_gaussian_noise(img, 0.0, 0.25, 42);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    CHECK(out.data[i] == std::min(1.0, img.data[i] + 0.25));
}

TEST_CASE("noise: equal seeds are bitwise identical") {
  const Image img = test::random_image(16, 16, 3, 5);
  const Image a = add_gaussian_noise(img, 0.15, 0.0, 1234);
  const Image b = add_gaussian_noise(img, 0.15, 0.0, 1234);
  CHECK(a.data == b.data);
  const Image c = add_gaussian_noise(img, 0.15, 0.0, 1235);
  CHECK(test::max_abs_diff(a, c) > 0.0);
}

TEST_CASE("noise: empirical std matches sigma at mid-gray") {
  const Image img = test::constant_image(64, 64, 1, 0.5);
  const Image noisy = add_gaussian_noise(img, 0.15, 0.0, 99);
  double mean = 0.0;
  for (double v : noisy.data) mean += v - 0.5;
  mean /= static_cast<double>(noisy.data.size());
  double var = 0.0;
  for (double v : noisy.data) {
    const double d = v - 0.5 - mean;
    var += d * d;
  }
  var /= static_cast<double>(noisy.data.size() - 1);
  const double stddev = std::sqrt(var);
  CHECK(stddev > 0.13);
  CHECK(stddev < 0.17);
}

TEST_SUITE_END();
