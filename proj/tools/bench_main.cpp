// Timing comparison between the simple serial reference kernels and the
// optimized OpenMP paths. The transform rows also reflect the algorithmic
// gap (literal direct sum vs FFT), the resampling rows the separable vs
// full-kernel gap.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gfl/image.hpp"
#include "gfl/loss.hpp"
#include "gfl/pyramid.hpp"
#include "gfl/rng.hpp"
#include "gfl/serial_ref.hpp"
#include "gfl/spectral.hpp"

using namespace gfl;

namespace {

Image random_image(int n, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  Image img(n, n, 1);
  for (double& v : img.data) v = rng.uniform();
  return img;
}

double time_ms(const std::function<void()>& fn, int repeats) {
  fn(); // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

void report(const char* name, int size, double ref_ms, double fast_ms) {
  std::printf("%-28s %4dx%-4d %12.3f %12.3f %9.2fx\n", name, size, size,
              ref_ms, fast_ms, ref_ms / fast_ms);
}

} // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%-28s %-9s %12s %12s %9s\n", "kernel", "size", "serial ms",
              "parallel ms", "speedup");

  const int fft_size = quick ? 32 : 64;
  const int conv_size = quick ? 128 : 512;
  const int reps = quick ? 3 : 10;

  {
    const Image img = random_image(fft_size, 1);
    const double ref_ms = time_ms([&] { (void)ref::dft2_direct(img); }, reps);
    const double fast_ms = time_ms([&] { (void)dft2(img); }, reps);
    report("forward transform", fft_size, ref_ms, fast_ms);
  }
  {
    const Image img = random_image(conv_size, 2);
    const double ref_ms = time_ms([&] { (void)ref::downsample(img); }, reps);
    const double fast_ms = time_ms([&] { (void)downsample(img); }, reps);
    report("blur + decimate", conv_size, ref_ms, fast_ms);
  }
  {
    const Image img = random_image(conv_size / 2, 3);
    const double ref_ms = time_ms([&] { (void)ref::upsample(img); }, reps);
    const double fast_ms = time_ms([&] { (void)upsample(img); }, reps);
    report("zero-insert + blur", conv_size / 2, ref_ms, fast_ms);
  }
  {
    const Image img = random_image(conv_size, 4);
    const double ref_ms = time_ms([&] { (void)ref::laplacian_depth1(img); }, reps);
    const double fast_ms = time_ms([&] { (void)laplacian_depth1(img); }, reps);
    report("depth-1 detail", conv_size, ref_ms, fast_ms);
  }
  {
    const int n = quick ? 64 : 256;
    const Image a = random_image(n, 5);
    const Image b = random_image(n, 6);
    const GflParams params{1e-3, highpass_mask(n, n, n / 8.0)};
    const double eval_ms =
        time_ms([&] { (void)gfl::gfl(a, b, params); }, reps);
    const double grad_ms =
        time_ms([&] { (void)gfl_gradient(a, b, params); }, reps);
    std::printf("%-28s %4dx%-4d %12.3f %12.3f %9s\n", "loss eval / gradient", n,
                n, eval_ms, grad_ms, "-");
  }
  return 0;
}
