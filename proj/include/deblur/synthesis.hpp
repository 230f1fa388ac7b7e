#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "deblur/image.hpp"

namespace deblur {

/// Names accepted by `builtin_kernel`: delta, box3, gauss5, motion9.
std::vector<std::string> builtin_kernel_names();

/// delta: 1x1 unit sample. box3: 3x3, every tap 1/9.
/// gauss5: 5x5 samples of exp(-(x^2+y^2)/2) over x,y in [-2,2], normalized to unit sum.
/// motion9: 9x9, centre row 1/9 in every column, zero elsewhere.
/// Throws Error(invalid_argument) for unknown names.
Kernel builtin_kernel(std::string_view name);

/// A builtin name, or otherwise a path to a kernel text file.
Kernel resolve_kernel(const std::string& source);

/// Blur synthesis parameters. When sigma is 0 the seed is unused.
struct BlurSpec {
    std::string kernel_source = "motion9";
    double noise_sigma = 0.01;
    std::uint64_t seed = 0;
};

/// Standard normal samples: std::mt19937_64 seeded with `seed`, two 53-bit
/// uniforms u1 = (a + 1) / 2^53, u2 = b / 2^53 per pair, and the Box-Muller
/// transform sqrt(-2 ln u1) * (cos 2 pi u2, sin 2 pi u2), emitted in that order.
std::vector<double> gaussian_noise(std::size_t count, std::uint64_t seed);

/// clamp01(circ_conv(f, k) + sigma * n) with n from `gaussian_noise`.
Image synthesize_blur(const Image& f, const Kernel& k, double sigma, std::uint64_t seed);

/// Deterministic child seed for the (a, b) item of a batch (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

}  // namespace deblur
