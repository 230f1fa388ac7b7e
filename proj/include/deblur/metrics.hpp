#pragma once

#include "deblur/image.hpp"

namespace deblur {

/// PSNR of identical images is reported as this cap instead of +inf.
inline constexpr double kPsnrCapDb = 100.0;

struct PsnrResult {
    double decibels = 0.0;
    bool capped = false;  // true when the MSE was too small to resolve below the cap
};

/// Peak value 1.0. Throws Error(shape_mismatch).
PsnrResult psnr_checked(const Image& a, const Image& b);
double psnr(const Image& a, const Image& b);

double mean_squared_error(const Image& a, const Image& b);

/// Gaussian-window SSIM parameters (window side, sigma, K1, K2, dynamic range).
struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// Mean SSIM over all window positions fully inside the image (no padding).
/// Throws Error(shape_mismatch) or Error(invalid_argument) when the image is
/// smaller than the window.
double ssim(const Image& a, const Image& b, const SsimParams& params = {});

/// Cosine similarity of two kernels after shifting `estimate` by the rounded
/// difference of centroids; both are placed on a shared zero-padded canvas.
double kernel_correlation(const Kernel& estimate, const Kernel& truth);

}  // namespace deblur
