#include "deblur/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "deblur/error.hpp"

namespace deblur {

double mean_squared_error(const Image& a, const Image& b) {
    require_same_shape(a, b, "mean_squared_error");
    return squared_distance(a, b) / static_cast<double>(a.size());
}

PsnrResult psnr_checked(const Image& a, const Image& b) {
    const double mse = mean_squared_error(a, b);
    // 100 dB corresponds to an MSE of 1e-10
    if (mse <= 1e-10) return {kPsnrCapDb, true};
    return {10.0 * std::log10(1.0 / mse), false};
}

double psnr(const Image& a, const Image& b) {
    return psnr_checked(a, b).decibels;
}

namespace {

std::vector<double> gaussian_taps(int window, double sigma) {
    std::vector<double> taps(static_cast<std::size_t>(window));
    const int r = window / 2;
    double total = 0.0;
    for (int i = 0; i < window; ++i) {
        const double d = i - r;
        taps[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        total += taps[static_cast<std::size_t>(i)];
    }
    for (double& t : taps) t /= total;
    return taps;
}

// Separable "valid" filtering: output is (h-window+1) x (w-window+1).
Image filter_valid(const Image& img, const std::vector<double>& taps) {
    const int n = static_cast<int>(taps.size());
    const int h = img.height();
    const int w = img.width();
    const int ow = w - n + 1;
    const int oh = h - n + 1;
    Image rows(h, ow);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += taps[static_cast<std::size_t>(k)] * img(y, x + k);
            rows(y, x) = s;
        }
    }
    Image out(oh, ow);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += taps[static_cast<std::size_t>(k)] * rows(y + k, x);
            out(y, x) = s;
        }
    }
    return out;
}

Image product(const Image& a, const Image& b) {
    Image out = a;
    auto o = out.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] *= pb[i];
    return out;
}

}  // namespace

double ssim(const Image& a, const Image& b, const SsimParams& params) {
    require_same_shape(a, b, "ssim");
    if (params.window <= 0 || params.window % 2 == 0) {
        throw Error(ErrorCode::invalid_argument, "ssim window must be odd and positive");
    }
    if (a.height() < params.window || a.width() < params.window) {
        throw Error(ErrorCode::invalid_argument, "image smaller than the ssim window");
    }
    const auto taps = gaussian_taps(params.window, params.sigma);
    const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
    const double c2 = std::pow(params.k2 * params.dynamic_range, 2);

    const Image mu_a = filter_valid(a, taps);
    const Image mu_b = filter_valid(b, taps);
    const Image e_aa = filter_valid(product(a, a), taps);
    const Image e_bb = filter_valid(product(b, b), taps);
    const Image e_ab = filter_valid(product(a, b), taps);

    const auto ma = mu_a.pixels();
    const auto mb = mu_b.pixels();
    const auto saa = e_aa.pixels();
    const auto sbb = e_bb.pixels();
    const auto sab = e_ab.pixels();
    double total = 0.0;
    for (std::size_t i = 0; i < ma.size(); ++i) {
        const double var_a = saa[i] - ma[i] * ma[i];
        const double var_b = sbb[i] - mb[i] * mb[i];
        const double cov = sab[i] - ma[i] * mb[i];
        const double num = (2.0 * ma[i] * mb[i] + c1) * (2.0 * cov + c2);
        const double den = (ma[i] * ma[i] + mb[i] * mb[i] + c1) * (var_a + var_b + c2);
        total += num / den;
    }
    return total / static_cast<double>(ma.size());
}

double kernel_correlation(const Kernel& estimate, const Kernel& truth) {
    const Offset ce = kernel_centroid_offset(estimate);
    const Offset ct = kernel_centroid_offset(truth);
    const int sy = static_cast<int>(std::lround(ct.dy - ce.dy));
    const int sx = static_cast<int>(std::lround(ct.dx - ce.dx));

    const int half = std::max(estimate.radius() + std::max(std::abs(sy), std::abs(sx)), truth.radius());
    const int n = 2 * half + 1;
    Image a(n, n);
    Image b(n, n);
    for (int y = 0; y < estimate.size(); ++y) {
        for (int x = 0; x < estimate.size(); ++x) {
            a(y - estimate.radius() + half + sy, x - estimate.radius() + half + sx) = estimate(y, x);
        }
    }
    for (int y = 0; y < truth.size(); ++y) {
        for (int x = 0; x < truth.size(); ++x) {
            b(y - truth.radius() + half, x - truth.radius() + half) = truth(y, x);
        }
    }
    double ab = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) ab += pa[i] * pb[i];
    const double denom = std::sqrt(squared_norm(a) * squared_norm(b));
    return denom > 0.0 ? ab / denom : 0.0;
}

}  // namespace deblur
