#include "deblur/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "deblur/error.hpp"

namespace deblur {

namespace {

int wrap(int i, int n) noexcept {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

}  // namespace

Image::Image(int height, int width, double fill) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        throw Error(ErrorCode::invalid_argument, "image dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

Image::Image(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (height <= 0 || width <= 0) {
        throw Error(ErrorCode::invalid_argument, "image dimensions must be positive");
    }
    if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw Error(ErrorCode::invalid_argument, "image data length does not match height*width");
    }
}

double Image::wrapped(int y, int x) const noexcept {
    return (*this)(wrap(y, height_), wrap(x, width_));
}

bool Image::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const Image& a, const Image& b, const char* context) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::shape_mismatch,
                    std::string(context) + ": shape mismatch " + std::to_string(a.height()) + "x" +
                        std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                        std::to_string(b.width()));
    }
}

Image clamp01(Image img) {
    for (double& v : img.pixels()) v = std::clamp(v, 0.0, 1.0);
    return img;
}

double sum(const Image& img) {
    const auto px = img.pixels();
    return std::accumulate(px.begin(), px.end(), 0.0);
}

double squared_norm(const Image& img) {
    double s = 0.0;
    for (double v : img.pixels()) s += v * v;
    return s;
}

double squared_distance(const Image& a, const Image& b) {
    require_same_shape(a, b, "squared_distance");
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    double s = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = pa[i] - pb[i];
        s += d * d;
    }
    return s;
}

Kernel::Kernel(int size, double fill) : size_(size) {
    if (size <= 0 || size % 2 == 0) {
        throw Error(ErrorCode::invalid_argument, "kernel size must be odd and positive, got " + std::to_string(size));
    }
    data_.assign(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), fill);
}

Kernel::Kernel(int size, std::vector<double> data) : Kernel(size) {
    if (data.size() != data_.size()) {
        throw Error(ErrorCode::invalid_argument, "kernel data length does not match size*size");
    }
    data_ = std::move(data);
}

Image Kernel::as_image() const {
    return Image(size_, size_, data_);
}

Kernel Kernel::delta(int size) {
    Kernel k(size);
    k(size / 2, size / 2) = 1.0;
    return k;
}

Kernel project_kernel(const Kernel& h) {
    Kernel out = h;
    double total = 0.0;
    for (double& v : out.values()) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::solver_diverged, "kernel contains non-finite values");
        }
        if (v < 0.0) v = 0.0;
        total += v;
    }
    if (!(total > 0.0)) {
        throw Error(ErrorCode::degenerate_kernel, "degenerate kernel: no positive mass after clipping");
    }
    for (double& v : out.values()) v /= total;
    return out;
}

Offset kernel_centroid_offset(const Kernel& h) {
    double mass = 0.0;
    double my = 0.0;
    double mx = 0.0;
    const int c = h.radius();
    for (int y = 0; y < h.size(); ++y) {
        for (int x = 0; x < h.size(); ++x) {
            const double v = h(y, x);
            mass += v;
            my += v * (y - c);
            mx += v * (x - c);
        }
    }
    if (!(mass > 0.0)) {
        throw Error(ErrorCode::degenerate_kernel, "centroid of a kernel without positive mass");
    }
    return {my / mass, mx / mass};
}

}  // namespace deblur
