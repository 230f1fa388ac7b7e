#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace deblur {

/// Row-major single-channel image of doubles. Intensities are nominally in [0,1]
/// but intermediates (gradients, Bregman fields) may take any finite value.
class Image {
public:
    Image() = default;
    Image(int height, int width, double fill = 0.0);
    Image(int height, int width, std::vector<double> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(int y, int x) noexcept { return data_[index(y, x)]; }
    double operator()(int y, int x) const noexcept { return data_[index(y, x)]; }

    /// Circular (wrap-around) read; any integer coordinates are accepted.
    double wrapped(int y, int x) const noexcept;

    std::span<double> pixels() noexcept { return data_; }
    std::span<const double> pixels() const noexcept { return data_; }

    bool same_shape(const Image& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    bool all_finite() const noexcept;

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int y, int x) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Throws Error(shape_mismatch) when the two images differ in shape.
void require_same_shape(const Image& a, const Image& b, const char* context);

Image clamp01(Image img);
double sum(const Image& img);
double squared_norm(const Image& img);
double squared_distance(const Image& a, const Image& b);

/// Square point-spread function with odd side length. The anchor is the
/// central sample (size/2, size/2).
class Kernel {
public:
    Kernel() = default;
    explicit Kernel(int size, double fill = 0.0);
    Kernel(int size, std::vector<double> data);

    int size() const noexcept { return size_; }
    int radius() const noexcept { return size_ / 2; }

    double& operator()(int y, int x) noexcept { return data_[index(y, x)]; }
    double operator()(int y, int x) const noexcept { return data_[index(y, x)]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    Image as_image() const;

    /// Single unit sample at the anchor.
    static Kernel delta(int size = 1);

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    std::size_t index(int y, int x) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(x);
    }

    int size_ = 0;
    std::vector<double> data_;
};

/// Zeroes negative entries and rescales to unit sum. Throws
/// Error(degenerate_kernel) when nothing positive is left.
Kernel project_kernel(const Kernel& h);

/// Centre of mass relative to the anchor, as (dy, dx). Requires a non-negative kernel
/// with positive mass.
struct Offset {
    double dy = 0.0;
    double dx = 0.0;
};
Offset kernel_centroid_offset(const Kernel& h);

}  // namespace deblur
