#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "deblur/gradient.hpp"
#include "deblur/image.hpp"

namespace deblur {

using Complex = std::complex<double>;

/// Full (non-Hermitian-packed) 2-D DFT coefficients, row-major.
/// Convention: forward transform unnormalized, inverse divides by height*width.
class Spectrum {
public:
    Spectrum() = default;
    Spectrum(int height, int width, Complex fill = {});

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }

    Complex& operator()(int y, int x) noexcept { return data_[index(y, x)]; }
    Complex operator()(int y, int x) const noexcept { return data_[index(y, x)]; }

    std::span<Complex> values() noexcept { return data_; }
    std::span<const Complex> values() const noexcept { return data_; }

    bool same_shape(const Spectrum& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

private:
    std::size_t index(int y, int x) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<Complex> data_;
};

/// Forward/inverse transforms for one image shape. An instance owns scratch
/// buffers, so it must not be used from two threads at once; distinct
/// instances are independent.
class FftPlan {
public:
    FftPlan(int height, int width);
    ~FftPlan();
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    int height() const noexcept;
    int width() const noexcept;

    Spectrum forward(const Image& img);
    Spectrum forward(const Spectrum& s);
    Spectrum inverse(const Spectrum& s);
    /// Real part of the inverse transform. When `max_imag` is given it receives
    /// the largest absolute imaginary residue.
    Image inverse_real(const Spectrum& s, double* max_imag = nullptr);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Optical transfer function: `filter` zero-padded to (height, width) and
/// circularly shifted so that sample (anchor_y, anchor_x) lands on (0,0).
/// Throws Error(invalid_argument) when the filter does not fit.
Spectrum otf(const Image& filter, int height, int width, int anchor_y, int anchor_x);
/// Anchor at the filter centre (rows/2, cols/2).
Spectrum otf(const Image& filter, int height, int width);
Spectrum otf(const Kernel& k, int height, int width);

/// Transfer function of one derivative operator at the given shape, obtained
/// from its impulse response.
Spectrum derivative_otf(Direction d, int height, int width);

/// Circular convolution g = img * k (true convolution, kernel anchored at its centre).
Image circ_conv(const Image& img, const Kernel& k);
Image circ_conv(FftPlan& plan, const Image& img, const Kernel& k);

/// Smallest admissible |denominator| in `quotient_solve`.
inline constexpr double kSingularThreshold = 1e-12;

/// Real part of F^-1(numerator / denominator). Throws Error(singular_solve)
/// when any |denominator| < kSingularThreshold.
Image quotient_solve(FftPlan& plan, const Spectrum& numerator, const Spectrum& denominator);
Image quotient_solve(const Spectrum& numerator, const Spectrum& denominator);

/// Transfer functions of the six derivative operators at one shape, plus the
/// summed energies |F(D)|^2 of the first-order pair and of the second-order four.
class OtfCache {
public:
    OtfCache(int height, int width);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    const Spectrum& operator[](Direction d) const noexcept { return otfs_[index_of(d)]; }
    std::span<const double> first_order_energy() const noexcept { return first_energy_; }
    std::span<const double> second_order_energy() const noexcept { return second_energy_; }

private:
    int height_;
    int width_;
    std::array<Spectrum, 6> otfs_;
    std::vector<double> first_energy_;
    std::vector<double> second_energy_;
};

}  // namespace deblur
