#include "deblur/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

#include "deblur/error.hpp"

namespace deblur {

namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

Spectrum::Spectrum(int height, int width, Complex fill) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        throw Error(ErrorCode::invalid_argument, "spectrum dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

struct FftPlan::Impl {
    int height;
    int width;
    fftw_complex* buffer = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    Impl(int h, int w) : height(h), width(w) {
        const std::size_t n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
        std::lock_guard lock(planner_mutex());
        buffer = fftw_alloc_complex(n);
        if (buffer == nullptr) throw Error(ErrorCode::invalid_argument, "fft buffer allocation failed");
        fwd = fftw_plan_dft_2d(h, w, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(h, w, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (fwd != nullptr) fftw_destroy_plan(fwd);
        if (bwd != nullptr) fftw_destroy_plan(bwd);
        fftw_free(buffer);
    }

    std::size_t count() const noexcept {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }

    void load(std::span<const Complex> values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            buffer[i][0] = values[i].real();
            buffer[i][1] = values[i].imag();
        }
    }

    Spectrum store(double scale) const {
        Spectrum out(height, width);
        auto o = out.values();
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = Complex(buffer[i][0] * scale, buffer[i][1] * scale);
        return out;
    }
};

FftPlan::FftPlan(int height, int width) {
    if (height <= 0 || width <= 0) {
        throw Error(ErrorCode::invalid_argument, "fft shape must be positive");
    }
    impl_ = std::make_unique<Impl>(height, width);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

int FftPlan::height() const noexcept { return impl_->height; }
int FftPlan::width() const noexcept { return impl_->width; }

Spectrum FftPlan::forward(const Image& img) {
    if (img.height() != impl_->height || img.width() != impl_->width) {
        throw Error(ErrorCode::shape_mismatch, "fft plan shape does not match image");
    }
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        impl_->buffer[i][0] = px[i];
        impl_->buffer[i][1] = 0.0;
    }
    fftw_execute(impl_->fwd);
    return impl_->store(1.0);
}

Spectrum FftPlan::forward(const Spectrum& s) {
    if (s.height() != impl_->height || s.width() != impl_->width) {
        throw Error(ErrorCode::shape_mismatch, "fft plan shape does not match spectrum");
    }
    impl_->load(s.values());
    fftw_execute(impl_->fwd);
    return impl_->store(1.0);
}

Spectrum FftPlan::inverse(const Spectrum& s) {
    if (s.height() != impl_->height || s.width() != impl_->width) {
        throw Error(ErrorCode::shape_mismatch, "fft plan shape does not match spectrum");
    }
    impl_->load(s.values());
    fftw_execute(impl_->bwd);
    return impl_->store(1.0 / static_cast<double>(impl_->count()));
}

Image FftPlan::inverse_real(const Spectrum& s, double* max_imag) {
    if (s.height() != impl_->height || s.width() != impl_->width) {
        throw Error(ErrorCode::shape_mismatch, "fft plan shape does not match spectrum");
    }
    impl_->load(s.values());
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(impl_->count());
    Image out(impl_->height, impl_->width);
    auto o = out.pixels();
    double worst = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = impl_->buffer[i][0] * scale;
        worst = std::max(worst, std::abs(impl_->buffer[i][1] * scale));
    }
    if (max_imag != nullptr) *max_imag = worst;
    return out;
}

Spectrum otf(const Image& filter, int height, int width, int anchor_y, int anchor_x) {
    if (filter.height() > height || filter.width() > width) {
        throw Error(ErrorCode::invalid_argument,
                    "filter " + std::to_string(filter.height()) + "x" + std::to_string(filter.width()) +
                        " does not fit in " + std::to_string(height) + "x" + std::to_string(width));
    }
    Image padded(height, width);
    for (int y = 0; y < filter.height(); ++y) {
        const int py = ((y - anchor_y) % height + height) % height;
        for (int x = 0; x < filter.width(); ++x) {
            const int px = ((x - anchor_x) % width + width) % width;
            padded(py, px) += filter(y, x);
        }
    }
    FftPlan plan(height, width);
    return plan.forward(padded);
}

Spectrum otf(const Image& filter, int height, int width) {
    return otf(filter, height, width, filter.height() / 2, filter.width() / 2);
}

Spectrum otf(const Kernel& k, int height, int width) {
    return otf(k.as_image(), height, width);
}

Spectrum derivative_otf(Direction d, int height, int width) {
    Image impulse(height, width);
    impulse(0, 0) = 1.0;
    FftPlan plan(height, width);
    return plan.forward(apply_derivative(impulse, d));
}

Image circ_conv(FftPlan& plan, const Image& img, const Kernel& k) {
    const Spectrum kf = otf(k, img.height(), img.width());
    Spectrum s = plan.forward(img);
    auto sv = s.values();
    const auto kv = kf.values();
    for (std::size_t i = 0; i < sv.size(); ++i) sv[i] *= kv[i];
    return plan.inverse_real(s);
}

Image circ_conv(const Image& img, const Kernel& k) {
    FftPlan plan(img.height(), img.width());
    return circ_conv(plan, img, k);
}

Image quotient_solve(FftPlan& plan, const Spectrum& numerator, const Spectrum& denominator) {
    if (!numerator.same_shape(denominator)) {
        throw Error(ErrorCode::shape_mismatch, "quotient_solve: numerator/denominator shape mismatch");
    }
    Spectrum q(numerator.height(), numerator.width());
    auto qv = q.values();
    const auto nv = numerator.values();
    const auto dv = denominator.values();
    for (std::size_t i = 0; i < qv.size(); ++i) {
        if (!(std::abs(dv[i]) >= kSingularThreshold)) {
            throw Error(ErrorCode::singular_solve, "singular solve: denominator magnitude below threshold");
        }
        qv[i] = nv[i] / dv[i];
    }
    return plan.inverse_real(q);
}

Image quotient_solve(const Spectrum& numerator, const Spectrum& denominator) {
    FftPlan plan(numerator.height(), numerator.width());
    return quotient_solve(plan, numerator, denominator);
}

OtfCache::OtfCache(int height, int width) : height_(height), width_(width) {
    const std::size_t n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    first_energy_.assign(n, 0.0);
    second_energy_.assign(n, 0.0);
    for (Direction d : kAllDirections) {
        otfs_[index_of(d)] = derivative_otf(d, height, width);
        auto& energy = is_second_order(d) ? second_energy_ : first_energy_;
        const auto v = otfs_[index_of(d)].values();
        for (std::size_t i = 0; i < n; ++i) energy[i] += std::norm(v[i]);
    }
}

}  // namespace deblur
