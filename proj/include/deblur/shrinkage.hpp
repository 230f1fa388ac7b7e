#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "deblur/image.hpp"

namespace deblur {

/// phi(x) = lambda*|x|^p + (x - w)^2 / 2.
double prox_objective(double x, double w, double lambda, double p);

/// Global minimiser of prox_objective, found by a dense scan of [0,|w|] with
/// `scan_points` samples, golden-section refinement around the best sample and
/// a Newton polish on the convex part; the result is compared against x = 0
/// (ties go to 0). Odd in w.
double brute_force_prox(double w, double lambda, double p, int scan_points = 4096);

/// Input magnitude below which the prox is exactly zero, and the prox value
/// just above it: x_t = (2 lambda (1-p))^(1/(2-p)), w_t = x_t (2-p) / (2(1-p)).
struct ProxThreshold {
    double w = 0.0;
    double x = 0.0;
};
ProxThreshold prox_threshold(double lambda, double p);

/// Tabulated prox of lambda*|x|^p on [0, w_max]. Lookups interpolate linearly
/// along the non-zero branch (the jump at the threshold is kept exact); beyond
/// w_max the first-order expansion x = w - lambda p |w|^(p-1) is used.
class ShrinkLut {
public:
    double p() const noexcept { return p_; }
    double lambda() const noexcept { return lambda_; }
    double w_max() const noexcept { return w_max_; }
    double step() const noexcept { return step_; }
    ProxThreshold threshold() const noexcept { return threshold_; }
    /// Oracle values at the grid nodes i*step, i = 0..steps.
    std::span<const double> values() const noexcept { return values_; }

    double operator()(double w) const noexcept;

private:
    friend ShrinkLut build_lut(double, double, double, int, int);

    double p_ = 0.0;
    double lambda_ = 0.0;
    double w_max_ = 0.0;
    double step_ = 0.0;
    ProxThreshold threshold_;
    std::vector<double> values_;
};

inline constexpr double kDefaultLutRange = 2.0;
inline constexpr int kDefaultLutSteps = 4096;
inline constexpr int kMinLutSteps = 1 << 10;

/// Throws Error(invalid_argument) for p outside (0,1), lambda <= 0, w_max <= 0
/// or steps < 1024.
ShrinkLut build_lut(double p, double lambda, double w_max = kDefaultLutRange, int steps = kDefaultLutSteps,
                    int scan_points = 512);

/// Elementwise prox of the field.
Image shrink_field(const Image& field, const ShrinkLut& lut);

/// Tables keyed by (p, lambda quantised to 1e-4). The first request in a bucket
/// decides the exact lambda used for that bucket. Thread-safe.
class LutCache {
public:
    static constexpr double kLambdaResolution = 1e-4;

    explicit LutCache(double w_max = kDefaultLutRange, int steps = kDefaultLutSteps)
        : w_max_(w_max), steps_(steps) {}

    std::shared_ptr<const ShrinkLut> get(double p, double lambda);
    std::size_t size() const;

private:
    double w_max_;
    int steps_;
    mutable std::mutex mutex_;
    std::map<std::pair<double, long long>, std::shared_ptr<const ShrinkLut>> tables_;
};

}  // namespace deblur
