#include "deblur/shrinkage.hpp"

#include <cmath>

#include "deblur/error.hpp"

namespace deblur {

double prox_objective(double x, double w, double lambda, double p) {
    const double d = x - w;
    return lambda * std::pow(std::abs(x), p) + 0.5 * d * d;
}

namespace {

double prox_positive(double w, double lambda, double p, int scan_points) {
    const int n = scan_points < 8 ? 8 : scan_points;
    const double h = w / n;
    int best = 0;
    double best_val = prox_objective(0.0, w, lambda, p);
    for (int j = 1; j <= n; ++j) {
        const double v = prox_objective(j * h, w, lambda, p);
        if (v < best_val) {
            best_val = v;
            best = j;
        }
    }
    if (best == 0) return 0.0;

    double lo = (best - 1) * h;
    double hi = best == n ? w : (best + 1) * h;
    constexpr double kInvPhi = 0.6180339887498949;
    double a = hi - kInvPhi * (hi - lo);
    double b = lo + kInvPhi * (hi - lo);
    double fa = prox_objective(a, w, lambda, p);
    double fb = prox_objective(b, w, lambda, p);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + w); ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - kInvPhi * (hi - lo);
            fa = prox_objective(a, w, lambda, p);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + kInvPhi * (hi - lo);
            fb = prox_objective(b, w, lambda, p);
        }
    }
    double x = 0.5 * (lo + hi);

    // Newton on phi'(x) = lambda p x^(p-1) + x - w where phi'' > 0.
    for (int it = 0; it < 4 && x > 0.0; ++it) {
        const double g = lambda * p * std::pow(x, p - 1.0) + x - w;
        const double c = lambda * p * (p - 1.0) * std::pow(x, p - 2.0) + 1.0;
        if (!(c > 0.0)) break;
        const double next = x - g / c;
        if (!(next > 0.0) || next > w) break;
        x = next;
    }

    return prox_objective(x, w, lambda, p) < prox_objective(0.0, w, lambda, p) ? x : 0.0;
}

}  // namespace

double brute_force_prox(double w, double lambda, double p, int scan_points) {
    if (w == 0.0) return 0.0;
    if (lambda == 0.0) return w;
    const double x = prox_positive(std::abs(w), lambda, p, scan_points);
    return w < 0.0 ? -x : x;
}

ProxThreshold prox_threshold(double lambda, double p) {
    const double x = std::pow(2.0 * lambda * (1.0 - p), 1.0 / (2.0 - p));
    return {x * (2.0 - p) / (2.0 * (1.0 - p)), x};
}

double ShrinkLut::operator()(double w) const noexcept {
    const double a = std::abs(w);
    double x = 0.0;
    if (a <= threshold_.w) {
        x = 0.0;
    } else if (a >= w_max_) {
        x = a - lambda_ * p_ * std::pow(a, p_ - 1.0);
    } else {
        const auto i = static_cast<std::size_t>(a / step_);
        const std::size_t last = values_.size() - 1;
        const std::size_t lo = i >= last ? last - 1 : i;
        double x0 = static_cast<double>(lo) * step_;
        double y0 = values_[lo];
        const double x1 = static_cast<double>(lo + 1) * step_;
        const double y1 = values_[lo + 1];
        if (x0 < threshold_.w) {
            x0 = threshold_.w;
            y0 = threshold_.x;
        }
        const double t = x1 > x0 ? (a - x0) / (x1 - x0) : 1.0;
        x = y0 + t * (y1 - y0);
    }
    return w < 0.0 ? -x : x;
}

ShrinkLut build_lut(double p, double lambda, double w_max, int steps, int scan_points) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_argument, "lut: p must lie in (0,1)");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::invalid_argument, "lut: lambda must be positive");
    }
    if (!(w_max > 0.0) || !std::isfinite(w_max)) {
        throw Error(ErrorCode::invalid_argument, "lut: w_max must be positive");
    }
    if (steps < kMinLutSteps) throw Error(ErrorCode::invalid_argument, "lut: at least 1024 steps required");

    ShrinkLut lut;
    lut.p_ = p;
    lut.lambda_ = lambda;
    lut.w_max_ = w_max;
    lut.step_ = w_max / steps;
    lut.threshold_ = prox_threshold(lambda, p);
    lut.values_.resize(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        const double w = i * lut.step_;
        lut.values_[static_cast<std::size_t>(i)] = brute_force_prox(w, lambda, p, scan_points);
    }
    return lut;
}

Image shrink_field(const Image& field, const ShrinkLut& lut) {
    Image out = field;
    for (double& v : out.pixels()) v = lut(v);
    return out;
}

std::shared_ptr<const ShrinkLut> LutCache::get(double p, double lambda) {
    const auto bucket = static_cast<long long>(std::llround(lambda / kLambdaResolution));
    const std::pair<double, long long> key{p, bucket};
    std::lock_guard lock(mutex_);
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    auto lut = std::make_shared<const ShrinkLut>(build_lut(p, lambda, w_max_, steps_));
    tables_.emplace(key, lut);
    return lut;
}

std::size_t LutCache::size() const {
    std::lock_guard lock(mutex_);
    return tables_.size();
}

}  // namespace deblur
