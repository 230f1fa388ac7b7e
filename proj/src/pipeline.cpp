#include "deblur/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "deblur/entropy.hpp"
#include "deblur/error.hpp"
#include "deblur/gradient.hpp"
#include "deblur/image_solver.hpp"
#include "deblur/kernel_solver.hpp"
#include "deblur/resample.hpp"
#include "deblur/shrinkage.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

std::string_view name_of(PriorMode mode) noexcept {
    switch (mode) {
        case PriorMode::first_only: return "first_only";
        case PriorMode::fixed_hybrid: return "fixed_hybrid";
        case PriorMode::adaptive_hybrid: return "adaptive_hybrid";
    }
    return "?";
}

PriorMode parse_prior_mode(std::string_view text) {
    if (text == "first" || text == "first_only") return PriorMode::first_only;
    if (text == "hybrid" || text == "fixed_hybrid") return PriorMode::fixed_hybrid;
    if (text == "adaptive" || text == "adaptive_hybrid") return PriorMode::adaptive_hybrid;
    throw Error(ErrorCode::invalid_argument, "unknown prior mode '" + std::string(text) + "'");
}

std::vector<PyramidLevel> build_pyramid(int height, int width, int kernel_size, const SolverConfig& cfg,
                                        bool use_pyramid) {
    std::vector<PyramidLevel> levels;
    levels.push_back({1.0, height, width, kernel_size, 0});
    if (use_pyramid) {
        for (int l = 1;; ++l) {
            const double scale = std::pow(cfg.pyramid_scale, l);
            const double k = kernel_size * scale;
            if (k < cfg.min_kernel) break;
            PyramidLevel level;
            level.scale = scale;
            level.kernel_size = std::max(nearest_odd(k), 1);
            level.height = std::max(static_cast<int>(std::lround(height * scale)), 2 * level.kernel_size);
            level.width = std::max(static_cast<int>(std::lround(width * scale)), 2 * level.kernel_size);
            levels.push_back(level);
        }
    }
    std::reverse(levels.begin(), levels.end());
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i].level_index = static_cast<int>(i);
    return levels;
}

double blind_objective(const Image& f, const Kernel& h, const Image& g, double omega, const SolverConfig& cfg,
                       bool second_order) {
    const Image blurred = circ_conv(f, h);
    double value = 0.5 * cfg.gamma * squared_distance(blurred, g);
    const GradientField field = grad_second(f);
    for (Direction d : kAllDirections) {
        if (is_second_order(d) && !second_order) continue;
        double lp = 0.0;
        for (double v : field[d].pixels()) lp += std::pow(std::abs(v), cfg.p);
        value += cfg.alpha_f * (is_second_order(d) ? omega : 1.0) * lp;
    }
    double l1 = 0.0;
    for (double v : h.values()) l1 += std::abs(v);
    return value + cfg.alpha_h * l1;
}

namespace {

struct ImagePrior {
    double omega = 1.0;
    double entropy = 0.0;
    std::shared_ptr<const ShrinkLut> first;
    std::shared_ptr<const ShrinkLut> second;
};

ImagePrior choose_prior(const Image& source, PriorMode mode, const SolverConfig& cfg, LutCache& cache) {
    ImagePrior prior;
    const AdaptiveWeight weight = adaptive_omega(entropy(source));
    prior.entropy = weight.entropy;
    switch (mode) {
        case PriorMode::first_only: prior.omega = 0.0; break;
        case PriorMode::fixed_hybrid: prior.omega = 1.0; break;
        case PriorMode::adaptive_hybrid: prior.omega = weight.omega; break;
    }
    const double lambda1 = first_order_lambda(cfg);
    if (lambda1 > 0.0) prior.first = cache.get(cfg.p, lambda1);
    if (mode != PriorMode::first_only) {
        const double lambda2 = second_order_lambda(cfg, prior.omega);
        if (lambda2 > 0.0) prior.second = cache.get(cfg.p, lambda2);
    }
    return prior;
}

Kernel initial_kernel(int kernel_size) {
    Kernel k(kernel_size);
    const int c = kernel_size / 2;
    const int r = std::min(1, c);
    const int n = 2 * r + 1;
    for (int y = c - r; y <= c + r; ++y) {
        for (int x = c - r; x <= c + r; ++x) k(y, x) = 1.0 / (n * n);
    }
    return k;
}

}  // namespace

Image edge_taper(const Image& img, int width) {
    if (width < 1 || 2 * width > std::min(img.height(), img.width())) {
        throw Error(ErrorCode::invalid_argument, "edge taper width must be in [1, min(height, width)/2]");
    }
    const int k = width % 2 == 0 ? width + 1 : width;
    const Image blurred = circ_conv(img, Kernel(k, 1.0 / (static_cast<double>(k) * k)));
    auto ramp = [width](int i, int n) {
        const int d = std::min(i, n - 1 - i);
        if (d >= width) return 1.0;
        return 0.5 - 0.5 * std::cos(std::numbers::pi * d / width);
    };
    Image out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        const double wy = ramp(y, img.height());
        for (int x = 0; x < img.width(); ++x) {
            const double w = wy * ramp(x, img.width());
            out(y, x) = w * img(y, x) + (1.0 - w) * blurred(y, x);
        }
    }
    return out;
}

DeblurResult blind_deblur(const Image& g, int kernel_size, const SolverConfig& cfg, const PipelineOptions& options) {
    cfg.validate();
    if (kernel_size < 3 || kernel_size % 2 == 0 || kernel_size > std::min(g.height(), g.width()) / 2) {
        throw Error(ErrorCode::invalid_argument,
                    "kernel size must be odd with 3 <= size <= min(height, width)/2, got " + std::to_string(kernel_size));
    }
    if (!g.all_finite()) throw Error(ErrorCode::invalid_argument, "observed image contains non-finite values");

    const Image observed = options.edge_taper ? edge_taper(g, kernel_size) : g;
    const auto levels = build_pyramid(g.height(), g.width(), kernel_size, cfg, options.use_pyramid);
    const ImageSolveOptions solve_options{options.mode != PriorMode::first_only};
    LutCache cache;
    DeblurResult result;
    Image f;
    Kernel h;
    double previous_scale = 1.0;

    for (const PyramidLevel& level : levels) {
        const Image g_level = resize_bilinear(observed, level.height, level.width);
        if (f.empty()) {
            f = g_level;
            h = initial_kernel(level.kernel_size);
        } else {
            f = resize_bilinear(f, level.height, level.width);
            h = resize_kernel(h, level.kernel_size, level.scale / previous_scale);
        }
        previous_scale = level.scale;

        for (int t = 0; t < cfg.outer_iters; ++t) {
            SolverConfig step = cfg;
            step.gamma = cfg.gamma * std::pow(cfg.gamma_growth, t);

            const Image& source = options.entropy_source == EntropySource::latent ? f : g_level;
            const ImagePrior prior = choose_prior(source, options.mode, cfg, cache);
            ImageSolveStats image_stats;
            f = update_image(h, g_level, f, prior.omega, step, {prior.first.get(), prior.second.get()}, solve_options,
                             &image_stats);
            KernelSolveStats kernel_stats;
            h = update_kernel(f, g_level, step, level.kernel_size, &kernel_stats);

            TraceRecord rec;
            rec.level = level.level_index;
            rec.iteration = t;
            rec.scale = level.scale;
            rec.gamma = step.gamma;
            rec.entropy = prior.entropy;
            rec.omega = prior.omega;
            rec.image_solves = image_stats.solves;
            rec.kernel_solves = kernel_stats.solves;
            rec.objective = blind_objective(f, h, g_level, prior.omega, step, solve_options.second_order);
            result.trace.push_back(rec);
            if (options.on_iteration) options.on_iteration(rec);
        }
    }

    if (options.final_nonblind) f = nonblind_deblur(observed, h, cfg, options.mode);
    result.f = std::move(f);
    result.h = std::move(h);
    return result;
}

Image nonblind_deblur(const Image& g, const Kernel& h, const SolverConfig& cfg, PriorMode mode) {
    cfg.validate();
    if (h.size() > std::min(g.height(), g.width())) {
        throw Error(ErrorCode::invalid_argument, "kernel larger than the image");
    }
    LutCache cache;
    const ImageSolveOptions solve_options{mode != PriorMode::first_only};
    Image f = g;
    for (int t = 0; t < cfg.outer_iters; ++t) {
        SolverConfig step = cfg;
        step.gamma = cfg.gamma * std::pow(cfg.gamma_growth, t);
        const ImagePrior prior = choose_prior(f, mode, cfg, cache);
        f = update_image(h, g, f, prior.omega, step, {prior.first.get(), prior.second.get()}, solve_options);
    }
    return f;
}

DeblurResult ablation_variant(const Image& g, int kernel_size, const SolverConfig& cfg, PriorMode mode) {
    PipelineOptions options;
    options.mode = mode;
    return blind_deblur(g, kernel_size, cfg, options);
}

}  // namespace deblur
