#include "deblur/kernel_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deblur/error.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

KernelState solve_kernel_state(const Image& f, const Image& g, const SolverConfig& cfg, KernelSolveStats* stats,
                               const KernelObserver& observer) {
    require_same_shape(f, g, "update_kernel");
    if (!f.all_finite() || !g.all_finite()) throw Error(ErrorCode::invalid_argument, "update_kernel: non-finite input");
    const int height = g.height();
    const int width = g.width();
    const double ratio = cfg.beta_h / cfg.gamma;
    const double shrink = cfg.alpha_h / cfg.beta_h;

    FftPlan plan(height, width);
    const Spectrum F = plan.forward(f);
    const Spectrum G = plan.forward(g);
    Spectrum base(height, width);
    Spectrum denominator(height, width);
    {
        auto bv = base.values();
        auto dv = denominator.values();
        const auto fv = F.values();
        const auto gv = G.values();
        for (std::size_t i = 0; i < bv.size(); ++i) {
            bv[i] = std::conj(fv[i]) * gv[i];
            dv[i] = std::norm(fv[i]) + ratio;
        }
    }

    KernelState state{Image(height, width), Image(height, width), Image(height, width), 0};
    Image target(height, width);
    if (stats != nullptr) *stats = {};

    for (;;) {
        {
            auto t = target.pixels();
            const auto v = state.v_h.pixels();
            const auto b = state.b_h.pixels();
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = v[i] + b[i];
        }
        Spectrum numerator = plan.forward(target);
        {
            auto nv = numerator.values();
            const auto bv = base.values();
            for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = bv[i] + ratio * nv[i];
        }
        Image next = quotient_solve(plan, numerator, denominator);
        if (!next.all_finite()) throw Error(ErrorCode::solver_diverged, "solver diverged in kernel update");
        if (observer) observer({state.iter, next, target, f, g, cfg.gamma, cfg.beta_h});

        const double change = squared_distance(next, state.h);
        const double norm = squared_norm(next);
        const double rel = norm > 0.0 ? change / norm : 0.0;

        auto hv = next.pixels();
        auto vv = state.v_h.pixels();
        auto bv = state.b_h.pixels();
        double residual = 0.0;
        for (std::size_t i = 0; i < hv.size(); ++i) {
            vv[i] = std::max(hv[i] - bv[i] - shrink, 0.0);
            bv[i] = bv[i] - hv[i] + vv[i];
            residual += (hv[i] - vv[i]) * (hv[i] - vv[i]);
        }
        state.h = std::move(next);
        ++state.iter;
        if (stats != nullptr) {
            stats->solves = state.iter;
            stats->last_rel_change = rel;
            stats->constraint_residual.push_back(std::sqrt(residual));
        }
        if (rel <= cfg.tol || state.iter > cfg.max_inner) break;
    }
    return state;
}

namespace {

Kernel crop_at(const Image& h_full, int kernel_size, int shift_y, int shift_x) {
    Kernel k(kernel_size);
    const int c = kernel_size / 2;
    for (int y = 0; y < kernel_size; ++y) {
        for (int x = 0; x < kernel_size; ++x) k(y, x) = h_full.wrapped(y - c + shift_y, x - c + shift_x);
    }
    return k;
}

}  // namespace

Kernel crop_kernel(const Image& h_full, int kernel_size) {
    if (kernel_size <= 0 || kernel_size % 2 == 0) {
        throw Error(ErrorCode::invalid_argument, "kernel size must be odd, got " + std::to_string(kernel_size));
    }
    if (kernel_size > h_full.height() || kernel_size > h_full.width()) {
        throw Error(ErrorCode::invalid_argument, "kernel size exceeds the image");
    }
    Kernel k = project_kernel(crop_at(h_full, kernel_size, 0, 0));
    const Offset drift = kernel_centroid_offset(k);
    if (std::abs(drift.dy) > 1.0 || std::abs(drift.dx) > 1.0) {
        const int sy = static_cast<int>(std::lround(drift.dy));
        const int sx = static_cast<int>(std::lround(drift.dx));
        k = project_kernel(crop_at(h_full, kernel_size, sy, sx));
    }
    return k;
}

Kernel update_kernel(const Image& f, const Image& g, const SolverConfig& cfg, int kernel_size, KernelSolveStats* stats,
                     const KernelObserver& observer) {
    if (kernel_size <= 0 || kernel_size % 2 == 0 || kernel_size > std::min(f.height(), f.width())) {
        throw Error(ErrorCode::invalid_argument, "invalid kernel size " + std::to_string(kernel_size));
    }
    const KernelState state = solve_kernel_state(f, g, cfg, stats, observer);
    return crop_kernel(state.h, kernel_size);
}

}  // namespace deblur
