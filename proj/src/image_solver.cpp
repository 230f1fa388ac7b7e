#include "deblur/image_solver.hpp"

#include <cmath>

#include "deblur/error.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

double first_order_lambda(const SolverConfig& cfg) {
    return cfg.alpha_f / cfg.beta_f;
}

double second_order_lambda(const SolverConfig& cfg, double omega) {
    return cfg.alpha_f * omega / cfg.beta_f;
}

namespace {

Image prox_field(const Image& w, const ShrinkLut* lut) {
    return lut != nullptr ? shrink_field(w, *lut) : w;
}

Image difference(const Image& a, const Image& b) {
    Image out = a;
    auto o = out.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= pb[i];
    return out;
}

double lp_sum(const Image& img, double p) {
    double s = 0.0;
    for (double v : img.pixels()) s += std::pow(std::abs(v), p);
    return s;
}

}  // namespace

ImageState solve_image_state(const Kernel& h, const Image& g, const Image& f_init, double omega,
                             const SolverConfig& cfg, const PriorLuts& luts, const ImageSolveOptions& options,
                             ImageSolveStats* stats, const ImageObserver& observer) {
    require_same_shape(g, f_init, "update_image");
    if (!g.all_finite() || !f_init.all_finite()) throw Error(ErrorCode::invalid_argument, "update_image: non-finite input");
    const int height = g.height();
    const int width = g.width();
    const double ratio = cfg.beta_f / cfg.gamma;
    const bool second = options.second_order;

    FftPlan plan(height, width);
    const OtfCache otfs(height, width);
    const Spectrum H = otf(h, height, width);
    const Spectrum G = plan.forward(g);

    Spectrum base(height, width);
    Spectrum denominator(height, width);
    {
        auto bv = base.values();
        auto dv = denominator.values();
        const auto hv = H.values();
        const auto gv = G.values();
        const auto e1 = otfs.first_order_energy();
        const auto e2 = otfs.second_order_energy();
        for (std::size_t i = 0; i < bv.size(); ++i) {
            bv[i] = std::conj(hv[i]) * gv[i];
            const double prior = second ? e1[i] + e2[i] : e1[i];
            dv[i] = std::norm(hv[i]) + ratio * prior;
        }
    }

    ImageState state;
    state.f = f_init;
    for (std::size_t d = 0; d < 6; ++d) {
        state.v[d] = Image(height, width);
        state.a[d] = Image(height, width);
    }
    std::array<Image, 6> grad;
    for (Direction d : kAllDirections) {
        if (second || !is_second_order(d)) grad[index_of(d)] = apply_derivative(state.f, d);
    }
    std::array<Image, 6> v_plus_a;
    if (stats != nullptr) *stats = {};

    for (;;) {
        Image rhs(height, width);
        for (Direction d : kAllDirections) {
            const std::size_t k = index_of(d);
            if (!second && is_second_order(d)) continue;
            const ShrinkLut* lut = is_second_order(d) ? luts.second : luts.first;
            state.v[k] = prox_field(difference(grad[k], state.a[k]), lut);
            v_plus_a[k] = state.v[k];
            auto s = v_plus_a[k].pixels();
            const auto a = state.a[k].pixels();
            for (std::size_t i = 0; i < s.size(); ++i) s[i] += a[i];
            const Image back = apply_derivative_adjoint(v_plus_a[k], d);
            auto r = rhs.pixels();
            const auto bp = back.pixels();
            for (std::size_t i = 0; i < r.size(); ++i) r[i] += bp[i];
        }

        Spectrum numerator = plan.forward(rhs);
        {
            auto nv = numerator.values();
            const auto bv = base.values();
            for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = bv[i] + ratio * nv[i];
        }
        Image next = quotient_solve(plan, numerator, denominator);
        if (!next.all_finite()) throw Error(ErrorCode::solver_diverged, "solver diverged in image update");
        if (observer) observer({state.iter, next, state.v, v_plus_a, g, h, cfg.gamma, cfg.beta_f, second});

        const double change = squared_distance(next, state.f);
        const double norm = squared_norm(next);
        const double rel = norm > 0.0 ? change / norm : 0.0;
        state.f = std::move(next);
        ++state.iter;

        for (Direction d : kAllDirections) {
            if (second || !is_second_order(d)) grad[index_of(d)] = apply_derivative(state.f, d);
        }

        if (stats != nullptr) {
            stats->solves = state.iter;
            stats->last_rel_change = rel;
            const Image blurred = circ_conv(plan, state.f, h);
            double value = 0.5 * cfg.gamma * squared_distance(blurred, g);
            for (Direction d : kAllDirections) {
                const std::size_t k = index_of(d);
                if (!second && is_second_order(d)) continue;
                const double weight = is_second_order(d) ? omega : 1.0;
                value += cfg.alpha_f * weight * lp_sum(state.v[k], cfg.p);
                value += 0.5 * cfg.beta_f * squared_distance(grad[k], v_plus_a[k]);
            }
            stats->surrogate.push_back(value);
        }

        for (Direction d : kAllDirections) {
            const std::size_t k = index_of(d);
            if (!second && is_second_order(d)) continue;
            auto a = state.a[k].pixels();
            const auto df = grad[k].pixels();
            const auto v = state.v[k].pixels();
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] - df[i] + v[i];
        }
        if (rel <= cfg.tol || state.iter > cfg.max_inner) break;
    }
    return state;
}

Image update_image(const Kernel& h, const Image& g, const Image& f_init, double omega, const SolverConfig& cfg,
                   const PriorLuts& luts, const ImageSolveOptions& options, ImageSolveStats* stats,
                   const ImageObserver& observer) {
    ImageState state = solve_image_state(h, g, f_init, omega, cfg, luts, options, stats, observer);
    return clamp01(std::move(state.f));
}

}  // namespace deblur
