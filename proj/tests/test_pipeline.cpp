#include <doctest.h>

#include <cmath>
#include <random>

#include "deblur/entropy.hpp"
#include "deblur/error.hpp"
#include "deblur/image_solver.hpp"
#include "deblur/kernel_solver.hpp"
#include "deblur/metrics.hpp"
#include "deblur/pipeline.hpp"
#include "deblur/resample.hpp"
#include "deblur/spectral.hpp"
#include "deblur/synthesis.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace deblur;

namespace {

double centre_mass(const Kernel& k, int radius) {
    const int c = k.radius();
    double s = 0.0;
    for (int y = c - radius; y <= c + radius; ++y)
        for (int x = c - radius; x <= c + radius; ++x) s += k(y, x);
    return s;
}

}  // namespace

TEST_CASE("prior mode names") {
    CHECK(parse_prior_mode("first") == PriorMode::first_only);
    CHECK(parse_prior_mode("hybrid") == PriorMode::fixed_hybrid);
    CHECK(parse_prior_mode("adaptive") == PriorMode::adaptive_hybrid);
    CHECK(parse_prior_mode("adaptive_hybrid") == PriorMode::adaptive_hybrid);
    CHECK(name_of(PriorMode::fixed_hybrid) == "fixed_hybrid");
    CHECK_THROWS_AS(parse_prior_mode("second"), Error);
}

TEST_CASE("nearest_odd and resampling") {
    CHECK(nearest_odd(9.0) == 9);
    CHECK(nearest_odd(6.36) == 7);
    CHECK(nearest_odd(4.5) == 5);
    CHECK(nearest_odd(3.18) == 3);
    const Image c(10, 10, 0.4);
    const Image resized = resize_bilinear(c, 7, 13);
    for (double v : resized.pixels()) CHECK(v == doctest::Approx(0.4));
    std::mt19937_64 rng(51);
    const Image r = oracle::random_image(9, 9, rng);
    CHECK(resize_bilinear(r, 9, 9) == r);
    const Kernel k = resize_kernel(builtin_kernel("motion9"), 7, 0.75);
    double s = 0.0;
    for (double v : k.values()) s += v;
    CHECK(s == doctest::Approx(1.0));
    CHECK(k.size() == 7);
}

TEST_CASE("pyramid levels") {
    const SolverConfig cfg;
    const auto levels = build_pyramid(128, 128, 9, cfg);
    REQUIRE(levels.size() == 4);
    CHECK(levels.back().scale == 1.0);
    CHECK(levels.back().kernel_size == 9);
    CHECK(levels.front().kernel_size == 3);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        CHECK(levels[i].level_index == static_cast<int>(i));
        CHECK(levels[i].kernel_size % 2 == 1);
        CHECK(levels[i].kernel_size >= 3);
        if (i > 0) CHECK(levels[i].scale > levels[i - 1].scale);
    }
    CHECK(build_pyramid(128, 128, 5, cfg).size() == 2);
    CHECK(build_pyramid(64, 64, 9, cfg, false).size() == 1);
}

TEST_CASE("blind_deblur argument checks") {
    const Image g(32, 32, 0.5);
    CHECK_THROWS_AS(blind_deblur(g, 4, SolverConfig{}), Error);
    CHECK_THROWS_AS(blind_deblur(g, 1, SolverConfig{}), Error);
    CHECK_THROWS_AS(blind_deblur(g, 17, SolverConfig{}), Error);
    SolverConfig bad;
    bad.p = 1.5;
    CHECK_THROWS_AS(blind_deblur(g, 5, bad), Error);
}

TEST_CASE("schedule and adaptive weight traces") {
    const Image f_true = fixtures::regression_image();
    const Image g = synthesize_blur(f_true, builtin_kernel("gauss5"), 0.01, 3);
    SolverConfig cfg;
    cfg.outer_iters = 4;
    const DeblurResult r = blind_deblur(g, 5, cfg);
    const auto levels = build_pyramid(g.height(), g.width(), 5, cfg);
    CHECK(r.trace.size() == levels.size() * static_cast<std::size_t>(cfg.outer_iters));
    for (const TraceRecord& t : r.trace) {
        CHECK(t.gamma == cfg.gamma * std::pow(cfg.gamma_growth, t.iteration));
        CHECK(std::abs(t.omega - (1.0 + t.entropy * t.entropy / (t.entropy * t.entropy * t.entropy + 1.0))) <= 1e-12);
        CHECK(t.image_solves >= 1);
        CHECK(t.image_solves <= cfg.max_inner + 1);
        CHECK(t.kernel_solves >= 1);
        CHECK(t.kernel_solves <= cfg.max_inner + 1);
        CHECK(std::isfinite(t.objective));
    }
    CHECK(r.trace.front().entropy == doctest::Approx(entropy(resize_bilinear(g, levels[0].height, levels[0].width))));
    for (double v : r.f.pixels()) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("fixed and first-only traces") {
    const Image f_true = fixtures::regression_image();
    const Image g = synthesize_blur(f_true, builtin_kernel("box3"), 0.01, 4);
    SolverConfig cfg;
    cfg.outer_iters = 2;
    PipelineOptions fixed;
    fixed.mode = PriorMode::fixed_hybrid;
    for (const auto& t : blind_deblur(g, 3, cfg, fixed).trace) CHECK(t.omega == 1.0);
    PipelineOptions first;
    first.mode = PriorMode::first_only;
    for (const auto& t : blind_deblur(g, 3, cfg, first).trace) CHECK(t.omega == 0.0);
}

TEST_CASE("adaptive on a constant image equals fixed") {
    const Image g(32, 32, 0.6);
    SolverConfig cfg;
    cfg.outer_iters = 3;
    const DeblurResult a = ablation_variant(g, 3, cfg, PriorMode::adaptive_hybrid);
    const DeblurResult b = ablation_variant(g, 3, cfg, PriorMode::fixed_hybrid);
    CHECK(a.f == b.f);
    CHECK(a.h == b.h);
    for (const auto& t : a.trace) {
        CHECK(t.entropy == 0.0);
        CHECK(t.omega == 1.0);
    }
}

TEST_CASE("single level, one outer iteration equals the manual composition") {
    const Image f_true = fixtures::regression_image("coins", 48);
    const Image g = synthesize_blur(f_true, builtin_kernel("box3"), 0.01, 5);
    SolverConfig cfg;
    cfg.outer_iters = 1;
    PipelineOptions opts;
    opts.use_pyramid = false;
    const DeblurResult r = blind_deblur(g, 5, cfg, opts);

    const double omega = adaptive_omega(entropy(g)).omega;
    const ShrinkLut l1 = build_lut(cfg.p, first_order_lambda(cfg));
    const ShrinkLut l2 = build_lut(cfg.p, second_order_lambda(cfg, omega));
    Kernel h0(5);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) h0(y, x) = 1.0 / 9.0;
    const Image f1 = update_image(h0, g, g, omega, cfg, {&l1, &l2});
    const Kernel h1 = update_kernel(f1, g, cfg, 5);
    CHECK(r.f == f1);
    CHECK(r.h == h1);
}

TEST_CASE("determinism") {
    const Image f_true = fixtures::regression_image("moon", 48);
    const Image g = synthesize_blur(f_true, builtin_kernel("gauss5"), 0.01, 6);
    SolverConfig cfg;
    cfg.outer_iters = 3;
    const DeblurResult a = blind_deblur(g, 5, cfg);
    const DeblurResult b = blind_deblur(g, 5, cfg);
    CHECK(a.f == b.f);
    CHECK(a.h == b.h);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].objective == b.trace[i].objective);
        CHECK(a.trace[i].entropy == b.trace[i].entropy);
        CHECK(a.trace[i].image_solves == b.trace[i].image_solves);
    }
}

TEST_CASE("sharp input is nearly a no-op") {
    // Noiseless g = f_true caps PSNR(g, f_true), so the PSNR margin is checked on
    // the same sharp image with the protocol noise added.
    const Image f_true = fixtures::regression_image();
    const DeblurResult clean = blind_deblur(f_true, 9, SolverConfig{});
    CHECK(centre_mass(clean.h, 1) >= 0.8);
    const Image g = synthesize_blur(f_true, Kernel::delta(1), 0.01, 21);
    const DeblurResult noisy = blind_deblur(g, 9, SolverConfig{});
    CHECK(centre_mass(noisy.h, 1) >= 0.8);
    CHECK(psnr(noisy.f, f_true) >= psnr(g, f_true) - 0.5);
}

TEST_CASE("motion blur with noise: image and kernel improve") {
    const Image f_true = fixtures::regression_image();
    const Kernel k = builtin_kernel("motion9");
    const Image g = synthesize_blur(f_true, k, 0.01, 17);
    const DeblurResult r = blind_deblur(g, 9, SolverConfig{});
    CHECK(ssim(r.f, f_true) > ssim(g, f_true));
    CHECK(kernel_correlation(r.h, k) >= 0.8);
}

TEST_CASE("pyramid is optional") {
    const Image f_true = fixtures::regression_image("coins", 48);
    const Image g = synthesize_blur(f_true, builtin_kernel("gauss5"), 0.01, 8);
    SolverConfig cfg;
    cfg.outer_iters = 3;
    PipelineOptions opts;
    opts.use_pyramid = false;
    const DeblurResult r = blind_deblur(g, 5, cfg, opts);
    CHECK(r.trace.size() == 3);
    CHECK(r.f.same_shape(g));
    for (double v : r.h.values()) CHECK(v >= 0.0);
}

TEST_CASE("entropy source and edge taper options") {
    const Image f_true = fixtures::regression_image("coins", 48);
    const Image g = synthesize_blur(f_true, builtin_kernel("box3"), 0.01, 9);
    SolverConfig cfg;
    cfg.outer_iters = 2;
    PipelineOptions opts;
    opts.use_pyramid = false;
    opts.entropy_source = EntropySource::observed;
    const DeblurResult r = blind_deblur(g, 3, cfg, opts);
    for (const auto& t : r.trace) CHECK(t.entropy == entropy(g));

    const Image t = edge_taper(g, 4);
    CHECK(t(20, 20) == g(20, 20));
    CHECK(t(0, 20) != g(0, 20));
    opts.edge_taper = true;
    CHECK_NOTHROW(blind_deblur(g, 3, cfg, opts));
    CHECK_THROWS_AS(edge_taper(g, 0), Error);
}

TEST_CASE("non-blind deconvolution") {
    const Image f_true = fixtures::regression_image();
    // Identity kernel: near-identity restoration.
    const Image g_sharp = synthesize_blur(f_true, Kernel::delta(1), 0.0, 0);
    CHECK(psnr(nonblind_deblur(g_sharp, Kernel::delta(1), SolverConfig{}), g_sharp) >= 40.0);

    const Kernel k = builtin_kernel("motion9");
    const Image g = circ_conv(f_true, k);
    const double base = psnr(g, f_true);
    const double matched = psnr(nonblind_deblur(g, k, SolverConfig{}), f_true) - base;
    CHECK(matched >= 2.0);
    Kernel rotated(9);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x) rotated(y, x) = k(x, 8 - y);
    const double mismatched = psnr(nonblind_deblur(g, rotated, SolverConfig{}), f_true) - base;
    CHECK(mismatched < matched);

    const Image g5 = circ_conv(f_true, builtin_kernel("gauss5"));
    CHECK(psnr(nonblind_deblur(g5, builtin_kernel("gauss5"), SolverConfig{}), f_true) - psnr(g5, f_true) >= 2.0);
}

TEST_CASE("blind objective") {
    const Image f(16, 16, 0.5);
    SolverConfig cfg;
    // Constant image, delta kernel, g = f: only the kernel L1 term remains.
    CHECK(blind_objective(f, Kernel::delta(3), f, 1.0, cfg) == doctest::Approx(cfg.alpha_h));
}
