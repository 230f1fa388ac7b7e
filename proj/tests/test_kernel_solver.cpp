#include <doctest.h>

#include <cmath>
#include <random>

#include "deblur/error.hpp"
#include "deblur/kernel_solver.hpp"
#include "deblur/metrics.hpp"
#include "deblur/spectral.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "residuals.hpp"

using namespace deblur;
using oracle::kernel_residual;

TEST_CASE("kernel solve satisfies its normal equation") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const Image f = oracle::random_image(16, 16, rng);
        const Image g = circ_conv(f, oracle::random_kernel(5, rng));
        SolverConfig cfg;
        cfg.gamma = 0.5 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
        cfg.beta_h = 10.0 + 1e3 * std::uniform_real_distribution<double>(0, 1)(rng);
        cfg.alpha_h = 0.1;
        int calls = 0;
        solve_kernel_state(f, g, cfg, nullptr, [&](const KernelIterationView& it) {
            ++calls;
            CHECK(kernel_residual(it) <= 1e-8);
        });
        CHECK(calls >= 1);
    }
}

TEST_CASE("kernel state invariants and stopping rule") {
    std::mt19937_64 rng(32);
    const Image f = oracle::random_image(16, 16, rng);
    const Image g = circ_conv(f, oracle::random_kernel(3, rng));
    SolverConfig cfg;
    cfg.tol = 1e-30;
    KernelSolveStats stats;
    const KernelState st = solve_kernel_state(f, g, cfg, &stats);
    CHECK(stats.solves == cfg.max_inner + 1);
    CHECK(st.iter == stats.solves);
    for (double v : st.v_h.pixels()) CHECK(v >= 0.0);
    CHECK(stats.constraint_residual.size() == static_cast<std::size_t>(stats.solves));

    cfg.max_inner = 0;
    KernelSolveStats once;
    solve_kernel_state(f, g, cfg, &once);
    CHECK(once.solves == 1);
}

TEST_CASE("zero iteration budget returns the projection of one closed-form solve") {
    std::mt19937_64 rng(33);
    const Image f = oracle::random_image(16, 16, rng);
    const Image g = circ_conv(f, oracle::random_kernel(3, rng));
    SolverConfig cfg;
    cfg.max_inner = 0;
    // With v = b = 0 the single solve is F^-1(conj(F) G / (|F|^2 + beta_h/gamma)).
    FftPlan plan(16, 16);
    const Spectrum F = plan.forward(f);
    const Spectrum G = plan.forward(g);
    Spectrum num(16, 16), den(16, 16);
    for (std::size_t i = 0; i < F.size(); ++i) {
        num.values()[i] = std::conj(F.values()[i]) * G.values()[i];
        den.values()[i] = std::norm(F.values()[i]) + cfg.beta_h / cfg.gamma;
    }
    const Image h_full = quotient_solve(plan, num, den);
    const Kernel expected = crop_kernel(h_full, 3);
    const Kernel got = update_kernel(f, g, cfg, 3);
    for (std::size_t i = 0; i < got.values().size(); ++i) {
        CHECK(got.values()[i] == doctest::Approx(expected.values()[i]).epsilon(1e-12));
    }
}

TEST_CASE("sharp input gives a centred kernel") {
    const Image f = fixtures::regression_image();
    SolverConfig cfg;
    cfg.gamma = 1e6;
    const Kernel k = update_kernel(f, f, cfg, 9);
    CHECK(k(4, 4) >= 0.9);
    double s = 0.0;
    for (double v : k.values()) {
        CHECK(v >= 0.0);
        s += v;
    }
    CHECK(std::abs(s - 1.0) <= 1e-9);
}

TEST_CASE("box kernel is recovered from an exact latent image") {
    const Image f = fixtures::regression_image();
    const Kernel box(3, 1.0 / 9.0);
    const Image g = circ_conv(f, box);
    const Kernel k = update_kernel(f, g, SolverConfig{}, 3);
    CHECK(oracle::cosine(k, box) >= 0.95);
    CHECK(kernel_correlation(k, box) >= 0.95);
}

TEST_CASE("constraint residual settles on a well-posed instance") {
    const Image f = fixtures::regression_image();
    const Image g = circ_conv(f, Kernel(5, 1.0 / 25.0));
    SolverConfig cfg;
    cfg.tol = 1e-30;
    KernelSolveStats stats;
    solve_kernel_state(f, g, cfg, &stats);
    const auto& r = stats.constraint_residual;
    REQUIRE(r.size() >= 5);
    for (std::size_t i = r.size() - 4; i < r.size(); ++i) CHECK(r[i] <= r[i - 1] * (1 + 1e-6));
}

TEST_CASE("crop_kernel recentres a drifted estimate") {
    Image h(20, 20);
    // Mass centred two pixels right of the origin.
    h(0, 2) = 0.6;
    h(0, 1) = 0.2;
    h(0, 3) = 0.2;
    const Kernel k = crop_kernel(h, 5);
    const Offset o = kernel_centroid_offset(k);
    CHECK(std::abs(o.dx) <= 1.0);
    CHECK(std::abs(o.dy) <= 1.0);
    CHECK(k(2, 2) == doctest::Approx(0.6));
}

TEST_CASE("kernel solver errors") {
    const Image f(16, 16, 0.5);
    CHECK_THROWS_AS(update_kernel(f, Image(16, 15), SolverConfig{}, 3), Error);
    CHECK_THROWS_AS(update_kernel(f, f, SolverConfig{}, 4), Error);
    CHECK_THROWS_AS(update_kernel(f, f, SolverConfig{}, 17), Error);
    Image bad = f;
    bad(3, 3) = std::nan("");
    try {
        update_kernel(bad, f, SolverConfig{}, 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::solver_diverged || e.code() == ErrorCode::invalid_argument));
    }
}
