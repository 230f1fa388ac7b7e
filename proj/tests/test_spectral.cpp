#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "deblur/error.hpp"
#include "deblur/spectral.hpp"
#include "oracles.hpp"

using namespace deblur;

TEST_CASE("otf of simple filters") {
    const Spectrum one = otf(Image(1, 1, 1.0), 4, 6);
    for (Complex c : one.values()) CHECK(std::abs(c - Complex(1.0, 0.0)) <= 1e-15);

    const Spectrum d = otf(Image(1, 2, {-1.0, 1.0}), 1, 4, 0, 0);
    CHECK(std::abs(d(0, 0)) <= 1e-15);
    CHECK(std::abs(d(0, 2)) == doctest::Approx(2.0));

    CHECK_THROWS_AS(otf(Image(5, 5), 4, 4), Error);
}

TEST_CASE("forward/inverse round trip") {
    std::mt19937_64 rng(1);
    for (auto [h, w] : {std::pair{16, 16}, std::pair{7, 12}, std::pair{1, 9}}) {
        const Image img = oracle::random_image(h, w, rng, -1, 1);
        FftPlan plan(h, w);
        double imag = 1.0;
        const Image back = plan.inverse_real(plan.forward(img), &imag);
        CHECK(oracle::norm(oracle::add(back, img, -1.0)) / oracle::norm(img) <= 1e-12);
        CHECK(imag <= 1e-10);
    }
}

TEST_CASE("convolution theorem against the direct oracle") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        const int h = 8 + static_cast<int>(rng() % 9);
        const int w = 8 + static_cast<int>(rng() % 9);
        const int k = 1 + 2 * static_cast<int>(rng() % 3);
        const Image img = oracle::random_image(h, w, rng);
        const Kernel ker = oracle::random_kernel(k, rng);
        CHECK(oracle::max_abs_diff(circ_conv(img, ker), oracle::conv(img, ker)) <= 1e-10);
    }
    // Arbitrary non-centred anchor through the generic otf.
    const Image img = oracle::random_image(8, 8, rng);
    const Image filt = oracle::random_image(3, 2, rng, -1, 1);
    FftPlan plan(8, 8);
    const Spectrum F = plan.forward(img);
    const Spectrum K = otf(filt, 8, 8, 2, 1);
    Spectrum prod(8, 8);
    for (std::size_t i = 0; i < prod.size(); ++i) prod.values()[i] = F.values()[i] * K.values()[i];
    CHECK(oracle::max_abs_diff(plan.inverse_real(prod), oracle::conv(img, filt, 2, 1)) <= 1e-10);
}

TEST_CASE("circ_conv identities") {
    std::mt19937_64 rng(3);
    const Image img = oracle::random_image(9, 11, rng);
    CHECK(oracle::max_abs_diff(circ_conv(img, Kernel::delta(1)), img) <= 1e-14);
    CHECK(oracle::max_abs_diff(circ_conv(img, Kernel::delta(5)), img) <= 1e-14);
    const Image c(9, 11, 0.37);
    const Image out = circ_conv(c, oracle::random_kernel(5, rng));
    for (double v : out.pixels()) CHECK(std::abs(v - 0.37) <= 1e-14);
}

TEST_CASE("derivative transfer functions") {
    std::mt19937_64 rng(4);
    const Image img = oracle::random_image(10, 7, rng);
    FftPlan plan(10, 7);
    const Spectrum F = plan.forward(img);
    const OtfCache cache(10, 7);
    for (Direction d : kAllDirections) {
        Spectrum prod(10, 7);
        for (std::size_t i = 0; i < prod.size(); ++i) prod.values()[i] = F.values()[i] * cache[d].values()[i];
        CHECK(oracle::max_abs_diff(plan.inverse_real(prod), oracle::derivative(img, d)) <= 1e-12);
    }
    const OtfCache again(10, 7);
    for (Direction d : kAllDirections) {
        for (std::size_t i = 0; i < again[d].size(); ++i) CHECK(again[d].values()[i] == cache[d].values()[i]);
    }
    for (std::size_t i = 0; i < cache.first_order_energy().size(); ++i) {
        const double e1 = std::norm(cache[Direction::x].values()[i]) + std::norm(cache[Direction::y].values()[i]);
        CHECK(cache.first_order_energy()[i] == doctest::Approx(e1));
    }
}

TEST_CASE("quotient_solve") {
    std::mt19937_64 rng(5);
    const Image img = oracle::random_image(6, 8, rng);
    FftPlan plan(6, 8);
    const Spectrum F = plan.forward(img);

    Spectrum num(6, 8), den(6, 8);
    for (std::size_t i = 0; i < F.size(); ++i) {
        num.values()[i] = 2.0 * F.values()[i];
        den.values()[i] = 2.0;
    }
    CHECK(oracle::max_abs_diff(quotient_solve(plan, num, den), img) <= 1e-13);

    // num == den: the quotient spectrum is all ones, i.e. a unit impulse at the origin.
    Spectrum same = F;
    const Image impulse = quotient_solve(plan, same, same);
    CHECK(impulse(0, 0) == doctest::Approx(1.0));
    CHECK(oracle::norm(impulse) == doctest::Approx(1.0));

    den.values()[3] = 1e-13;
    try {
        quotient_solve(plan, num, den);
        FAIL("expected singular solve");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::singular_solve);
    }
    CHECK_THROWS_AS(quotient_solve(plan, Spectrum(6, 7), Spectrum(6, 7)), Error);
}

TEST_CASE("distinct plans are independent across threads") {
    std::mt19937_64 rng(6);
    const Image img = oracle::random_image(32, 32, rng);
    const Kernel k = oracle::random_kernel(7, rng);
    const Image ref = circ_conv(img, k);
    std::vector<Image> out(4);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&, t] {
            for (int rep = 0; rep < 10; ++rep) out[t] = circ_conv(img, k);
        });
    }
    for (auto& th : pool) th.join();
    for (const Image& o : out) CHECK(o == ref);
}
