#include "deblur/synthesis.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "deblur/error.hpp"
#include "deblur/io.hpp"
#include "deblur/spectral.hpp"

namespace deblur {

std::vector<std::string> builtin_kernel_names() {
    return {"delta", "box3", "gauss5", "motion9"};
}

Kernel builtin_kernel(std::string_view name) {
    if (name == "delta") return Kernel::delta(1);
    if (name == "box3") return Kernel(3, 1.0 / 9.0);
    if (name == "gauss5") {
        Kernel k(5);
        for (int y = 0; y < 5; ++y) {
            for (int x = 0; x < 5; ++x) {
                const double dy = y - 2;
                const double dx = x - 2;
                k(y, x) = std::exp(-(dx * dx + dy * dy) / 2.0);
            }
        }
        return project_kernel(k);
    }
    if (name == "motion9") {
        Kernel k(9);
        for (int x = 0; x < 9; ++x) k(4, x) = 1.0 / 9.0;
        return k;
    }
    throw Error(ErrorCode::invalid_argument, "unknown builtin kernel '" + std::string(name) + "'");
}

Kernel resolve_kernel(const std::string& source) {
    for (const auto& name : builtin_kernel_names()) {
        if (source == name) return builtin_kernel(name);
    }
    if (!std::filesystem::exists(source)) {
        throw Error(ErrorCode::io, "'" + source + "' is neither a builtin kernel nor a readable file");
    }
    return io::read_kernel(source);
}

std::vector<double> gaussian_noise(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    std::vector<double> out;
    out.reserve(count + 1);
    while (out.size() < count) {
        const double u1 = static_cast<double>((rng() >> 11) + 1) * kScale;
        const double u2 = static_cast<double>(rng() >> 11) * kScale;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        out.push_back(r * std::cos(t));
        out.push_back(r * std::sin(t));
    }
    out.resize(count);
    return out;
}

Image synthesize_blur(const Image& f, const Kernel& k, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorCode::invalid_argument, "noise sigma must be finite and non-negative");
    }
    if (k.size() > std::min(f.height(), f.width())) {
        throw Error(ErrorCode::invalid_argument, "kernel larger than the image");
    }
    Image g = circ_conv(f, k);
    if (sigma > 0.0) {
        const auto noise = gaussian_noise(g.size(), seed);
        auto px = g.pixels();
        for (std::size_t i = 0; i < px.size(); ++i) px[i] += sigma * noise[i];
    }
    return clamp01(std::move(g));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ a) ^ b);
}

}  // namespace deblur
