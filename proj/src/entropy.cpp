#include "deblur/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "deblur/error.hpp"

namespace deblur {

double entropy(const Image& img) {
    std::array<std::size_t, kEntropyBins> counts{};
    for (double v : img.pixels()) {
        const double c = std::clamp(v, 0.0, 1.0);
        const int bin = std::min(static_cast<int>(c * kEntropyBins), kEntropyBins - 1);
        ++counts[static_cast<std::size_t>(bin)];
    }
    const double n = static_cast<double>(img.size());
    double ent = 0.0;
    for (std::size_t count : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        ent -= p * std::log2(p);
    }
    // -sum(p log p) of a single bin evaluates to -0.0
    return ent <= 0.0 ? 0.0 : ent;
}

AdaptiveWeight adaptive_omega(double ent) {
    if (!(ent >= 0.0) || !std::isfinite(ent)) {
        throw Error(ErrorCode::invalid_argument, "entropy must be finite and non-negative");
    }
    const double e2 = ent * ent;
    return {ent, 1.0 + e2 / (e2 * ent + 1.0)};
}

}  // namespace deblur
