#pragma once

#include "deblur/image.hpp"

namespace deblur {

inline constexpr int kEntropyBins = 256;

/// Shannon entropy (bits) of the 256-bin histogram of the image clamped to [0,1].
/// Bin i covers [i/256, (i+1)/256); the value 1.0 falls in the last bin.
double entropy(const Image& img);

/// Weight on the second-order prior derived from image entropy:
/// omega = 1 + ent^2 / (ent^3 + 1).
struct AdaptiveWeight {
    double entropy = 0.0;
    double omega = 1.0;
};

AdaptiveWeight adaptive_omega(double ent);

}  // namespace deblur
