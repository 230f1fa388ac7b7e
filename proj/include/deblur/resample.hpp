#pragma once

#include "deblur/image.hpp"

namespace deblur {

/// Bilinear resize with pixel-centre alignment and clamp-to-edge sampling.
Image resize_bilinear(const Image& img, int height, int width);

/// Resamples a kernel by `scale` (new pixel pitch = old pitch / scale) onto a
/// `size`x`size` grid with anchors aligned, then projects it onto the simplex.
Kernel resize_kernel(const Kernel& k, int size, double scale);

/// The odd integer within distance 1 of x: 2*floor(x/2) + 1.
int nearest_odd(double x);

}  // namespace deblur
