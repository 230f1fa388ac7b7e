#include "deblur/resample.hpp"

#include <algorithm>
#include <cmath>

#include "deblur/error.hpp"

namespace deblur {

Image resize_bilinear(const Image& img, int height, int width) {
    if (height <= 0 || width <= 0) throw Error(ErrorCode::invalid_argument, "resize: target size must be positive");
    if (height == img.height() && width == img.width()) return img;
    Image out(height, width);
    const double sy = static_cast<double>(img.height()) / height;
    const double sx = static_cast<double>(img.width()) / width;
    const int max_y = img.height() - 1;
    const int max_x = img.width() - 1;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(max_y));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, max_y);
        const double ty = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(max_x));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, max_x);
            const double tx = fx - x0;
            const double top = img(y0, x0) * (1.0 - tx) + img(y0, x1) * tx;
            const double bottom = img(y1, x0) * (1.0 - tx) + img(y1, x1) * tx;
            out(y, x) = top * (1.0 - ty) + bottom * ty;
        }
    }
    return out;
}

Kernel resize_kernel(const Kernel& k, int size, double scale) {
    if (!(scale > 0.0)) throw Error(ErrorCode::invalid_argument, "resize_kernel: scale must be positive");
    Kernel out(size);
    const int c_new = size / 2;
    const int c_old = k.radius();
    const int n = k.size();
    auto sample = [&](int y, int x) { return (y < 0 || x < 0 || y >= n || x >= n) ? 0.0 : k(y, x); };
    for (int y = 0; y < size; ++y) {
        const double fy = c_old + (y - c_new) / scale;
        const int y0 = static_cast<int>(std::floor(fy));
        const double ty = fy - y0;
        for (int x = 0; x < size; ++x) {
            const double fx = c_old + (x - c_new) / scale;
            const int x0 = static_cast<int>(std::floor(fx));
            const double tx = fx - x0;
            const double top = sample(y0, x0) * (1.0 - tx) + sample(y0, x0 + 1) * tx;
            const double bottom = sample(y0 + 1, x0) * (1.0 - tx) + sample(y0 + 1, x0 + 1) * tx;
            out(y, x) = top * (1.0 - ty) + bottom * ty;
        }
    }
    return project_kernel(out);
}

int nearest_odd(double x) {
    return 2 * static_cast<int>(std::floor(x / 2.0)) + 1;
}

}  // namespace deblur
