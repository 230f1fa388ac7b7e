#include "deblur/gradient.hpp"

#include <cmath>

#include "deblur/error.hpp"

namespace deblur {

std::string_view name_of(Direction d) noexcept {
    switch (d) {
        case Direction::x: return "x";
        case Direction::y: return "y";
        case Direction::xx: return "xx";
        case Direction::xy: return "xy";
        case Direction::yx: return "yx";
        case Direction::yy: return "yy";
    }
    return "?";
}

Image diff_x(const Image& img) {
    const int h = img.height();
    const int w = img.width();
    Image out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int xn = x + 1 == w ? 0 : x + 1;
            out(y, x) = img(y, xn) - img(y, x);
        }
    }
    return out;
}

Image diff_y(const Image& img) {
    const int h = img.height();
    const int w = img.width();
    Image out(h, w);
    for (int y = 0; y < h; ++y) {
        const int yn = y + 1 == h ? 0 : y + 1;
        for (int x = 0; x < w; ++x) out(y, x) = img(yn, x) - img(y, x);
    }
    return out;
}

Image diff_x_adjoint(const Image& img) {
    const int h = img.height();
    const int w = img.width();
    Image out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int xp = x == 0 ? w - 1 : x - 1;
            out(y, x) = img(y, xp) - img(y, x);
        }
    }
    return out;
}

Image diff_y_adjoint(const Image& img) {
    const int h = img.height();
    const int w = img.width();
    Image out(h, w);
    for (int y = 0; y < h; ++y) {
        const int yp = y == 0 ? h - 1 : y - 1;
        for (int x = 0; x < w; ++x) out(y, x) = img(yp, x) - img(y, x);
    }
    return out;
}

Image apply_derivative(const Image& img, Direction d) {
    switch (d) {
        case Direction::x: return diff_x(img);
        case Direction::y: return diff_y(img);
        case Direction::xx: return diff_x(diff_x(img));
        case Direction::xy: return diff_y(diff_x(img));
        case Direction::yx: return diff_x(diff_y(img));
        case Direction::yy: return diff_y(diff_y(img));
    }
    return img;
}

// (A B)^T = B^T A^T, so the adjoint applies the inner operator's adjoint last.
Image apply_derivative_adjoint(const Image& img, Direction d) {
    switch (d) {
        case Direction::x: return diff_x_adjoint(img);
        case Direction::y: return diff_y_adjoint(img);
        case Direction::xx: return diff_x_adjoint(diff_x_adjoint(img));
        case Direction::xy: return diff_x_adjoint(diff_y_adjoint(img));
        case Direction::yx: return diff_y_adjoint(diff_x_adjoint(img));
        case Direction::yy: return diff_y_adjoint(diff_y_adjoint(img));
    }
    return img;
}

const Image& GradientField::operator[](Direction d) const noexcept {
    switch (d) {
        case Direction::x: return gx;
        case Direction::y: return gy;
        case Direction::xx: return gxx;
        case Direction::xy: return gxy;
        case Direction::yx: return gyx;
        case Direction::yy: return gyy;
    }
    return gx;
}

Image& GradientField::operator[](Direction d) noexcept {
    return const_cast<Image&>(static_cast<const GradientField&>(*this)[d]);
}

FirstOrder grad_first(const Image& img) {
    return {diff_x(img), diff_y(img)};
}

GradientField grad_second(const Image& img) {
    GradientField f;
    f.gx = diff_x(img);
    f.gy = diff_y(img);
    f.gxx = diff_x(f.gx);
    f.gxy = diff_y(f.gx);
    f.gyx = diff_x(f.gy);
    f.gyy = diff_y(f.gy);
    return f;
}

Image grad_magnitude(const FirstOrder& first) {
    require_same_shape(first.gx, first.gy, "grad_magnitude");
    Image out(first.gx.height(), first.gx.width());
    const auto a = first.gx.pixels();
    const auto b = first.gy.pixels();
    auto o = out.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::hypot(a[i], b[i]);
    return out;
}

Image grad_magnitude2(const GradientField& field) {
    require_same_shape(field.gxx, field.gxy, "grad_magnitude2");
    require_same_shape(field.gxx, field.gyx, "grad_magnitude2");
    require_same_shape(field.gxx, field.gyy, "grad_magnitude2");
    Image out(field.gxx.height(), field.gxx.width());
    const auto a = field.gxx.pixels();
    const auto b = field.gxy.pixels();
    const auto c = field.gyx.pixels();
    const auto d = field.gyy.pixels();
    auto o = out.pixels();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i] + d[i] * d[i]);
    }
    return out;
}

}  // namespace deblur
