#pragma once

#include <array>
#include <string_view>

#include "deblur/image.hpp"

namespace deblur {

/// The six finite-difference operators of the hybrid prior. Second-order
/// operators are compositions of the first-order ones, outer operator last:
/// xy means D_y(D_x f), yx means D_x(D_y f).
enum class Direction { x, y, xx, xy, yx, yy };

inline constexpr std::array<Direction, 6> kAllDirections = {
    Direction::x, Direction::y, Direction::xx, Direction::xy, Direction::yx, Direction::yy};

constexpr bool is_second_order(Direction d) noexcept {
    return d != Direction::x && d != Direction::y;
}

constexpr std::size_t index_of(Direction d) noexcept {
    return static_cast<std::size_t>(d);
}

std::string_view name_of(Direction d) noexcept;

/// Forward difference with circular boundary: (D_x f)(y,x) = f(y,x+1) - f(y,x).
Image diff_x(const Image& img);
Image diff_y(const Image& img);
/// Adjoints of the two forward differences: (D_x^T g)(y,x) = g(y,x-1) - g(y,x).
Image diff_x_adjoint(const Image& img);
Image diff_y_adjoint(const Image& img);

Image apply_derivative(const Image& img, Direction d);
Image apply_derivative_adjoint(const Image& img, Direction d);

struct FirstOrder {
    Image gx;
    Image gy;
};

/// All six derivative maps of one image.
struct GradientField {
    Image gx, gy;
    Image gxx, gxy, gyx, gyy;

    const Image& operator[](Direction d) const noexcept;
    Image& operator[](Direction d) noexcept;
};

FirstOrder grad_first(const Image& img);
/// Computes all six maps; gxy and gyx are evaluated independently.
GradientField grad_second(const Image& img);

/// Pointwise sqrt(gx^2 + gy^2).
Image grad_magnitude(const FirstOrder& first);
/// Pointwise sqrt(gxx^2 + gxy^2 + gyx^2 + gyy^2).
Image grad_magnitude2(const GradientField& field);

}  // namespace deblur
