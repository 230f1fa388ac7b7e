#pragma once

#include <filesystem>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "deblur/image.hpp"

namespace deblur::io {

/// Reads 8/16-bit PGM (P2/P5), PPM (P3/P6) or PNG. Colour is reduced to
/// luminance 0.299 R + 0.587 G + 0.114 B on the stored 8-bit values (PNG alpha
/// is removed by libpng). Values are scaled to [0,1] by the format maximum.
/// Throws Error(io).
Image read_image(const std::filesystem::path& path);

/// 8-bit grayscale; the format follows the extension (.png, otherwise binary PGM).
/// Values are clamped to [0,1] and rounded to the nearest level.
void write_image(const std::filesystem::path& path, const Image& img);

std::uint8_t quantize(double v) noexcept;

/// Kernel text format: first line the odd size k, then k lines of k
/// space-separated decimals. Loaded kernels are projected (negatives zeroed,
/// unit sum).
Kernel parse_kernel(std::istream& in);
Kernel read_kernel(const std::filesystem::path& path);
/// Writes 17 significant digits, so parsing recovers the stored values exactly.
void write_kernel(std::ostream& out, const Kernel& k);
void write_kernel(const std::filesystem::path& path, const Kernel& k);

}  // namespace deblur::io
