#include "deblur/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "deblur/error.hpp"

namespace deblur::io {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw Error(ErrorCode::io, path.string() + ": " + what);
}

double luminance(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// Skips whitespace and '#' comments in a netpbm header.
int read_header_int(std::istream& in, const std::filesystem::path& path) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value = 0;
    if (!(in >> value)) fail(path, "malformed netpbm header");
    return value;
}

Image read_netpbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char magic[2] = {};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' && magic[1] != '6')) {
        fail(path, "not a PGM/PPM file");
    }
    const bool ascii = magic[1] == '2' || magic[1] == '3';
    const int channels = (magic[1] == '3' || magic[1] == '6') ? 3 : 1;
    const int width = read_header_int(in, path);
    const int height = read_header_int(in, path);
    const int maxval = read_header_int(in, path);
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) fail(path, "bad netpbm dimensions");
    in.get();  // single whitespace before the raster

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
    std::vector<double> samples(count);
    if (ascii) {
        for (double& s : samples) {
            int v = 0;
            if (!(in >> v)) fail(path, "truncated raster");
            s = v;
        }
    } else {
        const int bytes = maxval < 256 ? 1 : 2;
        std::vector<unsigned char> raw(count * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size()) fail(path, "truncated raster");
        for (std::size_t i = 0; i < count; ++i) {
            samples[i] = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
        }
    }
    Image img(height, width);
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = channels == 1 ? samples[i] / maxval
                              : luminance(samples[3 * i], samples[3 * i + 1], samples[3 * i + 2]) / maxval;
    }
    return img;
}

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f != nullptr) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image read_png(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) fail(path, "cannot open");

    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_stdio(&image, file.get()) == 0) fail(path, image.message);
    const bool has_color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = has_color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
    if (png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr) == 0) {
        png_image_free(&image);
        fail(path, image.message);
    }
    const int width = static_cast<int>(image.width);
    const int height = static_cast<int>(image.height);
    Image img(height, width);
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = has_color ? luminance(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]) / 255.0 : buffer[i] / 255.0;
    }
    return img;
}

}  // namespace

std::uint8_t quantize(double v) noexcept {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

Image read_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail(path, "cannot open");
    unsigned char sig[8] = {};
    probe.read(reinterpret_cast<char*>(sig), 8);
    if (probe.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0) return read_png(path);
    return read_netpbm(path);
}

void write_image(const std::filesystem::path& path, const Image& img) {
    std::vector<std::uint8_t> bytes(img.size());
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) bytes[i] = quantize(px[i]);

    if (lower_extension(path) == ".png") {
        png_image image{};
        image.version = PNG_IMAGE_VERSION;
        image.width = static_cast<png_uint_32>(img.width());
        image.height = static_cast<png_uint_32>(img.height());
        image.format = PNG_FORMAT_GRAY;
        if (png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr) == 0) {
            fail(path, image.message);
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(path, "write failed");
}

Kernel parse_kernel(std::istream& in) {
    int k = 0;
    if (!(in >> k)) throw Error(ErrorCode::io, "kernel file: missing size line");
    if (k <= 0 || k % 2 == 0) throw Error(ErrorCode::io, "kernel file: size must be odd and positive");
    std::vector<double> values(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
    for (double& v : values) {
        if (!(in >> v)) throw Error(ErrorCode::io, "kernel file: expected " + std::to_string(k * k) + " values");
        if (!std::isfinite(v)) throw Error(ErrorCode::io, "kernel file: non-finite value");
    }
    std::string extra;
    if (in >> extra) throw Error(ErrorCode::io, "kernel file: trailing data");
    try {
        return project_kernel(Kernel(k, std::move(values)));
    } catch (const Error& e) {
        throw Error(ErrorCode::io, std::string("kernel file: ") + e.what());
    }
}

Kernel read_kernel(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    try {
        return parse_kernel(in);
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

void write_kernel(std::ostream& out, const Kernel& k) {
    char buf[32];
    out << k.size() << '\n';
    for (int y = 0; y < k.size(); ++y) {
        for (int x = 0; x < k.size(); ++x) {
            std::snprintf(buf, sizeof buf, "%.17g", k(y, x));
            if (x > 0) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

void write_kernel(const std::filesystem::path& path, const Kernel& k) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    write_kernel(out, k);
    if (!out) fail(path, "write failed");
}

}  // namespace deblur::io
