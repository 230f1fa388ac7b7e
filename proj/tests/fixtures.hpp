#pragma once

#include <filesystem>
#include <string>

#include "deblur/image.hpp"
#include "deblur/io.hpp"
#include "deblur/resample.hpp"

namespace fixtures {

inline std::filesystem::path corpus_dir() {
    return std::filesystem::path(DEBLUR_DATA_DIR) / "corpus";
}

/// A corpus image resampled to `size` x `size`.
inline deblur::Image regression_image(const std::string& id = "camera", int size = 64) {
    const deblur::Image full = deblur::io::read_image(corpus_dir() / (id + ".pgm"));
    return deblur::resize_bilinear(full, size, size);
}

/// Fresh scratch directory under the system temporary directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("deblur_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
