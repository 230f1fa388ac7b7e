#pragma once

#include <stdexcept>
#include <string>

namespace deblur {

enum class ErrorCode {
    invalid_argument,
    shape_mismatch,
    degenerate_kernel,
    singular_solve,
    solver_diverged,
    io,
};

/// Single exception type for the library; `code()` tells failures apart.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace deblur
