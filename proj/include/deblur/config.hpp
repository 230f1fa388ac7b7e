#pragma once

#include <string>
#include <string_view>

namespace deblur {

/// Scalar hyper-parameters of the alternating solver. Defaults are the
/// published settings; the pyramid and outer-loop controls are ours.
struct SolverConfig {
    double gamma = 1.0;         // fidelity weight
    double alpha_f = 0.01;      // image prior weight
    double alpha_h = 10.0;      // kernel prior weight
    double beta_f = 1.0;        // image splitting penalty
    double beta_h = 1e4;        // kernel splitting penalty
    double p = 0.3;             // hyper-Laplacian exponent
    double tol = 0.001;         // relative squared change stopping threshold
    int max_inner = 10;         // N
    double gamma_growth = 1.5;  // gamma multiplier per outer iteration
    double pyramid_scale = 0.70710678118654752;
    int min_kernel = 3;
    int outer_iters = 10;

    /// Throws Error(invalid_argument) when any field is out of range.
    void validate() const;

    /// Sets one field from a textual value, e.g. set("beta_h", "1e4").
    /// Accepted keys are the field names; N is an alias of max_inner.
    void set(std::string_view key, std::string_view value);

    /// "key=value" per line: gamma, alpha_f, alpha_h, beta_f, beta_h, p, N, tol,
    /// gamma_growth, pyramid_scale, min_kernel, outer_iters.
    std::string to_string() const;
};

}  // namespace deblur
