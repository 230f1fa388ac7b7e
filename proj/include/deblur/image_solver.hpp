#pragma once

#include <array>
#include <functional>
#include <vector>

#include "deblur/config.hpp"
#include "deblur/gradient.hpp"
#include "deblur/image.hpp"
#include "deblur/shrinkage.hpp"

namespace deblur {

/// Latent image with the six auxiliary and six Bregman fields, indexed by
/// index_of(Direction).
struct ImageState {
    Image f;
    std::array<Image, 6> v;
    std::array<Image, 6> a;
    int iter = 0;
};

/// Shrinkage tables for the two derivative orders. A null table stands for a
/// zero prior weight (identity prox).
struct PriorLuts {
    const ShrinkLut* first = nullptr;
    const ShrinkLut* second = nullptr;
};

struct ImageSolveOptions {
    /// When false the four second-order terms are removed from the functional:
    /// their fields stay zero and their transfer functions leave the solve.
    bool second_order = true;
};

/// Passed to an observer right after each Fourier solve.
struct ImageIterationView {
    int index;
    const Image& f;                      // f^{i+1}, before clamping
    const std::array<Image, 6>& v;       // shrinkage outputs used in this solve
    const std::array<Image, 6>& v_plus_a;
    const Image& g;
    const Kernel& h;
    double gamma;
    double beta_f;
    bool second_order;
};

struct ImageSolveStats {
    int solves = 0;
    double last_rel_change = 0.0;
    /// Split functional gamma/2 ||h*f - g||^2 + alpha_f sum_d w_d |v_d|^p
    /// + beta_f/2 sum_d ||D_d f - v_d - a_d||^2 after each sweep, with w_d = 1
    /// on first-order and omega on second-order terms.
    std::vector<double> surrogate;
};

using ImageObserver = std::function<void(const ImageIterationView&)>;

/// Lambdas the tables must be built with: alpha_f/beta_f and alpha_f*omega/beta_f.
double first_order_lambda(const SolverConfig& cfg);
double second_order_lambda(const SolverConfig& cfg, double omega);

/// f sub-problem. Starting from `f_init` with all v, a = 0, each sweep does
/// v_d = prox(D_d f - a_d), solves the quadratic f problem in the Fourier
/// domain and updates a_d = a_d - D_d f + v_d. Stops when
/// ||f^{i+1} - f^i||^2 / ||f^{i+1}||^2 <= tol or after N+1 solves.
/// The state's f is returned unclamped.
ImageState solve_image_state(const Kernel& h, const Image& g, const Image& f_init, double omega,
                             const SolverConfig& cfg, const PriorLuts& luts, const ImageSolveOptions& options = {},
                             ImageSolveStats* stats = nullptr, const ImageObserver& observer = {});

/// solve_image_state followed by clamping to [0,1].
/// Throws Error(solver_diverged) or Error(singular_solve).
Image update_image(const Kernel& h, const Image& g, const Image& f_init, double omega, const SolverConfig& cfg,
                   const PriorLuts& luts, const ImageSolveOptions& options = {}, ImageSolveStats* stats = nullptr,
                   const ImageObserver& observer = {});

}  // namespace deblur
