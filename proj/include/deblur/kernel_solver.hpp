#pragma once

#include <functional>
#include <vector>

#include "deblur/config.hpp"
#include "deblur/image.hpp"

namespace deblur {

/// Image-sized split-Bregman state of the kernel sub-problem.
struct KernelState {
    Image h;    // pre-crop estimate, anchor at (0,0)
    Image v_h;  // non-negative auxiliary copy of h
    Image b_h;  // Bregman variable
    int iter = 0;
};

/// Passed to an observer right after each Fourier solve.
struct KernelIterationView {
    int index;               // 0-based solve counter
    const Image& h;          // h^{i+1}
    const Image& v_plus_b;   // v_h^i + b_h^i used on the right-hand side
    const Image& f;
    const Image& g;
    double gamma;
    double beta_h;
};

struct KernelSolveStats {
    int solves = 0;
    double last_rel_change = 0.0;
    std::vector<double> constraint_residual;  // ||h - v_h|| after each iteration
};

using KernelObserver = std::function<void(const KernelIterationView&)>;

/// Alternates the Fourier-domain h solve, v_h = max(h - b_h - alpha_h/beta_h, 0)
/// and b_h = b_h - h + v_h from v_h = b_h = 0, stopping when
/// ||h^{i+1} - h^i||^2 / ||h^{i+1}||^2 <= tol or after N+1 solves.
/// Returns the final state (h is still image-sized).
KernelState solve_kernel_state(const Image& f, const Image& g, const SolverConfig& cfg,
                               KernelSolveStats* stats = nullptr, const KernelObserver& observer = {});

/// Crops an image-sized, origin-anchored kernel estimate to `kernel_size`,
/// projects it onto the simplex and re-centres the crop window when the
/// centroid drifts by more than one pixel.
Kernel crop_kernel(const Image& h_full, int kernel_size);

/// h sub-problem: solve_kernel_state followed by crop_kernel.
/// Throws Error(degenerate_kernel), Error(solver_diverged) or Error(invalid_argument).
Kernel update_kernel(const Image& f, const Image& g, const SolverConfig& cfg, int kernel_size,
                     KernelSolveStats* stats = nullptr, const KernelObserver& observer = {});

}  // namespace deblur
