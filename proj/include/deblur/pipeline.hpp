#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "deblur/config.hpp"
#include "deblur/image.hpp"

namespace deblur {

/// Which image prior the alternation uses.
enum class PriorMode {
    first_only,       // first-order term only
    fixed_hybrid,     // both orders, omega pinned to 1
    adaptive_hybrid,  // both orders, omega from the entropy of the current estimate
};

std::string_view name_of(PriorMode mode) noexcept;
/// Accepts "first", "first_only", "hybrid", "fixed_hybrid", "adaptive", "adaptive_hybrid".
PriorMode parse_prior_mode(std::string_view text);

struct PyramidLevel {
    double scale = 1.0;
    int height = 0;
    int width = 0;
    int kernel_size = 3;
    int level_index = 0;  // 0 = coarsest
};

/// Levels from coarsest to finest. Scales are pyramid_scale^l, stopping before
/// kernel_size * scale drops below min_kernel; with `use_pyramid` false only
/// the full-resolution level is returned.
std::vector<PyramidLevel> build_pyramid(int height, int width, int kernel_size, const SolverConfig& cfg,
                                        bool use_pyramid = true);

/// One row per outer iteration.
struct TraceRecord {
    int level = 0;
    int iteration = 0;
    double scale = 1.0;
    double gamma = 0.0;
    double entropy = 0.0;
    double omega = 1.0;  // weight actually applied; 0 in first_only mode
    int image_solves = 0;
    int kernel_solves = 0;
    double objective = 0.0;
};

struct DeblurResult {
    Image f;
    Kernel h;
    std::vector<TraceRecord> trace;
};

/// Image whose entropy drives omega in adaptive mode.
enum class EntropySource {
    latent,    // current estimate f, recomputed every outer iteration
    observed,  // the observation g at the current level
};

struct PipelineOptions {
    PriorMode mode = PriorMode::adaptive_hybrid;
    EntropySource entropy_source = EntropySource::latent;
    bool use_pyramid = true;
    /// Blend the borders of g towards a blurred copy before solving, which
    /// reduces ringing from the circular boundary.
    bool edge_taper = false;
    /// Extra non-blind pass at full resolution with the final kernel.
    bool final_nonblind = false;
    /// Called after each outer iteration, before the next one starts.
    std::function<void(const TraceRecord&)> on_iteration;
};

/// gamma/2 ||f*h - g||^2 + alpha_f (sum |D1 f|^p + omega sum |D2 f|^p) + alpha_h ||h||_1
/// with the anisotropic (per-direction) penalties used by the solver.
double blind_objective(const Image& f, const Kernel& h, const Image& g, double omega, const SolverConfig& cfg,
                       bool second_order = true);

/// Inside a band of `width` pixels along each border, mixes img with its
/// box-blurred (width x width, circular) copy using a raised-cosine weight that
/// is 1 in the interior and 0 on the border itself.
Image edge_taper(const Image& img, int width);

/// Coarse-to-fine blind deconvolution. Kernel size must be odd with
/// 3 <= kernel_size <= min(height, width) / 2.
DeblurResult blind_deblur(const Image& g, int kernel_size, const SolverConfig& cfg,
                          const PipelineOptions& options = {});

/// Repeated image updates with a fixed kernel and the gamma schedule, at full resolution.
Image nonblind_deblur(const Image& g, const Kernel& h, const SolverConfig& cfg,
                      PriorMode mode = PriorMode::adaptive_hybrid);

DeblurResult ablation_variant(const Image& g, int kernel_size, const SolverConfig& cfg, PriorMode mode);

}  // namespace deblur
