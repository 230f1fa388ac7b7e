#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deblur/config.hpp"
#include "deblur/image.hpp"
#include "deblur/pipeline.hpp"

namespace deblur {

/// Method label of the unrestored baseline row.
inline constexpr const char* kBlurredMethod = "blurred";

struct ReportRow {
    std::string image_id;
    std::string kernel;
    std::string method;  // "blurred" or a PriorMode name
    double psnr_blurred = 0.0;
    double ssim_blurred = 0.0;
    double psnr_restored = 0.0;
    double ssim_restored = 0.0;
    std::optional<double> kernel_correlation;  // absent for the baseline row
    double wall_time_s = 0.0;
};

struct RunReport {
    std::vector<ReportRow> rows;
};

/// Arithmetic means over all rows with the given method; kernel correlation
/// over the rows that carry one. image_id is "mean", kernel is "all".
ReportRow method_mean(const RunReport& report, const std::string& method);

/// Same, restricted to rows with the given kernel.
ReportRow method_mean(const RunReport& report, const std::string& method, const std::string& kernel);

/// Methods in report order: blurred, first_only, fixed_hybrid, adaptive_hybrid.
std::vector<std::string> ablation_methods();

/// CSV with header
///   image_id,kernel,method,psnr_blurred,ssim_blurred,psnr_restored,ssim_restored,kernel_corr,wall_time_s
/// then one row per entry, then one "mean,all,<method>" row per method.
/// Metrics use %.17g, wall time %.3f; an absent correlation is an empty field.
void write_report_csv(std::ostream& out, const RunReport& report);
void write_report_csv(const std::filesystem::path& path, const RunReport& report);

/// The same text with the wall_time_s column removed, for byte comparisons.
std::string strip_timing_column(const std::string& csv);

struct AblationImage {
    std::string id;
    Image truth;
};

struct AblationOptions {
    std::vector<std::string> kernels = {"gauss5", "motion9"};
    double noise_sigma = 0.01;
    std::uint64_t seed = 0;
    SolverConfig config;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Every PGM/PPM/PNG file in `dir`, id = file stem, sorted by id.
/// Throws Error(invalid_argument) when none is found.
std::vector<AblationImage> load_corpus(const std::filesystem::path& dir);

/// For each image x kernel: blur with noise seed derive_seed(seed, fnv1a(id),
/// fnv1a(kernel)), then the baseline row and one row per prior mode. The blind
/// kernel size is max(3, true size). Rows are ordered by image id, kernel order
/// of `options.kernels`, then method, independent of thread scheduling.
RunReport run_ablation(const std::vector<AblationImage>& corpus, const AblationOptions& options);

/// 64-bit FNV-1a of the bytes of `text`.
std::uint64_t fnv1a(const std::string& text);

/// One trace record per line; header
///   level,iteration,scale,gamma,entropy,omega,image_solves,kernel_solves,objective
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

}  // namespace deblur
