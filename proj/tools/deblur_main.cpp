#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "deblur/config.hpp"
#include "deblur/error.hpp"
#include "deblur/io.hpp"
#include "deblur/metrics.hpp"
#include "deblur/pipeline.hpp"
#include "deblur/report.hpp"
#include "deblur/synthesis.hpp"

namespace fs = std::filesystem;
using namespace deblur;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SolverConfig build_config(const std::vector<std::string>& overrides) {
    SolverConfig cfg;
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--config expects key=value, got '" + kv + "'");
        try {
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

fs::path kernel_path_for(const fs::path& image_path) {
    fs::path p = image_path;
    p.replace_extension(".kernel.txt");
    return p;
}

std::string format_fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

struct BlurArgs {
    std::string input;
    std::string kernel = "motion9";
    double sigma = 0.01;
    std::uint64_t seed = 0;
    std::string output;
    std::string kernel_out;
};

int run_blur(const BlurArgs& a, bool seed_given) {
    if (a.input.empty() || a.output.empty()) throw UsageError("blur needs an input image and -o <path>");
    if (a.sigma < 0.0) throw UsageError("--sigma must be non-negative");
    if (a.sigma > 0.0 && !seed_given) throw UsageError("--seed is required when --sigma > 0");
    const Image f = io::read_image(a.input);
    const Kernel k = resolve_kernel(a.kernel);
    const Image g = synthesize_blur(f, k, a.sigma, a.seed);
    io::write_image(a.output, g);
    io::write_kernel(a.kernel_out.empty() ? kernel_path_for(a.output) : fs::path(a.kernel_out), k);
    return 0;
}

struct DeblurArgs {
    std::string input;
    int ksize = 0;
    std::vector<std::string> config;
    bool no_pyramid = false;
    bool edge_taper = false;
    bool final_nonblind = false;
    std::string entropy_source = "latent";
    std::string mode = "adaptive";
    std::string output;
    std::string kernel_out;
    std::string trace;
};

int run_deblur(const DeblurArgs& a) {
    if (a.input.empty() || a.output.empty()) throw UsageError("deblur needs an input image and -o <path>");
    if (a.ksize < 3 || a.ksize % 2 == 0) throw UsageError("--ksize must be an odd integer >= 3");
    PipelineOptions options;
    try {
        options.mode = parse_prior_mode(a.mode);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    options.use_pyramid = !a.no_pyramid;
    options.edge_taper = a.edge_taper;
    options.final_nonblind = a.final_nonblind;
    if (a.entropy_source == "latent") {
        options.entropy_source = EntropySource::latent;
    } else if (a.entropy_source == "observed") {
        options.entropy_source = EntropySource::observed;
    } else {
        throw UsageError("--entropy-source must be latent or observed");
    }
    const SolverConfig cfg = build_config(a.config);
    const Image g = io::read_image(a.input);

    std::vector<TraceRecord> trace;
    options.on_iteration = [&trace](const TraceRecord& r) { trace.push_back(r); };
    DeblurResult result;
    try {
        result = blind_deblur(g, a.ksize, cfg, options);
    } catch (const Error& e) {
        if (!a.trace.empty()) write_trace_csv(a.trace, trace);
        std::cerr << "deblur failed after " << trace.size() << " outer iterations: " << e.what() << '\n';
        return kExitFailure;
    }
    io::write_image(a.output, result.f);
    io::write_kernel(a.kernel_out.empty() ? kernel_path_for(a.output) : fs::path(a.kernel_out), result.h);
    if (!a.trace.empty()) write_trace_csv(a.trace, result.trace);
    return 0;
}

struct EvalArgs {
    std::string restored;
    std::string reference;
    std::string csv;
};

int run_eval(const EvalArgs& a) {
    if (a.restored.empty() || a.reference.empty()) throw UsageError("eval needs <restored> <reference>");
    const Image f = io::read_image(a.restored);
    const Image ref = io::read_image(a.reference);
    const PsnrResult p = psnr_checked(f, ref);
    const double s = ssim(f, ref);
    std::cout << "PSNR " << format_fixed4(p.decibels) << " dB" << (p.capped ? " (capped)" : "") << '\n';
    std::cout << "SSIM " << format_fixed4(s) << '\n';
    if (!a.csv.empty()) {
        const bool fresh = !fs::exists(a.csv) || fs::file_size(a.csv) == 0;
        std::ofstream out(a.csv, std::ios::app);
        if (!out) throw Error(ErrorCode::io, a.csv + ": cannot open for writing");
        if (fresh) out << "restored,reference,psnr,ssim,psnr_capped\n";
        out << a.restored << ',' << a.reference << ',' << format_fixed4(p.decibels) << ',' << format_fixed4(s) << ','
            << (p.capped ? 1 : 0) << '\n';
    }
    return 0;
}

struct AblateArgs {
    std::string corpus;
    std::string kernels = "gauss5,motion9";
    std::string output;
    std::uint64_t seed = 0;
    double sigma = 0.01;
    unsigned threads = 0;
    std::vector<std::string> config;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item += c;
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

int run_ablate(const AblateArgs& a, bool seed_given) {
    if (a.corpus.empty() || a.output.empty()) throw UsageError("ablate needs --corpus <dir> and -o <report.csv>");
    if (!seed_given) throw UsageError("ablate needs --seed <n>");
    AblationOptions options;
    options.kernels = split_list(a.kernels);
    if (options.kernels.empty()) throw UsageError("--kernels must name at least one kernel");
    options.noise_sigma = a.sigma;
    options.seed = a.seed;
    options.threads = a.threads;
    options.config = build_config(a.config);
    const auto corpus = load_corpus(a.corpus);
    const RunReport report = run_ablation(corpus, options);
    write_report_csv(a.output, report);
    for (const std::string& m : ablation_methods()) {
        const ReportRow mean = method_mean(report, m);
        std::cout << m << ": PSNR " << format_fixed4(mean.psnr_restored) << " SSIM " << format_fixed4(mean.ssim_restored)
                  << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind image deblurring with an entropy-weighted hybrid gradient prior"};
    app.require_subcommand(0, 1);
    bool print_config = false;
    std::vector<std::string> top_config;
    app.add_flag("--print-config", print_config, "Print the solver configuration and exit");
    app.add_option("--config", top_config, "Override a solver parameter (key=value)");

    BlurArgs blur;
    auto* blur_cmd = app.add_subcommand("blur", "Synthesize a blurred, noisy observation");
    blur_cmd->add_option("input", blur.input, "Sharp input image (PGM/PPM/PNG)");
    blur_cmd->add_option("--kernel", blur.kernel, "Builtin name (delta, box3, gauss5, motion9) or kernel file");
    blur_cmd->add_option("--sigma", blur.sigma, "Noise standard deviation on the [0,1] scale");
    auto* blur_seed = blur_cmd->add_option("--seed", blur.seed, "Noise seed");
    blur_cmd->add_option("-o,--output", blur.output, "Output image (.png or PGM)");
    blur_cmd->add_option("--kernel-out", blur.kernel_out, "Kernel text file (default: <output>.kernel.txt)");

    DeblurArgs deblur_args;
    auto* deblur_cmd = app.add_subcommand("deblur", "Blind deblurring of one image");
    deblur_cmd->add_option("input", deblur_args.input, "Blurred image (PGM/PPM/PNG)");
    deblur_cmd->add_option("--ksize", deblur_args.ksize, "Odd kernel size");
    deblur_cmd->add_option("--config", deblur_args.config, "Override a solver parameter (key=value)");
    deblur_cmd->add_flag("--no-pyramid", deblur_args.no_pyramid, "Run at full resolution only");
    deblur_cmd->add_option("--mode", deblur_args.mode, "Prior: first, hybrid or adaptive");
    deblur_cmd->add_option("--entropy-source", deblur_args.entropy_source, "Entropy for omega: latent or observed");
    deblur_cmd->add_flag("--edge-taper", deblur_args.edge_taper, "Taper image borders before solving");
    deblur_cmd->add_flag("--final-nonblind", deblur_args.final_nonblind,
                         "Finish with a non-blind pass at full resolution using the estimated kernel");
    deblur_cmd->add_option("-o,--output", deblur_args.output, "Restored image (.png or PGM)");
    deblur_cmd->add_option("--kernel-out", deblur_args.kernel_out, "Kernel text file (default: <output>.kernel.txt)");
    deblur_cmd->add_option("--trace", deblur_args.trace, "Per-iteration trace CSV");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "PSNR and SSIM of a restored image against a reference");
    eval_cmd->add_option("restored", eval.restored, "Restored image");
    eval_cmd->add_option("reference", eval.reference, "Reference image");
    eval_cmd->add_option("--csv", eval.csv, "Append a result row to this CSV");

    AblateArgs ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "Prior ablation over a corpus of sharp images");
    ablate_cmd->add_option("--corpus", ablate.corpus, "Directory of sharp images");
    ablate_cmd->add_option("--kernels", ablate.kernels, "Comma-separated kernel list");
    ablate_cmd->add_option("-o,--output", ablate.output, "Report CSV");
    auto* ablate_seed = ablate_cmd->add_option("--seed", ablate.seed, "Base noise seed");
    ablate_cmd->add_option("--sigma", ablate.sigma, "Noise standard deviation");
    ablate_cmd->add_option("--threads", ablate.threads, "Worker threads (0 = all cores)");
    ablate_cmd->add_option("--config", ablate.config, "Override a solver parameter (key=value)");

    for (auto* cmd : {blur_cmd, deblur_cmd, eval_cmd, ablate_cmd}) {
        cmd->add_flag("--print-config", print_config, "Print the solver configuration and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (print_config) {
            std::vector<std::string> overrides = top_config;
            if (deblur_cmd->parsed()) overrides.insert(overrides.end(), deblur_args.config.begin(), deblur_args.config.end());
            if (ablate_cmd->parsed()) overrides.insert(overrides.end(), ablate.config.begin(), ablate.config.end());
            std::cout << build_config(overrides).to_string();
            return 0;
        }
        if (blur_cmd->parsed()) return run_blur(blur, blur_seed->count() > 0);
        if (deblur_cmd->parsed()) return run_deblur(deblur_args);
        if (eval_cmd->parsed()) return run_eval(eval);
        if (ablate_cmd->parsed()) return run_ablate(ablate, ablate_seed->count() > 0);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
