#include "deblur/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "deblur/error.hpp"
#include "deblur/io.hpp"
#include "deblur/metrics.hpp"
#include "deblur/synthesis.hpp"

namespace deblur {

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ReportRow mean_of(const RunReport& report, const std::string& method, const std::string* kernel) {
    ReportRow m;
    m.image_id = "mean";
    m.kernel = kernel != nullptr ? *kernel : "all";
    m.method = method;
    int n = 0;
    int nc = 0;
    double corr = 0.0;
    for (const ReportRow& r : report.rows) {
        if (r.method != method || (kernel != nullptr && r.kernel != *kernel)) continue;
        ++n;
        m.psnr_blurred += r.psnr_blurred;
        m.ssim_blurred += r.ssim_blurred;
        m.psnr_restored += r.psnr_restored;
        m.ssim_restored += r.ssim_restored;
        m.wall_time_s += r.wall_time_s;
        if (r.kernel_correlation) {
            corr += *r.kernel_correlation;
            ++nc;
        }
    }
    if (n > 0) {
        m.psnr_blurred /= n;
        m.ssim_blurred /= n;
        m.psnr_restored /= n;
        m.ssim_restored /= n;
        m.wall_time_s /= n;
    }
    if (nc > 0) m.kernel_correlation = corr / nc;
    return m;
}

void write_row(std::ostream& out, const ReportRow& r) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_time_s);
    out << r.image_id << ',' << r.kernel << ',' << r.method << ',' << format_g17(r.psnr_blurred) << ','
        << format_g17(r.ssim_blurred) << ',' << format_g17(r.psnr_restored) << ',' << format_g17(r.ssim_restored)
        << ',' << (r.kernel_correlation ? format_g17(*r.kernel_correlation) : std::string()) << ',' << wall << '\n';
}

bool is_image_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm" || ext == ".ppm" || ext == ".pnm" || ext == ".png";
}

}  // namespace

ReportRow method_mean(const RunReport& report, const std::string& method) {
    return mean_of(report, method, nullptr);
}

ReportRow method_mean(const RunReport& report, const std::string& method, const std::string& kernel) {
    return mean_of(report, method, &kernel);
}

std::vector<std::string> ablation_methods() {
    return {kBlurredMethod, std::string(name_of(PriorMode::first_only)), std::string(name_of(PriorMode::fixed_hybrid)),
            std::string(name_of(PriorMode::adaptive_hybrid))};
}

void write_report_csv(std::ostream& out, const RunReport& report) {
    out << "image_id,kernel,method,psnr_blurred,ssim_blurred,psnr_restored,ssim_restored,kernel_corr,wall_time_s\n";
    for (const ReportRow& r : report.rows) write_row(out, r);
    for (const std::string& m : ablation_methods()) write_row(out, method_mean(report, m));
}

void write_report_csv(const std::filesystem::path& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, path.string() + ": cannot open for writing");
    write_report_csv(out, report);
    if (!out) throw Error(ErrorCode::io, path.string() + ": write failed");
}

std::string strip_timing_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        const auto cut = line.rfind(',');
        out += line.substr(0, cut);
        out += '\n';
    }
    return out;
}

std::vector<AblationImage> load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::invalid_argument, dir.string() + ": corpus directory not found");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    if (files.empty()) throw Error(ErrorCode::invalid_argument, dir.string() + ": corpus is empty");
    std::vector<AblationImage> corpus;
    std::set<std::string> seen;
    for (const auto& f : files) {
        const std::string id = f.stem().string();
        if (!seen.insert(id).second) throw Error(ErrorCode::invalid_argument, "duplicate corpus id '" + id + "'");
        corpus.push_back({id, io::read_image(f)});
    }
    std::sort(corpus.begin(), corpus.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return corpus;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RunReport run_ablation(const std::vector<AblationImage>& corpus, const AblationOptions& options) {
    if (corpus.empty()) throw Error(ErrorCode::invalid_argument, "corpus is empty");
    if (options.kernels.empty()) throw Error(ErrorCode::invalid_argument, "kernel set is empty");
    options.config.validate();

    std::vector<Kernel> kernels;
    for (const auto& name : options.kernels) kernels.push_back(resolve_kernel(name));

    struct Pair {
        Image g;
        double psnr_blurred;
        double ssim_blurred;
    };
    const std::size_t n_pairs = corpus.size() * kernels.size();
    std::vector<Pair> pairs(n_pairs);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t j = 0; j < kernels.size(); ++j) {
            const std::uint64_t seed = derive_seed(options.seed, fnv1a(corpus[i].id), fnv1a(options.kernels[j]));
            Pair& p = pairs[i * kernels.size() + j];
            p.g = synthesize_blur(corpus[i].truth, kernels[j], options.noise_sigma, seed);
            p.psnr_blurred = psnr(p.g, corpus[i].truth);
            p.ssim_blurred = ssim(p.g, corpus[i].truth);
        }
    }

    constexpr PriorMode kModes[] = {PriorMode::first_only, PriorMode::fixed_hybrid, PriorMode::adaptive_hybrid};
    constexpr std::size_t kRowsPerPair = 4;
    RunReport report;
    report.rows.resize(n_pairs * kRowsPerPair);
    for (std::size_t pi = 0; pi < n_pairs; ++pi) {
        const std::size_t i = pi / kernels.size();
        const std::size_t j = pi % kernels.size();
        ReportRow& base = report.rows[pi * kRowsPerPair];
        base.image_id = corpus[i].id;
        base.kernel = options.kernels[j];
        base.method = kBlurredMethod;
        base.psnr_blurred = base.psnr_restored = pairs[pi].psnr_blurred;
        base.ssim_blurred = base.ssim_restored = pairs[pi].ssim_blurred;
    }

    const std::size_t n_tasks = n_pairs * std::size(kModes);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= n_tasks) return;
            const std::size_t pi = t / std::size(kModes);
            const std::size_t mi = t % std::size(kModes);
            const std::size_t i = pi / kernels.size();
            const std::size_t j = pi % kernels.size();
            try {
                const auto start = std::chrono::steady_clock::now();
                const int ksize = std::max(3, kernels[j].size());
                const DeblurResult res = ablation_variant(pairs[pi].g, ksize, options.config, kModes[mi]);
                const auto stop = std::chrono::steady_clock::now();
                ReportRow& row = report.rows[pi * kRowsPerPair + 1 + mi];
                row.image_id = corpus[i].id;
                row.kernel = options.kernels[j];
                row.method = std::string(name_of(kModes[mi]));
                row.psnr_blurred = pairs[pi].psnr_blurred;
                row.ssim_blurred = pairs[pi].ssim_blurred;
                row.psnr_restored = psnr(res.f, corpus[i].truth);
                row.ssim_restored = ssim(res.f, corpus[i].truth);
                row.kernel_correlation = kernel_correlation(res.h, kernels[j]);
                row.wall_time_s = std::chrono::duration<double>(stop - start).count();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_tasks);
                return;
            }
        }
    };
    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_tasks));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return report;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
    out << "level,iteration,scale,gamma,entropy,omega,image_solves,kernel_solves,objective\n";
    for (const TraceRecord& r : trace) {
        out << r.level << ',' << r.iteration << ',' << format_g17(r.scale) << ',' << format_g17(r.gamma) << ','
            << format_g17(r.entropy) << ',' << format_g17(r.omega) << ',' << r.image_solves << ',' << r.kernel_solves
            << ',' << format_g17(r.objective) << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io, path.string() + ": cannot open for writing");
    write_trace_csv(out, trace);
    if (!out) throw Error(ErrorCode::io, path.string() + ": write failed");
}

}  // namespace deblur
