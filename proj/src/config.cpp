#include "deblur/config.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "deblur/error.hpp"

namespace deblur {

namespace {

double parse_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw Error(ErrorCode::invalid_argument, "config: bad number for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

int parse_int(std::string_view key, std::string_view value) {
    int out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::invalid_argument, "config: bad integer for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

void require(bool ok, const char* message) {
    if (!ok) throw Error(ErrorCode::invalid_argument, message);
}

}  // namespace

void SolverConfig::validate() const {
    require(gamma > 0.0, "config: gamma must be positive");
    require(alpha_f >= 0.0, "config: alpha_f must be non-negative");
    require(alpha_h >= 0.0, "config: alpha_h must be non-negative");
    require(beta_f > 0.0, "config: beta_f must be positive");
    require(beta_h > 0.0, "config: beta_h must be positive");
    require(p > 0.0 && p < 1.0, "config: p must lie in (0,1)");
    require(tol > 0.0, "config: tol must be positive");
    require(max_inner >= 0, "config: max_inner must be non-negative");
    require(gamma_growth > 0.0, "config: gamma_growth must be positive");
    require(pyramid_scale > 0.0 && pyramid_scale < 1.0, "config: pyramid_scale must lie in (0,1)");
    require(min_kernel >= 1, "config: min_kernel must be positive");
    require(outer_iters >= 1, "config: outer_iters must be positive");
}

void SolverConfig::set(std::string_view key, std::string_view value) {
    if (key == "gamma") gamma = parse_double(key, value);
    else if (key == "alpha_f") alpha_f = parse_double(key, value);
    else if (key == "alpha_h") alpha_h = parse_double(key, value);
    else if (key == "beta_f") beta_f = parse_double(key, value);
    else if (key == "beta_h") beta_h = parse_double(key, value);
    else if (key == "p") p = parse_double(key, value);
    else if (key == "tol") tol = parse_double(key, value);
    else if (key == "max_inner" || key == "N") max_inner = parse_int(key, value);
    else if (key == "gamma_growth") gamma_growth = parse_double(key, value);
    else if (key == "pyramid_scale") pyramid_scale = parse_double(key, value);
    else if (key == "min_kernel") min_kernel = parse_int(key, value);
    else if (key == "outer_iters") outer_iters = parse_int(key, value);
    else throw Error(ErrorCode::invalid_argument, "config: unknown key '" + std::string(key) + "'");
}

std::string SolverConfig::to_string() const {
    // Shortest text that parses back to the same double.
    auto num = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::string out;
    out += "gamma=" + num(gamma) + '\n';
    out += "alpha_f=" + num(alpha_f) + '\n';
    out += "alpha_h=" + num(alpha_h) + '\n';
    out += "beta_f=" + num(beta_f) + '\n';
    out += "beta_h=" + num(beta_h) + '\n';
    out += "p=" + num(p) + '\n';
    out += "N=" + std::to_string(max_inner) + '\n';
    out += "tol=" + num(tol) + '\n';
    out += "gamma_growth=" + num(gamma_growth) + '\n';
    out += "pyramid_scale=" + num(pyramid_scale) + '\n';
    out += "min_kernel=" + std::to_string(min_kernel) + '\n';
    out += "outer_iters=" + std::to_string(outer_iters) + '\n';
    return out;
}

}  // namespace deblur
