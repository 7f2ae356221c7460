#include "polyapprox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "polyapprox/errors.hpp"

namespace polyapprox {

std::string_view to_string(ErrorNorm norm) noexcept { return norm == ErrorNorm::L2 ? "l2" : "linf"; }

ErrorNorm parse_norm(std::string_view name) {
    if (name == "l2" || name == "L2") return ErrorNorm::L2;
    if (name == "linf" || name == "Linf") return ErrorNorm::Linf;
    throw ConfigError("unknown error norm '" + std::string(name) + "'");
}

double relative_error(std::span<const double> approx, std::span<const double> target, ErrorNorm norm) {
    if (approx.size() != target.size()) throw std::invalid_argument("approximation and target sizes differ");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double diff = std::abs(target[i] - approx[i]);
        if (norm == ErrorNorm::L2) {
            num += diff * diff;
            den += target[i] * target[i];
        } else {
            num = std::max(num, diff);
            den = std::max(den, std::abs(target[i]));
        }
    }
    if (den == 0.0) throw std::domain_error("relative error of a zero target");
    return norm == ErrorNorm::L2 ? std::sqrt(num / den) : num / den;
}

GeometricStats geometric_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("no values");
    GeometricStats st;
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values) {
        if (!(v > 0.0)) {
            st.floored = true;
            v = 1e-300;
        }
        logs.push_back(std::log10(v));
    }
    double mu = 0.0;
    for (double l : logs) mu += l;
    mu /= static_cast<double>(logs.size());
    double sigma = 0.0;
    if (logs.size() > 1) {
        for (double l : logs) sigma += (l - mu) * (l - mu);
        sigma = std::sqrt(sigma / static_cast<double>(logs.size() - 1));
    }
    st.mean = std::pow(10.0, mu);
    st.lower = std::pow(10.0, mu - sigma);
    st.upper = std::pow(10.0, mu + sigma);
    return st;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs at least two paired points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log10(x[i]);
        const double ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace polyapprox
