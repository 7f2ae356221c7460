#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace polyapprox {

enum class ErrorNorm : std::uint8_t { L2, Linf };

[[nodiscard]] std::string_view to_string(ErrorNorm norm) noexcept;
[[nodiscard]] ErrorNorm parse_norm(std::string_view name);

/// ||f - approx|| / ||f|| over grid values; throws on a zero target.
[[nodiscard]] double relative_error(std::span<const double> approx, std::span<const double> target, ErrorNorm norm);

/// Geometric mean 10^mu and the one-sigma band 10^(mu -/+ sigma), with
/// sigma the (T-1)-corrected standard deviation of log10 values.
struct GeometricStats {
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool floored = false;  ///< some value was <= 0 and floored at 1e-300
};

[[nodiscard]] GeometricStats geometric_stats(std::span<const double> values);

/// Least-squares slope of log10(y) against log10(x).
[[nodiscard]] double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace polyapprox
