#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyapprox/basis.hpp"
#include "polyapprox/linalg.hpp"
#include "polyapprox/multi_index.hpp"
#include "polyapprox/rng.hpp"
#include "polyapprox/sampling.hpp"

namespace polyapprox {

/// Polynomial coefficients aligned with an index set's canonical order.
struct CoefVector {
    IndexSet indices;
    Vector values;

    /// Coefficient of nu, or 0 if nu is not in the index set.
    [[nodiscard]] double at(const MultiIndex& nu) const;
    /// sum_nu c_nu Psi_nu at each grid row.
    [[nodiscard]] Vector evaluate(BasisFamily family, const Eigen::Ref<const RowMatrix>& points) const;
};

struct LSResult {
    CoefVector coefficients;
    double condition_number = 1.0;  // beta_w / alpha_w
    double alpha_w = 0.0;           // sigma_min(A)
    double beta_w = 0.0;            // sigma_max(A)
    double residual_norm = 0.0;     // ||A c - b||_2
    bool numerically_singular = false;
};

/// Weighted LS fit. `values` are the raw samples f(y_i) + e_i; the right-hand
/// side sqrt(w_i / m) * values_i is formed here. Ill-conditioned systems are
/// solved anyway and flagged when alpha_w < 1e-13 beta_w.
[[nodiscard]] LSResult solve_wls(const DesignMatrix& a, std::span<const double> values);

/// (1/m) sum_i w_i f_i g_i.
[[nodiscard]] double discrete_inner(std::span<const double> f, std::span<const double> g, std::span<const double> w,
                                    std::size_t m);

/// Smallest prefix of the candidates, ordered by estimator descending (ties
/// in canonical order), capturing beta of the total estimator mass. An
/// all-zero estimator selects the canonically first candidate.
[[nodiscard]] IndexSet bulk(const IndexSet& candidates, std::span<const double> estimator, double beta);

enum class ScalingRule : std::uint8_t { LogLinear, Linear15, Linear2 };

[[nodiscard]] std::string_view to_string(ScalingRule rule) noexcept;
[[nodiscard]] ScalingRule parse_scaling(std::string_view name);
/// loglinear: max(n+1, ceil(n ln n)); linear15: ceil(1.5 n); linear2: 2n.
[[nodiscard]] std::size_t m_from_scaling(ScalingRule rule, std::size_t n);

struct AlsConfig {
    BasisFamily family = BasisFamily::Legendre;
    SamplingStrategy strategy = SamplingStrategy::NearOptimal;
    ScalingRule scaling = ScalingRule::LogLinear;
    double beta = 0.5;
    /// Stop before any step whose sample count would exceed this.
    std::size_t max_m = 1000;
    std::size_t max_steps = std::numeric_limits<std::size_t>::max();
    /// Samples are perturbed by i.i.d. uniform noise in [-noise_level, noise_level].
    double noise_level = 0.0;
    /// Keep each step's index set and coefficients in the trace.
    bool keep_coefficients = true;
};

struct AlsStep {
    IndexSet set;
    std::size_t n = 0;
    std::size_t m = 0;
    LSResult result;
    double error_l2 = 0.0;
    double error_linf = 0.0;
    /// kappa(P_S; w) of the sampling scheme: |S|_u for Monte Carlo, n for
    /// near-optimal sampling (exact on the discrete grid measure).
    double kappa = 0.0;
    double wall_time_ms = 0.0;
};

struct AlsTrace {
    std::vector<AlsStep> steps;
    std::optional<std::string> failure;
};

/// A target sampled on a grid (values cached per grid row).
struct GridTarget {
    const Grid* grid = nullptr;
    std::span<const double> values;
};

/// Adaptive weighted least squares with bulk chasing on reduced margins,
/// starting from S = {0}. Samples come from `sampling`; errors are measured
/// on `error_grid` if given, otherwise on the sampling grid.
[[nodiscard]] AlsTrace als_run(const GridTarget& sampling, const AlsConfig& config, Rng& rng,
                               std::optional<GridTarget> error_grid = std::nullopt);

}  // namespace polyapprox
