#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"
#include "polyapprox/basis.hpp"
#include "polyapprox/linalg.hpp"
#include "polyapprox/multi_index.hpp"
#include "polyapprox/rng.hpp"
#include "polyapprox/sampling.hpp"
#include "polyapprox/weighted_ls.hpp"

namespace polyapprox {

/// Which lambda the configuration was built with.
enum class LambdaPolicy : std::uint8_t {
    Table,    ///< (5 sqrt(m))^{-1}, used for all experiments
    Theorem,  ///< (4 sqrt(m / L(m, eps)))^{-1}, L = ln m (ln^3 m + ln(1/eps))
};

/// Parameters of the restarted primal-dual solver for
///   min_z  lambda ||z||_{1,u} + ||A z - f||_2.
struct SrLassoConfig {
    double lambda = 0.0;
    double tau = 0.0;
    double sigma = 0.0;
    std::size_t inner_iterations = 0;  ///< T
    std::size_t max_restarts = 100;    ///< R
    double tolerance = 1e-15;          ///< zeta'
    double scale_factor = 0.0;         ///< r
    double scaling_constant = 0.0;     ///< s
    double operator_norm = 0.0;        ///< ||A||_2 estimate
    LambdaPolicy lambda_policy = LambdaPolicy::Table;

    /// Default parameter table: tau = sigma = 1/||A||, r = 1/e,
    /// T = ceil(4||A||/r), s = T/(2||A||), R = 100, zeta' = 1e-15.
    static SrLassoConfig from_table(double operator_norm, std::size_t m, LambdaPolicy policy = LambdaPolicy::Table,
                                    double epsilon = 0.1);
    static SrLassoConfig from_table(const Matrix& a, LambdaPolicy policy = LambdaPolicy::Table, double epsilon = 0.1);
};

[[nodiscard]] nlohmann::json to_json(const SrLassoConfig& config);

[[nodiscard]] double table_lambda(std::size_t m);
[[nodiscard]] double theorem_lambda(std::size_t m, double epsilon);

/// ||A||_2 by power iteration on A^T A (fixed seed, at most `iterations`
/// steps, stopping once the relative change drops below rel_tol).
[[nodiscard]] double estimate_operator_norm(const Matrix& a, std::size_t iterations = 100, double rel_tol = 1e-6,
                                            std::uint64_t seed = 0x5eed);

/// lambda ||z||_{1,u} + ||A z - f||_2.
[[nodiscard]] double objective(const Vector& z, const Matrix& a, const Vector& f, const Vector& u, double lambda);

/// Called after every inner iteration with (iteration, c, xi).
using PrimalDualObserver = std::function<void(std::size_t, const Vector&, const Vector&)>;

/// T iterations of the unrestarted primal-dual scheme from (c0, xi0).
[[nodiscard]] Vector primal_dual(const Matrix& a, const Vector& f, const Vector& u, double lambda, double tau,
                                 double sigma, std::size_t iterations, const Vector& c0, const Vector& xi0,
                                 const PrimalDualObserver& observer = {});

struct ExtractedTerms {
    IndexSet set;
    CoefVector coefficients;
};

struct CsResult {
    CoefVector coefficients;
    std::size_t restarts_used = 0;
    std::vector<double> objective_trace;  ///< objective after each restart
    bool converged = false;               ///< stopped on the step-size criterion, not on R
    std::optional<ExtractedTerms> extracted;
    /// cond of the measurement matrix restricted to the recovered support
    /// (set by cs_approximate; 1 for an empty support).
    double support_condition = 1.0;
    SrLassoConfig config;
};

/// Restarted primal-dual iteration. Stops after R restarts or once
/// ||c_l - c_{l-1}||_2 <= 10 zeta'. Throws NumericalError on NaN or when
/// the objective exceeds 1000 G(0) = 1000 ||f||_2.
/// The returned coefficients carry no index set (see cs_approximate).
[[nodiscard]] CsResult restarted(const Matrix& a, const Vector& f, const Vector& u, const SrLassoConfig& config);

/// The n largest-magnitude coefficients (ties in canonical order).
[[nodiscard]] ExtractedTerms extract_top_n(const CoefVector& c, std::size_t n);

enum class CsSampling : std::uint8_t {
    MonteCarlo,
    /// Draws from the grid with probability proportional to the Christoffel
    /// function of P_Lambda, weights 1/(K pi_i).
    ChristoffelLambda,
};

struct CsConfig {
    BasisFamily family = BasisFamily::Legendre;
    CsSampling sampling = CsSampling::MonteCarlo;
    std::size_t budget = 10000;  ///< largest admissible |Lambda|
    LambdaPolicy lambda_policy = LambdaPolicy::Table;
    double theorem_epsilon = 0.1;
    double noise_level = 0.0;
    std::optional<std::size_t> extract_n;
    /// Overrides for the table values (tests use these to shorten runs).
    std::optional<std::size_t> max_restarts;
    std::optional<double> tolerance;
};

/// The truncation set used by cs_approximate: the anchored hyperbolic cross
/// of the largest order whose restriction to dimensions 1..d fits the budget.
[[nodiscard]] IndexSet cs_truncation_set(std::size_t d, std::size_t budget);

/// Compressed-sensing approximation from m grid samples of the target.
[[nodiscard]] CsResult cs_approximate(const GridTarget& target, std::size_t m, const CsConfig& config, Rng& rng);

}  // namespace polyapprox
