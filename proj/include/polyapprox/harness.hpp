#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyapprox/basis.hpp"
#include "polyapprox/metrics.hpp"
#include "polyapprox/sampling.hpp"
#include "polyapprox/test_functions.hpp"
#include "polyapprox/weighted_ls.hpp"

namespace polyapprox {

enum class Method : std::uint8_t { ALS, CS, CSChristoffel };

[[nodiscard]] std::string_view to_string(Method method) noexcept;
[[nodiscard]] Method parse_method(std::string_view name);
[[nodiscard]] std::string_view to_string(SamplingStrategy strategy) noexcept;
[[nodiscard]] SamplingStrategy parse_sampling(std::string_view name);

struct ExperimentConfig {
    std::string function_id = "f1";
    std::size_t dim = 1;
    BasisFamily family = BasisFamily::Legendre;
    SamplingStrategy sampling = SamplingStrategy::NearOptimal;  ///< ALS only
    Method method = Method::ALS;
    ScalingRule scaling = ScalingRule::LogLinear;               ///< ALS only
    std::size_t max_m = 1000;                                   ///< ALS: stop before m exceeds this
    std::size_t max_steps = 100000;                             ///< ALS
    std::vector<std::size_t> m_schedule;                        ///< CS sample counts
    std::size_t cs_budget = 10000;                              ///< CS: largest |Lambda|
    std::optional<std::size_t> cs_max_restarts;
    double beta = 0.5;
    double noise_level = 0.0;
    std::size_t trials = 50;
    std::size_t grid_size = 20000;
    ErrorNorm error_norm = ErrorNorm::L2;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> error_grid_seed;
    std::size_t threads = 1;
    bool timing = false;
    std::optional<std::filesystem::path> cache_dir;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
    /// Every field except threads and cache_dir, which do not affect results.
    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static ExperimentConfig from_json(const nlohmann::json& j);
};

struct RecordRow {
    std::size_t trial = 0;
    std::size_t step = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    double error_l2 = 0.0;
    double error_linf = 0.0;
    double cond = 1.0;
    double kappa = 0.0;
    double wall_time_ms = 0.0;

    friend bool operator==(const RecordRow&, const RecordRow&) = default;
    [[nodiscard]] double error(ErrorNorm norm) const { return norm == ErrorNorm::L2 ? error_l2 : error_linf; }
};

struct TrialFailure {
    std::size_t trial = 0;
    std::string message;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RecordRow> rows;  ///< ordered by (trial, step)
    std::vector<TrialFailure> failures;

    /// 0 on success, 3 when every trial failed.
    [[nodiscard]] int exit_code() const;
};

/// Target values on the grid; read from / written to cache_dir when given.
[[nodiscard]] std::vector<double> target_on_grid(const TargetFunction& target, const Grid& grid,
                                                 const std::optional<std::filesystem::path>& cache_dir);

/// Runs config.trials independent trials on config.threads workers. Output
/// does not depend on the worker count.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kCsvHeader = "trial,step,m,n,error_l2,error_linf,cond,kappa,wall_time_ms";

void write_csv(std::ostream& out, std::span<const RecordRow> rows);
[[nodiscard]] std::vector<RecordRow> read_csv(std::istream& in);
[[nodiscard]] nlohmann::json to_json(const ExperimentResult& result);
[[nodiscard]] std::vector<RecordRow> rows_from_json(const nlohmann::json& j);

enum class Column : std::uint8_t { ErrorL2, ErrorLinf, Cond, Kappa };

struct CurvePoint {
    std::size_t m = 0;
    std::size_t count = 0;  ///< trials that contributed
    GeometricStats stats;
};

/// Geometric statistics per target m: each trial contributes its last row
/// with m <= target (trials with no such row are skipped).
[[nodiscard]] std::vector<CurvePoint> summarize(std::span<const RecordRow> rows, std::span<const std::size_t> m_targets,
                                                Column column);

}  // namespace polyapprox
