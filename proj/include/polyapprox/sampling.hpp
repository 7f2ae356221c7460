#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "polyapprox/basis.hpp"
#include "polyapprox/linalg.hpp"
#include "polyapprox/multi_index.hpp"
#include "polyapprox/rng.hpp"

namespace polyapprox {

/// K points drawn i.i.d. from a family's measure on [-1, 1]^d. Stands in
/// for the continuous measure: sampling and errors both live on the grid.
struct Grid {
    RowMatrix points;  // K x d
    BasisFamily measure = BasisFamily::Legendre;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(points.cols()); }
};

[[nodiscard]] Grid draw_grid(std::size_t d, std::size_t k, BasisFamily measure, std::uint64_t seed);

/// Binary layout (all little-endian): 8-byte magic "HPGRID1\0", then u64 d,
/// u64 K, u64 measure tag, u64 seed, then K*d doubles in row-major order.
void save_grid(const Grid& grid, const std::filesystem::path& path);
[[nodiscard]] Grid load_grid(const std::filesystem::path& path);

enum class SamplingStrategy : std::uint8_t { MonteCarlo, NearOptimal };

/// Draws from the grid, with replacement. Indices are 0-based grid rows.
struct SampleSet {
    std::vector<std::size_t> grid_indices;
    std::vector<double> weights;
    SamplingStrategy strategy = SamplingStrategy::MonteCarlo;

    [[nodiscard]] std::size_t size() const noexcept { return grid_indices.size(); }
};

[[nodiscard]] RowMatrix gather_points(const Grid& grid, const SampleSet& samples);

[[nodiscard]] SampleSet draw_mc(const Grid& grid, std::size_t m, Rng& rng);

/// Discrete near-optimal measure on the grid: probabilities pi_i and
/// weights w_i = 1 / (K pi_i).
struct NearOptimalDistribution {
    Vector probabilities;
    Vector weights;
    std::vector<double> cumulative;  // inclusive prefix sums of probabilities
};

/// Builds weights and the sampling table from probabilities. Entries below
/// 1e-300 are floored for the weight only; they keep zero draw probability.
[[nodiscard]] NearOptimalDistribution make_distribution(Vector probabilities);

/// QR of B = K^{-1/2} (Phi_j(z_i)); pi_i = (1/n) sum_j q_ij^2.
/// Throws NumericalError when sigma_min(B) < 1e-10 sigma_max(B).
[[nodiscard]] NearOptimalDistribution near_optimal_distribution(const Grid& grid, BasisFamily family, const IndexSet& s);

[[nodiscard]] SampleSet draw_near_optimal(const NearOptimalDistribution& dist, std::size_t m, Rng& rng);

/// Basis values on a grid for a growing column set, with an incrementally
/// maintained orthonormal basis of their span (block Gram-Schmidt with
/// reorthogonalisation). Used by adaptive schemes where S only grows.
class GridBasis {
public:
    GridBasis(const Grid& grid, BasisFamily family, bool track_orthonormal);

    /// Appends columns; throws NumericalError if a new column is numerically
    /// dependent on the existing span.
    void extend(std::span<const MultiIndex> new_columns);

    [[nodiscard]] std::size_t cols() const noexcept { return columns_.size(); }
    [[nodiscard]] std::span<const MultiIndex> columns() const noexcept { return columns_; }
    /// K x cols() values Phi_j(z_i), columns in insertion order.
    [[nodiscard]] auto values() const { return values_.leftCols(static_cast<Eigen::Index>(cols())); }
    [[nodiscard]] auto orthonormal() const { return q_.leftCols(static_cast<Eigen::Index>(cols())); }

    /// Near-optimal distribution of the current span.
    [[nodiscard]] NearOptimalDistribution distribution() const;

private:
    void reserve(std::size_t cols);
    /// Grid values of psi_deg in dimension dim, extended by the recurrence on demand.
    const Vector& univariate(std::uint32_t dim, std::uint32_t deg);

    const Grid* grid_;
    BasisFamily family_;
    bool track_orthonormal_;
    std::vector<MultiIndex> columns_;
    Matrix values_;
    Matrix q_;
    std::vector<std::vector<Vector>> univariate_;  // [dim - 1][deg]
};

}  // namespace polyapprox
