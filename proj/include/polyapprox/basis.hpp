#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyapprox/linalg.hpp"
#include "polyapprox/multi_index.hpp"

namespace polyapprox {

/// Orthonormal polynomial family together with its probability measure on
/// [-1, 1].
enum class BasisFamily : std::uint8_t {
    Legendre,    ///< uniform measure dy/2
    Chebyshev1,  ///< arcsine measure dy / (pi sqrt(1 - y^2))
    Chebyshev2,  ///< semicircle measure (2/pi) sqrt(1 - y^2) dy
};

[[nodiscard]] std::string_view to_string(BasisFamily family) noexcept;
/// Accepts "legendre", "cheb1", "cheb2" (and the long spellings).
[[nodiscard]] BasisFamily parse_family(std::string_view name);

/// Off-diagonal Jacobi coefficient b_k (k >= 1) of the orthonormal
/// recurrence y psi_k = b_{k+1} psi_{k+1} + b_k psi_{k-1}.
[[nodiscard]] double recurrence_coefficient(BasisFamily family, std::uint32_t k);

/// psi_degree(y) for |y| <= 1 (values within 1e-12 of the interval are clamped).
[[nodiscard]] double eval_univariate(BasisFamily family, std::uint32_t degree, double y);

/// Writes psi_0(y), ..., psi_{out.size()-1}(y) into out.
void eval_univariate_all(BasisFamily family, double y, std::span<double> out);

/// Psi_nu(y) = prod over supp(nu) of psi_{nu_j}(y_j).
[[nodiscard]] double eval_tensor(BasisFamily family, const MultiIndex& nu, std::span<const double> y);

/// u_nu = sup |Psi_nu| on [-1, 1]^d, attained at y = 1.
[[nodiscard]] double intrinsic_weight(BasisFamily family, const MultiIndex& nu);

/// |S|_u = sum of u_nu^2 over S.
[[nodiscard]] double weighted_cardinality(const IndexSet& s, BasisFamily family);

/// Christoffel function sum_{nu in S} Psi_nu(y)^2.
[[nodiscard]] double christoffel(BasisFamily family, const IndexSet& s, std::span<const double> y);

/// kappa(P_S) = sup_y christoffel(S, y). All three families peak at y = 1,
/// so this is evaluated in closed form as |S|_u.
[[nodiscard]] double kappa(BasisFamily family, const IndexSet& s);

/// Gauss quadrature for the family's probability measure (weights sum to 1).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
[[nodiscard]] GaussRule gauss_quadrature(BasisFamily family, std::size_t points);

/// Values Psi_{columns[j]}(points.row(i)) for every point and column.
/// Univariate recurrences are evaluated once per point and dimension.
[[nodiscard]] Matrix evaluate_basis(BasisFamily family, std::span<const MultiIndex> columns,
                                    const Eigen::Ref<const RowMatrix>& points);

/// The weighted least-squares matrix A_ij = sqrt(w_i / m) Psi_{nu_j}(y_i).
struct DesignMatrix {
    Matrix values;
    Vector row_weights;
    IndexSet column_order;

    [[nodiscard]] Eigen::Index rows() const noexcept { return values.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return values.cols(); }
};

[[nodiscard]] DesignMatrix build_design_matrix(BasisFamily family, const IndexSet& s,
                                               const Eigen::Ref<const RowMatrix>& points,
                                               std::span<const double> weights);

}  // namespace polyapprox
