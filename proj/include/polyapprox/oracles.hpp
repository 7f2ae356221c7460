#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "polyapprox/basis.hpp"
#include "polyapprox/multi_index.hpp"

namespace polyapprox {

/// Nonincreasing rearrangement c* of |c|, optionally remembering where each
/// entry came from.
struct SortedCoefSeq {
    std::vector<double> values;
    std::vector<MultiIndex> origin;  ///< empty, or parallel to values

    [[nodiscard]] static SortedCoefSeq from_values(std::span<const double> c);
    [[nodiscard]] static SortedCoefSeq from_values(std::span<const double> c, std::span<const MultiIndex> origin);
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// (sum_{j>n} (c*_j)^q)^{1/q}.
[[nodiscard]] double sigma_n(const SortedCoefSeq& c, std::size_t n, double q);
[[nodiscard]] double lp_norm(const SortedCoefSeq& c, double p);
/// sup_i i^{1/p} c*_i.
[[nodiscard]] double weak_lp_norm(const SortedCoefSeq& c, double p);

struct BoundPair {
    double lhs = 0.0;
    double rhs = 0.0;
    [[nodiscard]] bool holds(double rel_slack = 1e-12) const { return lhs <= rhs * (1.0 + rel_slack); }
};

/// sigma_n(c)_q against ||c||_p (n+1)^{1/q-1/p}; requires 0 < p <= q.
[[nodiscard]] BoundPair stechkin_bound(const SortedCoefSeq& c, std::size_t n, double p, double q);
/// sigma_n(c)_q against ||c||_{p,inf} (q/p-1)^{-1/q} n^{1/q-1/p}; requires 0 < p < q, n >= 1.
[[nodiscard]] BoundPair weak_stechkin_bound(const SortedCoefSeq& c, std::size_t n, double p, double q);

/// (sum_nu u_nu^{2-q} |c_nu|^q)^{1/q}.
[[nodiscard]] double weighted_lp_norm(std::span<const double> c, std::span<const double> u, double q);
/// Upper bound on sigma_k(c)_{q,u}: the error of a greedy feasible support
/// (entries ranked by |c|^q u^{-q}, admitted while |S|_u <= k).
[[nodiscard]] double weighted_sigma_upper(std::span<const double> c, std::span<const double> u, double k, double q);
/// Greedy sigma_k(c)_{q,u} upper bound against ||c||_{p,u} (k - ||u||_inf^2)^{1/q-1/p}; requires k > ||u||_inf^2.
[[nodiscard]] BoundPair weighted_stechkin_bound(std::span<const double> c, std::span<const double> u, double k,
                                                double p, double q);

/// ||x - z_S||_2 against 3||x - z||_2 + 3 sigma_n(x)_2, S the n largest entries of z.
[[nodiscard]] BoundPair extraction_bound(std::span<const double> x, std::span<const double> z, std::size_t n);

struct UnivariateExpansion {
    std::vector<double> coefficients;  ///< d_0 .. d_max_degree
    double tail_estimate = 0.0;        ///< l2 norm of d_{max+1} .. d_{max+16}
    bool converged = true;             ///< doubling the rule moved no d_nu by more than 1e-12
};

/// d_nu = int g psi_nu drho by the Gauss rule of the family with max_degree+17 nodes.
[[nodiscard]] UnivariateExpansion univariate_coeffs(const std::function<double(double)>& g, BasisFamily family,
                                                    std::size_t max_degree);

struct BestNTerm {
    IndexSet set;
    std::vector<MultiIndex> selection_order;
    double error = 0.0;
};

/// Best n-term selection for a product target prod_i g_i(y_i), given the
/// univariate coefficient lists of every g_i. Throws when the truncated
/// lattice holds fewer than n nonzero-candidate entries.
[[nodiscard]] BestNTerm best_n_term_product(const std::vector<std::vector<double>>& per_dim, std::size_t n);

/// Best n-term selection for an additive target sum_i g_i(y_i): the
/// coefficient of 0 is sum_i d^(i)_0, of k e_j (k >= 1) is d^(j)_k.
[[nodiscard]] BestNTerm best_n_term_additive(const std::vector<std::vector<double>>& per_dim, std::size_t n);

/// max kappa(P_S) over lower S in dimension d with |S| <= n, by exhaustive
/// enumeration. Throws std::length_error when more than `budget` lower sets
/// would be visited.
[[nodiscard]] double kappa_max_lower(BasisFamily family, std::size_t d, std::size_t n, std::size_t budget = 2'000'000);

}  // namespace polyapprox
