#include "polyapprox/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polyapprox/errors.hpp"

namespace polyapprox {

std::string_view to_string(BasisFamily family) noexcept {
    switch (family) {
        case BasisFamily::Legendre: return "legendre";
        case BasisFamily::Chebyshev1: return "cheb1";
        case BasisFamily::Chebyshev2: return "cheb2";
    }
    return "unknown";
}

BasisFamily parse_family(std::string_view name) {
    if (name == "legendre" || name == "uniform") return BasisFamily::Legendre;
    if (name == "cheb1" || name == "chebyshev1" || name == "chebyshev") return BasisFamily::Chebyshev1;
    if (name == "cheb2" || name == "chebyshev2") return BasisFamily::Chebyshev2;
    throw ConfigError("unknown basis family '" + std::string(name) + "'");
}

double recurrence_coefficient(BasisFamily family, std::uint32_t k) {
    if (k == 0) throw std::invalid_argument("recurrence coefficient index starts at 1");
    switch (family) {
        case BasisFamily::Legendre: {
            const double kk = k;
            return kk / std::sqrt(4.0 * kk * kk - 1.0);
        }
        case BasisFamily::Chebyshev1: return k == 1 ? std::numbers::sqrt2 / 2.0 : 0.5;
        case BasisFamily::Chebyshev2: return 0.5;
    }
    return 0.0;
}

namespace {

constexpr std::uint32_t kTableDegree = 4096;

// Legendre coefficients b_1..b_kTableDegree; index 0 unused.
const std::vector<double>& legendre_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kTableDegree + 1, 0.0);
        for (std::uint32_t k = 1; k <= kTableDegree; ++k) t[k] = recurrence_coefficient(BasisFamily::Legendre, k);
        return t;
    }();
    return table;
}

inline double coefficient(BasisFamily family, std::uint32_t k) {
    if (family == BasisFamily::Legendre && k <= kTableDegree) return legendre_table()[k];
    return recurrence_coefficient(family, k);
}

double clamp_point(double y) {
    if (!(std::abs(y) <= 1.0 + 1e-12)) throw std::domain_error("evaluation point outside [-1, 1]");
    return std::clamp(y, -1.0, 1.0);
}

}  // namespace

void eval_univariate_all(BasisFamily family, double y, std::span<double> out) {
    if (out.empty()) return;
    y = clamp_point(y);
    out[0] = 1.0;
    if (out.size() == 1) return;
    double b_prev = 0.0;
    double b_next = coefficient(family, 1);
    out[1] = y / b_next;
    for (std::size_t k = 1; k + 1 < out.size(); ++k) {
        b_prev = b_next;
        b_next = coefficient(family, static_cast<std::uint32_t>(k + 1));
        out[k + 1] = (y * out[k] - b_prev * out[k - 1]) / b_next;
    }
}

double eval_univariate(BasisFamily family, std::uint32_t degree, double y) {
    y = clamp_point(y);
    if (degree == 0) return 1.0;
    double prev = 1.0;
    double b_next = coefficient(family, 1);
    double cur = y / b_next;
    for (std::uint32_t k = 1; k < degree; ++k) {
        const double b_prev = b_next;
        b_next = coefficient(family, k + 1);
        const double next = (y * cur - b_prev * prev) / b_next;
        prev = cur;
        cur = next;
    }
    return cur;
}

double eval_tensor(BasisFamily family, const MultiIndex& nu, std::span<const double> y) {
    if (nu.max_dim() > y.size()) throw std::invalid_argument("multi-index support exceeds point dimension");
    double v = 1.0;
    for (const auto& [dim, deg] : nu.entries()) v *= eval_univariate(family, deg, y[dim - 1]);
    return v;
}

double intrinsic_weight(BasisFamily family, const MultiIndex& nu) {
    double u = 1.0;
    for (const auto& e : nu.entries()) {
        const double deg = e.second;
        switch (family) {
            case BasisFamily::Legendre: u *= std::sqrt(2.0 * deg + 1.0); break;
            case BasisFamily::Chebyshev1: u *= std::numbers::sqrt2; break;
            case BasisFamily::Chebyshev2: u *= deg + 1.0; break;
        }
    }
    return u;
}

double weighted_cardinality(const IndexSet& s, BasisFamily family) {
    double total = 0.0;
    for (const auto& nu : s) {
        const double u = intrinsic_weight(family, nu);
        total += u * u;
    }
    return total;
}

double christoffel(BasisFamily family, const IndexSet& s, std::span<const double> y) {
    double total = 0.0;
    for (const auto& nu : s) {
        const double v = eval_tensor(family, nu, y);
        total += v * v;
    }
    return total;
}

double kappa(BasisFamily family, const IndexSet& s) { return weighted_cardinality(s, family); }

GaussRule gauss_quadrature(BasisFamily family, std::size_t points) {
    if (points == 0) throw std::invalid_argument("quadrature needs at least one node");
    GaussRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const double n = static_cast<double>(points);
    switch (family) {
        case BasisFamily::Chebyshev1:
            for (std::size_t k = 0; k < points; ++k) {
                rule.nodes[k] = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
                rule.weights[k] = 1.0 / n;
            }
            break;
        case BasisFamily::Chebyshev2:
            for (std::size_t k = 0; k < points; ++k) {
                const double t = (k + 1.0) * std::numbers::pi / (n + 1.0);
                const double s = std::sin(t);
                rule.nodes[k] = std::cos(t);
                rule.weights[k] = 2.0 / (n + 1.0) * s * s;
            }
            break;
        case BasisFamily::Legendre:
            // Newton iteration on the classical P_n recurrence.
            for (std::size_t k = 0; k < points; ++k) {
                double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
                double dp = 0.0;
                for (int it = 0; it < 100; ++it) {
                    double p0 = 1.0, p1 = x;
                    for (std::size_t j = 2; j <= points; ++j) {
                        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                        p0 = p1;
                        p1 = p2;
                    }
                    if (points == 1) p0 = 1.0;
                    dp = n * (x * p1 - p0) / (x * x - 1.0);
                    const double dx = p1 / dp;
                    x -= dx;
                    if (std::abs(dx) < 1e-16) break;
                }
                // Recompute the derivative at the converged node.
                double p0 = 1.0, p1 = x;
                for (std::size_t j = 2; j <= points; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                if (points == 1) p0 = 1.0;
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                rule.nodes[k] = x;
                rule.weights[k] = 1.0 / ((1.0 - x * x) * dp * dp);  // half the Lebesgue weight
            }
            break;
    }
    return rule;
}

Matrix evaluate_basis(BasisFamily family, std::span<const MultiIndex> columns, const Eigen::Ref<const RowMatrix>& points) {
    const Eigen::Index m = points.rows();
    const auto d = static_cast<std::uint32_t>(points.cols());
    std::vector<std::uint32_t> max_deg(d + 1, 0u);
    for (const auto& nu : columns) {
        if (nu.max_dim() > d) throw std::invalid_argument("multi-index support exceeds point dimension");
        for (const auto& [dim, deg] : nu.entries()) max_deg[dim] = std::max(max_deg[dim], deg);
    }
    std::vector<std::size_t> offset(d + 2, 0);
    for (std::uint32_t j = 1; j <= d; ++j) offset[j + 1] = offset[j] + (max_deg[j] > 0 ? max_deg[j] + 1 : 0);
    std::vector<double> table(offset[d + 1]);

    Matrix out(m, static_cast<Eigen::Index>(columns.size()));
    for (Eigen::Index i = 0; i < m; ++i) {
        for (std::uint32_t j = 1; j <= d; ++j)
            if (max_deg[j] > 0)
                eval_univariate_all(family, points(i, j - 1),
                                    std::span<double>(table.data() + offset[j], max_deg[j] + 1));
        for (std::size_t c = 0; c < columns.size(); ++c) {
            double v = 1.0;
            for (const auto& [dim, deg] : columns[c].entries()) v *= table[offset[dim] + deg];
            out(i, static_cast<Eigen::Index>(c)) = v;
        }
    }
    return out;
}

DesignMatrix build_design_matrix(BasisFamily family, const IndexSet& s, const Eigen::Ref<const RowMatrix>& points,
                                 std::span<const double> weights) {
    const Eigen::Index m = points.rows();
    if (m < 1) throw std::invalid_argument("design matrix needs at least one point");
    if (weights.size() != static_cast<std::size_t>(m)) throw std::invalid_argument("one weight per point required");
    DesignMatrix a;
    a.values = evaluate_basis(family, s.members(), points);
    a.row_weights = Eigen::Map<const Vector>(weights.data(), m);
    a.column_order = s;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(weights[i] > 0.0)) throw std::invalid_argument("sample weights must be positive");
        a.values.row(i) *= std::sqrt(weights[i] / static_cast<double>(m));
    }
    if (!a.values.allFinite()) throw NumericalError("non-finite entry in design matrix");
    return a;
}

}  // namespace polyapprox
