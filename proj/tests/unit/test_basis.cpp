#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "polyapprox/basis.hpp"
#include "polyapprox/errors.hpp"

using namespace polyapprox;
using std::numbers::pi;

namespace {

constexpr BasisFamily kFamilies[] = {BasisFamily::Legendre, BasisFamily::Chebyshev1, BasisFamily::Chebyshev2};

// Independent closed forms for the orthonormal polynomials.
double legendre_closed(std::uint32_t k, double y) {
    // Bonnet recursion for the classical P_k, then normalise by sqrt(2k+1).
    double p0 = 1.0, p1 = y;
    if (k == 0) return 1.0;
    for (std::uint32_t j = 1; j < k; ++j) {
        const double p2 = ((2.0 * j + 1.0) * y * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return std::sqrt(2.0 * k + 1.0) * p1;
}

double cheb1_closed(std::uint32_t k, double y) {
    const double t = std::cos(k * std::acos(y));
    return k == 0 ? 1.0 : std::sqrt(2.0) * t;
}

double cheb2_closed(std::uint32_t k, double y) {
    const double th = std::acos(y);
    if (std::abs(std::sin(th)) < 1e-14) return (y > 0 ? 1.0 : (k % 2 == 0 ? 1.0 : -1.0)) * (k + 1.0);
    return std::sin((k + 1.0) * th) / std::sin(th);
}

}  // namespace

TEST(Basis, MatchesClosedForms) {
    for (double y : {-1.0, -0.73, -0.2, 0.0, 0.31, 0.9, 1.0}) {
        for (std::uint32_t k = 0; k <= 12; ++k) {
            EXPECT_NEAR(eval_univariate(BasisFamily::Legendre, k, y), legendre_closed(k, y), 1e-11) << k << " " << y;
            EXPECT_NEAR(eval_univariate(BasisFamily::Chebyshev1, k, y), cheb1_closed(k, y), 1e-11) << k << " " << y;
            EXPECT_NEAR(eval_univariate(BasisFamily::Chebyshev2, k, y), cheb2_closed(k, y), 1e-10) << k << " " << y;
        }
    }
}

TEST(Basis, FirstLegendreValues) {
    EXPECT_DOUBLE_EQ(eval_univariate(BasisFamily::Legendre, 0, 0.3), 1.0);
    EXPECT_NEAR(eval_univariate(BasisFamily::Legendre, 1, 0.5), std::sqrt(3.0) * 0.5, 1e-15);
    EXPECT_NEAR(eval_univariate(BasisFamily::Legendre, 2, 1.0), std::sqrt(5.0), 1e-14);
}

TEST(Basis, RejectsPointsOutsideDomain) {
    EXPECT_THROW((void)eval_univariate(BasisFamily::Legendre, 2, 1.1), std::domain_error);
    EXPECT_NO_THROW((void)eval_univariate(BasisFamily::Legendre, 2, 1.0 + 1e-13));
}

TEST(Basis, EndpointAttainsSupNorm) {
    // u_nu = ||Psi_nu||_inf is attained at y = 1; check against a fine scan.
    for (BasisFamily fam : kFamilies) {
        for (std::uint32_t k = 0; k <= 8; ++k) {
            double sup = 0.0;
            for (int i = 0; i <= 4000; ++i) sup = std::max(sup, std::abs(eval_univariate(fam, k, -1.0 + i / 2000.0)));
            EXPECT_NEAR(sup, intrinsic_weight(fam, MultiIndex::from_dense({k})), 1e-9) << to_string(fam) << " " << k;
        }
    }
}

TEST(Basis, IntrinsicWeights) {
    const MultiIndex nu = MultiIndex::from_dense({2, 0, 1});
    EXPECT_NEAR(intrinsic_weight(BasisFamily::Legendre, nu), std::sqrt(5.0 * 3.0), 1e-14);
    EXPECT_NEAR(intrinsic_weight(BasisFamily::Chebyshev1, nu), 2.0, 1e-14);
    EXPECT_NEAR(intrinsic_weight(BasisFamily::Chebyshev2, nu), 6.0, 1e-14);
}

TEST(Basis, GaussRuleOrthonormality) {
    for (BasisFamily fam : kFamilies) {
        const GaussRule g = gauss_quadrature(fam, 30);
        double wsum = 0.0;
        for (double w : g.weights) wsum += w;
        EXPECT_NEAR(wsum, 1.0, 1e-13);
        for (std::uint32_t a = 0; a < 20; ++a) {
            for (std::uint32_t b = 0; b < 20; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < g.nodes.size(); ++i)
                    s += g.weights[i] * eval_univariate(fam, a, g.nodes[i]) * eval_univariate(fam, b, g.nodes[i]);
                EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-12) << to_string(fam) << " " << a << "," << b;
            }
        }
    }
}

TEST(Basis, TensorProductFactorises) {
    const MultiIndex nu = MultiIndex::from_dense({2, 0, 3});
    const std::vector<double> y{0.2, -0.5, 0.7};
    for (BasisFamily fam : kFamilies) {
        const double expect = eval_univariate(fam, 2, 0.2) * eval_univariate(fam, 3, 0.7);
        EXPECT_NEAR(eval_tensor(fam, nu, y), expect, 1e-14);
    }
}

TEST(Basis, KappaOfLineSetLegendre) {
    for (std::uint32_t n = 1; n <= 50; ++n) {
        EXPECT_NEAR(kappa(BasisFamily::Legendre, tensor_set(n - 1, 1)), double(n) * n, 1e-9);
    }
}

TEST(Basis, KappaEqualsChristoffelAtCorner) {
    const IndexSet s = total_degree_set(3, 2);
    for (BasisFamily fam : kFamilies) {
        const std::vector<double> corner{1.0, 1.0};
        EXPECT_NEAR(kappa(fam, s), christoffel(fam, s, corner), 1e-10);
        // The corner is a maximiser of the Christoffel function on the square.
        for (double a = -1.0; a <= 1.0; a += 0.125)
            for (double b = -1.0; b <= 1.0; b += 0.125) {
                const std::vector<double> y{a, b};
                EXPECT_LE(christoffel(fam, s, y), kappa(fam, s) * (1 + 1e-12));
            }
    }
}

TEST(Basis, EvaluateBasisMatchesTensor) {
    const IndexSet s = hyperbolic_cross_anchored(6, 3u);
    RowMatrix pts(4, 3);
    pts << 0.1, 0.2, 0.3, -1, 1, 0, 0.5, -0.5, 0.25, 0.9, 0.0, -0.9;
    for (BasisFamily fam : kFamilies) {
        const Matrix v = evaluate_basis(fam, s.members(), pts);
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) {
                const std::vector<double> y(pts.row(i).data(), pts.row(i).data() + 3);
                EXPECT_NEAR(v(i, static_cast<Eigen::Index>(j)), eval_tensor(fam, s[j], y), 1e-13);
            }
    }
}

TEST(Basis, DesignMatrixScaling) {
    const IndexSet s{MultiIndex{}, MultiIndex::unit(1)};
    RowMatrix pts(2, 1);
    pts << 0.5, -0.5;
    const std::vector<double> w{2.0, 0.5};
    const DesignMatrix a = build_design_matrix(BasisFamily::Legendre, s, pts, w);
    EXPECT_NEAR(a.values(0, 0), std::sqrt(2.0 / 2.0), 1e-15);
    EXPECT_NEAR(a.values(1, 1), std::sqrt(0.5 / 2.0) * std::sqrt(3.0) * -0.5, 1e-15);
    const std::vector<double> bad{1.0, 0.0};
    EXPECT_THROW((void)build_design_matrix(BasisFamily::Legendre, s, pts, bad), std::invalid_argument);
}

TEST(Basis, FamilyNames) {
    for (BasisFamily fam : kFamilies) EXPECT_EQ(parse_family(to_string(fam)), fam);
    EXPECT_THROW((void)parse_family("hermite"), ConfigError);
}
