#include "polyapprox/sr_lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "polyapprox/errors.hpp"

namespace polyapprox {

double table_lambda(std::size_t m) {
    if (m == 0) throw std::invalid_argument("m must be positive");
    return 1.0 / (5.0 * std::sqrt(static_cast<double>(m)));
}

double theorem_lambda(std::size_t m, double epsilon) {
    if (m < 3) throw std::invalid_argument("theorem lambda needs m >= 3");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    const double lm = std::log(static_cast<double>(m));
    const double l = lm * (lm * lm * lm + std::log(1.0 / epsilon));
    return 1.0 / (4.0 * std::sqrt(static_cast<double>(m) / l));
}

SrLassoConfig SrLassoConfig::from_table(double operator_norm, std::size_t m, LambdaPolicy policy, double epsilon) {
    if (!(operator_norm > 0.0)) throw std::invalid_argument("operator norm must be positive");
    SrLassoConfig c;
    c.operator_norm = operator_norm;
    c.lambda_policy = policy;
    c.lambda = policy == LambdaPolicy::Table ? table_lambda(m) : theorem_lambda(m, epsilon);
    c.tau = c.sigma = 1.0 / operator_norm;
    c.scale_factor = std::exp(-1.0);
    c.inner_iterations = static_cast<std::size_t>(std::ceil(4.0 * operator_norm / c.scale_factor));
    c.scaling_constant = static_cast<double>(c.inner_iterations) / (2.0 * operator_norm);
    c.max_restarts = 100;
    c.tolerance = 1e-15;
    return c;
}

SrLassoConfig SrLassoConfig::from_table(const Matrix& a, LambdaPolicy policy, double epsilon) {
    return from_table(estimate_operator_norm(a), static_cast<std::size_t>(a.rows()), policy, epsilon);
}

nlohmann::json to_json(const SrLassoConfig& c) {
    return {
        {"lambda", c.lambda},
        {"lambda_policy", c.lambda_policy == LambdaPolicy::Table ? "table" : "theorem"},
        {"tau", c.tau},
        {"sigma", c.sigma},
        {"inner_iterations", c.inner_iterations},
        {"max_restarts", c.max_restarts},
        {"tolerance", c.tolerance},
        {"scale_factor", c.scale_factor},
        {"scaling_constant", c.scaling_constant},
        {"operator_norm", c.operator_norm},
    };
}

double estimate_operator_norm(const Matrix& a, std::size_t iterations, double rel_tol, std::uint64_t seed) {
    if (a.size() == 0) throw std::invalid_argument("empty matrix");
    Rng rng(seed);
    Vector x(a.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    x.normalize();
    double estimate = 0.0;
    for (std::size_t it = 0; it < iterations; ++it) {
        const Vector y = a.transpose() * (a * x);
        const double ny = y.norm();
        if (ny == 0.0) return 0.0;
        const double next = std::sqrt(ny);
        x = y / ny;
        if (it > 0 && std::abs(next - estimate) <= rel_tol * next) return next;
        estimate = next;
    }
    return estimate;
}

double objective(const Vector& z, const Matrix& a, const Vector& f, const Vector& u, double lambda) {
    return lambda * u.cwiseProduct(z.cwiseAbs()).sum() + (a * z - f).norm();
}

Vector primal_dual(const Matrix& a, const Vector& f, const Vector& u, double lambda, double tau, double sigma,
                   std::size_t iterations, const Vector& c0, const Vector& xi0, const PrimalDualObserver& observer) {
    if (!(tau > 0.0 && sigma > 0.0)) throw std::invalid_argument("step sizes must be positive");
    if (c0.size() != a.cols() || u.size() != a.cols() || xi0.size() != a.rows() || f.size() != a.rows())
        throw std::invalid_argument("primal-dual dimensions are inconsistent");
    if (xi0.norm() > 1.0 + 1e-12) throw std::invalid_argument("initial dual iterate must lie in the unit ball");

    Vector c = c0;
    Vector xi = xi0;
    Vector p(a.cols());
    Vector c_next(a.cols());
    Vector q(a.rows());
    const Vector thresholds = tau * lambda * u;
    for (std::size_t t = 0; t < iterations; ++t) {
        p.noalias() = c - tau * (a.transpose() * xi);
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            const double mag = std::abs(p[i]) - thresholds[i];
            c_next[i] = mag > 0.0 ? std::copysign(mag, p[i]) : 0.0;
        }
        q.noalias() = xi + sigma * (a * (2.0 * c_next - c)) - sigma * f;
        const double qn = q.norm();
        if (!std::isfinite(qn)) throw NumericalError("non-finite iterate in primal-dual iteration at step " + std::to_string(t));
        xi = qn > 1.0 ? Vector(q / qn) : q;
        c.swap(c_next);
        if (observer) observer(t, c, xi);
    }
    return c;
}

CsResult restarted(const Matrix& a, const Vector& f, const Vector& u, const SrLassoConfig& config) {
    if (!(config.lambda > 0.0) || !(config.tau > 0.0) || !(config.sigma > 0.0) || config.inner_iterations == 0 ||
        config.max_restarts == 0 || !(config.scale_factor > 0.0 && config.scale_factor < 1.0) ||
        !(config.scaling_constant > 0.0) || !(config.tolerance > 0.0))
        throw ConfigError("invalid restarted primal-dual configuration");

    CsResult out;
    out.config = config;
    Vector c = Vector::Zero(a.cols());
    const Vector xi0 = Vector::Zero(a.rows());
    double eps = f.norm();
    if (eps == 0.0) {
        out.coefficients.values = c;
        out.converged = true;
        return out;
    }
    // G(0) = ||f||; an objective far above it means the iteration is blowing up.
    const double blowup = 1e3 * eps;
    for (std::size_t l = 0; l < config.max_restarts; ++l) {
        eps = config.scale_factor * (eps + config.tolerance);
        const double scale = config.scaling_constant * eps;
        Vector next = scale * primal_dual(a, f / scale, u, config.lambda, config.tau, config.sigma,
                                          config.inner_iterations, c / scale, xi0);
        const double g = objective(next, a, f, u, config.lambda);
        if (!std::isfinite(g)) throw NumericalError("non-finite objective after restart " + std::to_string(l + 1));
        if (g > blowup)
            throw NumericalError("objective " + std::to_string(g) + " exceeds 1000 G(0) after restart " +
                                 std::to_string(l + 1));
        out.objective_trace.push_back(g);
        const double change = (next - c).norm();
        c.swap(next);
        out.restarts_used = l + 1;
        if (change <= 10.0 * config.tolerance) {
            out.converged = true;
            break;
        }
    }
    out.coefficients.values = std::move(c);
    return out;
}

ExtractedTerms extract_top_n(const CoefVector& c, std::size_t n) {
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    std::vector<std::size_t> order;
    for (Eigen::Index i = 0; i < c.values.size(); ++i)
        if (c.values[i] != 0.0) order.push_back(static_cast<std::size_t>(i));
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
        return std::abs(c.values[static_cast<Eigen::Index>(a)]) > std::abs(c.values[static_cast<Eigen::Index>(b)]);
    });
    if (order.size() > n) order.resize(n);
    std::vector<MultiIndex> members;
    for (std::size_t k : order) members.push_back(c.indices[k]);
    ExtractedTerms out;
    out.set = IndexSet(std::move(members));
    out.coefficients.indices = out.set;
    out.coefficients.values.resize(static_cast<Eigen::Index>(out.set.size()));
    for (std::size_t j = 0; j < out.set.size(); ++j) out.coefficients.values[static_cast<Eigen::Index>(j)] = c.at(out.set[j]);
    return out;
}

IndexSet cs_truncation_set(std::size_t d, std::size_t budget) {
    if (d == 0 || budget == 0) throw std::invalid_argument("dimension and budget must be positive");
    const auto dims = static_cast<std::uint32_t>(d);
    return hyperbolic_cross_anchored(largest_hyperbolic_cross_order(budget, dims), dims);
}

namespace {

/// Christoffel function of P_Lambda at every grid point, evaluated in row blocks.
Vector grid_christoffel(const Grid& grid, BasisFamily family, const IndexSet& lambda) {
    const auto k = static_cast<Eigen::Index>(grid.size());
    Vector out(k);
    constexpr Eigen::Index kBlock = 256;
    for (Eigen::Index start = 0; start < k; start += kBlock) {
        const Eigen::Index rows = std::min(kBlock, k - start);
        const Matrix vals = evaluate_basis(family, lambda.members(), grid.points.middleRows(start, rows));
        out.segment(start, rows) = vals.rowwise().squaredNorm();
    }
    return out;
}

double support_condition(const Matrix& a, const Vector& c) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < c.size(); ++j)
        if (c[j] != 0.0) cols.push_back(j);
    if (cols.empty()) return 1.0;
    if (static_cast<Eigen::Index>(cols.size()) > a.rows()) return std::numeric_limits<double>::infinity();
    Matrix sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    const Vector sv = Eigen::BDCSVD<Matrix>(sub).singularValues();
    const double lo = sv.minCoeff();
    return lo > 0.0 ? std::max(1.0, sv.maxCoeff() / lo) : std::numeric_limits<double>::infinity();
}

}  // namespace

CsResult cs_approximate(const GridTarget& target, std::size_t m, const CsConfig& config, Rng& rng) {
    if (target.grid == nullptr || target.values.size() != target.grid->size())
        throw std::invalid_argument("target values must match the grid");
    if (m == 0) throw std::invalid_argument("m must be positive");
    const Grid& grid = *target.grid;
    const IndexSet lambda = cs_truncation_set(grid.dim(), config.budget);

    SampleSet samples;
    if (config.sampling == CsSampling::MonteCarlo) {
        samples = draw_mc(grid, m, rng);
    } else {
        Vector k = grid_christoffel(grid, config.family, lambda);
        samples = draw_near_optimal(make_distribution(k / k.sum()), m, rng);
    }

    DesignMatrix a = build_design_matrix(config.family, lambda, gather_points(grid, samples), samples.weights);
    Vector f(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        double v = target.values[samples.grid_indices[i]];
        if (config.noise_level > 0.0) v += rng.uniform(-config.noise_level, config.noise_level);
        f[static_cast<Eigen::Index>(i)] = std::sqrt(samples.weights[i] / static_cast<double>(m)) * v;
    }
    Vector u(static_cast<Eigen::Index>(lambda.size()));
    for (std::size_t j = 0; j < lambda.size(); ++j) u[static_cast<Eigen::Index>(j)] = intrinsic_weight(config.family, lambda[j]);

    SrLassoConfig sc = SrLassoConfig::from_table(a.values, config.lambda_policy, config.theorem_epsilon);
    if (config.max_restarts) sc.max_restarts = *config.max_restarts;
    if (config.tolerance) sc.tolerance = *config.tolerance;

    CsResult out = restarted(a.values, f, u, sc);
    out.coefficients.indices = lambda;
    out.support_condition = support_condition(a.values, out.coefficients.values);
    if (config.extract_n) out.extracted = extract_top_n(out.coefficients, *config.extract_n);
    return out;
}

}  // namespace polyapprox
