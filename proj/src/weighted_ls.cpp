#include "polyapprox/weighted_ls.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "polyapprox/errors.hpp"
#include "polyapprox/metrics.hpp"

namespace polyapprox {

double CoefVector::at(const MultiIndex& nu) const {
    auto pos = indices.position(nu);
    return pos ? values[static_cast<Eigen::Index>(*pos)] : 0.0;
}

Vector CoefVector::evaluate(BasisFamily family, const Eigen::Ref<const RowMatrix>& points) const {
    std::vector<MultiIndex> active;
    std::vector<double> coef;
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const double v = values[static_cast<Eigen::Index>(j)];
        if (v != 0.0) {
            active.push_back(indices[j]);
            coef.push_back(v);
        }
    }
    if (active.empty()) return Vector::Zero(points.rows());
    return evaluate_basis(family, active, points) * Eigen::Map<const Vector>(coef.data(), static_cast<Eigen::Index>(coef.size()));
}

LSResult solve_wls(const DesignMatrix& a, std::span<const double> values) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (static_cast<Eigen::Index>(values.size()) != m) throw std::invalid_argument("one sample value per row required");
    if (m < n) throw std::invalid_argument("least-squares system is underdetermined (m < n)");
    if (n == 0) throw std::invalid_argument("empty index set");

    Vector b(m);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (Eigen::Index i = 0; i < m; ++i) b[i] = std::sqrt(a.row_weights[i] * inv_m) * values[static_cast<std::size_t>(i)];

    Eigen::HouseholderQR<Matrix> qr(a.values);
    const Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const Vector sv = Eigen::BDCSVD<Matrix>(r).singularValues();

    LSResult out;
    out.beta_w = sv.maxCoeff();
    out.alpha_w = sv.minCoeff();
    out.condition_number = out.alpha_w > 0.0 ? out.beta_w / out.alpha_w : std::numeric_limits<double>::infinity();
    out.condition_number = std::max(out.condition_number, 1.0);
    out.numerically_singular = !(out.alpha_w >= 1e-13 * out.beta_w);

    const Vector qtb = qr.householderQ().transpose() * b;
    Vector c = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>().solve(qtb.head(n));
    out.residual_norm = (a.values * c - b).norm();
    out.coefficients = CoefVector{a.column_order, std::move(c)};
    return out;
}

double discrete_inner(std::span<const double> f, std::span<const double> g, std::span<const double> w, std::size_t m) {
    if (f.size() != g.size() || f.size() != w.size()) throw std::invalid_argument("discrete inner product needs equal lengths");
    if (m == 0) throw std::invalid_argument("m must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * g[i];
    return s / static_cast<double>(m);
}

IndexSet bulk(const IndexSet& candidates, std::span<const double> estimator, double beta) {
    if (candidates.empty()) throw std::invalid_argument("bulk needs at least one candidate");
    if (estimator.size() != candidates.size()) throw std::invalid_argument("one estimator value per candidate");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("bulk parameter must lie in (0, 1]");
    double total = 0.0;
    for (double e : estimator) {
        if (!(e >= 0.0)) throw std::invalid_argument("estimator values must be nonnegative");
        total += e;
    }
    if (total == 0.0) return IndexSet{candidates[0]};

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return estimator[a] > estimator[b]; });
    std::vector<MultiIndex> chosen;
    double mass = 0.0;
    for (std::size_t k : order) {
        chosen.push_back(candidates[k]);
        mass += estimator[k];
        if (mass >= beta * total) break;
    }
    return IndexSet(std::move(chosen));
}

std::string_view to_string(ScalingRule rule) noexcept {
    switch (rule) {
        case ScalingRule::LogLinear: return "loglinear";
        case ScalingRule::Linear15: return "linear15";
        case ScalingRule::Linear2: return "linear2";
    }
    return "unknown";
}

ScalingRule parse_scaling(std::string_view name) {
    if (name == "loglinear") return ScalingRule::LogLinear;
    if (name == "linear15") return ScalingRule::Linear15;
    if (name == "linear2") return ScalingRule::Linear2;
    throw ConfigError("unknown scaling rule '" + std::string(name) + "'");
}

std::size_t m_from_scaling(ScalingRule rule, std::size_t n) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    const double nn = static_cast<double>(n);
    switch (rule) {
        case ScalingRule::LogLinear:
            return std::max<std::size_t>(n + 1, static_cast<std::size_t>(std::ceil(nn * std::log(nn))));
        case ScalingRule::Linear15: return static_cast<std::size_t>(std::ceil(1.5 * nn));
        case ScalingRule::Linear2: return 2 * n;
    }
    return n;
}

namespace {

/// Largest and smallest singular values via QR then an SVD of the n x n factor.
std::pair<double, double> extreme_singular_values(const Matrix& a) {
    Eigen::HouseholderQR<Matrix> qr(a);
    const Matrix r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    const Vector sv = Eigen::BDCSVD<Matrix>(r).singularValues();
    return {sv.maxCoeff(), sv.minCoeff()};
}

/// Coefficients in canonical order mapped onto a GridBasis column order.
Vector insertion_order(const LSResult& r, std::span<const std::size_t> canonical_pos) {
    Vector c(static_cast<Eigen::Index>(canonical_pos.size()));
    for (std::size_t j = 0; j < canonical_pos.size(); ++j)
        c[static_cast<Eigen::Index>(j)] = r.coefficients.values[static_cast<Eigen::Index>(canonical_pos[j])];
    return c;
}

}  // namespace

AlsTrace als_run(const GridTarget& sampling, const AlsConfig& config, Rng& rng, std::optional<GridTarget> error_grid) {
    if (sampling.grid == nullptr) throw std::invalid_argument("sampling grid missing");
    const Grid& grid = *sampling.grid;
    if (sampling.values.size() != grid.size()) throw std::invalid_argument("target values must match the grid size");
    if (error_grid && (error_grid->grid == nullptr || error_grid->values.size() != error_grid->grid->size() ||
                       error_grid->grid->dim() != grid.dim()))
        throw std::invalid_argument("error grid inconsistent with sampling grid");
    if (!(config.beta > 0.0 && config.beta <= 1.0)) throw ConfigError("bulk parameter must lie in (0, 1]");

    const auto d = static_cast<std::uint32_t>(grid.dim());
    const bool optimal = config.strategy == SamplingStrategy::NearOptimal;
    GridBasis basis(grid, config.family, optimal);
    std::optional<GridBasis> error_basis;
    if (error_grid) error_basis.emplace(*error_grid->grid, config.family, false);
    const GridTarget& eval_target = error_grid ? *error_grid : sampling;

    AlsTrace trace;
    IndexSet s = IndexSet{MultiIndex{}}.with_lower_hint(true);
    std::vector<MultiIndex> pending{MultiIndex{}};

    try {
        for (std::size_t step = 0; step < config.max_steps; ++step) {
            const auto start = std::chrono::steady_clock::now();
            const std::size_t n = s.size();
            const std::size_t m = m_from_scaling(config.scaling, n);
            if (m > config.max_m) break;

            basis.extend(pending);
            if (error_basis) error_basis->extend(pending);
            pending.clear();

            SampleSet samples = optimal ? draw_near_optimal(basis.distribution(), m, rng) : draw_mc(grid, m, rng);

            std::vector<std::size_t> canonical_pos(n);
            for (std::size_t j = 0; j < n; ++j) canonical_pos[j] = *s.position(basis.columns()[j]);

            DesignMatrix a;
            a.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
            a.row_weights = Eigen::Map<const Vector>(samples.weights.data(), static_cast<Eigen::Index>(m));
            a.column_order = s;
            std::vector<double> f(m);
            const auto values = basis.values();
            for (std::size_t i = 0; i < m; ++i) {
                const auto row = static_cast<Eigen::Index>(samples.grid_indices[i]);
                const double scale = std::sqrt(samples.weights[i] / static_cast<double>(m));
                for (std::size_t j = 0; j < n; ++j)
                    a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(canonical_pos[j])) =
                        scale * values(row, static_cast<Eigen::Index>(j));
                f[i] = sampling.values[samples.grid_indices[i]];
                if (config.noise_level > 0.0) f[i] += rng.uniform(-config.noise_level, config.noise_level);
            }
            if (!a.values.allFinite()) throw NumericalError("non-finite entry in design matrix");

            AlsStep rec;
            rec.result = solve_wls(a, f);
            rec.n = n;
            rec.m = m;
            const Vector c_ins = insertion_order(rec.result, canonical_pos);
            const Vector approx = error_basis ? Vector(error_basis->values() * c_ins) : Vector(values * c_ins);
            const std::span<const double> approx_span(approx.data(), static_cast<std::size_t>(approx.size()));
            rec.error_l2 = relative_error(approx_span, eval_target.values, ErrorNorm::L2);
            rec.error_linf = relative_error(approx_span, eval_target.values, ErrorNorm::Linf);
            rec.kappa = optimal ? static_cast<double>(n) : kappa(config.family, s);
            if (optimal) {
                // The sampling measure is the grid, so the LS matrix is reported in the
                // basis orthonormal on the grid. The solution itself is basis independent.
                const auto q = basis.orthonormal();
                const double root_k = std::sqrt(static_cast<double>(grid.size()));
                Matrix aq(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
                for (std::size_t i = 0; i < m; ++i)
                    aq.row(static_cast<Eigen::Index>(i)) =
                        std::sqrt(samples.weights[i] / static_cast<double>(m)) * root_k *
                        q.row(static_cast<Eigen::Index>(samples.grid_indices[i]));
                const auto [hi, lo] = extreme_singular_values(aq);
                rec.result.beta_w = hi;
                rec.result.alpha_w = lo;
                rec.result.condition_number = lo > 0.0 ? std::max(hi / lo, 1.0) : std::numeric_limits<double>::infinity();
            }

            // Estimator on the reduced margin: |<f - f_hat, Psi_nu>_disc,w|^2.
            Vector b(static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i)
                b[static_cast<Eigen::Index>(i)] = std::sqrt(samples.weights[i] / static_cast<double>(m)) * f[i];
            const Vector residual = b - a.values * rec.result.coefficients.values;
            const IndexSet candidates = reduced_margin(s, d);
            if (candidates.empty()) throw std::logic_error("empty reduced margin");
            Matrix dmat = evaluate_basis(config.family, candidates.members(), gather_points(grid, samples));
            for (std::size_t i = 0; i < m; ++i)
                dmat.row(static_cast<Eigen::Index>(i)) *= std::sqrt(samples.weights[i] / static_cast<double>(m));
            const Vector proj = dmat.transpose() * residual;
            std::vector<double> estimator(candidates.size());
            for (std::size_t k = 0; k < candidates.size(); ++k) {
                const double v = proj[static_cast<Eigen::Index>(k)];
                estimator[k] = std::isfinite(v) ? v * v : 0.0;
            }
            const IndexSet added = bulk(candidates, estimator, config.beta);

            if (config.keep_coefficients) {
                rec.set = s;
            } else {
                rec.result.coefficients = CoefVector{};
            }
            rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            trace.steps.push_back(std::move(rec));

            pending.assign(added.begin(), added.end());
            s = s.united(added).with_lower_hint(true);
        }
    } catch (const std::exception& e) {
        trace.failure = e.what();
    }
    return trace;
}

}  // namespace polyapprox
