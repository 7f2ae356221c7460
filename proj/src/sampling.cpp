#include "polyapprox/sampling.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "polyapprox/errors.hpp"

namespace polyapprox {

namespace {

// Inverse CDF of the density (2/pi) sin^2(theta) on [0, pi].
double semicircle_angle(double u) {
    const double target = u * std::numbers::pi;
    double lo = 0.0, hi = std::numbers::pi;
    double theta = u * std::numbers::pi;
    for (int it = 0; it < 100; ++it) {
        const double g = theta - std::sin(theta) * std::cos(theta) - target;
        if (g > 0) hi = theta; else lo = theta;
        const double dg = 2.0 * std::sin(theta) * std::sin(theta);
        double next = dg > 1e-300 ? theta - g / dg : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) < 1e-15) return next;
        theta = next;
    }
    return theta;
}

double draw_coordinate(BasisFamily measure, Rng& rng) {
    switch (measure) {
        case BasisFamily::Legendre: return rng.uniform(-1.0, 1.0);
        case BasisFamily::Chebyshev1: return std::cos(std::numbers::pi * rng.uniform01());
        case BasisFamily::Chebyshev2: return std::cos(semicircle_angle(rng.uniform01()));
    }
    return 0.0;
}

constexpr std::array<char, 8> kGridMagic{'H', 'P', 'G', 'R', 'I', 'D', '1', '\0'};

void write_u64(std::ostream& os, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
    os.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t read_u64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    is.read(reinterpret_cast<char*>(b.data()), 8);
    if (!is) throw std::runtime_error("truncated grid file");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
}

}  // namespace

Grid draw_grid(std::size_t d, std::size_t k, BasisFamily measure, std::uint64_t seed) {
    if (d == 0 || k == 0) throw std::invalid_argument("grid needs d >= 1 and K >= 1");
    Grid g;
    g.points.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    g.measure = measure;
    g.seed = seed;
    Rng rng(seed);
    for (Eigen::Index i = 0; i < g.points.rows(); ++i)
        for (Eigen::Index j = 0; j < g.points.cols(); ++j) g.points(i, j) = draw_coordinate(measure, rng);
    return g;
}

void save_grid(const Grid& grid, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(kGridMagic.data(), kGridMagic.size());
    write_u64(os, grid.dim());
    write_u64(os, grid.size());
    write_u64(os, static_cast<std::uint64_t>(grid.measure));
    write_u64(os, grid.seed);
    for (Eigen::Index i = 0; i < grid.points.rows(); ++i)
        for (Eigen::Index j = 0; j < grid.points.cols(); ++j) write_u64(os, std::bit_cast<std::uint64_t>(grid.points(i, j)));
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

Grid load_grid(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kGridMagic) throw std::runtime_error(path.string() + " is not a grid file");
    const std::uint64_t d = read_u64(is);
    const std::uint64_t k = read_u64(is);
    const std::uint64_t tag = read_u64(is);
    if (tag > 2) throw std::runtime_error("unknown measure tag in grid file");
    Grid g;
    g.seed = read_u64(is);
    g.measure = static_cast<BasisFamily>(tag);
    g.points.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < g.points.rows(); ++i)
        for (Eigen::Index j = 0; j < g.points.cols(); ++j) g.points(i, j) = std::bit_cast<double>(read_u64(is));
    return g;
}

RowMatrix gather_points(const Grid& grid, const SampleSet& samples) {
    RowMatrix out(static_cast<Eigen::Index>(samples.size()), grid.points.cols());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = grid.points.row(static_cast<Eigen::Index>(samples.grid_indices[i]));
    return out;
}

SampleSet draw_mc(const Grid& grid, std::size_t m, Rng& rng) {
    if (m == 0) throw std::invalid_argument("need at least one sample");
    SampleSet s;
    s.strategy = SamplingStrategy::MonteCarlo;
    s.grid_indices.resize(m);
    s.weights.assign(m, 1.0);
    for (auto& idx : s.grid_indices) idx = rng.index(grid.size());
    return s;
}

NearOptimalDistribution make_distribution(Vector probabilities) {
    const Eigen::Index k = probabilities.size();
    if (k == 0) throw std::invalid_argument("empty distribution");
    NearOptimalDistribution dist;
    dist.weights.resize(k);
    dist.cumulative.resize(static_cast<std::size_t>(k));
    double running = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double p = probabilities[i];
        if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
        dist.weights[i] = 1.0 / (static_cast<double>(k) * std::max(p, 1e-300));
        running += p;
        dist.cumulative[static_cast<std::size_t>(i)] = running;
    }
    if (!(std::abs(running - 1.0) < 1e-8)) throw std::invalid_argument("probabilities must sum to one");
    dist.probabilities = std::move(probabilities);
    return dist;
}

namespace {

Vector leverage_probabilities(const Eigen::Ref<const Matrix>& q) {
    const double n = static_cast<double>(q.cols());
    return q.rowwise().squaredNorm() / n;
}

}  // namespace

NearOptimalDistribution near_optimal_distribution(const Grid& grid, BasisFamily family, const IndexSet& s) {
    const auto k = static_cast<Eigen::Index>(grid.size());
    const auto n = static_cast<Eigen::Index>(s.size());
    if (n == 0) throw std::invalid_argument("index set is empty");
    if (k < n) throw std::invalid_argument("grid smaller than the index set");
    Matrix b = evaluate_basis(family, s.members(), grid.points) / std::sqrt(static_cast<double>(k));
    Eigen::HouseholderQR<Matrix> qr(b);
    const Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const Vector sv = Eigen::BDCSVD<Matrix>(r).singularValues();
    if (!(sv.minCoeff() >= 1e-10 * sv.maxCoeff()))
        throw NumericalError("degenerate grid/index-set pairing: basis matrix is numerically rank deficient");
    const Matrix q = qr.householderQ() * Matrix::Identity(k, n);
    return make_distribution(leverage_probabilities(q));
}

SampleSet draw_near_optimal(const NearOptimalDistribution& dist, std::size_t m, Rng& rng) {
    if (m == 0) throw std::invalid_argument("need at least one sample");
    SampleSet s;
    s.strategy = SamplingStrategy::NearOptimal;
    s.grid_indices.resize(m);
    s.weights.resize(m);
    const double total = dist.cumulative.back();
    for (std::size_t i = 0; i < m; ++i) {
        const double u = rng.uniform01() * total;
        auto it = std::ranges::upper_bound(dist.cumulative, u);
        auto idx = static_cast<std::size_t>(it - dist.cumulative.begin());
        if (idx >= dist.cumulative.size()) {
            // u landed at the very top after round-off; take the last bin with mass.
            idx = dist.cumulative.size() - 1;
            while (idx > 0 && dist.probabilities[static_cast<Eigen::Index>(idx)] <= 0.0) --idx;
        }
        s.grid_indices[i] = idx;
        s.weights[i] = dist.weights[static_cast<Eigen::Index>(idx)];
    }
    return s;
}

// ---------------------------------------------------------------------------

GridBasis::GridBasis(const Grid& grid, BasisFamily family, bool track_orthonormal)
    : grid_(&grid), family_(family), track_orthonormal_(track_orthonormal), univariate_(grid.dim()) {}

const Vector& GridBasis::univariate(std::uint32_t dim, std::uint32_t deg) {
    auto& cache = univariate_[dim - 1];
    const auto y = grid_->points.col(dim - 1);
    // Same arithmetic, in the same order, as eval_univariate_all.
    while (cache.size() <= deg) {
        const auto k = static_cast<std::uint32_t>(cache.size());
        if (k == 0) {
            if (!(y.cwiseAbs().maxCoeff() <= 1.0 + 1e-12)) throw std::domain_error("evaluation point outside [-1, 1]");
            cache.push_back(Vector::Ones(y.size()));
        } else if (k == 1) {
            cache.push_back(y.cwiseMax(-1.0).cwiseMin(1.0) / recurrence_coefficient(family_, 1));
        } else {
            const double b_prev = recurrence_coefficient(family_, k - 1);
            const double b_next = recurrence_coefficient(family_, k);
            const Vector yc = y.cwiseMax(-1.0).cwiseMin(1.0);
            cache.push_back((yc.cwiseProduct(cache[k - 1]) - b_prev * cache[k - 2]) / b_next);
        }
    }
    return cache[deg];
}

void GridBasis::reserve(std::size_t want) {
    const auto have = static_cast<std::size_t>(values_.cols());
    if (want <= have) return;
    const std::size_t cap = std::max<std::size_t>(want, 2 * have + 8);
    const auto k = static_cast<Eigen::Index>(grid_->size());
    const auto used = static_cast<Eigen::Index>(cols());
    Matrix v(k, static_cast<Eigen::Index>(cap));
    v.leftCols(used) = values_.leftCols(used);
    values_.swap(v);
    if (track_orthonormal_) {
        Matrix q(k, static_cast<Eigen::Index>(cap));
        q.leftCols(used) = q_.leftCols(used);
        q_.swap(q);
    }
}

void GridBasis::extend(std::span<const MultiIndex> new_columns) {
    if (new_columns.empty()) return;
    const auto k = static_cast<Eigen::Index>(grid_->size());
    const auto used = static_cast<Eigen::Index>(cols());
    const auto t = static_cast<Eigen::Index>(new_columns.size());
    if (used + t > k) throw std::invalid_argument("grid smaller than the index set");
    reserve(cols() + new_columns.size());
    for (Eigen::Index c = 0; c < t; ++c) {
        const MultiIndex& nu = new_columns[static_cast<std::size_t>(c)];
        if (nu.max_dim() > grid_->dim()) throw std::invalid_argument("multi-index support exceeds point dimension");
        auto col = values_.col(used + c);
        col.setOnes();
        for (const auto& [dim, deg] : nu.entries()) col.array() *= univariate(dim, deg).array();
    }

    if (track_orthonormal_) {
        Matrix v = values_.middleCols(used, t) / std::sqrt(static_cast<double>(k));
        const Vector original_norms = v.colwise().norm().transpose();
        if (used > 0) {
            const auto q_old = q_.leftCols(used);
            for (int pass = 0; pass < 2; ++pass) v.noalias() -= q_old * (q_old.transpose() * v);
        }
        Eigen::HouseholderQR<Matrix> qr(v);
        const Matrix& packed = qr.matrixQR();
        for (Eigen::Index j = 0; j < t; ++j)
            if (!(std::abs(packed(j, j)) >= 1e-10 * original_norms[j]))
                throw NumericalError("degenerate grid/index-set pairing: new basis column is numerically dependent");
        q_.middleCols(used, t) = qr.householderQ() * Matrix::Identity(k, t);
    }
    columns_.insert(columns_.end(), new_columns.begin(), new_columns.end());
}

NearOptimalDistribution GridBasis::distribution() const {
    if (!track_orthonormal_) throw std::logic_error("grid basis was built without an orthonormal span");
    if (cols() == 0) throw std::logic_error("grid basis is empty");
    return make_distribution(leverage_probabilities(orthonormal()));
}

}  // namespace polyapprox
