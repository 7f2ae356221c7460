#include "polyapprox/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace polyapprox {

SortedCoefSeq SortedCoefSeq::from_values(std::span<const double> c) {
    SortedCoefSeq s;
    s.values.reserve(c.size());
    for (double v : c) s.values.push_back(std::abs(v));
    std::ranges::sort(s.values, std::greater<>());
    return s;
}

SortedCoefSeq SortedCoefSeq::from_values(std::span<const double> c, std::span<const MultiIndex> origin) {
    if (origin.size() != c.size()) throw std::invalid_argument("origin must be parallel to the values");
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return std::abs(c[a]) > std::abs(c[b]); });
    SortedCoefSeq s;
    for (std::size_t k : order) {
        s.values.push_back(std::abs(c[k]));
        s.origin.push_back(origin[k]);
    }
    return s;
}

double sigma_n(const SortedCoefSeq& c, std::size_t n, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
    double s = 0.0;
    for (std::size_t j = c.size(); j-- > n;) s += std::pow(c.values[j], q);  // smallest first
    return std::pow(s, 1.0 / q);
}

double lp_norm(const SortedCoefSeq& c, double p) { return sigma_n(c, 0, p); }

double weak_lp_norm(const SortedCoefSeq& c, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    double best = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        best = std::max(best, std::pow(static_cast<double>(i + 1), 1.0 / p) * c.values[i]);
    return best;
}

BoundPair stechkin_bound(const SortedCoefSeq& c, std::size_t n, double p, double q) {
    if (!(p > 0.0) || p > q) throw std::invalid_argument("Stechkin bound requires 0 < p <= q");
    return {sigma_n(c, n, q), lp_norm(c, p) * std::pow(static_cast<double>(n + 1), 1.0 / q - 1.0 / p)};
}

BoundPair weak_stechkin_bound(const SortedCoefSeq& c, std::size_t n, double p, double q) {
    if (!(p > 0.0) || !(p < q)) throw std::invalid_argument("weak Stechkin bound requires 0 < p < q");
    if (n == 0) throw std::invalid_argument("weak Stechkin bound requires n >= 1");
    const double rhs = weak_lp_norm(c, p) / std::pow(q / p - 1.0, 1.0 / q) *
                       std::pow(static_cast<double>(n), 1.0 / q - 1.0 / p);
    return {sigma_n(c, n, q), rhs};
}

double weighted_lp_norm(std::span<const double> c, std::span<const double> u, double q) {
    if (c.size() != u.size()) throw std::invalid_argument("weights must be parallel to the coefficients");
    if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += std::pow(u[i], 2.0 - q) * std::pow(std::abs(c[i]), q);
    return std::pow(s, 1.0 / q);
}

double weighted_sigma_upper(std::span<const double> c, std::span<const double> u, double k, double q) {
    if (c.size() != u.size()) throw std::invalid_argument("weights must be parallel to the coefficients");
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    // Contribution u^{2-q}|c|^q per unit of weighted cardinality u^2.
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
        return std::pow(std::abs(c[a]) / u[a], q) > std::pow(std::abs(c[b]) / u[b], q);
    });
    std::vector<bool> kept(c.size(), false);
    double used = 0.0;
    for (std::size_t i : order) {
        if (used + u[i] * u[i] <= k) {
            kept[i] = true;
            used += u[i] * u[i];
        }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!kept[i]) s += std::pow(u[i], 2.0 - q) * std::pow(std::abs(c[i]), q);
    return std::pow(s, 1.0 / q);
}

BoundPair weighted_stechkin_bound(std::span<const double> c, std::span<const double> u, double k, double p,
                                  double q) {
    if (!(p > 0.0) || p > q || q > 2.0) throw std::invalid_argument("weighted Stechkin bound requires 0 < p <= q <= 2");
    double umax2 = 0.0;
    for (double w : u) umax2 = std::max(umax2, w * w);
    if (!(k > umax2)) throw std::invalid_argument("k must exceed max u^2");
    return {weighted_sigma_upper(c, u, k, q), weighted_lp_norm(c, u, p) * std::pow(k - umax2, 1.0 / q - 1.0 / p)};
}

BoundPair extraction_bound(std::span<const double> x, std::span<const double> z, std::size_t n) {
    if (x.size() != z.size()) throw std::invalid_argument("x and z must have equal length");
    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return std::abs(z[a]) > std::abs(z[b]); });
    std::vector<double> zs(z.size(), 0.0);
    for (std::size_t k = 0; k < std::min(n, order.size()); ++k) zs[order[k]] = z[order[k]];
    double lhs = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lhs += (x[i] - zs[i]) * (x[i] - zs[i]);
        diff += (x[i] - z[i]) * (x[i] - z[i]);
    }
    return {std::sqrt(lhs), 3.0 * std::sqrt(diff) + 3.0 * sigma_n(SortedCoefSeq::from_values(x), n, 2.0)};
}

namespace {

std::vector<double> project(const std::function<double(double)>& g, BasisFamily family, std::size_t count,
                            std::size_t nodes) {
    const GaussRule rule = gauss_quadrature(family, nodes);
    std::vector<double> d(count, 0.0);
    std::vector<double> psi(count);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double gv = g(rule.nodes[k]) * rule.weights[k];
        eval_univariate_all(family, rule.nodes[k], psi);
        for (std::size_t j = 0; j < count; ++j) d[j] += gv * psi[j];
    }
    return d;
}

}  // namespace

UnivariateExpansion univariate_coeffs(const std::function<double(double)>& g, BasisFamily family,
                                      std::size_t max_degree) {
    constexpr std::size_t kExtra = 16;
    const std::size_t nodes = max_degree + 1 + kExtra;
    const std::size_t count = max_degree + 1 + kExtra;
    const std::vector<double> coarse = project(g, family, count, nodes);
    const std::vector<double> fine = project(g, family, count, 2 * nodes);

    UnivariateExpansion out;
    out.coefficients.assign(coarse.begin(), coarse.begin() + static_cast<std::ptrdiff_t>(max_degree + 1));
    for (std::size_t j = 0; j <= max_degree; ++j)
        if (std::abs(coarse[j] - fine[j]) > 1e-12) out.converged = false;
    double tail = 0.0;
    for (std::size_t j = max_degree + 1; j < count; ++j) tail += fine[j] * fine[j];
    out.tail_estimate = std::sqrt(tail);
    return out;
}

BestNTerm best_n_term_product(const std::vector<std::vector<double>>& per_dim, std::size_t n) {
    const std::size_t d = per_dim.size();
    if (d == 0) throw std::invalid_argument("at least one dimension required");
    if (n == 0) throw std::invalid_argument("n must be at least 1");

    // Per dimension: degrees ranked by |d_nu|, truncated below 1e-18 of the largest.
    std::vector<std::vector<std::uint32_t>> rank_to_degree(d);
    std::vector<std::vector<double>> sorted_mag(d);
    long double total = 1.0L;
    for (std::size_t i = 0; i < d; ++i) {
        const auto& c = per_dim[i];
        if (c.empty()) throw std::invalid_argument("empty coefficient list");
        long double norm2 = 0.0L;
        double mx = 0.0;
        for (double v : c) {
            norm2 += static_cast<long double>(v) * v;
            mx = std::max(mx, std::abs(v));
        }
        total *= norm2;
        std::vector<std::uint32_t> deg(c.size());
        std::iota(deg.begin(), deg.end(), 0U);
        std::ranges::stable_sort(deg, [&](std::uint32_t a, std::uint32_t b) { return std::abs(c[a]) > std::abs(c[b]); });
        for (std::uint32_t k : deg) {
            if (std::abs(c[k]) < 1e-18 * mx) break;
            rank_to_degree[i].push_back(k);
            sorted_mag[i].push_back(std::abs(c[k]));
        }
    }

    // Best-first search over the rank lattice. The value is nonincreasing along
    // every coordinate of the rank vector, so the pop order is exact.
    using Ranks = std::vector<std::uint32_t>;
    auto value = [&](const Ranks& r) {
        double v = 1.0;
        for (std::size_t i = 0; i < d; ++i) v *= sorted_mag[i][r[i]];
        return v;
    };
    using Item = std::pair<double, Ranks>;
    auto cmp = [](const Item& a, const Item& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;  // deterministic tie-break
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
    std::set<Ranks> seen;
    Ranks start(d, 0);
    queue.emplace(value(start), start);
    seen.insert(start);

    BestNTerm out;
    long double selected = 0.0L;
    while (out.selection_order.size() < n) {
        if (queue.empty()) throw std::length_error("coefficient lattice exhausted before n terms");
        auto [v, r] = queue.top();
        queue.pop();
        selected += static_cast<long double>(v) * v;
        std::vector<MultiIndex::Entry> entries;
        for (std::size_t i = 0; i < d; ++i) {
            const std::uint32_t deg = rank_to_degree[i][r[i]];
            if (deg != 0) entries.emplace_back(static_cast<std::uint32_t>(i + 1), deg);
        }
        out.selection_order.emplace_back(std::move(entries));
        for (std::size_t i = 0; i < d; ++i) {
            if (r[i] + 1 >= sorted_mag[i].size()) continue;
            Ranks next = r;
            ++next[i];
            if (seen.insert(next).second) queue.emplace(value(next), std::move(next));
        }
    }
    out.set = IndexSet(out.selection_order);
    out.error = static_cast<double>(std::sqrt(std::max(0.0L, total - selected)));
    return out;
}

BestNTerm best_n_term_additive(const std::vector<std::vector<double>>& per_dim, std::size_t n) {
    if (per_dim.empty()) throw std::invalid_argument("at least one dimension required");
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    std::vector<std::pair<double, MultiIndex>> cands;
    double c0 = 0.0;
    for (std::size_t j = 0; j < per_dim.size(); ++j) {
        if (per_dim[j].empty()) throw std::invalid_argument("empty coefficient list");
        c0 += per_dim[j][0];
        for (std::size_t k = 1; k < per_dim[j].size(); ++k)
            cands.emplace_back(std::abs(per_dim[j][k]),
                               MultiIndex({{static_cast<std::uint32_t>(j + 1), static_cast<std::uint32_t>(k)}}));
    }
    cands.emplace_back(std::abs(c0), MultiIndex{});
    std::ranges::stable_sort(cands, [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (cands.size() < n) throw std::length_error("fewer candidates than n");
    BestNTerm out;
    double tail = 0.0;
    for (std::size_t i = cands.size(); i-- > n;) tail += cands[i].first * cands[i].first;
    for (std::size_t i = 0; i < n; ++i) out.selection_order.push_back(cands[i].second);
    out.set = IndexSet(out.selection_order);
    out.error = std::sqrt(tail);
    return out;
}

namespace {

struct SetHash {
    std::size_t operator()(const std::vector<MultiIndex>& s) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        MultiIndexHash mh;
        for (const auto& nu : s) h = (h ^ mh(nu)) * 0x100000001b3ULL;
        return h;
    }
};

}  // namespace

double kappa_max_lower(BasisFamily family, std::size_t d, std::size_t n, std::size_t budget) {
    if (d == 0 || n == 0) throw std::invalid_argument("d and n must be positive");
    const auto dims = static_cast<std::uint32_t>(d);
    // kappa is a sum of positive terms, so the maximum over |S| <= n is attained at |S| = n.
    std::vector<IndexSet> level{IndexSet{MultiIndex{}}.with_lower_hint(true)};
    std::size_t visited = 1;
    for (std::size_t size = 1; size < n; ++size) {
        std::unordered_set<std::vector<MultiIndex>, SetHash> next_seen;
        std::vector<IndexSet> next;
        for (const IndexSet& s : level) {
            for (const MultiIndex& nu : reduced_margin(s, dims)) {
                IndexSet grown = s.with(nu).with_lower_hint(true);
                std::vector<MultiIndex> key(grown.begin(), grown.end());
                if (!next_seen.insert(std::move(key)).second) continue;
                next.push_back(std::move(grown));
                if (++visited > budget) throw std::length_error("lower-set enumeration budget exceeded");
            }
        }
        level = std::move(next);
    }
    double best = 0.0;
    for (const IndexSet& s : level) best = std::max(best, kappa(family, s));
    return best;
}

}  // namespace polyapprox
