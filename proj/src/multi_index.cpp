#include "polyapprox/multi_index.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace polyapprox {

namespace {

void check_dim(std::uint32_t dim) {
    if (dim == 0 || dim > kMaxDimension)
        throw std::out_of_range("multi-index dimension " + std::to_string(dim) + " outside [1, 2^16]");
}

void check_degree(std::uint32_t deg) {
    if (deg > kMaxDegree)
        throw std::out_of_range("multi-index degree " + std::to_string(deg) + " exceeds 2^20");
}

std::uint32_t parse_uint(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("cannot parse integer '" + std::string(s) + "'");
    return v;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<Entry> entries) {
    std::erase_if(entries, [](const Entry& e) { return e.second == 0; });
    std::ranges::sort(entries);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        check_dim(entries[k].first);
        check_degree(entries[k].second);
        if (k > 0 && entries[k].first == entries[k - 1].first)
            throw std::invalid_argument("duplicate dimension in multi-index");
    }
    entries_ = std::move(entries);
}

MultiIndex MultiIndex::from_dense(std::span<const std::uint32_t> dense) {
    std::vector<Entry> e;
    for (std::size_t k = 0; k < dense.size(); ++k)
        if (dense[k] != 0) e.emplace_back(static_cast<std::uint32_t>(k + 1), dense[k]);
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::from_dense(std::initializer_list<std::uint32_t> dense) {
    return from_dense(std::span<const std::uint32_t>(dense.begin(), dense.size()));
}

MultiIndex MultiIndex::unit(std::uint32_t dim) { return MultiIndex({{dim, 1u}}); }

std::uint32_t MultiIndex::degree(std::uint32_t dim) const noexcept {
    auto it = std::ranges::lower_bound(entries_, dim, {}, &Entry::first);
    return (it != entries_.end() && it->first == dim) ? it->second : 0u;
}

std::uint32_t MultiIndex::max_dim() const noexcept { return entries_.empty() ? 0u : entries_.back().first; }

std::uint64_t MultiIndex::total_degree() const noexcept {
    std::uint64_t t = 0;
    for (const auto& e : entries_) t += e.second;
    return t;
}

MultiIndex MultiIndex::incremented(std::uint32_t dim) const {
    check_dim(dim);
    MultiIndex out = *this;
    auto it = std::ranges::lower_bound(out.entries_, dim, {}, &Entry::first);
    if (it != out.entries_.end() && it->first == dim) {
        check_degree(it->second + 1);
        ++it->second;
    } else {
        out.entries_.insert(it, {dim, 1u});
    }
    return out;
}

MultiIndex MultiIndex::decremented(std::uint32_t dim) const {
    MultiIndex out = *this;
    auto it = std::ranges::lower_bound(out.entries_, dim, {}, &Entry::first);
    if (it == out.entries_.end() || it->first != dim)
        throw std::invalid_argument("cannot decrement a zero coordinate");
    if (--it->second == 0) out.entries_.erase(it);
    return out;
}

std::vector<std::uint32_t> MultiIndex::dense(std::uint32_t d) const {
    if (max_dim() > d) throw std::invalid_argument("multi-index support exceeds requested dimension");
    std::vector<std::uint32_t> out(d, 0u);
    for (const auto& [dim, deg] : entries_) out[dim - 1] = deg;
    return out;
}

std::string MultiIndex::to_string() const {
    if (entries_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(entries_[k].first);
        s += ':';
        s += std::to_string(entries_[k].second);
    }
    return s;
}

MultiIndex MultiIndex::parse(std::string_view text) {
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    if (text == "0") return {};
    std::vector<Entry> e;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto token = text.substr(0, comma);
        auto colon = token.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument("expected dim:degree in '" + std::string(token) + "'");
        std::uint32_t deg = parse_uint(token.substr(colon + 1));
        if (deg == 0) throw std::invalid_argument("zero degree in serialized multi-index");
        e.emplace_back(parse_uint(token.substr(0, colon)), deg);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (e.empty()) throw std::invalid_argument("empty multi-index token");
    for (std::size_t k = 1; k < e.size(); ++k)
        if (e[k].first <= e[k - 1].first) throw std::invalid_argument("multi-index pairs must be sorted by dimension");
    return MultiIndex(std::move(e));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept {
    if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
    const auto ea = a.entries();
    const auto eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        const std::uint32_t da = i < ea.size() ? ea[i].first : std::numeric_limits<std::uint32_t>::max();
        const std::uint32_t db = j < eb.size() ? eb[j].first : std::numeric_limits<std::uint32_t>::max();
        const std::uint32_t dim = std::min(da, db);
        const std::uint32_t va = da == dim ? ea[i].second : 0u;
        const std::uint32_t vb = db == dim ? eb[j].second : 0u;
        if (va != vb) return vb <=> va;  // larger leading coordinate sorts first
        if (da == dim) ++i;
        if (db == dim) ++j;
    }
    return std::strong_ordering::equal;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& nu) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& [dim, deg] : nu.entries()) {
        h ^= (static_cast<std::uint64_t>(dim) << 32) | deg;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------

IndexSet::IndexSet(std::vector<MultiIndex> members) : members_(std::move(members)) {
    std::ranges::sort(members_);
    auto dup = std::ranges::unique(members_);
    members_.erase(dup.begin(), dup.end());
}

IndexSet::IndexSet(std::initializer_list<MultiIndex> members) : IndexSet(std::vector<MultiIndex>(members)) {}

bool IndexSet::contains(const MultiIndex& nu) const { return std::ranges::binary_search(members_, nu); }

std::optional<std::size_t> IndexSet::position(const MultiIndex& nu) const {
    auto it = std::ranges::lower_bound(members_, nu);
    if (it == members_.end() || *it != nu) return std::nullopt;
    return static_cast<std::size_t>(it - members_.begin());
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
    return std::ranges::includes(other.members_, members_);
}

std::uint32_t IndexSet::max_dim() const noexcept {
    std::uint32_t m = 0;
    for (const auto& nu : members_) m = std::max(m, nu.max_dim());
    return m;
}

std::uint32_t IndexSet::max_degree() const noexcept {
    std::uint32_t m = 0;
    for (const auto& nu : members_)
        for (const auto& e : nu.entries()) m = std::max(m, e.second);
    return m;
}

IndexSet IndexSet::united(const IndexSet& other) const {
    std::vector<MultiIndex> out;
    out.reserve(members_.size() + other.members_.size());
    std::ranges::set_union(members_, other.members_, std::back_inserter(out));
    IndexSet s;
    s.members_ = std::move(out);
    return s;
}

IndexSet IndexSet::with(const MultiIndex& nu) const { return united(IndexSet{nu}); }

IndexSet IndexSet::with_lower_hint(bool lower) const {
    IndexSet s = *this;
    s.lower_hint_ = lower;
    return s;
}

std::string IndexSet::to_text() const {
    std::string s;
    for (const auto& nu : members_) {
        s += nu.to_string();
        s += '\n';
    }
    return s;
}

IndexSet IndexSet::parse(std::string_view text) {
    std::vector<MultiIndex> out;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        if (!line.empty() && line.find_first_not_of(" \r") != std::string_view::npos) out.push_back(MultiIndex::parse(line));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    const std::size_t n = out.size();
    IndexSet s(std::move(out));
    if (s.size() != n) throw std::invalid_argument("duplicate multi-index in serialized set");
    return s;
}

// ---------------------------------------------------------------------------

bool is_lower(const IndexSet& s) {
    for (const auto& nu : s)
        for (const auto& [dim, deg] : nu.entries())
            if (!s.contains(nu.decremented(dim))) return false;
    return true;
}

bool is_anchored(const IndexSet& s) {
    if (!is_lower(s)) return false;
    std::uint32_t highest_unit = 0;
    for (const auto& nu : s)
        if (nu.support_size() == 1 && nu.total_degree() == 1) highest_unit = std::max(highest_unit, nu.max_dim());
    for (std::uint32_t j = 1; j < highest_unit; ++j)
        if (!s.contains(MultiIndex::unit(j))) return false;
    return true;
}

namespace {

std::uint32_t candidate_dims(const IndexSet& s, std::optional<std::uint32_t> dim_limit) {
    return dim_limit ? *dim_limit : std::min(s.max_dim() + 1, kMaxDimension);
}

}  // namespace

IndexSet margin(const IndexSet& s, std::optional<std::uint32_t> dim_limit) {
    const std::uint32_t dims = candidate_dims(s, dim_limit);
    std::vector<MultiIndex> out;
    for (const auto& nu : s)
        for (std::uint32_t j = 1; j <= dims; ++j) {
            MultiIndex mu = nu.incremented(j);
            if (!s.contains(mu)) out.push_back(std::move(mu));
        }
    return IndexSet(std::move(out));
}

IndexSet reduced_margin(const IndexSet& s, std::optional<std::uint32_t> dim_limit) {
    if (!s.lower_hint().value_or(false) && !is_lower(s))
        throw std::invalid_argument("reduced_margin requires a lower set");
    const std::uint32_t dims = candidate_dims(s, dim_limit);
    std::unordered_set<MultiIndex, MultiIndexHash> seen;
    std::vector<MultiIndex> out;
    for (const auto& nu : s)
        for (std::uint32_t j = 1; j <= dims; ++j) {
            MultiIndex mu = nu.incremented(j);
            if (s.contains(mu) || seen.contains(mu)) continue;
            seen.insert(mu);
            const bool admissible = std::ranges::all_of(mu.entries(), [&](const MultiIndex::Entry& e) {
                return s.contains(mu.decremented(e.first));
            });
            if (admissible) out.push_back(std::move(mu));
        }
    return IndexSet(std::move(out));
}

namespace {

void checked_size(std::uint64_t size) {
    if (size > (1ull << 28)) throw std::overflow_error("index set cardinality exceeds 2^28");
}

}  // namespace

IndexSet tensor_set(std::uint32_t order, std::uint32_t d) {
    if (d == 0) throw std::invalid_argument("dimension must be positive");
    std::uint64_t size = 1;
    for (std::uint32_t k = 0; k < d; ++k) {
        size *= static_cast<std::uint64_t>(order) + 1;
        checked_size(size);
    }
    std::vector<MultiIndex> out;
    out.reserve(size);
    std::vector<std::uint32_t> nu(d, 0u);
    for (std::uint64_t c = 0; c < size; ++c) {
        out.push_back(MultiIndex::from_dense(nu));
        for (std::uint32_t k = 0; k < d; ++k) {
            if (++nu[k] <= order) break;
            nu[k] = 0;
        }
    }
    return IndexSet(std::move(out)).with_lower_hint(true);
}

IndexSet total_degree_set(std::uint32_t order, std::uint32_t d) {
    if (d == 0) throw std::invalid_argument("dimension must be positive");
    // C(order + d, d) computed incrementally; each partial product is exact.
    std::uint64_t size = 1;
    for (std::uint32_t k = 1; k <= d; ++k) {
        size = size * (order + k) / k;
        checked_size(size);
    }
    std::vector<MultiIndex> out;
    out.reserve(size);
    std::vector<std::uint32_t> nu(d, 0u);
    std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t k, std::uint32_t left) {
        if (k == d) {
            out.push_back(MultiIndex::from_dense(nu));
            return;
        }
        for (std::uint32_t v = 0; v <= left; ++v) {
            nu[k] = v;
            rec(k + 1, left - v);
        }
        nu[k] = 0;
    };
    rec(0, order);
    return IndexSet(std::move(out)).with_lower_hint(true);
}

IndexSet hyperbolic_cross_anchored(std::uint32_t n, std::optional<std::uint32_t> max_dim) {
    if (n == 0) throw std::invalid_argument("hyperbolic cross order must be >= 1");
    std::uint32_t dims = n - 1;
    if (max_dim) dims = std::min(dims, *max_dim);
    checked_size(hyperbolic_cross_size(n, max_dim));
    std::vector<MultiIndex> out;
    std::vector<MultiIndex::Entry> entries;
    // Enumerate supports in increasing dimension order; remaining budget is
    // the largest admissible product of (nu_k + 1) over the unvisited tail.
    std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t first_dim, std::uint32_t budget) {
        out.emplace_back(entries);
        for (std::uint32_t k = first_dim; k <= dims; ++k)
            for (std::uint32_t deg = 1; (deg + 1) <= budget; ++deg) {
                entries.emplace_back(k, deg);
                rec(k + 1, budget / (deg + 1));
                entries.pop_back();
            }
    };
    rec(1, n);
    return IndexSet(std::move(out)).with_lower_hint(true);
}

std::uint64_t hyperbolic_cross_size(std::uint32_t n, std::optional<std::uint32_t> max_dim) {
    if (n == 0) throw std::invalid_argument("hyperbolic cross order must be >= 1");
    std::uint32_t dims = n - 1;
    if (max_dim) dims = std::min(dims, *max_dim);
    // count(b, k) = number of nu over k dims with prod(nu+1) <= b.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> memo;
    std::function<std::uint64_t(std::uint32_t, std::uint32_t)> count = [&](std::uint32_t budget, std::uint32_t k) -> std::uint64_t {
        if (k == 0 || budget < 2) return 1;
        auto key = std::make_pair(budget, k);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (std::uint32_t v = 0; v + 1 <= budget; ++v) total += count(budget / (v + 1), k - 1);
        memo[key] = total;
        return total;
    };
    return count(n, dims);
}

std::uint32_t largest_hyperbolic_cross_order(std::uint64_t budget, std::optional<std::uint32_t> max_dim) {
    if (budget == 0) throw std::invalid_argument("budget must be positive");
    std::uint32_t n = 1;
    while (hyperbolic_cross_size(n + 1, max_dim) <= budget) {
        ++n;
        if (max_dim && *max_dim == 0) break;
    }
    return n;
}

}  // namespace polyapprox
