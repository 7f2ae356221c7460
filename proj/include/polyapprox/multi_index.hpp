#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polyapprox {

/// Largest degree a single coordinate may carry.
inline constexpr std::uint32_t kMaxDegree = 1u << 20;
/// Largest (1-based) dimension index.
inline constexpr std::uint32_t kMaxDimension = 1u << 16;

/// A finitely supported multi-index nu = (nu_1, nu_2, ...).
///
/// Stored sparsely as (dimension, degree) pairs sorted by dimension.
/// Dimensions are 1-based and only nonzero degrees are stored, so the
/// zero multi-index has an empty entry list.
class MultiIndex {
public:
    using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (dimension, degree)

    MultiIndex() = default;

    /// Builds from arbitrary (dimension, degree) pairs. Zero degrees are
    /// dropped; duplicate dimensions or out-of-range values throw.
    explicit MultiIndex(std::vector<Entry> entries);

    /// Builds from a dense vector: dense[k] is the degree in dimension k+1.
    static MultiIndex from_dense(std::span<const std::uint32_t> dense);
    static MultiIndex from_dense(std::initializer_list<std::uint32_t> dense);

    /// The canonical index e_j.
    static MultiIndex unit(std::uint32_t dim);

    [[nodiscard]] std::uint32_t degree(std::uint32_t dim) const noexcept;
    [[nodiscard]] std::uint32_t operator[](std::uint32_t dim) const noexcept { return degree(dim); }

    [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t support_size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool is_zero() const noexcept { return entries_.empty(); }
    /// Largest dimension in the support, 0 for the zero index.
    [[nodiscard]] std::uint32_t max_dim() const noexcept;
    [[nodiscard]] std::uint64_t total_degree() const noexcept;

    [[nodiscard]] MultiIndex incremented(std::uint32_t dim) const;
    /// nu - e_dim; throws if nu_dim == 0.
    [[nodiscard]] MultiIndex decremented(std::uint32_t dim) const;

    [[nodiscard]] std::vector<std::uint32_t> dense(std::uint32_t d) const;

    /// "dim:degree" pairs joined by commas, or "0" for the zero index.
    [[nodiscard]] std::string to_string() const;
    static MultiIndex parse(std::string_view text);

    /// Graded lexicographic order: total degree ascending; ties are broken
    /// by the dense vectors, where the larger leading coordinate comes
    /// first (so e_1 < e_2 < ... and 2e_1 < e_1 + e_2 < 2e_2).
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept;
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) noexcept = default;

private:
    std::vector<Entry> entries_;
};

struct MultiIndexHash {
    std::size_t operator()(const MultiIndex& nu) const noexcept;
};

/// An ordered, duplicate-free, immutable set of multi-indices, kept in
/// canonical (graded lexicographic) order.
class IndexSet {
public:
    IndexSet() = default;
    /// Sorts and deduplicates.
    explicit IndexSet(std::vector<MultiIndex> members);
    IndexSet(std::initializer_list<MultiIndex> members);

    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
    [[nodiscard]] const MultiIndex& operator[](std::size_t i) const { return members_[i]; }
    [[nodiscard]] auto begin() const noexcept { return members_.begin(); }
    [[nodiscard]] auto end() const noexcept { return members_.end(); }
    [[nodiscard]] std::span<const MultiIndex> members() const noexcept { return members_; }

    [[nodiscard]] bool contains(const MultiIndex& nu) const;
    /// Position of nu in canonical order, if present.
    [[nodiscard]] std::optional<std::size_t> position(const MultiIndex& nu) const;
    [[nodiscard]] bool is_subset_of(const IndexSet& other) const;

    /// Largest active dimension across all members.
    [[nodiscard]] std::uint32_t max_dim() const noexcept;
    [[nodiscard]] std::uint32_t max_degree() const noexcept;

    [[nodiscard]] IndexSet united(const IndexSet& other) const;
    [[nodiscard]] IndexSet with(const MultiIndex& nu) const;

    /// A lowerness flag recorded by the constructing routine, if known.
    [[nodiscard]] std::optional<bool> lower_hint() const noexcept { return lower_hint_; }
    [[nodiscard]] IndexSet with_lower_hint(bool lower) const;

    /// One index per line in MultiIndex::to_string form.
    [[nodiscard]] std::string to_text() const;
    static IndexSet parse(std::string_view text);

    friend bool operator==(const IndexSet& a, const IndexSet& b) noexcept { return a.members_ == b.members_; }

private:
    std::vector<MultiIndex> members_;
    std::optional<bool> lower_hint_;
};

[[nodiscard]] bool is_lower(const IndexSet& s);
[[nodiscard]] bool is_anchored(const IndexSet& s);

/// Forward neighbours of s that are not in s. Candidate dimensions are
/// 1..dim_limit when given, otherwise 1..max_dim(s)+1 (one fresh dimension).
[[nodiscard]] IndexSet margin(const IndexSet& s, std::optional<std::uint32_t> dim_limit = std::nullopt);

/// Margin members whose every backward neighbour lies in s. Requires s lower.
[[nodiscard]] IndexSet reduced_margin(const IndexSet& s, std::optional<std::uint32_t> dim_limit = std::nullopt);

/// {nu in N_0^d : max_k nu_k <= order}.
[[nodiscard]] IndexSet tensor_set(std::uint32_t order, std::uint32_t d);
/// {nu in N_0^d : |nu|_1 <= order}.
[[nodiscard]] IndexSet total_degree_set(std::uint32_t order, std::uint32_t d);

/// {nu : prod_{k<n} (nu_k + 1) <= n, nu_k = 0 for k >= n}, the anchored
/// hyperbolic cross. With max_dim set, only dimensions 1..max_dim are used.
[[nodiscard]] IndexSet hyperbolic_cross_anchored(std::uint32_t n, std::optional<std::uint32_t> max_dim = std::nullopt);
/// |hyperbolic_cross_anchored(n, max_dim)| without materialising the set.
[[nodiscard]] std::uint64_t hyperbolic_cross_size(std::uint32_t n, std::optional<std::uint32_t> max_dim = std::nullopt);
/// Largest n with hyperbolic_cross_size(n, max_dim) <= budget (at least 1).
[[nodiscard]] std::uint32_t largest_hyperbolic_cross_order(std::uint64_t budget, std::optional<std::uint32_t> max_dim);

}  // namespace polyapprox
