#pragma once

#include "ptime/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ptime {

/// Dense matrix over the extended rationals, row-major. Entry (r, c) is the
/// weight of the arc c -> r of the precedence graph.
class TropicalMatrix {
public:
    TropicalMatrix() = default;
    /// rows x cols matrix filled with `fill` (default -inf, i.e. the all-ε matrix).
    TropicalMatrix(std::size_t rows, std::size_t cols,
                   const ExtendedRational& fill = ExtendedRational::neg_inf());

    static TropicalMatrix epsilon(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static TropicalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    /// Zero-based element access.
    ExtendedRational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const ExtendedRational& operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    std::span<const ExtendedRational> entries() const { return entries_; }

    /// Submatrix of `count_r` x `count_c` starting at (r0, c0).
    TropicalMatrix block(std::size_t r0, std::size_t c0, std::size_t count_r, std::size_t count_c) const;

    bool contains_pos_inf() const;

    friend bool operator==(const TropicalMatrix&, const TropicalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ExtendedRational> entries_;
};

using Vector = std::vector<ExtendedRational>;

/// Elementwise max. Throws std::invalid_argument on a dimension mismatch.
TropicalMatrix mat_oplus(const TropicalMatrix& a, const TropicalMatrix& b);

/// Max-plus product. Throws std::invalid_argument unless a.cols() == b.rows().
TropicalMatrix mat_otimes(const TropicalMatrix& a, const TropicalMatrix& b);

/// Max-plus matrix-vector product.
Vector mat_vec(const TropicalMatrix& a, std::span<const ExtendedRational> v);

/// Result of a Kleene-star closure.
///
/// `star` lives over Q ∪ {±inf}: entry (i, j) is +inf when some path j -> i can
/// be routed through a positive circuit. Node indices in
/// `positive_circuit_nodes` and `positive_circuit` are zero-based.
struct StarResult {
    TropicalMatrix star;
    TropicalMatrix plus;
    std::vector<std::size_t> positive_circuit_nodes;
    /// One positive-weight elementary circuit v0 -> v1 -> ... -> v0 (listed
    /// without repeating v0), when any exists.
    std::vector<std::size_t> positive_circuit;

    bool has_positive_circuit() const { return !positive_circuit_nodes.empty(); }

    /// Node sequence of a maximum-weight path from -> to (both inclusive),
    /// or nullopt if no path exists. Requires the absence of positive circuits.
    /// from == to yields the empty path {from}.
    std::optional<std::vector<std::size_t>> longest_path(std::size_t from, std::size_t to) const;

    /// Zero-based intermediate node used by the closure for entry (i, j), or
    /// -1 for a direct arc. Internal to path reconstruction.
    std::vector<int> via;
};

/// Floyd–Warshall closure A* = E ⊕ A ⊕ A² ⊕ ... over Q_max.
/// Throws std::invalid_argument for non-square input or +inf entries.
StarResult kleene_star(const TropicalMatrix& a);

}  // namespace ptime
