#pragma once

#include "ptime/maxplus.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ptime {

/// Arc of a static graph. Nodes are 1-based; shift is -1, 0 or +1.
struct Arc {
    std::size_t source = 0;
    std::size_t target = 0;
    int shift = 0;
    Rational weight;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// The triple (M_{-1}, M_0, M_{+1}) of n x n matrices over Q_max generating
/// a static graph and its periodic graphs.
struct ShiftedMatrices {
    TropicalMatrix minus;
    TropicalMatrix zero;
    TropicalMatrix plus;

    std::size_t n() const { return zero.rows(); }
    const TropicalMatrix& by_shift(int s) const;
    TropicalMatrix& by_shift(int s);

    /// Throws std::invalid_argument unless all three are n x n and free of +inf.
    void validate() const;
};

/// A path: an anchor node followed by chained arcs. The anchor makes the
/// empty path well defined.
struct Path {
    std::size_t anchor = 1;
    std::vector<Arc> arcs;

    std::size_t source() const { return anchor; }
    std::size_t target() const { return arcs.empty() ? anchor : arcs.back().target; }
    std::size_t length() const { return arcs.size(); }

    /// Throws std::invalid_argument when consecutive arcs do not chain.
    void check_chained() const;
};

Path concat(const Path& first, const Path& second);
/// p repeated `times` times; p must be a circuit (source == target).
Path repeat(const Path& circuit, std::size_t times);

long path_shift(const Path& p);
Rational path_weight(const Path& p);
/// Minimum over all prefixes (including the empty one) of the partial shift sum.
long path_lshift(const Path& p);

/// n x n boolean matrix, H(i, j) = 1 iff node i is reachable from node j.
class BooleanMatrix {
public:
    explicit BooleanMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}
    std::size_t size() const { return n_; }
    /// 1-based.
    bool operator()(std::size_t i, std::size_t j) const { return bits_[(i - 1) * n_ + (j - 1)] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { bits_[(i - 1) * n_ + (j - 1)] = v ? 1 : 0; }
    friend bool operator==(const BooleanMatrix&, const BooleanMatrix&) = default;

private:
    std::size_t n_;
    std::vector<unsigned char> bits_;
};

class StaticGraph {
public:
    StaticGraph() = default;
    /// Arcs with identical (source, target, shift) collapse to the heaviest one.
    StaticGraph(std::size_t n, std::vector<Arc> arcs);

    /// Arc i -> j with shift s and weight (M_s)_{ji} whenever that entry is finite.
    static StaticGraph from_matrices(const ShiftedMatrices& m);

    std::size_t node_count() const { return n_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    /// Arcs leaving `node`, in (target, shift) order.
    std::vector<Arc> out_arcs(std::size_t node) const;
    std::optional<Arc> find_arc(std::size_t source, std::size_t target, int shift) const;

    ShiftedMatrices to_matrices() const;

    /// Graphviz rendering with arcs labelled "shift,weight".
    std::string to_dot() const;

private:
    std::size_t n_ = 0;
    std::vector<Arc> arcs_;
};

/// Reflexive-transitive closure over arcs of any shift.
BooleanMatrix reachability_closure(const StaticGraph& g);

/// Fewest-arc path from `from` to `to` (arcs of any shift), if one exists.
std::optional<Path> shortest_hop_path(const StaticGraph& g, std::size_t from, std::size_t to);

}  // namespace ptime
