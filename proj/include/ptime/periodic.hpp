#pragma once

#include "ptime/static_graph.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ptime {

/// A finite window of a periodic graph: shifts [-r, r] (symmetric) or [1, K]
/// (natural), with n base nodes per shift.
struct SliceSpec {
    enum class Kind { Symmetric, Natural };

    Kind kind = Kind::Symmetric;
    std::size_t n = 0;
    long extent = 0;  // radius r or depth K

    static SliceSpec symmetric(std::size_t n, long radius);
    static SliceSpec natural(std::size_t n, long depth);

    long first_shift() const { return kind == Kind::Symmetric ? -extent : 1; }
    long last_shift() const { return extent; }
    std::size_t layer_count() const { return static_cast<std::size_t>(last_shift() - first_shift() + 1); }
    std::size_t node_count() const { return layer_count() * n; }
};

/// Bijection between slice nodes (i, k) and flat indices, both 1-based:
/// flat = i + n (k - first_shift).
class NodeIndexMap {
public:
    explicit NodeIndexMap(SliceSpec spec) : spec_(spec) {}

    const SliceSpec& spec() const { return spec_; }
    bool contains(long shift) const { return shift >= spec_.first_shift() && shift <= spec_.last_shift(); }
    std::size_t flat(std::size_t base, long shift) const;
    std::pair<std::size_t, long> node(std::size_t flat) const;
    std::string label(std::size_t flat) const;

private:
    SliceSpec spec_;
};

/// Adjacency matrix of the slice: entry (flat(j, k+s), flat(i, k)) = w(i, j, s)
/// whenever both endpoints lie inside the window.
TropicalMatrix build_slice(const StaticGraph& g, const SliceSpec& spec);

/// Graphviz rendering of a slice with nodes labelled "(i,k)".
std::string slice_to_dot(const StaticGraph& g, const SliceSpec& spec);

/// w(i, s): largest weight of a pseudo-circuit from (i, 0) to (i, s) inside
/// the radius-n slice, for s in [-n, n] \ {0}; -inf when none exists.
class PseudoCircuitTable {
public:
    explicit PseudoCircuitTable(std::size_t n)
        : n_(n), w_(n * 2 * n, ExtendedRational::neg_inf()) {}

    std::size_t n() const { return n_; }
    const ExtendedRational& at(std::size_t base, long shift) const { return w_[slot(base, shift)]; }
    void set(std::size_t base, long shift, ExtendedRational w) { w_[slot(base, shift)] = std::move(w); }

private:
    std::size_t slot(std::size_t base, long shift) const;
    std::size_t n_;
    std::vector<ExtendedRational> w_;
};

/// Reads the table off the Kleene star of the radius-n symmetric slice.
/// Throws std::invalid_argument if the star contains +inf.
PseudoCircuitTable pseudo_circuit_table(const TropicalMatrix& star, const NodeIndexMap& map);

struct NoInfinitePath {
    friend bool operator==(const NoInfinitePath&, const NoInfinitePath&) = default;
};

/// A positive-weight circuit of the radius-n slice, anchored at `base`.
struct PositiveCircuit {
    std::size_t node = 0;             // flat index in the slice
    std::pair<std::size_t, long> base;  // (i, k)
    Path circuit;                     // static arcs, starting at base.first
    Rational weight;
};

/// Circuits q1 (shift s1 > 0, weight w1) and q2 (shift s2 < 0, weight w2)
/// with a connector i1 -> i2 and -s2 w1 + s1 w2 > 0.
struct PumpablePair {
    std::size_t i1 = 0;
    long s1 = 0;
    Rational w1;
    std::size_t i2 = 0;
    long s2 = 0;
    Rational w2;
    bool connector_exists = true;

    /// -s2 w1 + s1 w2, the weight gained per pumping period.
    Rational value() const { return Rational(-s2 * w1 + s1 * w2); }
};

using InfWeightVerdict = std::variant<NoInfinitePath, PositiveCircuit, PumpablePair>;

/// "consistent", "positive_circuit" or "pumpable_pair".
std::string verdict_class(const InfWeightVerdict& v);

/// Everything the detection computes, kept for certificates and reports.
struct InfWeightAnalysis {
    StaticGraph graph;
    BooleanMatrix reach{0};
    NodeIndexMap map{SliceSpec{}};
    StarResult star;
    std::optional<PseudoCircuitTable> table;  // absent when a positive circuit exists
    InfWeightVerdict verdict;
    /// Every tuple passing the scan, in scan order.
    std::vector<PumpablePair> all_pairs;
};

/// Decides whether the N-periodic graph of (M_-1, M_0, M_+1) contains an
/// infinite-weight path. The scan visits (i1, i2, s1, s2) with i1, i2 and s1
/// ascending and s2 = -1, -2, ..., -n; the first hit is reported.
InfWeightVerdict detect_infinite_weight(const ShiftedMatrices& m);

/// Same as detect_infinite_weight, keeping intermediate results. With
/// `exhaustive`, all_pairs lists every passing tuple.
InfWeightAnalysis analyze_infinite_weight(const ShiftedMatrices& m, bool exhaustive = false);

struct PumpStep {
    std::size_t h = 0;
    Rational weight;
    long shift = 0;
    long lshift = 0;
};

/// Concrete witness of an unbounded family of N-paths r(h) = q1^{h(-s2)} p' q2^{h s1}.
struct PumpCertificate {
    Path q1;
    Path q2;
    Path connector;
    /// Every r(h) embeds in G_N when started at layer base_shift.
    long base_shift = 0;
    std::vector<PumpStep> steps;
};

/// Rebuilds q1, q2 and a fewest-hop connector for `cert` and evaluates the
/// pumped paths for h = 1..count by summing their arcs. Throws
/// std::invalid_argument when the certificate does not match the graph.
PumpCertificate pump_certificate(const StaticGraph& g, const PumpablePair& cert, std::size_t count);

}  // namespace ptime
