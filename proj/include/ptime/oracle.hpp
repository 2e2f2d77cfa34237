#pragma once

// Brute-force and finite-horizon checkers, independent of the polynomial
// detection path, plus a seeded instance generator.

#include "ptime/event_graph.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace ptime {

struct FeasibilityReport {
    std::size_t horizon = 0;
    bool feasible = false;
    std::optional<Trajectory> witness;
    /// Slice nodes (i, k) of a positive-weight circuit; present iff infeasible.
    std::optional<std::vector<std::pair<std::size_t, long>>> blocking_circuit;
};

/// Feasibility of x(k) >= M-1 x(k+1), x(k) >= M0 x(k), x(k+1) >= M+1 x(k)
/// for k = 1..h, via the depth-h natural slice.
FeasibilityReport weak_feasible(const ShiftedMatrices& m, std::size_t horizon);

/// Same question posed directly on the places of `net`, any marking:
/// x_i(k+mu) in [x_j(k) + lower, x_j(k) + upper] and x_i(k) <= x_i(k+1).
FeasibilityReport weak_feasible(const PTimeEventGraph& net, std::size_t horizon);

/// Directed multigraph on nodes 0..node_count-1.
struct Multigraph {
    struct Edge {
        std::size_t from;
        std::size_t to;
    };
    std::size_t node_count = 0;
    std::vector<Edge> edges;
};

/// Johnson's algorithm. Each elementary circuit is reported once, as edge ids
/// starting at its smallest node. Parallel edges yield distinct circuits.
/// Enumeration stops when `visit` returns false.
void for_each_elementary_circuit(const Multigraph& g,
                                 const std::function<bool(const std::vector<std::size_t>&)>& visit);

struct CatalogEntry {
    Path circuit;
    Rational weight;
};

/// Elementary circuits of the static graph in every rotation, keyed by
/// (base node, shift).
struct CircuitCatalog {
    std::map<std::pair<std::size_t, long>, std::vector<CatalogEntry>> groups;

    bool empty() const { return groups.empty(); }
    std::size_t size() const;
    std::optional<Rational> max_weight(std::size_t base, long shift) const;
};

CircuitCatalog enumerate_pseudo_circuits(const StaticGraph& g, std::size_t max_len);

struct BruteVerdict {
    InfWeightVerdict verdict;
    /// Weights of r(1), r(2), r(3) for a pumpable pair; strictly increasing.
    std::vector<Rational> pumped_weights;
};

/// Exponential cross-check of detect_infinite_weight. Positive circuits of
/// the radius-n slice come from Bellman-Ford; pairs from the circuit catalog
/// with a breadth-first connector. Throws std::invalid_argument for n > 4.
BruteVerdict brute_infinite_weight(const ShiftedMatrices& m);

/// Fixed-algorithm helpers over mt19937_64; outputs are identical across
/// platforms.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound);
bool bernoulli(std::mt19937_64& rng, double p);

/// t1..tn; each ordered pair (j, i) carries a place with probability
/// `density`. Marking uniform in [0, marking_max]; lower uniform on the
/// half-unit grid of [0, weight_range]; upper = +inf with probability 1/5,
/// otherwise uniform on the half-unit grid of [lower, weight_range].
PTimeEventGraph random_instance(std::uint64_t seed, std::size_t n, double density, long weight_range,
                                unsigned marking_max);

/// Feed-forward variant: t_i carries a self-loop with probability
/// `density` (marking uniform in [1, max(1, marking_max)]) and t_j -> t_i,
/// j < i, carries a place with probability `density`. Bounds as above.
/// Unlike random_instance it regularly produces pumpable pairs.
PTimeEventGraph random_feedforward_instance(std::uint64_t seed, std::size_t n, double density,
                                            long weight_range, unsigned marking_max);

/// Random matrices with entries present with probability `density`, integer
/// weights uniform in [lo, hi]; M+1 gets a zero diagonal.
ShiftedMatrices random_matrices(std::uint64_t seed, std::size_t n, double density, long lo, long hi);

}  // namespace ptime
